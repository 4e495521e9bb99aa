#pragma once

// Flattening of neural-fragment expressions into layered sign-bar networks.
// Lodes are unrolled once their iteration counts are known, Len of known
// arguments folds to a constant, and what remains must be affine maps and
// sgnb. Neurons at equal sgnb nesting depth share a layer; identity neurons
// carry older partial sums forward.

#include "ldl/discrete_calculus.hpp"
#include "ldl/expr.hpp"

#include <map>

namespace ldl {

class NotNeuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NetworkParseError : public std::runtime_error {
public:
    NetworkParseError(std::size_t line, const std::string& msg);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct Layer {
    // Sparse rows; entry (j, w) multiplies input column j.
    std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
    std::size_t cols = 0;
    Vec bias;
    std::vector<bool> activated;

    std::size_t size() const { return rows.size(); }
};

class Network {
public:
    Network(std::size_t inputs, std::vector<Layer> layers);

    std::size_t inputs() const { return inputs_; }
    std::size_t outputs() const;
    const std::vector<Layer>& layers() const { return layers_; }
    // Number of layers holding at least one sgnb neuron.
    std::size_t depth() const;
    std::size_t neurons() const;

private:
    std::size_t inputs_;
    std::vector<Layer> layers_;
};

// Throws ShapeError on an arity mismatch.
Vec net_eval(const Network& net, const Vec& inputs);

// Text format: "layers L inputs d outputs d'", then per layer
// "layer k rows m cols n", m rows of n rationals, the bias row and the 0/1
// activation row.
std::string net_serialize(const Network& net);
Network net_deserialize(std::string_view text);

struct ExtractOptions {
    // Iteration counts for lodes whose counts are not constant, consumed in
    // the order the unrolling meets them.
    std::vector<std::size_t> budget;
    // Inputs replaced by constants before unrolling; the network reads the
    // remaining inputs in order.
    std::map<int, Rational> fixed;
};

struct Extraction {
    Network network;
    std::vector<int> free_inputs;
    // Budget entries actually consumed.
    std::size_t budget_used = 0;
};

Extraction extract(const Expr& e, const ExtractOptions& opts = {});

}  // namespace ldl
