#pragma once

// Expressions of the length-ODE function algebra.
//
// An Expr is an immutable DAG node describing a function of its arguments
// x0, x1, ... (and, inside an ODE body, of the state components f0, f1, ...).
// Every node yields a vector of values; most operators are scalar but act
// elementwise on equal-sized vectors.
//
//   (lode init body) at arguments (x, y...):
//     F(0) = init(y...)
//     F(t+1) = F(t) + body[f := F(t)](2^t - 1, y...)    for t < bit_length(x)
//
// Sorts: every output component is either REAL or NAT under a condition
// (the set of inputs that must themselves be NAT). Positions that need a
// natural number (the argument of `len`, the iteration argument of `lode`)
// are checked statically when nodes are built.

#include "ldl/exact_numerics.hpp"

#include <memory>
#include <optional>
#include <set>

namespace ldl {

class SortError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class LinearityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 0 up to 1/4, 2x - 1/2 between 1/4 and 3/4, 1 from 3/4 on.
Rational signbar(const Rational& x);

enum class Op : std::uint8_t { Zero, One, Len, Proj, XVar, FVar, Add, Sub, Mul, SignBar, Half, Third, Tuple, Comp, Lode };

std::string_view op_name(Op op);

// NAT provided every listed input is NAT; `real` overrides.
struct SortCond {
    bool real = false;
    std::set<int> xs;
    std::set<int> fs;

    static SortCond nat() { return {}; }
    static SortCond real_sort() { return {true, {}, {}}; }
    bool unconditional_nat() const { return !real && xs.empty() && fs.empty(); }
    friend bool operator==(const SortCond&, const SortCond&) = default;
};

struct Node;
class Program;

class Expr {
public:
    Expr() = default;

    static Expr zero();
    static Expr one();
    static Expr len();                       // bit length of x0
    static Expr proj(int i, int k);          // x_i of a k-ary function
    static Expr x(int i);
    static Expr f(int i);
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr sgnb(Expr a);
    static Expr half(Expr a);
    static Expr third(Expr a);
    static Expr tuple(std::vector<Expr> parts);
    static Expr comp(Expr fn, std::vector<Expr> args);
    static Expr lode(Expr init, Expr body);

    bool valid() const { return node_ != nullptr; }
    Op op() const;
    int index() const;   // Proj / XVar / FVar index
    int count() const;   // Proj declared arity
    const std::vector<Expr>& kids() const;
    // Number of x arguments the expression reads.
    int arity() const;
    // Number of state components referenced freely.
    int f_arity() const;
    std::size_t dim() const;
    const std::vector<SortCond>& out_sorts() const;
    // Inputs that must be natural numbers.
    const std::set<int>& nat_inputs() const;
    const Node* id() const { return node_.get(); }

    const Program& program() const;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(std::shared_ptr<Node> n);
    std::shared_ptr<const Node> node_;
};

// Identifies a variable in degree queries.
struct VarRef {
    enum class Kind { X, F } kind;
    int index;
    static VarRef x(int i) { return {Kind::X, i}; }
    static VarRef f(int i) { return {Kind::F, i}; }
    friend bool operator==(const VarRef&, const VarRef&) = default;
    std::string str() const;
};

// Degree in v, maximized over output components: constants 0, + and - take
// the max, * adds, anything under sgnb has degree 0. Len or lode nodes whose
// inputs depend on v throw UnsupportedError.
int degree(const VarRef& v, const Expr& e);

// Joint degree with every listed variable at weight 1 is at most 1 in each
// output component.
bool check_essentially_linear(const Expr& body, const std::vector<VarRef>& fvars);

// Per-component joint degree for given input weights.
std::vector<int> weights(const Expr& e, const std::vector<int>& wx, const std::vector<int>& wf);

// Throws SortError if a Mul node occurs outside every lode body (multiplication
// is available only as part of an ODE right-hand side).
void validate(const Expr& e);
// True when e contains only affine operations and sgnb (no Len, Lode, Mul).
bool is_neural(const Expr& e);
// Number of distinct DAG nodes.
std::size_t node_count(const Expr& e);

struct EvalOptions {
    // Limit on numerator plus denominator bit size of any intermediate value;
    // 0 disables the check.
    std::size_t guard_bits = std::size_t{1} << 20;
};

Vec eval(const Expr& e, const Vec& args, const EvalOptions& opts = {});

struct ParseOptions {
    // Accept Mul outside lode bodies, for plain sg-polynomials.
    bool polynomial = false;
};

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

Expr parse(std::string_view text, const ParseOptions& opts = {});
std::string serialize(const Expr& e);

// Convenience notation for building expressions.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);

}  // namespace ldl
