#pragma once

// Single-tape machines over {0,1,3} (0 is the blank), their radix-4
// arithmetization, and the compilation of steps, runs and the real
// approximation pipeline into expressions.
//
// A configuration (q, l, r) has the head on r[0]; l[0] is the cell to its
// left. Encoded, l and r become gamma(l), gamma(r) in [0,1).
//
// Encoded steps are exact as long as the head never stands on a blank whose
// right neighbour holds a non-blank digit, and a left move never reads a
// blank l[0] with a non-blank digit behind it. The machines shipped with the
// library keep every reachable configuration in that readable form.

#include "ldl/expr.hpp"

#include <map>
#include <set>

namespace ldl {

enum class Move : std::uint8_t { Left, Right };

struct Transition {
    int next = 0;
    std::uint8_t write = 0;
    Move move = Move::Right;
    friend bool operator==(const Transition&, const Transition&) = default;
};

class MachineError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class TuringMachine {
public:
    static constexpr std::uint8_t kSymbols[3] = {0, 1, 3};

    // delta must be total on states x {0,1,3}.
    TuringMachine(int states, int init, std::set<int> accept, std::map<std::pair<int, std::uint8_t>, Transition> delta,
                  std::set<int> negative = {});

    // Line format: "states N init Q accept a,b,..." then optionally
    // "negative a,b,..." and one "q s -> q' s' L|R" per transition.
    static TuringMachine parse(std::string_view text);
    std::string str() const;

    int states() const { return states_; }
    int init() const { return init_; }
    const std::set<int>& accept() const { return accept_; }
    // Accepting states whose output carries a minus sign.
    const std::set<int>& negative() const { return negative_; }
    const Transition& delta(int q, std::uint8_t sym) const;

private:
    int states_;
    int init_;
    std::set<int> accept_;
    std::set<int> negative_;
    std::map<std::pair<int, std::uint8_t>, Transition> delta_;
};

struct Configuration {
    int q = 0;
    CantorWord l;
    CantorWord r;

    // Equal up to trailing blanks.
    friend bool operator==(const Configuration& a, const Configuration& b)
    {
        return a.q == b.q && a.l.trimmed() == b.l.trimmed() && a.r.trimmed() == b.r.trimmed();
    }
};

struct RealConfig {
    Rational q;
    Rational l;
    Rational r;
    friend bool operator==(const RealConfig&, const RealConfig&) = default;
};

Configuration tm_step(const TuringMachine& m, const Configuration& c);
Configuration tm_run(const TuringMachine& m, Configuration c, std::size_t steps);

RealConfig config_encode(const Configuration& c);
Configuration config_decode(const RealConfig& rc, std::size_t k);

// z -> sg(z) + 2 sg(z - 2): the digit in front of a radix-4 expansion 4 gamma(w).
Expr build_head_read();

// (q, l, r) -> encoded successor configuration; affine and sgnb only.
Expr build_next(const TuringMachine& m);
// (tau, q, l, r) -> configuration after bit_length(tau) - 1 steps (none for
// tau = 0), so tau = 2^t runs t steps.
Expr build_exec(const TuringMachine& m);

// (n_1 .. n_d) -> gamma of the binary digits of each n_i (MSB first,
// bit 0 -> digit 1, bit 1 -> digit 3); 0 encodes as the single digit 1.
Expr build_decode(int d);
// (TT, k, top) -> gamma of the bit_length(TT) low bits of k written as
// digit pairs "1 (1+2b)", MSB first; top must be 2^(bit_length(TT) - 1).
Expr build_decode_pairs();

// (T, rbar, w) -> w * d where rbar encodes the digit pairs of a non-negative
// dyadic d (11/13 integer bits, 31/33 fraction bits) of at most
// bit_length(T) pairs; requires w in [0,1].
Expr build_encodemul();

// Coefficients c0, c1, ... of a polynomial with natural coefficients.
struct Polynomial {
    std::vector<unsigned long> coeffs;
    static Polynomial parse(std::string_view text);
    unsigned long operator()(unsigned long v) const;
    std::string str() const;
};

// (x, 2^X, 2^n) -> approximation of f(x) within 2^-n for |x| <= 2^X, where
// the machine maps the pair-encoded k + 2^P (P = m(n) + X, in m(n) + X + 2
// pairs, parameters 2^n on the left tape) to a pair-encoded integer close to
// 2^n f(k / 2^m(n)) and signals its sign through negative accepting states.
// The machine must halt within runtime(L) steps, L = m(n) + X + 2, into a
// two-state cycle that moves right then left.
Expr build_approx_pipeline(const TuringMachine& m, const Polynomial& modulus, const Polynomial& runtime);

// The two barycentric weights (lambda 2^-n, (1 - lambda) 2^-n) for the same
// arguments as the pipeline.
Expr build_pipeline_weights(const Polynomial& modulus);

// eval of the pipeline at (x, 2^X, 2^n); throws std::domain_error if |x| > 2^X.
Rational approx_eval(const Expr& pipeline, const Rational& x, unsigned long big_x, unsigned long n,
                     const EvalOptions& opts = {});

}  // namespace ldl
