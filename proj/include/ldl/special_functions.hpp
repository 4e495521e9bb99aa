#pragma once

// Piecewise-affine building blocks expressed in the function algebra:
// ramps, fractional part and rounding on windows, parity, selectors and the
// multiplication-free gate. Every builder returns a closed expression; the
// scale argument N is always x0 and must be a power of two 2^n with |x| <= N.
//
// Windows (k an integer):
//   frac1/round1  x in [k - 1/2, k + 1/4]  ->  x - k  /  k
//   frac2/round2  x in [k, k + 3/4]        ->  x - k  /  k
//   blend         0 on [k + 1/4, k + 1/2], 1 on [k + 3/4, k + 1], in [0,1] always
//   mod2, div2    x in [k, k + 1/2]        ->  k mod 2, floor(k / 2)

#include "ldl/expr.hpp"

#include <map>
#include <utility>

namespace ldl {

class UnsupportedConstant : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConstructionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// c * e built from add, half and third only. The denominator of c must be of
// the form 2^i 3^j.
Expr scaled(const Rational& c, const Expr& e);
Expr constant(const Rational& c);
// c0 + sum c_i e_i
Expr affine(const Rational& c0, const std::vector<std::pair<Rational, Expr>>& terms);

// Unary ramp: 0 up to a, (x - a) / (b - a) on [a, b], 1 from b on.
Expr build_sig(const Rational& a, const Rational& b);
Expr sig(const Rational& a, const Rational& b, const Expr& e);

// (N, x) -> fractional part on the window of the variant (1 or 2).
Expr build_xi(int variant);
// (N, x) -> x minus the fractional part, i.e. the window integer.
Expr build_sigma(int variant);
Expr build_lambda();
Expr build_mod2();
Expr build_div2();

// Selector: x in [alpha_i - 1/4, alpha_i + 1/4] -> V_i. Vector values share
// one set of ramps. Keys must be distinct and all values of equal size.
Expr build_send(const std::vector<std::pair<Integer, Vec>>& table);
Expr build_send(const std::vector<std::pair<Integer, Rational>>& table);

// (x, y) -> V_{alpha, j} for x near alpha and y near j, 0 <= j < N.
Expr build_send2d(const Integer& n, const std::map<std::pair<Integer, Integer>, Vec>& table);

// (d, l) -> sg(d - 3/4 + l/2): 0 when d = 0, l when d = 1, for l in [0,1].
Expr build_gate();
Expr gate(const Expr& d, const Expr& l);

// Named one-dimensional families for sampling and the command line.
enum class Special { Xi1, Xi2, Sigma1, Sigma2, Lambda, Mod2, Div2 };
Special special_from_name(std::string_view name);
std::string_view special_name(Special s);
const Expr& special_expr(Special s);
// Throws std::domain_error unless n_scale is a power of two.
Rational apply_special(Special s, const Rational& n_scale, const Rational& x);

}  // namespace ldl
