#include "ldl/special_functions.hpp"

#include <algorithm>
#include <mutex>

namespace ldl {

namespace {

// x0 -> c x0 by binary Horner on the numerator, then halvings and thirds.
Expr scaling_function(const Rational& c)
{
    Integer den = c.get_den();
    int halves = 0, thirds = 0;
    while (mpz_divisible_2exp_p(den.get_mpz_t(), 1)) {
        den /= 2;
        ++halves;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 3)) {
        den /= 3;
        ++thirds;
    }
    if (den != 1)
        throw UnsupportedConstant("constant " + to_string(c) + " has a denominator outside 2^i 3^j");
    Integer num = abs(c.get_num());
    const Expr x = Expr::x(0);
    Expr s;
    if (num == 0) {
        s = Expr::sub(x, x);
    } else {
        static const Expr twice = Expr::add(Expr::x(0), Expr::x(0));
        std::string bits = num.get_str(2);
        s = x;
        for (std::size_t i = 1; i < bits.size(); ++i) {
            s = Expr::comp(twice, {s});
            if (bits[i] == '1')
                s = Expr::add(s, x);
        }
    }
    for (int i = 0; i < halves; ++i)
        s = Expr::half(s);
    for (int i = 0; i < thirds; ++i)
        s = Expr::third(s);
    if (sgn(c) < 0)
        s = Expr::sub(Expr::zero(), s);
    return s;
}

bool is_leaf(const Expr& e) { return e.op() == Op::XVar || e.op() == Op::FVar || e.op() == Op::Proj; }

}  // namespace

Expr scaled(const Rational& c, const Expr& e)
{
    if (c == 1)
        return e;
    if (c == -1)
        return Expr::sub(Expr::zero(), e);
    if (c == 2 && is_leaf(e))
        return Expr::add(e, e);
    return Expr::comp(scaling_function(c), {e});
}

Expr constant(const Rational& c)
{
    if (c == 0)
        return Expr::zero();
    if (c == 1)
        return Expr::one();
    return scaled(c, Expr::one());
}

Expr affine(const Rational& c0, const std::vector<std::pair<Rational, Expr>>& terms)
{
    Expr acc;
    for (const auto& [c, e] : terms) {
        if (c == 0)
            continue;
        if (!acc.valid()) {
            acc = scaled(c, e);
        } else if (c == -1) {
            acc = Expr::sub(acc, e);
        } else {
            acc = Expr::add(acc, scaled(c, e));
        }
    }
    if (!acc.valid())
        return constant(c0);
    if (c0 > 0)
        return Expr::add(acc, constant(c0));
    if (c0 < 0)
        return Expr::sub(acc, constant(-c0));
    return acc;
}

Expr sig(const Rational& a, const Rational& b, const Expr& e)
{
    if (!(a < b))
        throw ConstructionError("ramp needs a < b, got " + to_string(a) + " and " + to_string(b));
    Rational slope = 1 / (2 * (b - a));
    return Expr::sgnb(affine(Rational(1, 4) - a * slope, {{slope, e}}));
}

Expr build_sig(const Rational& a, const Rational& b) { return sig(a, b, Expr::x(0)); }

namespace {

// (N, x) -> H after bit_length(N) steps of H <- H - K sig(K + lo, K + hi, H),
// K <- K/2, starting from H = x, K = N. The first step at K = N is the
// identity on x <= N + lo, so this is the unrolled halving chain for scale 2N.
Expr halving_chain(const Rational& lo, const Rational& hi)
{
    // lode arguments: (N, N, x); the body sees x1 = N, x2 = x
    Expr h = Expr::f(0), k = Expr::f(1);
    Rational slope = 1 / (2 * (hi - lo));
    // sig(K + lo, K + hi, H) = sg(1/4 + slope (H - K - lo))
    Expr ramp = Expr::sgnb(affine(Rational(1, 4) - lo * slope, {{slope, h}, {-slope, k}}));
    Expr body = Expr::tuple({Expr::sub(Expr::zero(), Expr::mul(k, ramp)), Expr::sub(Expr::zero(), Expr::half(k))});
    Expr init = Expr::tuple({Expr::x(1), Expr::x(0)});
    Expr chain = Expr::lode(init, body);
    return Expr::comp(Expr::proj(0, 2), {Expr::comp(chain, {Expr::x(0), Expr::x(0), Expr::x(1)})});
}

// (N, x) -> fractional part minus 1/8 on [k + 1/8, k + 7/8] for 0 <= x <= 2N,
// and 0 for x <= 0.
const Expr& xi_prime()
{
    static const Expr e = [] {
        Expr h = halving_chain(0, Rational(1, 8));
        return scaled(Rational(3, 4), sig(Rational(1, 8), Rational(7, 8), h));
    }();
    return e;
}

// (N, x) -> 0 on [k + 1/4, k + 1/2], 1 on [k + 3/4, k + 1] for 0 <= x <= 2N,
// and 1 for x <= 0.
const Expr& lambda_prime()
{
    static const Expr e = [] {
        Expr y = Expr::x(0);
        Expr base = Expr::add(Expr::sub(sig(Rational(1, 2), Rational(3, 4), y), sig(0, Rational(1, 4), y)), Expr::one());
        return Expr::comp(base, {halving_chain(Rational(-1, 2), Rational(-1, 4))});
    }();
    return e;
}

// (N, x) -> fractional part minus 1/8 on every [k + 1/8, k + 7/8], |x| <= N.
const Expr& xi_centered()
{
    static const Expr e = [] {
        Expr n = Expr::x(0), x = Expr::x(1);
        Expr pos = Expr::comp(xi_prime(), {n, x});
        Expr neg = Expr::comp(xi_prime(), {n, Expr::sub(Expr::zero(), x)});
        Expr corr = scaled(Rational(3, 4), sig(0, Rational(1, 8), x));
        return Expr::sub(Expr::add(Expr::sub(pos, neg), constant(Rational(3, 4))), corr);
    }();
    return e;
}

Expr shifted_xi(const Rational& shift, const Rational& offset)
{
    Expr arg = affine(shift, {{1, Expr::x(1)}});
    Expr v = Expr::comp(xi_centered(), {Expr::x(0), arg});
    return offset == 0 ? v : affine(offset, {{1, v}});
}

}  // namespace

Expr build_xi(int variant)
{
    if (variant == 1)
        return shifted_xi(Rational(-3, 8), Rational(-1, 2));
    if (variant == 2)
        return shifted_xi(Rational(1, 8), 0);
    throw ConstructionError("variant must be 1 or 2");
}

Expr build_sigma(int variant) { return Expr::sub(Expr::x(1), build_xi(variant)); }

Expr build_lambda()
{
    Expr n = Expr::x(0), x = Expr::x(1);
    Expr a = Expr::comp(lambda_prime(), {n, x});
    Expr b = Expr::comp(lambda_prime(), {n, affine(Rational(-1, 4), {{-1, x}})});
    return Expr::sub(Expr::add(a, b), Expr::one());
}

Expr build_mod2()
{
    Expr arg = affine(Rational(-3, 4), {{Rational(1, 2), Expr::x(1)}});
    return Expr::comp(build_lambda(), {Expr::x(0), arg});
}

Expr build_div2() { return Expr::half(Expr::sub(build_sigma(2), build_mod2())); }

Expr build_send(const std::vector<std::pair<Integer, Vec>>& table)
{
    if (table.empty())
        throw ConstructionError("selector with an empty table");
    auto rows = table;
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t d = rows.front().second.size();
    if (d == 0)
        throw ConstructionError("selector values must have at least one component");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].second.size() != d)
            throw ConstructionError("selector values of different sizes");
        if (i > 0 && rows[i].first == rows[i - 1].first)
            throw ConstructionError("duplicate selector key " + rows[i].first.get_str());
    }
    std::vector<Expr> steps;
    for (std::size_t i = 1; i < rows.size(); ++i)
        steps.push_back(Expr::sgnb(affine(Rational(-rows[i - 1].first), {{1, Expr::x(0)}})));
    std::vector<Expr> comps;
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<std::pair<Rational, Expr>> terms;
        for (std::size_t i = 1; i < rows.size(); ++i)
            terms.emplace_back(rows[i].second[j] - rows[i - 1].second[j], steps[i - 1]);
        Expr c = affine(rows.front().second[j], terms);
        // keep the arity at 1 even for constant tables
        if (c.arity() == 0)
            c = Expr::comp(c, {Expr::x(0)});
        comps.push_back(c);
    }
    return d == 1 ? comps.front() : Expr::tuple(comps);
}

Expr build_send(const std::vector<std::pair<Integer, Rational>>& table)
{
    std::vector<std::pair<Integer, Vec>> rows;
    rows.reserve(table.size());
    for (const auto& [k, v] : table)
        rows.emplace_back(k, Vec{v});
    return build_send(rows);
}

Expr build_send2d(const Integer& n, const std::map<std::pair<Integer, Integer>, Vec>& table)
{
    if (n <= 0)
        throw ConstructionError("pair selector needs N >= 1");
    std::vector<std::pair<Integer, Vec>> rows;
    std::vector<std::pair<Integer, Rational>> ident;
    for (const auto& [key, v] : table) {
        const auto& [alpha, j] = key;
        if (j < 0 || j >= n)
            throw ConstructionError("second key " + j.get_str() + " outside [0, " + n.get_str() + ")");
        rows.emplace_back(n * alpha + j, v);
        if (ident.empty() || ident.back().first != alpha)
            ident.emplace_back(alpha, Rational(alpha));
    }
    Expr rounded = Expr::comp(build_send(ident), {Expr::x(0)});
    Expr arg = affine(0, {{Rational(n), rounded}, {1, Expr::x(1)}});
    return Expr::comp(build_send(rows), {arg});
}

Expr gate(const Expr& d, const Expr& l)
{
    return Expr::sgnb(affine(Rational(-3, 4), {{1, d}, {Rational(1, 2), l}}));
}

Expr build_gate() { return gate(Expr::x(0), Expr::x(1)); }

Special special_from_name(std::string_view name)
{
    for (Special s : {Special::Xi1, Special::Xi2, Special::Sigma1, Special::Sigma2, Special::Lambda, Special::Mod2,
                      Special::Div2})
        if (special_name(s) == name)
            return s;
    throw std::invalid_argument("unknown function '" + std::string(name) +
                                "' (expected xi1, xi2, sigma1, sigma2, lambda, mod2 or div2)");
}

std::string_view special_name(Special s)
{
    switch (s) {
    case Special::Xi1: return "xi1";
    case Special::Xi2: return "xi2";
    case Special::Sigma1: return "sigma1";
    case Special::Sigma2: return "sigma2";
    case Special::Lambda: return "lambda";
    case Special::Mod2: return "mod2";
    case Special::Div2: return "div2";
    }
    return "?";
}

const Expr& special_expr(Special s)
{
    static std::once_flag once;
    static std::map<Special, Expr> cache;
    std::call_once(once, [] {
        cache[Special::Xi1] = build_xi(1);
        cache[Special::Xi2] = build_xi(2);
        cache[Special::Sigma1] = build_sigma(1);
        cache[Special::Sigma2] = build_sigma(2);
        cache[Special::Lambda] = build_lambda();
        cache[Special::Mod2] = build_mod2();
        cache[Special::Div2] = build_div2();
    });
    return cache.at(s);
}

Rational apply_special(Special s, const Rational& n_scale, const Rational& x)
{
    if (!is_natural(n_scale) || mpz_popcount(n_scale.get_num_mpz_t()) != 1)
        throw std::domain_error("scale " + to_string(n_scale) + " is not a power of two");
    return eval(special_expr(s), {n_scale, x})[0];
}

}  // namespace ldl
