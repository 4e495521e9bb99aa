#include <doctest.h>

#include "ldl/discrete_calculus.hpp"
#include "oracles.hpp"

#include <array>
#include <random>

using namespace ldl;

namespace {

SeqFn scalar_seq(std::function<Rational(Index)> g)
{
    return [g](Index x, const Vec&) { return Vec{g(x)}; };
}

MatFn const_mat(Rational v)
{
    return [v](Index, const Vec&) { return Matrix::scalar(v); };
}

// Random polynomial in x with small integer coefficients.
std::function<Rational(Index)> random_poly(std::mt19937_64& rng)
{
    std::vector<long> c(1 + rng() % 4);
    for (auto& v : c)
        v = static_cast<long>(rng() % 11) - 5;
    return [c](Index x) {
        Rational r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            r = r * x + *it;
        return r;
    };
}

}  // namespace

TEST_CASE("discrete derivative")
{
    CHECK(discrete_derivative(scalar_seq([](Index x) { return Rational(x * x); }), 3, {})[0] == 7);
    CHECK(discrete_derivative(scalar_seq([](Index) { return Rational(5); }), 9, {})[0] == 0);
    CHECK(discrete_derivative(scalar_seq([](Index x) { return Rational(pow2(static_cast<std::size_t>(x))); }), 4, {})[0] ==
          16);
}

TEST_CASE("discrete integral")
{
    auto id = scalar_seq([](Index x) { return Rational(x); });
    auto one = scalar_seq([](Index) { return Rational(1); });
    CHECK(discrete_integral(id, 0, 3, {})[0] == 3);
    CHECK(discrete_integral(id, 5, 5, {})[0] == 0);
    CHECK(discrete_integral(one, 4, 1, {})[0] == -3);
}

TEST_CASE("falling power")
{
    CHECK(falling_power(5, 3) == 60);
    CHECK(falling_power(ratio(7, 3), 0) == 1);
    CHECK(falling_power(2, 4) == 0);
    for (unsigned m = 1; m <= 6; ++m)
        for (Index x = 0; x <= 20; ++x)
            CHECK(falling_power(x + 1, m) - falling_power(x, m) == m * falling_power(x, m - 1));
}

TEST_CASE("falling exponential")
{
    MatFn id = [](Index x, const Vec&) { return Matrix::scalar(x); };
    CHECK(falling_exponential(id, 5) == Matrix::scalar(32));
    CHECK(falling_exponential(id, 0) == Matrix::identity(1));
    MatFn twice = [](Index x, const Vec&) { return Matrix::scalar(2 * x); };
    CHECK(falling_exponential(twice, 3) == Matrix::scalar(27));
    MatFn bad = [](Index x, const Vec&) { return x < 2 ? Matrix::identity(1) : Matrix::identity(2); };
    CHECK_THROWS_AS(falling_exponential(bad, 4), ShapeError);

    auto rng = oracle::rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = random_poly(rng);
        MatFn u = [p](Index x, const Vec&) { return Matrix::scalar(p(x)); };
        for (Index x = 0; x < 8; ++x) {
            Rational du = p(x + 1) - p(x);
            Rational lhs = falling_exponential(u, x + 1)(0, 0) - falling_exponential(u, x)(0, 0);
            CHECK(lhs == du * falling_exponential(u, x)(0, 0));
        }
    }
}

TEST_CASE("linear ODE closed form")
{
    InitFn one = [](const Vec&) { return Vec{1}; };
    InitFn zero = [](const Vec&) { return Vec{0}; };
    auto b0 = scalar_seq([](Index) { return Rational(0); });
    auto b1 = scalar_seq([](Index) { return Rational(1); });
    CHECK(linear_ode_closed_form(const_mat(2), b0, one, 3, {})[0] == 27);
    CHECK(linear_ode_closed_form(const_mat(0), b1, zero, 5, {})[0] == 5);
    CHECK(linear_ode_iterate(const_mat(2), b0, one, 3, {})[0] == 27);
    CHECK(linear_ode_iterate(const_mat(2), b0, one, 0, {})[0] == 1);
    InitFn two_d = [](const Vec&) { return Vec{1, 2}; };
    CHECK_THROWS_AS(linear_ode_iterate(const_mat(1), b0, two_d, 2, {}), ShapeError);
    CHECK_THROWS_AS(linear_ode_closed_form(const_mat(1), b0, two_d, 2, {}), ShapeError);
}

TEST_CASE("integral derivative identity")
{
    KernelFn t_only = [](Index, Index t) { return Rational(t); };
    KernelFn xt = [](Index x, Index t) { return Rational(x * t); };
    BoundFn zero = [](Index) { return Index{0}; };
    BoundFn ident = [](Index x) { return x; };
    BoundFn four = [](Index) { return Index{4}; };
    CHECK(integral_derivative_check(t_only, zero, ident, 3));
    CHECK(integral_derivative_check(xt, zero, four, 2));

    auto rng = oracle::rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_poly(rng), q = random_poly(rng);
        KernelFn f = [p, q](Index x, Index t) -> Rational { return p(x) * q(t) + Rational(x + t); };
        long a0 = static_cast<long>(rng() % 7) - 3, a1 = static_cast<long>(rng() % 3) - 1;
        long b0 = static_cast<long>(rng() % 7) - 3, b1 = static_cast<long>(rng() % 3);
        BoundFn a = [=](Index x) { return a0 + a1 * x; };
        BoundFn b = [=](Index x) { return b0 + b1 * x; };
        CHECK(integral_derivative_check(f, a, b, static_cast<Index>(rng() % 10)));
    }
}

TEST_CASE("closed form agrees with iteration on random 2x2 systems")
{
    auto rng = oracle::rng(13);
    auto coef = [&rng]() { return Rational(static_cast<long>(rng() % 5) - 2); };
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::array<Rational, 4>> as(9);
        std::vector<std::array<Rational, 2>> bs(9);
        for (auto& a : as)
            a = {coef(), coef(), coef(), coef()};
        for (auto& b : bs)
            b = {coef(), coef()};
        MatFn a = [as](Index t, const Vec& y) {
            Matrix m(2, 2);
            m(0, 0) = as[static_cast<std::size_t>(t)][0] + y[0];
            m(0, 1) = as[static_cast<std::size_t>(t)][1];
            m(1, 0) = as[static_cast<std::size_t>(t)][2];
            m(1, 1) = as[static_cast<std::size_t>(t)][3];
            return m;
        };
        SeqFn b = [bs](Index t, const Vec&) {
            return Vec{bs[static_cast<std::size_t>(t)][0], bs[static_cast<std::size_t>(t)][1]};
        };
        InitFn g = [](const Vec& y) { return Vec{y[0], 1}; };
        Vec y{coef()};
        Index x = static_cast<Index>(rng() % 9);
        CHECK(linear_ode_closed_form(a, b, g, x, y) == linear_ode_iterate(a, b, g, x, y));
    }
}
