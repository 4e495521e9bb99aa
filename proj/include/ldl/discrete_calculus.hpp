#pragma once

// Finite-difference calculus over exact rationals: forward differences,
// signed discrete integrals, falling powers and exponentials, and the
// closed-form solution of linear discrete ODEs f' = A f + B.

#include "ldl/exact_numerics.hpp"

#include <cstdint>
#include <functional>

namespace ldl {

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    static Matrix identity(std::size_t n);
    static Matrix scalar(Rational v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Vec operator*(const Matrix& a, const Vec& v);
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);

using Index = std::int64_t;
// f(x, y): a vector-valued sequence in x with rational parameters y.
using SeqFn = std::function<Vec(Index x, const Vec& y)>;
using MatFn = std::function<Matrix(Index x, const Vec& y)>;
using InitFn = std::function<Vec(const Vec& y)>;

// f(x+1, y) - f(x, y)
Vec discrete_derivative(const SeqFn& f, Index x, const Vec& y);

// sum_{x=a}^{b-1} f(x, y); zero when a == b and -integral(b, a) when a > b.
// `dim` sizes the zero vector returned for empty ranges.
Vec discrete_integral(const SeqFn& f, Index a, Index b, const Vec& y, std::size_t dim = 1);

// x (x-1) ... (x-m+1); 1 when m == 0.
Rational falling_power(const Rational& x, unsigned m);

// (1 + U'(x-1)) ... (1 + U'(0)) with U'(t) = U(t+1) - U(t); identity at x == 0.
Matrix falling_exponential(const MatFn& u, Index x, const Vec& y = {});

// sum_{u=-1}^{x-1} (prod_{t=u+1}^{x-1} (1 + A(t))) B(u), with B(-1) = G(y)
// and the empty product equal to the identity.
Vec linear_ode_closed_form(const MatFn& a, const SeqFn& b, const InitFn& g, Index x, const Vec& y);

// f(0) = G(y), f(t+1) = f(t) + A(t) f(t) + B(t).
Vec linear_ode_iterate(const MatFn& a, const SeqFn& b, const InitFn& g, Index x, const Vec& y);

// f(x, t) with a parameter x and an integration variable t.
using KernelFn = std::function<Rational(Index x, Index t)>;
using BoundFn = std::function<Index(Index x)>;

// Checks F'(x) against the expansion of the derivative of
// F(x) = sum_{t=a(x)}^{b(x)-1} f(x, t) into an inner difference term and two
// boundary integrals.
bool integral_derivative_check(const KernelFn& f, const BoundFn& a, const BoundFn& b, Index x);

}  // namespace ldl
