#include "ldl/discrete_calculus.hpp"

namespace ldl {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Matrix Matrix::scalar(Rational v)
{
    Matrix m(1, 1);
    m(0, 0) = std::move(v);
    return m;
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("matrix shapes " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + " differ");
}

void require_same_size(const Vec& a, const Vec& b)
{
    if (a.size() != b.size())
        throw ShapeError("vector sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " differ");
}

void require_square(const Matrix& m, std::size_t n)
{
    if (m.rows() != n || m.cols() != n)
        throw ShapeError("coefficient matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(n) + "x" + std::to_string(n));
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b)
{
    require_same_shape(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i)
        r.data_[i] += b.data_[i];
    return r;
}

Matrix operator-(const Matrix& a, const Matrix& b)
{
    require_same_shape(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i)
        r.data_[i] -= b.data_[i];
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw ShapeError("matrix product with inner sizes " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()));
    Matrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j)
                r(i, j) += a(i, k) * b(k, j);
    return r;
}

Vec operator*(const Matrix& a, const Vec& v)
{
    if (a.cols() != v.size())
        throw ShapeError("matrix with " + std::to_string(a.cols()) + " columns applied to a vector of size " +
                         std::to_string(v.size()));
    Vec r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            r[i] += a(i, k) * v[k];
    return r;
}

Vec operator+(const Vec& a, const Vec& b)
{
    require_same_size(a, b);
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b)
{
    require_same_size(a, b);
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= b[i];
    return r;
}

Vec discrete_derivative(const SeqFn& f, Index x, const Vec& y) { return f(x + 1, y) - f(x, y); }

Vec discrete_integral(const SeqFn& f, Index a, Index b, const Vec& y, std::size_t dim)
{
    if (a > b) {
        Vec r = discrete_integral(f, b, a, y, dim);
        for (auto& v : r)
            v = -v;
        return r;
    }
    if (a == b)
        return Vec(dim);
    Vec acc = f(a, y);
    for (Index x = a + 1; x < b; ++x)
        acc = acc + f(x, y);
    return acc;
}

Rational falling_power(const Rational& x, unsigned m)
{
    Rational r = 1;
    for (unsigned i = 0; i < m; ++i)
        r *= x - i;
    return r;
}

Matrix falling_exponential(const MatFn& u, Index x, const Vec& y)
{
    Matrix prev = u(0, y);
    if (prev.rows() != prev.cols())
        throw ShapeError("falling exponential of a non-square matrix");
    Matrix acc = Matrix::identity(prev.rows());
    for (Index t = 0; t < x; ++t) {
        Matrix next = u(t + 1, y);
        require_same_shape(prev, next);
        acc = (Matrix::identity(prev.rows()) + (next - prev)) * acc;
        prev = std::move(next);
    }
    return acc;
}

Vec linear_ode_closed_form(const MatFn& a, const SeqFn& b, const InitFn& g, Index x, const Vec& y)
{
    const Vec init = g(y);
    const std::size_t n = init.size();
    Vec total(n);
    for (Index u = -1; u <= x - 1; ++u) {
        Vec term = u < 0 ? init : b(u, y);
        require_same_size(term, total);
        // the product is ordered with the latest index leftmost
        for (Index t = u + 1; t <= x - 1; ++t) {
            Matrix at = a(t, y);
            require_square(at, n);
            term = (Matrix::identity(n) + at) * term;
        }
        total = total + term;
    }
    return total;
}

Vec linear_ode_iterate(const MatFn& a, const SeqFn& b, const InitFn& g, Index x, const Vec& y)
{
    Vec f = g(y);
    for (Index t = 0; t < x; ++t) {
        Matrix at = a(t, y);
        require_square(at, f.size());
        f = f + at * f + b(t, y);
    }
    return f;
}

bool integral_derivative_check(const KernelFn& f, const BoundFn& a, const BoundFn& b, Index x)
{
    auto over = [](Index lo, Index hi, const std::function<Rational(Index)>& g) {
        SeqFn s = [&](Index t, const Vec&) { return Vec{g(t)}; };
        return discrete_integral(s, lo, hi, {}, 1)[0];
    };
    auto big_f = [&](Index at) { return over(a(at), b(at), [&](Index t) { return f(at, t); }); };
    Rational lhs = big_f(x + 1) - big_f(x);

    Rational inner = over(a(x), b(x), [&](Index t) -> Rational { return f(x + 1, t) - f(x, t); });
    Index da = a(x + 1) - a(x), db = b(x + 1) - b(x);
    Rational lower = over(0, -da, [&](Index t) { return f(x + 1, a(x + 1) + t); });
    Rational upper = over(0, db, [&](Index t) { return f(x + 1, b(x) + t); });
    return lhs == inner + lower + upper;
}

}  // namespace ldl
