#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "simplexvol/errors.hpp"
#include "simplexvol/rational.hpp"

namespace simplexvol {

template <class S>
using Vector = std::vector<S>;

/// Dense row-major matrix, only as large as a simplex needs (d x d).
template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, S fill = S(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector<S> apply(const Vector<S>& x) const {
        Vector<S> y(rows_, S(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> data_;
};

namespace detail {

template <class S>
double pivot_weight(const S& x) {
    if constexpr (is_exact_scalar_v<S>) {
        return x == 0 ? 0.0 : 1.0;
    } else {
        return std::fabs(x);
    }
}

// Gaussian elimination on an augmented system; returns the determinant of the
// left block and leaves [A | B] in reduced form. Exact over Rational.
template <class S>
S eliminate(Matrix<S>& a, Matrix<S>& b) {
    const std::size_t n = a.rows();
    S det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = pivot_weight(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            double w = pivot_weight(a(r, col));
            if (w > best) {
                best = w;
                pivot = r;
            }
        }
        if (best == 0.0) return S(0);
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(pivot, j), b(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col) == S(0)) continue;
            S factor = a(r, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) -= factor * b(col, j);
        }
    }
    return det;
}

} // namespace detail

template <class S>
S determinant(Matrix<S> a) {
    Matrix<S> none(a.rows(), 0);
    return detail::eliminate(a, none);
}

/// Solves A x = rhs. Throws DegenerateSimplexError on a singular system.
template <class S>
Vector<S> solve(Matrix<S> a, const Vector<S>& rhs) {
    const std::size_t n = a.rows();
    Matrix<S> b(n, 1);
    for (std::size_t i = 0; i < n; ++i) b(i, 0) = rhs[i];
    S det = detail::eliminate(a, b);
    if (det == S(0)) throw DegenerateSimplexError("singular linear system");
    Vector<S> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b(i, 0) / a(i, i);
    return x;
}

template <class S>
Matrix<S> inverse(Matrix<S> a) {
    const std::size_t n = a.rows();
    Matrix<S> b = Matrix<S>::identity(n);
    S det = detail::eliminate(a, b);
    if (det == S(0)) throw DegenerateSimplexError("singular matrix has no inverse");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) /= a(i, i);
    return b;
}

template <class S>
S dot(const Vector<S>& a, const Vector<S>& b) {
    S s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace simplexvol
