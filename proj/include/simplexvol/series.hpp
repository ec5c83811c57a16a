#pragma once

#include <cstddef>
#include <vector>

#include "simplexvol/errors.hpp"
#include "simplexvol/rational.hpp"

namespace simplexvol {

/// Univariate power series truncated at a fixed order, exact over Rational.
/// Just enough arithmetic for residue extraction: multiply, invert a series
/// with nonzero constant term, and expand (x + a)^n binomially.
template <class S>
class FormalSeries {
public:
    explicit FormalSeries(std::size_t order) : coeffs_(order + 1, S(0)) {}

    static FormalSeries one(std::size_t order) {
        FormalSeries s(order);
        s.coeffs_[0] = S(1);
        return s;
    }

    /// (x + a)^n truncated to the series order.
    static FormalSeries shifted_power(std::size_t order, const S& a, unsigned n) {
        FormalSeries s(order);
        // coefficient of x^k is binom(n, k) a^(n-k)
        for (std::size_t k = 0; k <= s.order() && k <= n; ++k) {
            S c(binomial(n, static_cast<unsigned>(k)));
            s.coeffs_[k] = c * int_pow(a, n - static_cast<unsigned>(k));
        }
        return s;
    }

    std::size_t order() const { return coeffs_.size() - 1; }
    const S& operator[](std::size_t k) const { return coeffs_[k]; }
    S& operator[](std::size_t k) { return coeffs_[k]; }

    FormalSeries operator*(const FormalSeries& other) const {
        FormalSeries out(order());
        for (std::size_t i = 0; i <= order(); ++i) {
            if (coeffs_[i] == S(0)) continue;
            for (std::size_t j = 0; i + j <= order(); ++j)
                out.coeffs_[i + j] += coeffs_[i] * other.coeffs_[j];
        }
        return out;
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    FormalSeries inverse() const {
        if (coeffs_[0] == S(0)) throw NumericError("series with zero constant term has no inverse");
        FormalSeries out(order());
        out.coeffs_[0] = S(1) / coeffs_[0];
        for (std::size_t n = 1; n <= order(); ++n) {
            S acc(0);
            for (std::size_t k = 1; k <= n; ++k) acc += coeffs_[k] * out.coeffs_[n - k];
            out.coeffs_[n] = -acc / coeffs_[0];
        }
        return out;
    }

private:
    std::vector<S> coeffs_;
};

} // namespace simplexvol
