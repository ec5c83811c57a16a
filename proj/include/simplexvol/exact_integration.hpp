#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "simplexvol/polynomial.hpp"
#include "simplexvol/series.hpp"
#include "simplexvol/simplex.hpp"

namespace simplexvol {

namespace detail {

template <class S>
S from_rational(const Rational& r) {
    if constexpr (is_exact_scalar_v<S>)
        return r;
    else
        return to_double(r);
}

/// |det B| = d! vol(J); the weight that carries standard-simplex results to J.
template <class S>
S scaled_volume(const Simplex<S>& j) {
    Matrix<S> b = j.edge_basis();
    S det = determinant(b);
    if (det < S(0)) det = -det;
    return det;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Complete homogeneous symmetric polynomial h_q: the sum of all monomials of
// total degree q in the given values. Computed by the prefix recurrence
// h_q(x_1..x_m) = h_q(x_1..x_{m-1}) + x_m h_{q-1}(x_1..x_m), which is
// subtraction-free, hence stable, and exact over Rational.
// ---------------------------------------------------------------------------

template <class S>
S h_complete(unsigned q, std::span<const S> values) {
    std::vector<S> h(q + 1, S(0));
    h[0] = S(1);
    for (const S& x : values)
        for (unsigned n = 1; n <= q; ++n) h[n] += x * h[n - 1];
    return h[q];
}

template <class S>
S h_complete(unsigned q, const Vector<S>& values) {
    return h_complete(q, std::span<const S>(values));
}

// ---------------------------------------------------------------------------
// Monomial formula over the standard simplex
// ---------------------------------------------------------------------------

/// Exponents (alpha_1, ..., alpha_{d+1}) of x_1 ... x_d and (1 - sum x);
/// every entry must exceed -1 or the integral diverges.
struct GeneralizedExponent {
    std::vector<double> alpha;

    explicit GeneralizedExponent(std::vector<double> a) : alpha(std::move(a)) {
        if (alpha.size() < 2) throw PreconditionError("need d+1 exponents with d >= 1");
        for (double v : alpha)
            if (!(v > -1.0))
                throw DivergentIntegralError("exponent <= -1 makes the integral diverge");
    }

    std::size_t dim() const { return alpha.size() - 1; }

    /// The all-nonnegative-integer case, where the value is rational.
    std::optional<std::vector<unsigned>> as_integers() const {
        std::vector<unsigned> out;
        out.reserve(alpha.size());
        for (double v : alpha) {
            double r = std::round(v);
            if (v < 0.0 || r != v) return std::nullopt;
            out.push_back(static_cast<unsigned>(r));
        }
        return out;
    }
};

/// Exact value prod_j alpha_j! / (sum alpha + d)! for integer exponents.
inline Rational integrate_monomial_standard(const std::vector<unsigned>& alpha) {
    if (alpha.size() < 2) throw PreconditionError("need d+1 exponents with d >= 1");
    const unsigned d = static_cast<unsigned>(alpha.size()) - 1;
    Int numerator = 1;
    unsigned total = 0;
    for (unsigned a : alpha) {
        numerator *= factorial(a);
        total += a;
    }
    return Rational(numerator) / Rational(factorial(total + d));
}

/// Gamma-function form, valid for any real exponents > -1.
inline double integrate_monomial_standard(const GeneralizedExponent& exponent) {
    if (auto ints = exponent.as_integers()) return to_double(integrate_monomial_standard(*ints));
    double log_num = 0.0;
    double total = 0.0;
    for (double a : exponent.alpha) {
        log_num += std::lgamma(a + 1.0);
        total += a;
    }
    return std::exp(log_num - std::lgamma(total + double(exponent.dim()) + 1.0));
}

// ---------------------------------------------------------------------------
// Powers of affine forms: Brion's short formula when the vertex values
// c.v_j + b are pairwise distinct, the residue formula otherwise, and the
// complete-homogeneous series as an independent route.
// ---------------------------------------------------------------------------

/// Distinct pole values with multiplicities; sum of multiplicities is d+1.
template <class S>
struct PoleStructure {
    struct Cluster {
        S value;
        unsigned multiplicity;
    };
    std::vector<Cluster> clusters;

    bool all_simple() const {
        for (const auto& c : clusters)
            if (c.multiplicity > 1) return false;
        return true;
    }
};

/// Exact inputs cluster by equality; floating inputs cluster when
/// |p_i - p_j| <= 1e-9 max(1, |p_i|, |p_j|).
template <class S>
PoleStructure<S> pole_structure(const Vector<S>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    auto same = [&](const S& a, const S& b) {
        if constexpr (is_exact_scalar_v<S>) {
            return a == b;
        } else {
            double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
            return std::fabs(a - b) <= 1e-9 * scale;
        }
    };

    PoleStructure<S> out;
    for (std::size_t idx : order) {
        if (!out.clusters.empty() && same(out.clusters.back().value, values[idx]))
            ++out.clusters.back().multiplicity;
        else
            out.clusters.push_back({values[idx], 1});
    }
    return out;
}

namespace detail {

template <class S>
Vector<S> affine_vertex_values(const Simplex<S>& j, const Vector<S>& c, const S& b) {
    Vector<S> values;
    values.reserve(j.dim() + 1);
    for (const auto& v : j.vertices()) values.push_back(dot(c, v) + b);
    return values;
}

template <class S>
S factorial_ratio(unsigned n, unsigned d) {
    // n! / (n+d)!
    return from_rational<S>(Rational(factorial(n)) / Rational(factorial(n + d)));
}

} // namespace detail

/// Brion's short formula; requires pairwise distinct vertex values.
template <class S>
S integrate_affine_power_brion(const Simplex<S>& j, const Vector<S>& c, const S& b, unsigned n) {
    const unsigned d = static_cast<unsigned>(j.dim());
    Vector<S> p = detail::affine_vertex_values(j, c, b);
    S sum(0);
    for (std::size_t a = 0; a < p.size(); ++a) {
        S denom(1);
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k == a) continue;
            S diff = p[a] - p[k];
            if (diff == S(0))
                throw PreconditionError("Brion's formula needs pairwise distinct vertex values");
            denom *= diff;
        }
        sum += int_pow(p[a], n + d) / denom;
    }
    return detail::scaled_volume(j) * detail::factorial_ratio<S>(n, d) * sum;
}

/// Residue formula, valid for any pole structure: each distinct pole value
/// contributes the coefficient of eps^(m_k - 1) in a truncated series.
template <class S>
S integrate_affine_power_residue(const Simplex<S>& j, const Vector<S>& c, const S& b, unsigned n) {
    const unsigned d = static_cast<unsigned>(j.dim());
    Vector<S> p = detail::affine_vertex_values(j, c, b);
    PoleStructure<S> poles = pole_structure(p);

    S sum(0);
    for (const auto& cluster : poles.clusters) {
        const std::size_t order = cluster.multiplicity - 1;
        FormalSeries<S> numerator = FormalSeries<S>::shifted_power(order, cluster.value, n + d);
        FormalSeries<S> acc = numerator;
        for (const auto& other : poles.clusters) {
            if (&other == &cluster) continue;
            FormalSeries<S> base =
                FormalSeries<S>::shifted_power(order, cluster.value - other.value, other.multiplicity);
            acc = acc * base.inverse();
        }
        sum += acc[order];
    }
    return detail::scaled_volume(j) * detail::factorial_ratio<S>(n, d) * sum;
}

/// Complete-homogeneous route (the power-series identity), kept as an
/// independent check path against Brion/residue.
template <class S>
S integrate_affine_power_series(const Simplex<S>& j, const Vector<S>& c, const S& b, unsigned n) {
    const unsigned d = static_cast<unsigned>(j.dim());
    Vector<S> p = detail::affine_vertex_values(j, c, b);
    return detail::scaled_volume(j) * detail::factorial_ratio<S>(n, d) * h_complete(n, p);
}

/// Exact integral of (c.x + b)^n over J; picks Brion when the poles are
/// simple and the residue continuation otherwise.
template <class S>
S integrate_affine_power(const Simplex<S>& j, const Vector<S>& c, const S& b, unsigned n) {
    Vector<S> p = detail::affine_vertex_values(j, c, b);
    if (pole_structure(p).all_simple()) return integrate_affine_power_brion(j, c, b, n);
    return integrate_affine_power_residue(j, c, b, n);
}

// ---------------------------------------------------------------------------
// Monomial -> powers of linear forms
// ---------------------------------------------------------------------------

struct LinearFormTerm {
    Rational coeff;
    std::vector<unsigned> beta;
};

/// x^alpha = sum_i coeff_i (beta_i . x)^(|alpha|) with 0 <= beta <= alpha;
/// at most prod(alpha_j + 1) summands.
inline std::vector<LinearFormTerm> decompose_monomial(const std::vector<unsigned>& alpha) {
    const unsigned n = std::accumulate(alpha.begin(), alpha.end(), 0u);
    if (n == 0) throw PreconditionError("cannot decompose the constant monomial");

    // x_i^n is already a power of a linear form
    std::size_t support = 0, axis = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] != 0) {
            ++support;
            axis = i;
        }
    if (support == 1) {
        std::vector<unsigned> beta(alpha.size(), 0);
        beta[axis] = 1;
        return {{Rational(1), std::move(beta)}};
    }

    const Rational inv_nfact = Rational(1) / Rational(factorial(n));
    std::vector<LinearFormTerm> terms;
    std::vector<unsigned> beta(alpha.size(), 0);

    while (true) {
        unsigned beta_total = std::accumulate(beta.begin(), beta.end(), 0u);
        if (beta_total > 0) {
            Int binom_prod = 1;
            for (std::size_t i = 0; i < alpha.size(); ++i) binom_prod *= binomial(alpha[i], beta[i]);
            Rational coeff = inv_nfact * Rational(binom_prod);
            if ((n - beta_total) % 2 == 1) coeff = -coeff;
            terms.push_back({std::move(coeff), beta});
        }
        // odometer over the box [0, alpha]
        std::size_t i = 0;
        while (i < beta.size() && beta[i] == alpha[i]) beta[i++] = 0;
        if (i == beta.size()) break;
        ++beta[i];
    }
    return terms;
}

// ---------------------------------------------------------------------------
// Polynomials over a general simplex: three exact methods
// ---------------------------------------------------------------------------

enum class PolyMethod { auto_select, pullback, taylor_expansion, linform_decomp };

namespace detail {

// Substitute x = B t + v0 and integrate termwise with the monomial formula.
template <class S>
S integrate_polynomial_pullback(const Simplex<S>& j, const Polynomial<S>& p) {
    const std::size_t d = j.dim();
    AffineMap<S> map = to_standard(j);
    std::vector<Polynomial<S>> replacement;
    replacement.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        Vector<S> row(d);
        for (std::size_t k = 0; k < d; ++k) row[k] = map.basis(i, k);
        replacement.push_back(Polynomial<S>::affine(row, j.vertex(0)[i]));
    }
    Polynomial<S> pulled = p.substitute(replacement);
    S acc(0);
    for (const auto& [e, coeff] : pulled.terms()) {
        std::vector<unsigned> alpha(e.begin(), e.end());
        alpha.push_back(0);
        acc += coeff * from_rational<S>(integrate_monomial_standard(alpha));
    }
    return map.abs_det * acc;
}

// Coefficient extraction from the generating series
// d! vol(J) / prod_j (1 - t.v_j) = sum_alpha [(|a|+d)!/a!] int x^alpha t^alpha.
template <class S>
S integrate_polynomial_taylor(const Simplex<S>& j, const Polynomial<S>& p) {
    const std::size_t d = j.dim();
    const unsigned cap = p.degree();
    Polynomial<S> series = Polynomial<S>::constant(d, S(1));
    for (const auto& v : j.vertices()) {
        Polynomial<S> linear = Polynomial<S>::affine(v, S(0));
        Polynomial<S> geometric = Polynomial<S>::constant(d, S(1));
        for (unsigned k = 0; k < cap; ++k)
            geometric = Polynomial<S>::constant(d, S(1)) + linear.mul_truncated(geometric, cap);
        series = series.mul_truncated(geometric, cap);
    }
    const S dfact_vol = scaled_volume(j);
    S acc(0);
    for (const auto& [alpha, coeff] : p.terms()) {
        Int alpha_fact = 1;
        for (unsigned a : alpha) alpha_fact *= factorial(a);
        Rational scale = Rational(alpha_fact) / Rational(factorial(total_degree(alpha) + unsigned(d)));
        acc += coeff * series.coefficient(alpha) * from_rational<S>(scale);
    }
    return dfact_vol * acc;
}

template <class S>
S integrate_polynomial_linform(const Simplex<S>& j, const Polynomial<S>& p) {
    const std::size_t d = j.dim();
    S acc(0);
    for (const auto& [alpha, coeff] : p.terms()) {
        const unsigned n = total_degree(alpha);
        if (n == 0) {
            acc += coeff * simplex_volume(j);
            continue;
        }
        std::vector<unsigned> a(alpha.begin(), alpha.end());
        for (const auto& term : decompose_monomial(a)) {
            Vector<S> beta(d);
            for (std::size_t i = 0; i < d; ++i) beta[i] = S(int(term.beta[i]));
            acc += coeff * from_rational<S>(term.coeff) *
                   integrate_affine_power(j, beta, S(0), n);
        }
    }
    return acc;
}

} // namespace detail

/**
 * Exact integral of a polynomial over J by any of the three routes; they
 * agree exactly over Rational. The default follows the reported crossover:
 * linear-form decomposition for d >= 5, pullback below.
 */
template <class S>
S integrate_polynomial(const Simplex<S>& j, const Polynomial<S>& p,
                       PolyMethod method = PolyMethod::auto_select) {
    if (p.nvars() != j.dim()) throw PreconditionError("polynomial/simplex dimension mismatch");
    if (method == PolyMethod::auto_select)
        method = j.dim() >= 5 ? PolyMethod::linform_decomp : PolyMethod::pullback;
    switch (method) {
        case PolyMethod::pullback:
            return detail::integrate_polynomial_pullback(j, p);
        case PolyMethod::taylor_expansion:
            return detail::integrate_polynomial_taylor(j, p);
        case PolyMethod::linform_decomp:
            return detail::integrate_polynomial_linform(j, p);
        default:
            throw Error("unreachable");
    }
}

// ---------------------------------------------------------------------------
// Exponentials of affine forms
// ---------------------------------------------------------------------------

namespace detail {

/// (e^u - sum_{j<d} u^j/j!) / u^d, i.e. sum_m u^m / (m+d)!, evaluated without
/// the cancellation the subtraction suffers for small |u|.
inline double exp_tail_over_power(unsigned d, double u) {
    if (std::fabs(u) < 2.0) {
        double term = 1.0 / to_double(Rational(factorial(d)));
        double acc = term;
        for (unsigned m = 1; m < 60; ++m) {
            term *= u / double(m + d);
            acc += term;
            if (std::fabs(term) < 1e-18 * std::fabs(acc)) break;
        }
        return acc;
    }
    double partial = 0.0, pw = 1.0;
    for (unsigned k = 0; k < d; ++k) {
        partial += pw;
        pw *= u / double(k + 1);
    }
    return (std::exp(u) - partial) / std::pow(u, double(d));
}

struct ExpClassification {
    enum class Route { brion, equal_difference, series } route;
    double common_difference = 0.0; // y_0 - y_j for the equal-difference case
};

template <class S>
ExpClassification classify_exp(const Vector<S>& y) {
    PoleStructure<S> poles = pole_structure(y);
    if (poles.all_simple()) return {ExpClassification::Route::brion, 0.0};

    if (y.size() >= 2) {
        S u = y[0] - y[1];
        bool equal = true;
        for (std::size_t k = 2; k < y.size(); ++k) {
            S diff = y[0] - y[k];
            if constexpr (is_exact_scalar_v<S>) {
                if (diff != u) equal = false;
            } else {
                double scale = std::max({1.0, std::fabs(u), std::fabs(diff)});
                if (std::fabs(diff - u) > 1e-10 * scale) equal = false;
            }
        }
        bool nonzero;
        if constexpr (is_exact_scalar_v<S>)
            nonzero = u != 0;
        else
            nonzero = std::fabs(to_double(u)) > 1e-10 * std::max(1.0, std::fabs(to_double(y[0])));
        if (equal && nonzero)
            return {ExpClassification::Route::equal_difference, to_double(u)};
    }
    return {ExpClassification::Route::series, 0.0};
}

template <class S>
double integrate_exp_affine_impl(const Simplex<S>& j, const Vector<S>& c, const S& b,
                                 std::optional<ExpClassification::Route> force) {
    const unsigned d = static_cast<unsigned>(j.dim());
    Vector<S> y;
    y.reserve(d + 1);
    for (const auto& v : j.vertices()) y.push_back(dot(c, v));

    double ymax = to_double(y[0]);
    for (const auto& v : y) ymax = std::max(ymax, to_double(v));
    const double bd = to_double(b);
    if (ymax + bd > 709.0)
        throw OverflowError("e^(c.v + b) overflows: exponent " + format_double(ymax + bd));

    const double dfact_vol = to_double(scaled_volume(j));
    ExpClassification cls = classify_exp(y);
    if (force) cls.route = *force;

    switch (cls.route) {
        case ExpClassification::Route::brion: {
            // factor e^ymax out of the numerators to keep everything finite
            double sum = 0.0;
            for (std::size_t a = 0; a < y.size(); ++a) {
                double denom = 1.0;
                for (std::size_t k = 0; k < y.size(); ++k) {
                    if (k == a) continue;
                    denom *= to_double(y[a] - y[k]);
                }
                sum += std::exp(to_double(y[a]) - ymax) / denom;
            }
            return dfact_vol * std::exp(ymax + bd) * sum;
        }
        case ExpClassification::Route::equal_difference: {
            const double u = cls.common_difference;
            const double y0 = to_double(y[0]);
            return dfact_vol * std::exp(y0 - u + bd) * exp_tail_over_power(d, u);
        }
        case ExpClassification::Route::series: {
            // Shift by the minimum so every value is >= 0: the series becomes
            // subtraction-free, and the shift returns as a factor e^ymin.
            double ymin = to_double(y[0]);
            for (const auto& v : y) ymin = std::min(ymin, to_double(v));
            std::vector<double> shifted;
            shifted.reserve(y.size());
            double spread = 0.0;
            for (const auto& v : y) {
                shifted.push_back(to_double(v) - ymin);
                spread = std::max(spread, shifted.back());
            }
            constexpr unsigned kCap = 500;
            std::vector<double> h(kCap + 1, 0.0);
            h[0] = 1.0;
            for (double x : shifted)
                for (unsigned n = 1; n <= kCap; ++n) h[n] += x * h[n - 1];

            double factorial_nd = to_double(Rational(factorial(d))); // (n+d)! running
            double acc = h[0] / factorial_nd;
            double bound = 1.0 / factorial_nd; // spread^n C(n+d,d)/(n+d)! = spread^n/(n! d!)
            bool converged = spread == 0.0;
            for (unsigned n = 1; n <= kCap && !converged; ++n) {
                factorial_nd *= double(n + d);
                acc += h[n] / factorial_nd;
                bound *= spread / double(n);
                if (bound < 1e-16 * std::fabs(acc)) converged = true;
            }
            if (!converged)
                throw NumericError("exponential series did not converge within 500 terms");
            return dfact_vol * std::exp(ymin + bd) * acc;
        }
    }
    throw Error("unreachable");
}

} // namespace detail

/// Integral of e^(c.x + b) over J. Distinct vertex values take Brion's sum,
/// an equal-difference spectrum takes the closed form, anything else the
/// truncated series with an a-priori stopping bound.
inline double integrate_exp_affine(const Simplex<double>& j, const Vector<double>& c, double b) {
    return detail::integrate_exp_affine_impl(j, c, b, std::nullopt);
}

/// Rational inputs classify their pole structure exactly.
inline double integrate_exp_affine(const Simplex<Rational>& j, const Vector<Rational>& c,
                                   const Rational& b) {
    return detail::integrate_exp_affine_impl(j, c, b, std::nullopt);
}

/// Series route regardless of structure; the independent check path.
template <class S>
double integrate_exp_affine_series(const Simplex<S>& j, const Vector<S>& c, const S& b) {
    return detail::integrate_exp_affine_impl(j, c, b,
                                             detail::ExpClassification::Route::series);
}

// ---------------------------------------------------------------------------
// q-homogeneous integrands via the polarization identity
// ---------------------------------------------------------------------------

/**
 * Integral of a q-homogeneous f over J using the symmetric multilinear form:
 *   vol(J) / (2^q q! binom(q+d, q)) * sum over vertex multisets and signs of
 *   eps_1...eps_q f(sum eps_j v_{i_j}).
 * Costs 2^q binom(q+d, q) evaluations of f. Exact when f and J are exact.
 */
template <class S, class F>
S integrate_qhomogeneous(const Simplex<S>& j, F&& f, unsigned q) {
    if (q == 0) throw PreconditionError("polarization needs a positive integer degree");
    const std::size_t d = j.dim();

    // multiset 0 <= i_1 <= ... <= i_q <= d as a nondecreasing index vector
    std::vector<std::size_t> index(q, 0);
    S sum(0);
    while (true) {
        for (unsigned mask = 0; mask < (1u << q); ++mask) {
            Vector<S> point(d, S(0));
            int sign = 1;
            for (unsigned slot = 0; slot < q; ++slot) {
                const bool plus = (mask >> slot) & 1u;
                if (!plus) sign = -sign;
                const auto& v = j.vertex(index[slot]);
                for (std::size_t i = 0; i < d; ++i)
                    point[i] += plus ? v[i] : -v[i];
            }
            S value = f(point);
            sum += sign > 0 ? value : -value;
        }
        // next nondecreasing index vector
        std::size_t slot = q;
        while (slot > 0 && index[slot - 1] == d) --slot;
        if (slot == 0) break;
        ++index[slot - 1];
        for (std::size_t k = slot; k < q; ++k) index[k] = index[slot - 1];
    }

    Rational scale = Rational(1) / (Rational(int_pow(Int(2), q)) * Rational(factorial(q)) *
                                    Rational(binomial(q + unsigned(d), q)));
    return simplex_volume(j) * detail::from_rational<S>(scale) * sum;
}

// ---------------------------------------------------------------------------
// (1^T x)^alpha over the standard simplex
// ---------------------------------------------------------------------------

/// 1 / ((alpha + d) (d-1)!) = integral of (1.x)^alpha over the standard simplex.
inline double integrate_one_norm_power(unsigned d, double alpha) {
    if (d == 0) throw PreconditionError("dimension must be positive");
    if (!(alpha > -1.0)) throw DivergentIntegralError("exponent <= -1 makes the integral diverge");
    return 1.0 / ((alpha + double(d)) * to_double(Rational(factorial(d - 1))));
}

/// Rational value for nonnegative integer exponents.
inline Rational integrate_one_norm_power_exact(unsigned d, unsigned alpha) {
    if (d == 0) throw PreconditionError("dimension must be positive");
    return Rational(1) / (Rational(int(alpha) + int(d)) * Rational(factorial(d - 1)));
}

} // namespace simplexvol
