#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "simplexvol/errors.hpp"
#include "simplexvol/rational.hpp"

namespace simplexvol {

/// One-dimensional Gauss-Jacobi rule: s+1 nodes and positive weights, exact
/// for polynomial integrands of degree <= 2s+1 against the declared weight
/// function. `unit_interval` distinguishes the two layouts:
///   false: integral over [-1,1] with weight (1-x)^alpha (1+x)^beta
///   true:  integral over [0,1]  with weight (1-x)^alpha x^beta
struct Jacobi1DRule {
    double alpha = 0.0;
    double beta = 0.0;
    int degree = 0;
    bool unit_interval = false;
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// Value and derivative of the Jacobi polynomial P_n^(alpha,beta) at x via
/// the three-term recurrence.
inline std::pair<double, double> jacobi_eval(unsigned n, double alpha, double beta, double x) {
    if (n == 0) return {1.0, 0.0};
    double p0 = 1.0, d0 = 0.0;
    double p1 = 0.5 * (alpha + beta + 2.0) * x + 0.5 * (alpha - beta);
    double d1 = 0.5 * (alpha + beta + 2.0);
    for (unsigned k = 2; k <= n; ++k) {
        double kk = double(k);
        double c1 = 2.0 * kk * (kk + alpha + beta) * (2.0 * kk + alpha + beta - 2.0);
        double c2 = (2.0 * kk + alpha + beta - 1.0) * (alpha * alpha - beta * beta);
        double c3 = (2.0 * kk + alpha + beta - 2.0) * (2.0 * kk + alpha + beta - 1.0) *
                    (2.0 * kk + alpha + beta);
        double c4 = 2.0 * (kk + alpha - 1.0) * (kk + beta - 1.0) * (2.0 * kk + alpha + beta);
        double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        double d2 = ((c2 + c3 * x) * d1 + c3 * p1 - c4 * d0) / c1;
        p0 = p1;
        d0 = d1;
        p1 = p2;
        d1 = d2;
    }
    return {p1, d1};
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL sweep
/// with Wilkinson shifts. diag has length n, off length n-1.
inline std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> diag,
                                                             std::vector<double> off) {
    const std::size_t n = diag.size();
    off.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        unsigned iterations = 0;
        while (true) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
                if (std::fabs(off[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m == l) break;
            if (++iterations > 200)
                throw NumericError("tridiagonal eigenvalue iteration did not converge");
            double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow_restart = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * off[i];
                double b = c * off[i];
                r = std::hypot(f, g);
                off[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow_restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow_restart) continue;
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

} // namespace detail

/**
 * Gauss-Jacobi rule with s+1 points on (-1, 1) for the weight
 * (1-x)^alpha (1+x)^beta. Nodes come from the symmetric tridiagonal form of
 * the three-term recurrence, refined by one Newton step on the recurrence-
 * evaluated polynomial; weights from the closed Gamma-ratio formula.
 */
inline Jacobi1DRule gauss_jacobi_rule(unsigned s, double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw PreconditionError("Jacobi exponents must exceed -1");
    const unsigned n = s + 1;

    std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
    double ab = alpha + beta;
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (unsigned k = 1; k < n; ++k) {
        double kk = double(k);
        diag[k] = (beta * beta - alpha * alpha) / ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0));
    }
    for (unsigned k = 1; k < n; ++k) {
        double kk = double(k);
        double b2 = k == 1 ? 4.0 * (alpha + 1.0) * (beta + 1.0) /
                                 ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
                           : 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                                 ((2.0 * kk + ab) * (2.0 * kk + ab) * (2.0 * kk + ab + 1.0) *
                                  (2.0 * kk + ab - 1.0));
        off[k - 1] = std::sqrt(b2);
    }

    std::vector<double> nodes = detail::symmetric_tridiagonal_eigenvalues(diag, off);

    // one Newton step per node; the eigenvalues are already near machine
    // precision, this removes the last drift
    for (double& x : nodes) {
        auto [value, derivative] = detail::jacobi_eval(n, alpha, beta, x);
        if (derivative != 0.0) {
            double step = value / derivative;
            if (std::fabs(step) < 1e-8) x -= step;
        }
    }

    const double log_scale = std::lgamma(double(n) + alpha + 1.0) +
                             std::lgamma(double(n) + beta + 1.0) -
                             std::lgamma(double(n) + ab + 1.0) - std::lgamma(double(n) + 1.0) +
                             (ab + 1.0) * std::log(2.0);
    Jacobi1DRule rule;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.degree = int(2 * s + 1);
    rule.unit_interval = false;
    rule.nodes = nodes;
    rule.weights.reserve(n);
    for (double x : nodes) {
        auto [value, derivative] = detail::jacobi_eval(n, alpha, beta, x);
        (void)value;
        rule.weights.push_back(std::exp(log_scale) / ((1.0 - x * x) * derivative * derivative));
    }
    return rule;
}

/// Same rule transported to [0,1] with weight (1-x)^alpha x^beta.
inline Jacobi1DRule jacobi_rule_01(unsigned s, double alpha, double beta) {
    Jacobi1DRule rule = gauss_jacobi_rule(s, alpha, beta);
    const double scale = std::pow(0.5, alpha + beta + 1.0);
    for (double& x : rule.nodes) x = 0.5 * (x + 1.0);
    for (double& w : rule.weights) w *= scale;
    rule.unit_interval = true;
    return rule;
}

/// Rule for the radial integral of the cone: int_0^1 z^d f(z) dz, exact to
/// degree 2s+1.
inline Jacobi1DRule radial_rule(unsigned d, unsigned s) {
    return jacobi_rule_01(s, 0.0, double(d));
}

/// Sum of w_j f(x_j); with the weight function folded into the weights this
/// approximates the weighted integral directly.
template <class F>
double apply_rule(const Jacobi1DRule& rule, F&& f) {
    double acc = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        double term = rule.weights[k] * f(rule.nodes[k]);
        double t = acc + term;
        if (std::fabs(acc) >= std::fabs(term))
            comp += (acc - t) + term;
        else
            comp += (term - t) + acc;
        acc = t;
    }
    return acc + comp;
}

} // namespace simplexvol
