#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplexvol/exact_integration.hpp"
#include "simplexvol/gauss_jacobi.hpp"
#include "simplexvol/simplex.hpp"

namespace simplexvol {

enum class RuleRegion { standard_simplex, simplex, cone };

inline std::string to_string(RuleRegion r) {
    switch (r) {
        case RuleRegion::standard_simplex: return "standard_simplex";
        case RuleRegion::simplex: return "simplex";
        case RuleRegion::cone: return "cone";
    }
    return "?";
}

/**
 * Weighted point set with a declared region, dimension and polynomial degree
 * of exactness. Simplex rules store points in the d free coordinates (the
 * barycentric x_0 is implicit); cone rules append z as the last coordinate.
 */
template <class S>
struct CubatureRule {
    RuleRegion region = RuleRegion::standard_simplex;
    std::size_t dimension = 0;
    int degree = 0;
    std::vector<Vector<S>> points;
    std::vector<S> weights;
    bool has_negative_weights = false;

    std::size_t size() const { return points.size(); }
};

inline CubatureRule<double> to_double(const CubatureRule<Rational>& rule) {
    CubatureRule<double> out;
    out.region = rule.region;
    out.dimension = rule.dimension;
    out.degree = rule.degree;
    out.has_negative_weights = rule.has_negative_weights;
    out.points.reserve(rule.points.size());
    for (const auto& p : rule.points) {
        Vector<double> q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) q[i] = to_double(p[i]);
        out.points.push_back(std::move(q));
    }
    out.weights.reserve(rule.weights.size());
    for (const auto& w : rule.weights) out.weights.push_back(to_double(w));
    return out;
}

inline const CubatureRule<double>& to_double(const CubatureRule<double>& rule) { return rule; }

/**
 * Grundmann-Moller rule of degree q = 2s+1 on the standard simplex with
 * C(s+d+1, s) points. Weights are alternating in sign, so they are built in
 * exact rational arithmetic; convert with to_double() only at the end.
 */
inline CubatureRule<Rational> grundmann_moller_rule(unsigned d, unsigned s) {
    if (d == 0) throw PreconditionError("dimension must be positive");
    const unsigned q = 2 * s + 1;

    CubatureRule<Rational> rule;
    rule.region = RuleRegion::standard_simplex;
    rule.dimension = d;
    rule.degree = int(q);

    for (unsigned j = 0; j <= s; ++j) {
        // (-1)^j 2^{-2s} (q+d-2j)^q / (j! (q+d-j)!)
        Rational weight = Rational(int_pow(Int(q + d - 2 * j), q)) /
                          (Rational(int_pow(Int(2), 2 * s)) * Rational(factorial(j)) *
                           Rational(factorial(q + d - j)));
        if (j % 2 == 1) weight = -weight;

        // points ((2 k_1 + 1)/(q+d-2j), ...) over ||k||_1 = s - j, k in Z^{d+1}
        const unsigned denom = q + d - 2 * j;
        const unsigned level = s - j;
        std::vector<unsigned> k(d + 1, 0);
        k[0] = level;
        while (true) {
            Vector<Rational> point(d);
            for (unsigned i = 0; i < d; ++i)
                point[i] = Rational(2 * k[i + 1] + 1) / Rational(denom);
            rule.points.push_back(std::move(point));
            rule.weights.push_back(weight);

            // next composition of `level` into d+1 parts
            if (k.back() == level) break;
            std::size_t idx = 0;
            while (k[idx] == 0) ++idx;
            unsigned t = k[idx];
            k[idx] = 0;
            k[0] = t - 1;
            ++k[idx + 1];
        }
        if (weight < 0) rule.has_negative_weights = true;
    }
    return rule;
}

/**
 * Conical product rule of degree 2s+1 on the standard simplex: the product of
 * d Gauss-Jacobi rules with weights (1-y)^(d-k) on [0,1], composed through
 * the prefix-product map. (s+1)^d points, all weights positive, summing to
 * 1/d!.
 */
inline CubatureRule<double> conical_product_rule(unsigned d, unsigned s) {
    if (d == 0) throw PreconditionError("dimension must be positive");
    std::vector<Jacobi1DRule> axis;
    axis.reserve(d);
    for (unsigned k = 1; k <= d; ++k) axis.push_back(jacobi_rule_01(s, double(d - k), 0.0));

    CubatureRule<double> rule;
    rule.region = RuleRegion::standard_simplex;
    rule.dimension = d;
    rule.degree = int(2 * s + 1);

    const unsigned m = s + 1;
    std::vector<unsigned> index(d, 0);
    while (true) {
        Vector<double> point(d);
        double weight = 1.0;
        double prefix = 1.0; // (1 - y_1)...(1 - y_{k-1})
        for (unsigned k = 0; k < d; ++k) {
            double y = axis[k].nodes[index[k]];
            point[k] = prefix * y;
            prefix *= 1.0 - y;
            weight *= axis[k].weights[index[k]];
        }
        rule.points.push_back(std::move(point));
        rule.weights.push_back(weight);

        unsigned k = 0;
        while (k < d && index[k] == m - 1) index[k++] = 0;
        if (k == d) break;
        ++index[k];
    }
    return rule;
}

/// Transplants a standard-simplex rule onto J: points through the affine map,
/// weights scaled by |det B| = d! vol(J).
inline CubatureRule<double> transplant(const CubatureRule<double>& rule, const Simplex<double>& j) {
    if (rule.region != RuleRegion::standard_simplex || rule.dimension != j.dim())
        throw PreconditionError("transplant needs a standard-simplex rule of matching dimension");
    AffineMap<double> map = to_standard(j);
    CubatureRule<double> out;
    out.region = RuleRegion::simplex;
    out.dimension = rule.dimension;
    out.degree = rule.degree;
    out.has_negative_weights = rule.has_negative_weights;
    out.points.reserve(rule.size());
    out.weights.reserve(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        out.points.push_back(map.apply(rule.points[i]));
        out.weights.push_back(rule.weights[i] * map.abs_det);
    }
    return out;
}

/**
 * Product rule for the cone {(x, z) : x in z*J, 0 <= z <= 1} from a base rule
 * on J and a radial rule for int_0^1 z^d f(z) dz: points (r_k w_j, r_k) with
 * weights lambda_j nu_k, exact to the common degree.
 */
inline CubatureRule<double> cone_product_rule(const CubatureRule<double>& base,
                                              const Jacobi1DRule& radial) {
    if (base.region == RuleRegion::cone)
        throw PreconditionError("cone_product_rule needs a simplex base rule");
    if (!radial.unit_interval)
        throw PreconditionError("radial rule must live on [0,1]");
    CubatureRule<double> out;
    out.region = RuleRegion::cone;
    out.dimension = base.dimension + 1;
    out.degree = std::min(base.degree, radial.degree);
    out.has_negative_weights = base.has_negative_weights;
    out.points.reserve(base.size() * radial.nodes.size());
    out.weights.reserve(base.size() * radial.nodes.size());
    for (std::size_t k = 0; k < radial.nodes.size(); ++k) {
        const double r = radial.nodes[k];
        for (std::size_t jj = 0; jj < base.size(); ++jj) {
            Vector<double> point(base.dimension + 1);
            for (std::size_t i = 0; i < base.dimension; ++i) point[i] = r * base.points[jj][i];
            point[base.dimension] = r;
            out.points.push_back(std::move(point));
            out.weights.push_back(base.weights[jj] * radial.weights[k]);
        }
    }
    return out;
}

namespace detail {

inline std::string format_point(const Vector<double>& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += format_double(p[i]);
    }
    return s + ")";
}

} // namespace detail

/// Sum of w_j f(p_j) with compensated (Neumaier) summation over the canonical
/// point order, so results are independent of evaluation strategy. Evaluation
/// failures propagate with the offending point attached.
template <class F>
    requires std::invocable<F&, std::span<const double>>
double apply_rule(const CubatureRule<double>& rule, F&& f) {
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        double value;
        try {
            value = f(std::span<const double>(rule.points[i]));
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " at rule point " +
                               detail::format_point(rule.points[i]));
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string(e.what()) + " at rule point " +
                                    detail::format_point(rule.points[i]));
        }
        double term = rule.weights[i] * value;
        double t = acc + term;
        if (std::fabs(acc) >= std::fabs(term))
            comp += (acc - t) + term;
        else
            comp += (term - t) + acc;
        acc = t;
    }
    return acc + comp;
}

inline nlohmann::json rule_to_json(const CubatureRule<Rational>& rule) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : rule.points) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : p) row.push_back(format_rational(c));
        points.push_back(std::move(row));
    }
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& w : rule.weights) weights.push_back(format_rational(w));
    return nlohmann::json{{"region", to_string(rule.region)},
                          {"dimension", rule.dimension},
                          {"degree", rule.degree},
                          {"points", std::move(points)},
                          {"weights", std::move(weights)},
                          {"negative_weights", rule.has_negative_weights}};
}

inline nlohmann::json rule_to_json(const CubatureRule<double>& rule) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : rule.points) {
        nlohmann::json row = nlohmann::json::array();
        for (double c : p) row.push_back(format_double(c));
        points.push_back(std::move(row));
    }
    nlohmann::json weights = nlohmann::json::array();
    for (double w : rule.weights) weights.push_back(format_double(w));
    return nlohmann::json{{"region", to_string(rule.region)},
                          {"dimension", rule.dimension},
                          {"degree", rule.degree},
                          {"points", std::move(points)},
                          {"weights", std::move(weights)},
                          {"negative_weights", rule.has_negative_weights}};
}

} // namespace simplexvol
