#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "simplexvol/cubature.hpp"
#include "simplexvol/exact_integration.hpp"
#include "simplexvol/function_spec.hpp"
#include "simplexvol/monte_carlo.hpp"

namespace simplexvol {

/// Applies a cubature rule to a function spec. Cone rules accept a spec of
/// the base dimension, evaluated on the x-part of each (x, z) point.
inline double apply_rule(const CubatureRule<double>& rule, const FunctionSpec& spec) {
    if (rule.region == RuleRegion::cone && spec.dim() + 1 == rule.dimension)
        return apply_rule(rule, [&](std::span<const double> p) {
            return evaluate(spec, p.first(p.size() - 1));
        });
    if (spec.dim() != rule.dimension)
        throw PreconditionError("function/rule dimension mismatch");
    return apply_rule(rule, [&](std::span<const double> x) { return evaluate(spec, x); });
}

// ---------------------------------------------------------------------------
// Closed-form bounds and helper quantities
// ---------------------------------------------------------------------------

/// Lower bound on the cut-off ratio for f = (c.x)^q, q > 1, c.v_j >= 0:
/// (q-1) / (Gamma(q+d+2) / ((d+1)! Gamma(q+1)) - (d+2)). Tight as the vertex
/// values separate.
inline double ratio_lower_bound_power(double q, unsigned d) {
    if (!(q > 1.0)) throw PreconditionError("power-ratio bound needs q > 1");
    double log_ratio = std::lgamma(q + double(d) + 2.0) - std::lgamma(q + 1.0) -
                       std::lgamma(double(d) + 2.0);
    return (q - 1.0) / (std::exp(log_ratio) - double(d) - 2.0);
}

/// Even-exponent variant without the sign condition:
/// (q-1) / ((q+d+1)!/(q!(d+1)!) 2^(q/2) (q/2)! - (d+2)).
inline double ratio_lower_bound_even(unsigned q, unsigned d) {
    if (q < 2 || q % 2 != 0) throw PreconditionError("even-ratio bound needs even q >= 2");
    Rational denom = Rational(factorial(q + d + 1)) /
                     (Rational(factorial(q)) * Rational(factorial(d + 1)));
    denom *= Rational(int_pow(Int(2), q / 2)) * Rational(factorial(q / 2));
    denom -= Rational(int(d) + 2);
    return double(q - 1) / to_double(denom);
}

struct HunterCheck {
    double h = 0.0;
    double bound = 0.0;
    bool improved_applicable = false;
};

/// Evaluates h_q(values) against the Hunter lower bound
/// sum x_j^q / (2^(q/2) (q/2)!), raised to sum x_j^q / 2 in the three cases
/// where that improvement holds (q=2, d=2, or d=3 with q=4).
inline HunterCheck hunter_bound_check(unsigned q, std::span<const double> values) {
    if (q % 2 != 0) throw PreconditionError("Hunter bound needs an even exponent");
    const std::size_t d = values.size();
    HunterCheck out;
    out.h = h_complete<double>(q, values);
    double power_sum = 0.0;
    for (double x : values) power_sum += std::pow(x, double(q));
    double gamma =
        1.0 / to_double(Rational(int_pow(Int(2), q / 2)) * Rational(factorial(q / 2)));
    out.improved_applicable = q == 2 || d == 2 || (d == 3 && q == 4);
    out.bound = (out.improved_applicable ? std::max(gamma, 0.5) : gamma) * power_sum;
    if (out.h < out.bound - 1e-12 * std::max(1.0, std::fabs(out.bound)))
        throw NumericError("complete homogeneous bound violated; check inputs");
    return out;
}

inline HunterCheck hunter_bound_check(unsigned q, const std::vector<double>& values) {
    return hunter_bound_check(q, std::span<const double>(values));
}

/// Exact value of int over the standard simplex of max(x_1..x_d):
/// (1/(d+1)!) sum_{j=1..d} 1/j.
inline Rational max_integral_standard(unsigned d) {
    if (d == 0) throw PreconditionError("dimension must be positive");
    Rational harmonic(0);
    for (unsigned j = 1; j <= d; ++j) harmonic += Rational(1, j);
    return harmonic / Rational(factorial(d + 1));
}

// ---------------------------------------------------------------------------
// Volume formulas from the secant mean and the two integrals
// ---------------------------------------------------------------------------

/// vol(P) = (int mu - int f) / (d+2), as a hyperpyramid with unit height.
template <class S>
S perspective_from_parts(unsigned d, const S& secant_integral, const S& f_integral) {
    return (secant_integral - f_integral) / S(int(d) + 2);
}

/// vol(P0) = int mu / (d+2) - W, with W the cone defect
/// int_0^1 z^d int_J f(z x) dx dz.
template <class S>
S naive_from_parts(unsigned d, const S& secant_integral, const S& cone_defect) {
    return secant_integral / S(int(d) + 2) - cone_defect;
}

/// For q-homogeneous f the cone defect collapses to int f / (q+d+1).
template <class S, class F>
S naive_volume_qhomogeneous(const Simplex<S>& j, F&& f, unsigned q, const S& f_integral) {
    if (q < 1) throw PreconditionError("homogeneity degree must be >= 1");
    const unsigned d = static_cast<unsigned>(j.dim());

    // homogeneity spot check: f(2 x) must equal 2^q f(x) at the centroid
    {
        Vector<S> centroid(d, S(0)), doubled_point(d, S(0));
        for (unsigned i = 0; i < d; ++i) {
            for (unsigned k = 0; k <= d; ++k) centroid[i] += j.vertex(k)[i];
            centroid[i] = centroid[i] / S(int(d) + 1);
            doubled_point[i] = centroid[i] * S(2);
        }
        double base = to_double(f(centroid));
        double doubled = to_double(f(doubled_point));
        double expected = std::ldexp(base, int(q));
        if (std::fabs(doubled - expected) > 1e-10 * (1.0 + std::fabs(expected)))
            throw PreconditionError("function is not q-homogeneous of the declared degree");
    }

    S secant = secant_mean(j, std::forward<F>(f));
    return secant / S(int(d) + 2) - f_integral / S(int(q + d) + 1);
}

/// Cut-off amount for q-homogeneous f:
/// (q-1) / ((q+d+1)(d+2)) * int_J f.
template <class S>
S cutoff_qhomogeneous_from_integral(unsigned d, unsigned q, const S& f_integral) {
    if (q < 1) throw PreconditionError("homogeneity degree must be >= 1");
    Rational factor = Rational(int(q) - 1) / (Rational(int(q + d) + 1) * Rational(int(d) + 2));
    return detail::from_rational<S>(factor) * f_integral;
}

/// Exact cut-off for a q-homogeneous polynomial over a rational simplex.
inline Rational cutoff_qhomogeneous(const Simplex<Rational>& j, const Polynomial<Rational>& f,
                                    unsigned q) {
    unsigned detected = 0;
    if (!f.is_homogeneous(&detected) || (detected != q && !f.is_zero()))
        throw PreconditionError("polynomial is not homogeneous of the declared degree");
    Rational integral = integrate_polynomial(j, f);
    return cutoff_qhomogeneous_from_integral(static_cast<unsigned>(j.dim()), q, integral);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// One computed scalar with its provenance: how it was computed, an error
/// estimate (0 for exact routes), and the exact rational when available.
struct Quantity {
    double value = 0.0;
    std::optional<Rational> exact;
    std::string method;
    double error = 0.0;
};

struct ClosedFormCheck {
    double cubature_value = 0.0;
    double relative_deviation = 0.0;
    bool agreed = true;
};

struct RelaxationReport {
    Quantity perspective;
    Quantity naive;
    Quantity cutoff;
    double ratio = 0.0;
    bool ratio_defined = false;
    double ratio_error = 0.0;
    std::optional<Rational> ratio_exact;
    std::optional<ClosedFormCheck> closed_form_check;
};

inline nlohmann::json quantity_to_json(const Quantity& q) {
    nlohmann::json out{{"value", format_double(q.value)},
                       {"method", q.method},
                       {"error", format_double(q.error)}};
    if (q.exact) out["exact"] = format_rational(*q.exact);
    return out;
}

inline nlohmann::json report_to_json(const RelaxationReport& r) {
    nlohmann::json out{{"perspective_volume", quantity_to_json(r.perspective)},
                       {"naive_volume", quantity_to_json(r.naive)},
                       {"cutoff_amount", quantity_to_json(r.cutoff)}};
    if (r.ratio_defined) {
        out["cutoff_ratio"] = {{"value", format_double(r.ratio)},
                               {"error", format_double(r.ratio_error)}};
        if (r.ratio_exact) out["cutoff_ratio"]["exact"] = format_rational(*r.ratio_exact);
    } else {
        out["cutoff_ratio"] = {{"defined", false}};
    }
    if (r.closed_form_check) {
        out["closed_form_check"] = {
            {"cubature_value", format_double(r.closed_form_check->cubature_value)},
            {"relative_deviation", format_double(r.closed_form_check->relative_deviation)},
            {"agreed", r.closed_form_check->agreed}};
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integrator dispatch
// ---------------------------------------------------------------------------

struct RelaxationConfig {
    unsigned cubature_s = 2;         // conical/GM rules of degree 2s+1
    unsigned validation_s = 12;      // high-order rule for closed-form checks
    std::uint64_t seed = 0;
    std::size_t mc_samples = 1000000;
    double mc_fallback_rel_tol = 0.02; // cross-check disagreement that abandons cubature
    bool audit_convexity = false;
};

/// A simplex in both towers: the numeric copy always, the exact one whenever
/// the input was rational.
struct SimplexContext {
    std::optional<Simplex<Rational>> exact;
    Simplex<double> numeric;

    explicit SimplexContext(Simplex<Rational> j) : exact(std::move(j)), numeric(to_double(*exact)) {}
    explicit SimplexContext(Simplex<double> j) : numeric(std::move(j)) {}
    explicit SimplexContext(const SimplexInput& input)
        : SimplexContext(std::holds_alternative<Simplex<Rational>>(input)
                             ? SimplexContext(std::get<Simplex<Rational>>(input))
                             : SimplexContext(std::get<Simplex<double>>(input))) {}

    std::size_t dim() const { return numeric.dim(); }
};

namespace detail {

inline void validate_relaxation_domain(const SimplexContext& ctx) {
    if (!all_coordinates_nonnegative(ctx.numeric))
        throw DomainError("relaxation volumes need J in the nonnegative orthant");
    bool interior = ctx.exact ? origin_in_interior(*ctx.exact) : origin_in_interior(ctx.numeric);
    if (interior) throw DomainError("relaxation volumes need the origin outside the interior of J");
}

inline void require_convex_assertion(const FunctionSpec& spec) {
    if (const auto* bb = spec.get_if<BlackBoxSpec>())
        if (!bb->convex_asserted)
            throw PreconditionError("volume formulas need the black box asserted convex");
}

/// Is J a scaled standard simplex u * Delta_d (vertices {0, u e_j} in some
/// order)? Returns u. Used to route fractional one-norm powers.
inline std::optional<Rational> scaled_standard_factor(const Simplex<Rational>& j) {
    const std::size_t d = j.dim();
    Rational u(0);
    std::vector<bool> axis_seen(d, false);
    bool origin_seen = false;
    for (const auto& v : j.vertices()) {
        std::size_t nonzero = d + 1;
        std::size_t count = 0;
        for (std::size_t i = 0; i < d; ++i)
            if (v[i] != 0) {
                nonzero = i;
                ++count;
            }
        if (count == 0) {
            if (origin_seen) return std::nullopt;
            origin_seen = true;
        } else if (count == 1) {
            if (axis_seen[nonzero]) return std::nullopt;
            if (u == 0)
                u = v[nonzero];
            else if (u != v[nonzero])
                return std::nullopt;
            axis_seen[nonzero] = true;
        } else {
            return std::nullopt;
        }
    }
    return origin_seen && u > 0 ? std::optional<Rational>(u) : std::nullopt;
}

inline std::string cubature_tag(const char* rule, int degree) {
    return std::string("cubature:") + rule + ":" + std::to_string(degree);
}

/// Conical-product value with a same-degree Grundmann-Moller cross-check;
/// falls back to Monte-Carlo if the two disagree badly.
template <class F>
Quantity cubature_with_crosscheck(const Simplex<double>& j, F&& f, const RelaxationConfig& cfg) {
    const unsigned d = static_cast<unsigned>(j.dim());
    CubatureRule<double> conical = transplant(conical_product_rule(d, cfg.cubature_s), j);
    CubatureRule<double> gm = transplant(to_double(grundmann_moller_rule(d, cfg.cubature_s)), j);
    double a = apply_rule(conical, f);
    double b = apply_rule(gm, f);
    double disagreement = std::fabs(a - b);
    if (disagreement > cfg.mc_fallback_rel_tol * std::max(1.0, std::fabs(a))) {
        McResult mc = monte_carlo_integrate(j, f, cfg.mc_samples, cfg.seed + 1);
        return {mc.estimate, std::nullopt, "monte_carlo", mc.stderr_of_mean};
    }
    return {a, std::nullopt, cubature_tag("conical", conical.degree), disagreement};
}

template <class F>
Quantity cone_cubature_with_crosscheck(const Simplex<double>& j, F&& f,
                                       const RelaxationConfig& cfg) {
    const unsigned d = static_cast<unsigned>(j.dim());
    Jacobi1DRule radial = radial_rule(d, cfg.cubature_s);
    CubatureRule<double> conical =
        cone_product_rule(transplant(conical_product_rule(d, cfg.cubature_s), j), radial);
    CubatureRule<double> gm = cone_product_rule(
        transplant(to_double(grundmann_moller_rule(d, cfg.cubature_s)), j), radial);
    double a = apply_rule(conical, f);
    double b = apply_rule(gm, f);
    double disagreement = std::fabs(a - b);
    if (disagreement > cfg.mc_fallback_rel_tol * std::max(1.0, std::fabs(a))) {
        McResult mc = monte_carlo_integrate(ConeRegion<double>{j}, f, cfg.mc_samples, cfg.seed + 2);
        return {mc.estimate, std::nullopt, "monte_carlo", mc.stderr_of_mean};
    }
    return {a, std::nullopt, cubature_tag("cone", conical.degree), disagreement};
}

} // namespace detail

/// Integral of the spec over J, routed to the best available method:
/// exact polynomial routes, Brion/residue closed forms, polarization,
/// conical cubature with a Grundmann-Moller cross-check, Monte-Carlo last.
inline Quantity integrate_function(const SimplexContext& ctx, const FunctionSpec& spec,
                                   const RelaxationConfig& cfg = {}) {
    const unsigned d = static_cast<unsigned>(ctx.dim());
    if (spec.dim() != d) throw PreconditionError("function/simplex dimension mismatch");

    switch (spec.kind()) {
        case FunctionSpec::Kind::poly: {
            const auto& poly = spec.get_if<PolySpec>()->poly;
            if (ctx.exact) {
                Rational exact = integrate_polynomial(*ctx.exact, poly);
                return {to_double(exact), exact, "exact_poly", 0.0};
            }
            double value = integrate_polynomial(ctx.numeric, to_double(poly));
            return {value, std::nullopt, "exact_poly", 0.0};
        }
        case FunctionSpec::Kind::linpow: {
            const auto& lp = *spec.get_if<LinPowSpec>();
            if (lp.integer_exponent() && lp.q >= 0) {
                unsigned n = lp.q.convert_to<unsigned>();
                if (ctx.exact) {
                    Rational exact = integrate_affine_power(*ctx.exact, lp.c, lp.b, n);
                    return {to_double(exact), exact, "brion", 0.0};
                }
                Vector<double> c(lp.c.size());
                for (std::size_t i = 0; i < c.size(); ++i) c[i] = to_double(lp.c[i]);
                double value = integrate_affine_power(ctx.numeric, c, to_double(lp.b), n);
                return {value, std::nullopt, "brion", 0.0};
            }
            // fractional exponent: closed form only on u*Delta_d with c
            // proportional to the all-ones vector and b = 0
            bool uniform_c = true;
            for (const auto& ci : lp.c)
                if (ci != lp.c[0]) uniform_c = false;
            if (ctx.exact && uniform_c && lp.c[0] > 0 && lp.b == 0) {
                if (auto u = detail::scaled_standard_factor(*ctx.exact)) {
                    double alpha = to_double(lp.q);
                    double value = std::pow(to_double(lp.c[0]), alpha) *
                                   std::pow(to_double(*u), alpha + double(d)) *
                                   integrate_one_norm_power(d, alpha);
                    return {value, std::nullopt, "closed_form", 0.0};
                }
            }
            auto f = [&](std::span<const double> x) { return evaluate(spec, x); };
            return detail::cubature_with_crosscheck(ctx.numeric, f, cfg);
        }
        case FunctionSpec::Kind::exp_affine: {
            const auto& ea = *spec.get_if<ExpAffineSpec>();
            double value;
            if (ctx.exact)
                value = integrate_exp_affine(*ctx.exact, ea.c, ea.b);
            else {
                Vector<double> c(ea.c.size());
                for (std::size_t i = 0; i < c.size(); ++i) c[i] = to_double(ea.c[i]);
                value = integrate_exp_affine(ctx.numeric, c, to_double(ea.b));
            }
            if (ea.subtract_one) value -= simplex_volume(ctx.numeric);
            return {value, std::nullopt, "closed_form", 0.0};
        }
        case FunctionSpec::Kind::qhomogeneous: {
            const auto& qh = *spec.get_if<QHomogeneousSpec>();
            auto f = [&](const Vector<double>& x) {
                return qh.eval(std::span<const double>(x));
            };
            double value = integrate_qhomogeneous(ctx.numeric, f, qh.degree);
            return {value, std::nullopt, "closed_form", 0.0};
        }
        case FunctionSpec::Kind::logsumexp:
        case FunctionSpec::Kind::blackbox: {
            auto f = [&](std::span<const double> x) { return evaluate(spec, x); };
            return detail::cubature_with_crosscheck(ctx.numeric, f, cfg);
        }
    }
    throw Error("unreachable");
}

/// The cone defect W = int_0^1 z^d int_J f(z x) dx dz, i.e. the integral of
/// f(x) over the cone region.
inline Quantity integrate_cone_defect(const SimplexContext& ctx, const FunctionSpec& spec,
                                      const RelaxationConfig& cfg = {}) {
    const unsigned d = static_cast<unsigned>(ctx.dim());
    if (spec.dim() != d) throw PreconditionError("function/simplex dimension mismatch");

    switch (spec.kind()) {
        case FunctionSpec::Kind::poly: {
            // split into homogeneous parts: each contributes int p_k / (k+d+1)
            const auto& poly = spec.get_if<PolySpec>()->poly;
            if (ctx.exact) {
                Rational acc(0);
                for (const auto& [deg, part] : poly.homogeneous_parts())
                    acc += integrate_polynomial(*ctx.exact, part) / Rational(int(deg + d) + 1);
                return {to_double(acc), acc, "exact_poly", 0.0};
            }
            double acc = 0.0;
            for (const auto& [deg, part] : to_double(poly).homogeneous_parts())
                acc += integrate_polynomial(ctx.numeric, part) / double(deg + d + 1);
            return {acc, std::nullopt, "exact_poly", 0.0};
        }
        case FunctionSpec::Kind::linpow: {
            const auto& lp = *spec.get_if<LinPowSpec>();
            if (lp.b != 0) throw PreconditionError("cone defect needs f(0) = 0, so b must be 0");
            // (c.x)^q is q-homogeneous for any real q
            Quantity integral = integrate_function(ctx, spec, cfg);
            double qd = to_double(lp.q);
            Quantity out = integral;
            out.value /= qd + double(d) + 1.0;
            out.error /= qd + double(d) + 1.0;
            if (integral.exact && lp.integer_exponent())
                out.exact = *integral.exact / (lp.q + int(d) + 1);
            else
                out.exact.reset();
            return out;
        }
        case FunctionSpec::Kind::qhomogeneous: {
            const auto& qh = *spec.get_if<QHomogeneousSpec>();
            Quantity integral = integrate_function(ctx, spec, cfg);
            integral.value /= double(qh.degree + d + 1);
            integral.error /= double(qh.degree + d + 1);
            return integral;
        }
        case FunctionSpec::Kind::exp_affine: {
            const auto& ea = *spec.get_if<ExpAffineSpec>();
            if (!(ea.subtract_one && ea.b == 0))
                throw PreconditionError("cone defect needs f(0) = 0: use minus1 with b = 0");
            Vector<double> c(ea.c.size());
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = to_double(ea.c[i]);
            // radial rule x exact inner integral; the z-integrand is entire
            Jacobi1DRule radial = radial_rule(d, cfg.validation_s);
            double value = apply_rule(radial, [&](double z) {
                Vector<double> zc(c.size());
                for (std::size_t i = 0; i < c.size(); ++i) zc[i] = z * c[i];
                return integrate_exp_affine(ctx.numeric, zc, 0.0);
            });
            value -= simplex_volume(ctx.numeric) / double(d + 1);
            return {value, std::nullopt, detail::cubature_tag("radial", radial.degree), 0.0};
        }
        case FunctionSpec::Kind::logsumexp:
        case FunctionSpec::Kind::blackbox: {
            auto f = [&](std::span<const double> p) {
                return evaluate(spec, p.first(p.size() - 1));
            };
            return detail::cone_cubature_with_crosscheck(ctx.numeric, f, cfg);
        }
    }
    throw Error("unreachable");
}

namespace detail {

inline Quantity secant_integral(const SimplexContext& ctx, const FunctionSpec& spec) {
    if (ctx.exact && exactly_evaluable(spec)) {
        Rational exact = secant_mean(*ctx.exact, spec);
        return {to_double(exact), exact, "closed_form", 0.0};
    }
    return {secant_mean(ctx.numeric, spec), std::nullopt, "closed_form", 0.0};
}

inline void check_f_zero_is_zero(const FunctionSpec& spec) {
    Vector<double> zero(spec.dim(), 0.0);
    double f0 = evaluate(spec, zero);
    if (std::fabs(f0) > 1e-12)
        throw PreconditionError("naive relaxation needs f(0) = 0; got f(0) = " +
                                format_double(f0));
}

inline void audit_convexity(const SimplexContext& ctx, const FunctionSpec& spec, bool over_cone,
                            std::uint64_t seed) {
    const std::size_t d = ctx.dim();
    std::vector<Vector<double>> pts;
    if (over_cone) {
        auto cone_pts = sample_uniform(ConeRegion<double>{ctx.numeric}, 2000, seed + 7);
        for (auto& p : cone_pts) {
            p.resize(d);
            pts.push_back(std::move(p));
        }
    } else {
        pts = sample_uniform(ctx.numeric, 2000, seed + 7);
    }
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
        Vector<double> mid(d);
        for (std::size_t k = 0; k < d; ++k) mid[k] = 0.5 * (pts[i][k] + pts[i + 1][k]);
        double lhs = evaluate(spec, mid);
        double rhs = 0.5 * (evaluate(spec, pts[i]) + evaluate(spec, pts[i + 1]));
        if (lhs > rhs + 1e-9 * (1.0 + std::fabs(rhs)))
            throw PreconditionError("midpoint convexity audit failed");
    }
}

} // namespace detail

/// vol(P(f,J)) = (1/(d+2)) (int mu - int f); nonnegative for convex f.
inline Quantity perspective_volume(const SimplexContext& ctx, const FunctionSpec& spec,
                                   const RelaxationConfig& cfg = {}) {
    detail::validate_relaxation_domain(ctx);
    detail::require_convex_assertion(spec);
    if (cfg.audit_convexity) detail::audit_convexity(ctx, spec, false, cfg.seed);
    const unsigned d = static_cast<unsigned>(ctx.dim());

    Quantity secant = detail::secant_integral(ctx, spec);
    Quantity integral = integrate_function(ctx, spec, cfg);

    Quantity out;
    out.value = (secant.value - integral.value) / double(d + 2);
    out.error = integral.error / double(d + 2);
    out.method = integral.method;
    if (secant.exact && integral.exact) {
        out.exact = perspective_from_parts(d, *secant.exact, *integral.exact);
        out.value = to_double(*out.exact);
    }
    return out;
}

/// vol(P0(f,J)) via the z-slicing formula; needs f(0) = 0 and convexity on
/// conv(J u {0}).
inline Quantity naive_volume(const SimplexContext& ctx, const FunctionSpec& spec,
                             const RelaxationConfig& cfg = {}) {
    detail::validate_relaxation_domain(ctx);
    detail::require_convex_assertion(spec);
    detail::check_f_zero_is_zero(spec);
    if (cfg.audit_convexity) detail::audit_convexity(ctx, spec, true, cfg.seed);
    const unsigned d = static_cast<unsigned>(ctx.dim());

    Quantity secant = detail::secant_integral(ctx, spec);
    Quantity defect = integrate_cone_defect(ctx, spec, cfg);

    Quantity out;
    out.value = secant.value / double(d + 2) - defect.value;
    out.error = defect.error;
    out.method = defect.method;
    if (secant.exact && defect.exact) {
        out.exact = naive_from_parts(d, *secant.exact, *defect.exact);
        out.value = to_double(*out.exact);
    }
    return out;
}

/// Spec-level q-homogeneous naive volume: routes the integral of f, checks
/// homogeneity of the declared degree, and applies the collapsed formula
/// int mu / (d+2) - int f / (q+d+1).
inline Quantity naive_volume_qhomogeneous(const SimplexContext& ctx, const FunctionSpec& spec,
                                          unsigned q, const RelaxationConfig& cfg = {}) {
    detail::validate_relaxation_domain(ctx);
    detail::require_convex_assertion(spec);
    if (q < 1) throw PreconditionError("homogeneity degree must be >= 1");
    const unsigned d = static_cast<unsigned>(ctx.dim());

    // structural homogeneity checks where the spec allows them
    if (const auto* p = spec.get_if<PolySpec>()) {
        unsigned detected = 0;
        if (!p->poly.is_homogeneous(&detected) || (detected != q && !p->poly.is_zero()))
            throw PreconditionError("polynomial is not homogeneous of the declared degree");
    } else if (const auto* lp = spec.get_if<LinPowSpec>()) {
        if (lp->b != 0 || lp->q != int(q))
            throw PreconditionError("linear power is not homogeneous of the declared degree");
    } else {
        // numeric spot check at the centroid of J
        Vector<double> centroid(d, 0.0), doubled_point(d, 0.0);
        for (unsigned i = 0; i < d; ++i) {
            for (unsigned k = 0; k <= d; ++k) centroid[i] += ctx.numeric.vertex(k)[i];
            centroid[i] /= double(d + 1);
            doubled_point[i] = 2.0 * centroid[i];
        }
        double base = evaluate(spec, centroid);
        double doubled = evaluate(spec, doubled_point);
        double expected = std::ldexp(base, int(q));
        if (std::fabs(doubled - expected) > 1e-10 * (1.0 + std::fabs(expected)))
            throw PreconditionError("function is not q-homogeneous of the declared degree");
    }

    Quantity secant = detail::secant_integral(ctx, spec);
    Quantity integral = integrate_function(ctx, spec, cfg);

    Quantity out;
    out.value = secant.value / double(d + 2) - integral.value / double(q + d + 1);
    out.error = integral.error / double(q + d + 1);
    out.method = integral.method;
    if (secant.exact && integral.exact) {
        out.exact = *secant.exact / Rational(int(d) + 2) -
                    *integral.exact / Rational(int(q + d) + 1);
        out.value = to_double(*out.exact);
    }
    return out;
}

/// Full report: both volumes, cut-off amount and ratio, with method tags and
/// error estimates. The ratio is flagged undefined instead of dividing by a
/// vanishing naive volume.
inline RelaxationReport cutoff_report(const SimplexContext& ctx, const FunctionSpec& spec,
                                      const RelaxationConfig& cfg = {}) {
    RelaxationReport report;
    report.perspective = perspective_volume(ctx, spec, cfg);
    report.naive = naive_volume(ctx, spec, cfg);

    report.cutoff.value = report.naive.value - report.perspective.value;
    report.cutoff.error = report.naive.error + report.perspective.error;
    report.cutoff.method = report.naive.method;
    if (report.naive.exact && report.perspective.exact) {
        report.cutoff.exact = *report.naive.exact - *report.perspective.exact;
        report.cutoff.value = to_double(*report.cutoff.exact);
    }

    double scale = std::fabs(report.naive.value) + std::fabs(report.perspective.value) +
                   std::fabs(report.cutoff.value);
    double tolerance = report.naive.error + report.perspective.error + 1e-12 * std::max(1.0, scale);
    if (report.naive.value < report.perspective.value - 2.0 * tolerance)
        throw NumericError("containment violated: naive volume below perspective volume");

    if (std::fabs(report.naive.value) > 1e-14 * std::max(1.0, scale)) {
        report.ratio_defined = true;
        report.ratio = report.cutoff.value / report.naive.value;
        double rel = std::fabs(report.cutoff.value) > 0
                         ? report.cutoff.error / std::fabs(report.cutoff.value)
                         : 0.0;
        rel += report.naive.error / std::fabs(report.naive.value);
        report.ratio_error = std::fabs(report.ratio) * rel;
        if (report.cutoff.exact && report.naive.exact && *report.naive.exact != 0)
            report.ratio_exact = *report.cutoff.exact / *report.naive.exact;
    }
    return report;
}

inline RelaxationReport cutoff_report(const SimplexInput& input, const FunctionSpec& spec,
                                      const RelaxationConfig& cfg = {}) {
    return cutoff_report(SimplexContext(input), spec, cfg);
}

// ---------------------------------------------------------------------------
// The exponential family f = e^{c.x} - 1 with equal vertex differences
// ---------------------------------------------------------------------------

/**
 * Parameters for the closed-form volumes of f = e^{c.x} - 1 over a simplex
 * whose vertex values share a common difference: c.v_0 - c.v_j = u != 0 for
 * all j >= 1. The closed forms additionally need c.v_0 not in {0, u}.
 */
struct ExpFamilyParams {
    SimplexContext ctx;
    Vector<double> c;
    double u = 0.0;    // common difference c.v_0 - c.v_j
    double apex = 0.0; // c.v_0

    static ExpFamilyParams create(SimplexContext ctx_in, Vector<double> c_in) {
        ExpFamilyParams p{std::move(ctx_in), std::move(c_in), 0.0, 0.0};
        const auto& j = p.ctx.numeric;
        if (p.c.size() != j.dim()) throw PreconditionError("direction/simplex dimension mismatch");
        Vector<double> values;
        for (const auto& v : j.vertices()) values.push_back(dot(p.c, v));
        p.apex = values[0];
        p.u = values[0] - values[1];
        for (std::size_t k = 2; k < values.size(); ++k) {
            double diff = values[0] - values[k];
            if (std::fabs(diff - p.u) > 1e-10 * std::max({1.0, std::fabs(diff), std::fabs(p.u)}))
                throw PreconditionError("vertex values do not share a common difference");
        }
        if (std::fabs(p.u) <= 1e-10 * std::max(1.0, std::fabs(p.apex)))
            throw PreconditionError("common difference u must be nonzero");
        if (std::fabs(p.apex) <= 1e-12 || std::fabs(p.apex - p.u) <= 1e-12)
            throw PreconditionError("closed forms need c.v_0 outside {0, u}");
        return p;
    }
};

/// Closed-form perspective and naive volumes for the exponential family. The
/// naive closed form is cross-validated against cone-product cubature; a
/// deviation beyond 1e-6 relative is reported, not silently accepted.
inline RelaxationReport exp_family_volumes(const ExpFamilyParams& params,
                                           const RelaxationConfig& cfg = {}) {
    const auto& j = params.ctx.numeric;
    const unsigned d = static_cast<unsigned>(j.dim());
    detail::validate_relaxation_domain(params.ctx);

    const double a = params.apex;
    const double u = params.u;
    const double dfact_vol = detail::scaled_volume(j);
    const double vol = simplex_volume(j);
    const double fact_d2 = to_double(Rational(factorial(d + 2)));

    const double tail_u = detail::exp_tail_over_power(d, u);
    const double tail_ua = detail::exp_tail_over_power(d, u - a);

    // int_J f = D e^{a-u} tail(d, u) - vol
    const double integral_f = dfact_vol * std::exp(a - u) * tail_u - vol;
    // sum_j f(v_j) = e^a + d e^{a-u} - (d+1)
    const double vertex_sum = std::exp(a) + double(d) * std::exp(a - u) - double(d + 1);
    // secant integral and first volume term
    const double secant = vol * vertex_sum / double(d + 1);

    RelaxationReport report;
    report.perspective.value = perspective_from_parts(d, secant, integral_f);
    report.perspective.method = "closed_form";

    // W = (D e^{a-u} / a)(tail(d,u) - tail(d,u-a)) - vol/(d+1)
    const double defect =
        dfact_vol * std::exp(a - u) / a * (tail_u - tail_ua) - vol / double(d + 1);
    report.naive.value = naive_from_parts(d, secant, defect);
    report.naive.method = "closed_form";

    // redundancy check: the same naive volume assembled from the direct vertex-sum form
    {
        double direct = dfact_vol / fact_d2 * (std::exp(a) + double(d) * std::exp(a - u) + 1.0) -
                           dfact_vol * std::exp(a - u) / a * (tail_u - tail_ua);
        report.naive.error = std::fabs(direct - report.naive.value);
    }

    // cross-validation of the naive closed form against cone cubature
    {
        RelaxationConfig vcfg = cfg;
        vcfg.cubature_s = cfg.validation_s;
        auto f = [&](std::span<const double> p) {
            double e = 0.0;
            for (std::size_t i = 0; i < d; ++i) e += params.c[i] * p[i];
            return std::exp(e) - 1.0;
        };
        Jacobi1DRule radial = radial_rule(d, vcfg.validation_s);
        CubatureRule<double> rule = cone_product_rule(
            transplant(conical_product_rule(d, vcfg.validation_s), j), radial);
        double defect_cubature = apply_rule(rule, f);
        double naive_cubature = naive_from_parts(d, secant, defect_cubature);
        ClosedFormCheck check;
        check.cubature_value = naive_cubature;
        check.relative_deviation = std::fabs(naive_cubature - report.naive.value) /
                                   std::max(1e-300, std::fabs(report.naive.value));
        check.agreed = check.relative_deviation <= 1e-6;
        report.closed_form_check = check;
    }

    report.cutoff.value = report.naive.value - report.perspective.value;
    report.cutoff.method = "closed_form";
    report.cutoff.error = report.naive.error;
    double scale = std::fabs(report.naive.value) + std::fabs(report.perspective.value);
    if (std::fabs(report.naive.value) > 1e-14 * std::max(1.0, scale)) {
        report.ratio_defined = true;
        report.ratio = report.cutoff.value / report.naive.value;
    }
    return report;
}

} // namespace simplexvol
