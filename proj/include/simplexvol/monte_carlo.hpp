#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "simplexvol/sampling.hpp"

namespace simplexvol {

struct McResult {
    double estimate = 0.0;
    double stderr_of_mean = 0.0;
    std::size_t samples = 0;
};

namespace detail {

template <class F>
McResult mc_from_points(const std::vector<Vector<double>>& points, double volume, F&& f) {
    // Welford mean/variance: one pass, no catastrophic cancellation
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    for (const auto& p : points) {
        double value = f(std::span<const double>(p));
        ++n;
        double delta = value - mean;
        mean += delta / double(n);
        m2 += delta * (value - mean);
    }
    double variance = n > 1 ? m2 / double(n - 1) : 0.0;
    McResult out;
    out.estimate = volume * mean;
    out.stderr_of_mean = volume * std::sqrt(variance / double(n));
    out.samples = n;
    return out;
}

} // namespace detail

/// Sample-mean estimate of the integral of f over J, with the standard error
/// of the mean scaled by the region volume. Deterministic for a given seed.
template <class F>
McResult monte_carlo_integrate(const Simplex<double>& j, F&& f, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw PreconditionError("Monte-Carlo estimation needs at least 2 samples");
    return detail::mc_from_points(sample_uniform(j, n, seed), simplex_volume(j),
                                  std::forward<F>(f));
}

/// Cone version; the integrand sees (x..., z) and the region volume is
/// vol(J)/(d+1).
template <class F>
McResult monte_carlo_integrate(const ConeRegion<double>& region, F&& f, std::size_t n,
                               std::uint64_t seed) {
    if (n < 2) throw PreconditionError("Monte-Carlo estimation needs at least 2 samples");
    double volume = simplex_volume(region.base) / double(region.base.dim() + 1);
    return detail::mc_from_points(sample_uniform(region, n, seed), volume, std::forward<F>(f));
}

} // namespace simplexvol
