#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "simplexvol/simplex.hpp"

namespace simplexvol {

/// Deterministic uniform double stream. The bit-to-double mapping is spelled
/// out (rather than using std::uniform_real_distribution) so that identical
/// seeds give identical samples on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    /// Standard exponential via inversion; never returns inf.
    double exponential() { return -std::log1p(-uniform()); }

private:
    std::mt19937_64 engine_;
};

namespace detail {

// Barycentric weights of a uniform simplex point: normalized exponential
// spacings over the d+1 vertices.
inline std::vector<double> dirichlet_uniform(std::size_t d, Rng& rng) {
    std::vector<double> g(d + 1);
    double total = 0.0;
    for (auto& x : g) {
        x = rng.exponential();
        total += x;
    }
    for (auto& x : g) x /= total;
    return g;
}

inline Vector<double> simplex_point(const Simplex<double>& j, Rng& rng) {
    std::vector<double> lambda = dirichlet_uniform(j.dim(), rng);
    Vector<double> x(j.dim(), 0.0);
    for (std::size_t k = 0; k <= j.dim(); ++k)
        for (std::size_t i = 0; i < j.dim(); ++i) x[i] += lambda[k] * j.vertex(k)[i];
    return x;
}

} // namespace detail

/// `count` independent uniform points on J, deterministic for a given seed.
inline std::vector<Vector<double>> sample_uniform(const Simplex<double>& j, std::size_t count,
                                                  std::uint64_t seed) {
    if (count == 0) throw PreconditionError("sample count must be positive");
    Rng rng(seed);
    std::vector<Vector<double>> points;
    points.reserve(count);
    for (std::size_t n = 0; n < count; ++n) points.push_back(detail::simplex_point(j, rng));
    return points;
}

/// Exact-coordinate simplices sample through their double image.
inline std::vector<Vector<double>> sample_uniform(const Simplex<Rational>& j, std::size_t count,
                                                  std::uint64_t seed) {
    return sample_uniform(to_double(j), count, seed);
}

/// Uniform points (x, z) on the cone {x in z*J, 0 <= z <= 1}: z has density
/// (d+1) z^d, then x is a z-scaled simplex sample. Last coordinate is z.
inline std::vector<Vector<double>> sample_uniform(const ConeRegion<double>& region,
                                                  std::size_t count, std::uint64_t seed) {
    if (count == 0) throw PreconditionError("sample count must be positive");
    const std::size_t d = region.base.dim();
    Rng rng(seed);
    std::vector<Vector<double>> points;
    points.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        double z = std::pow(rng.uniform(), 1.0 / double(d + 1));
        Vector<double> x = detail::simplex_point(region.base, rng);
        Vector<double> p(d + 1);
        for (std::size_t i = 0; i < d; ++i) p[i] = z * x[i];
        p[d] = z;
        points.push_back(std::move(p));
    }
    return points;
}

inline std::vector<Vector<double>> sample_uniform(const ConeRegion<Rational>& region,
                                                  std::size_t count, std::uint64_t seed) {
    return sample_uniform(ConeRegion<double>{to_double(region.base)}, count, seed);
}

} // namespace simplexvol
