#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "simplexvol/errors.hpp"
#include "simplexvol/linalg.hpp"
#include "simplexvol/rational.hpp"

namespace simplexvol {

/// Affine change of coordinates x = B t + v0 between the standard simplex and
/// a general one. |det B| = d! vol(J).
template <class S>
struct AffineMap {
    Matrix<S> basis;      // columns v_j - v_0
    Matrix<S> basis_inv;  // cached for pullbacks
    Vector<S> offset;     // v_0
    S abs_det;

    Vector<S> apply(const Vector<S>& t) const {
        Vector<S> x = basis.apply(t);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += offset[i];
        return x;
    }

    Vector<S> apply_inverse(const Vector<S>& x) const {
        Vector<S> shifted(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - offset[i];
        return basis_inv.apply(shifted);
    }
};

/**
 * A d-simplex given by its d+1 affinely independent vertices. Immutable after
 * construction; affine independence is verified eagerly so every downstream
 * integral can assume a nonsingular edge basis.
 */
template <class S>
class Simplex {
public:
    explicit Simplex(std::vector<Vector<S>> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.empty()) throw PreconditionError("simplex needs vertices");
        dim_ = vertices_.size() - 1;
        if (dim_ == 0) throw PreconditionError("simplex dimension must be positive");
        for (const auto& v : vertices_)
            if (v.size() != dim_)
                throw PreconditionError("simplex needs d+1 vertices of length d");
        validate_nondegenerate();
    }

    /// Standard simplex {x >= 0, sum x <= 1} with vertices 0, e_1, ..., e_d.
    static Simplex standard(std::size_t d) {
        std::vector<Vector<S>> verts(d + 1, Vector<S>(d, S(0)));
        for (std::size_t j = 1; j <= d; ++j) verts[j][j - 1] = S(1);
        return Simplex(std::move(verts));
    }

    std::size_t dim() const { return dim_; }
    const Vector<S>& vertex(std::size_t j) const { return vertices_[j]; }
    const std::vector<Vector<S>>& vertices() const { return vertices_; }

    Matrix<S> edge_basis() const {
        Matrix<S> b(dim_, dim_);
        for (std::size_t j = 1; j <= dim_; ++j)
            for (std::size_t i = 0; i < dim_; ++i)
                b(i, j - 1) = vertices_[j][i] - vertices_[0][i];
        return b;
    }

private:
    void validate_nondegenerate() const {
        Matrix<S> b = edge_basis();
        S det = determinant(b);
        if constexpr (is_exact_scalar_v<S>) {
            if (det == S(0)) throw DegenerateSimplexError("vertices are affinely dependent");
        } else {
            double norm = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                double col = 0.0;
                for (std::size_t i = 0; i < dim_; ++i) col += b(i, j) * b(i, j);
                norm = std::max(norm, std::sqrt(col));
            }
            double threshold = 1e-12 * std::pow(std::max(norm, 1e-300), double(dim_));
            if (std::fabs(to_double(det)) <= threshold)
                throw DegenerateSimplexError("vertices are numerically affinely dependent");
        }
    }

    std::vector<Vector<S>> vertices_;
    std::size_t dim_ = 0;
};

/// The hyperpyramid {(x, z) : x in z*J, 0 <= z <= 1}; slice at z=1 is J.
template <class S>
struct ConeRegion {
    Simplex<S> base;
};

template <class S>
S simplex_volume(const Simplex<S>& j) {
    Matrix<S> b = j.edge_basis();
    S det = determinant(b);
    if (det < S(0)) det = -det;
    return det / S(factorial(static_cast<unsigned>(j.dim())));
}

template <>
inline double simplex_volume<double>(const Simplex<double>& j) {
    Matrix<double> b = j.edge_basis();
    double det = std::fabs(determinant(b));
    return det / to_double(Rational(factorial(static_cast<unsigned>(j.dim()))));
}

/// Map with map(e_j) = v_j, map(0) = v_0; reports |det B| = d! vol(J).
template <class S>
AffineMap<S> to_standard(const Simplex<S>& j) {
    Matrix<S> b = j.edge_basis();
    S det = determinant(b);
    if constexpr (is_exact_scalar_v<S>) {
        if (det == S(0)) throw DegenerateSimplexError("vertices are affinely dependent");
    }
    if (det < S(0)) det = -det;
    return AffineMap<S>{b, inverse(b), j.vertex(0), det};
}

/// Barycentric coordinates (lambda_0, ..., lambda_d) of a point, summing to 1.
template <class S>
Vector<S> barycentric(const Simplex<S>& j, const Vector<S>& x) {
    AffineMap<S> map = to_standard(j);
    Vector<S> t = map.apply_inverse(x);
    Vector<S> lambda(j.dim() + 1);
    S rest(1);
    for (std::size_t k = 0; k < j.dim(); ++k) {
        lambda[k + 1] = t[k];
        rest -= t[k];
    }
    lambda[0] = rest;
    return lambda;
}

inline Simplex<double> to_double(const Simplex<Rational>& j) {
    std::vector<Vector<double>> verts;
    verts.reserve(j.vertices().size());
    for (const auto& v : j.vertices()) {
        Vector<double> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = to_double(v[i]);
        verts.push_back(std::move(w));
    }
    return Simplex<double>(std::move(verts));
}

inline const Simplex<double>& to_double(const Simplex<double>& j) { return j; }

/// True when the origin lies in the open interior of J (all barycentric
/// coordinates strictly positive). Relaxation volumes reject such simplices;
/// the origin on the boundary (e.g. a vertex of u*Delta_d) is allowed.
template <class S>
bool origin_in_interior(const Simplex<S>& j) {
    Vector<S> zero(j.dim(), S(0));
    Vector<S> lambda = barycentric(j, zero);
    for (const auto& l : lambda) {
        if constexpr (is_exact_scalar_v<S>) {
            if (l <= S(0)) return false;
        } else {
            if (l <= 1e-14) return false;
        }
    }
    return true;
}

template <class S>
bool all_coordinates_nonnegative(const Simplex<S>& j) {
    for (const auto& v : j.vertices())
        for (const auto& c : v) {
            if constexpr (is_exact_scalar_v<S>) {
                if (c < S(0)) return false;
            } else {
                if (c < -1e-14) return false;
            }
        }
    return true;
}

// ---------------------------------------------------------------------------
// JSON file format: {"vertices": [[...], ...]} with entries either JSON
// numbers (numeric mode) or strings "p/q" (exact mode). Mixed entries are an
// error.
// ---------------------------------------------------------------------------

using SimplexInput = std::variant<Simplex<Rational>, Simplex<double>>;

inline SimplexInput parse_simplex_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
        throw ParseError("simplex JSON must be an object with a \"vertices\" array");
    const auto& verts = doc["vertices"];
    if (verts.empty()) throw ParseError("simplex JSON has no vertices");

    bool saw_string = false, saw_number = false;
    for (const auto& row : verts) {
        if (!row.is_array()) throw ParseError("each vertex must be an array of coordinates");
        for (const auto& entry : row) {
            if (entry.is_string())
                saw_string = true;
            else if (entry.is_number())
                saw_number = true;
            else
                throw ParseError("vertex coordinates must be numbers or \"p/q\" strings");
        }
    }
    if (saw_string && saw_number)
        throw ParseError("simplex JSON mixes exact strings and numeric coordinates");

    if (saw_string) {
        std::vector<Vector<Rational>> rows;
        for (const auto& row : verts) {
            Vector<Rational> v;
            for (const auto& entry : row) v.push_back(parse_rational(entry.get<std::string>()));
            rows.push_back(std::move(v));
        }
        return Simplex<Rational>(std::move(rows));
    }
    std::vector<Vector<double>> rows;
    for (const auto& row : verts) {
        Vector<double> v;
        for (const auto& entry : row) v.push_back(entry.get<double>());
        rows.push_back(std::move(v));
    }
    return Simplex<double>(std::move(rows));
}

inline SimplexInput load_simplex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open simplex file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_simplex_json(doc);
}

inline nlohmann::json simplex_to_json(const Simplex<Rational>& j) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : j.vertices()) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : v) row.push_back(format_rational(c));
        verts.push_back(std::move(row));
    }
    return nlohmann::json{{"vertices", std::move(verts)}};
}

inline nlohmann::json simplex_to_json(const Simplex<double>& j) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : j.vertices()) {
        nlohmann::json row = nlohmann::json::array();
        for (double c : v) row.push_back(c);
        verts.push_back(std::move(row));
    }
    return nlohmann::json{{"vertices", std::move(verts)}};
}

} // namespace simplexvol
