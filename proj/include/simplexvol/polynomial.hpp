#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplexvol/linalg.hpp"
#include "simplexvol/rational.hpp"

namespace simplexvol {

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
    unsigned s = 0;
    for (unsigned k : e) s += k;
    return s;
}

/**
 * Sparse multivariate polynomial over a fixed number of variables, stored as
 * an exponent-vector -> coefficient map. No zero coefficients are kept, so
 * map equality is polynomial equality. Arithmetic is exact when the scalar
 * is Rational.
 */
template <class S>
class Polynomial {
public:
    using TermMap = std::map<Exponents, S>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, S value) {
        Polynomial p(nvars);
        p.add_term(Exponents(nvars, 0), std::move(value));
        return p;
    }

    static Polynomial variable(std::size_t nvars, std::size_t index) {
        Polynomial p(nvars);
        Exponents e(nvars, 0);
        e[index] = 1;
        p.add_term(std::move(e), S(1));
        return p;
    }

    static Polynomial monomial(std::size_t nvars, Exponents e, S coeff) {
        Polynomial p(nvars);
        p.add_term(std::move(e), std::move(coeff));
        return p;
    }

    /// Linear form c.x + b.
    static Polynomial affine(const Vector<S>& c, S b) {
        Polynomial p(c.size());
        p.add_term(Exponents(c.size(), 0), std::move(b));
        for (std::size_t i = 0; i < c.size(); ++i) {
            Exponents e(c.size(), 0);
            e[i] = 1;
            p.add_term(std::move(e), c[i]);
        }
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    unsigned degree() const {
        unsigned deg = 0;
        for (const auto& [e, c] : terms_) deg = std::max(deg, total_degree(e));
        return deg;
    }

    S coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? S(0) : it->second;
    }

    void add_term(Exponents e, S coeff) {
        if (coeff == S(0)) return;
        auto [it, inserted] = terms_.emplace(std::move(e), coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == S(0)) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& other) {
        for (const auto& [e, c] : other.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& other) {
        for (const auto& [e, c] : other.terms_) add_term(e, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out.add_term(std::move(e), ca * cb);
            }
        return out;
    }

    Polynomial& operator*=(const Polynomial& other) { return *this = *this * other; }

    Polynomial& operator*=(const S& scale) {
        if (scale == S(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= scale;
        return *this;
    }

    friend Polynomial operator*(Polynomial p, const S& scale) { return p *= scale; }
    friend Polynomial operator*(const S& scale, Polynomial p) { return p *= scale; }

    friend Polynomial operator-(Polynomial p) { return p *= S(-1); }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    /// Product dropping every term of total degree > max_degree; the
    /// workhorse of truncated power-series arithmetic.
    Polynomial mul_truncated(const Polynomial& other, unsigned max_degree) const {
        Polynomial out(nvars_);
        for (const auto& [ea, ca] : terms_) {
            unsigned da = total_degree(ea);
            if (da > max_degree) continue;
            for (const auto& [eb, cb] : other.terms_) {
                if (da + total_degree(eb) > max_degree) continue;
                Exponents e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out.add_term(std::move(e), ca * cb);
            }
        }
        return out;
    }

    Polynomial pow(unsigned n) const {
        Polynomial result = constant(nvars_, S(1));
        Polynomial base = *this;
        while (n != 0) {
            if (n & 1u) result *= base;
            base *= base;
            n >>= 1;
        }
        return result;
    }

    S eval(std::span<const S> x) const {
        S acc(0);
        for (const auto& [e, c] : terms_) {
            S term = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
            acc += term;
        }
        return acc;
    }

    S eval(const Vector<S>& x) const { return eval(std::span<const S>(x)); }

    double eval_double(std::span<const double> x) const {
        double acc = 0.0;
        for (const auto& [e, c] : terms_) {
            double term = to_double(c);
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
            acc += term;
        }
        return acc;
    }

    /// Substitutes x_i := replacement[i]; all replacements share a variable
    /// count, which becomes the result's. Powers are memoized per variable.
    Polynomial substitute(const std::vector<Polynomial>& replacement) const {
        const std::size_t out_vars = replacement.empty() ? 0 : replacement[0].nvars();
        Polynomial out(out_vars);
        std::vector<std::vector<Polynomial>> powers(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i)
            powers[i].push_back(constant(out_vars, S(1)));
        auto power_of = [&](std::size_t i, unsigned k) -> const Polynomial& {
            while (powers[i].size() <= k) powers[i].push_back(powers[i].back() * replacement[i]);
            return powers[i][k];
        };
        for (const auto& [e, c] : terms_) {
            Polynomial term = constant(out_vars, c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i] != 0) term *= power_of(i, e[i]);
            out += term;
        }
        return out;
    }

    /// Splits into homogeneous parts indexed by total degree.
    std::map<unsigned, Polynomial> homogeneous_parts() const {
        std::map<unsigned, Polynomial> parts;
        for (const auto& [e, c] : terms_) {
            unsigned deg = total_degree(e);
            auto it = parts.find(deg);
            if (it == parts.end()) it = parts.emplace(deg, Polynomial(nvars_)).first;
            it->second.add_term(e, c);
        }
        return parts;
    }

    bool is_homogeneous(unsigned* degree_out = nullptr) const {
        if (terms_.empty()) return true;
        unsigned deg = total_degree(terms_.begin()->first);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) != deg) return false;
        if (degree_out) *degree_out = deg;
        return true;
    }

private:
    std::size_t nvars_;
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// Parser for the CLI mini-language: terms joined by +/-, each a '*'-separated
// product of rational coefficients and powers "xK^N". Example:
//   3*x1^2*x2 - 1/2*x2^3 + 4
// Variable indices are 1-based in the source text.
// ---------------------------------------------------------------------------

namespace detail {

struct PolyToken {
    Rational coeff;
    std::map<std::size_t, unsigned> powers; // 0-based variable -> exponent
};

inline PolyToken parse_poly_term(std::string_view term, std::string_view full) {
    PolyToken out;
    out.coeff = Rational(1);
    std::size_t pos = 0;
    auto fail = [&]() -> void {
        throw ParseError("bad polynomial term '" + std::string(term) + "' in '" +
                         std::string(full) + "'");
    };
    while (pos < term.size()) {
        while (pos < term.size() && std::isspace(static_cast<unsigned char>(term[pos]))) ++pos;
        if (pos >= term.size()) break;
        std::size_t end = pos;
        while (end < term.size() && term[end] != '*' &&
               !std::isspace(static_cast<unsigned char>(term[end])))
            ++end;
        std::string_view factor = term.substr(pos, end - pos);
        if (factor.empty()) fail();
        if (factor[0] == 'x' || factor[0] == 'X') {
            std::size_t caret = factor.find('^');
            std::string_view index_text = factor.substr(1, caret == std::string_view::npos
                                                               ? std::string_view::npos
                                                               : caret - 1);
            unsigned long index = 0;
            for (char ch : index_text) {
                if (ch < '0' || ch > '9') fail();
                index = index * 10 + unsigned(ch - '0');
            }
            if (index == 0) fail();
            unsigned long power = 1;
            if (caret != std::string_view::npos) {
                std::string_view ptext = factor.substr(caret + 1);
                if (ptext.empty()) fail();
                power = 0;
                for (char ch : ptext) {
                    if (ch < '0' || ch > '9') fail();
                    power = power * 10 + unsigned(ch - '0');
                }
            }
            out.powers[index - 1] += static_cast<unsigned>(power);
        } else {
            out.coeff *= parse_rational(factor);
        }
        pos = end;
        while (pos < term.size() && std::isspace(static_cast<unsigned char>(term[pos]))) ++pos;
        if (pos < term.size()) {
            if (term[pos] != '*') fail();
            ++pos;
        }
    }
    return out;
}

} // namespace detail

/// Parses the polynomial mini-language. `min_vars` widens the variable count
/// (e.g. to the ambient simplex dimension); variables beyond it are an error
/// only through the caller's dimension check.
inline Polynomial<Rational> parse_polynomial(std::string_view text, std::size_t min_vars = 0) {
    std::vector<std::pair<int, std::string_view>> signed_terms;
    int sign = 1;
    std::size_t start = 0;
    // a leading sign belongs to the first term
    while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
    if (start < text.size() && (text[start] == '+' || text[start] == '-')) {
        sign = text[start] == '-' ? -1 : 1;
        ++start;
    }
    for (std::size_t i = start; i <= text.size(); ++i) {
        bool split = i == text.size();
        if (!split && (text[i] == '+' || text[i] == '-')) {
            // not a separator when it begins the string or follows '*', '/', or '^'
            std::size_t back = i;
            while (back > 0 && std::isspace(static_cast<unsigned char>(text[back - 1]))) --back;
            split = back > 0 && text[back - 1] != '*' && text[back - 1] != '/' &&
                    text[back - 1] != '^' && text[back - 1] != 'e' && text[back - 1] != 'E';
        }
        if (split) {
            std::string_view chunk = text.substr(start, i - start);
            bool blank = true;
            for (char ch : chunk)
                if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
            if (!blank) signed_terms.emplace_back(sign, chunk);
            if (i < text.size()) sign = text[i] == '-' ? -1 : 1;
            start = i + 1;
        }
    }
    if (signed_terms.empty()) throw ParseError("empty polynomial '" + std::string(text) + "'");

    std::vector<detail::PolyToken> tokens;
    std::size_t nvars = min_vars;
    for (auto& [s, chunk] : signed_terms) {
        detail::PolyToken tok = detail::parse_poly_term(chunk, text);
        if (s < 0) tok.coeff = -tok.coeff;
        for (const auto& [index, power] : tok.powers) nvars = std::max(nvars, index + 1);
        tokens.push_back(std::move(tok));
    }

    Polynomial<Rational> p(nvars);
    for (const auto& tok : tokens) {
        Exponents e(nvars, 0);
        for (const auto& [index, power] : tok.powers) e[index] = power;
        p.add_term(std::move(e), tok.coeff);
    }
    return p;
}

inline Polynomial<double> to_double(const Polynomial<Rational>& p) {
    Polynomial<double> out(p.nvars());
    for (const auto& [e, c] : p.terms()) out.add_term(e, to_double(c));
    return out;
}

} // namespace simplexvol
