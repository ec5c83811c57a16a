#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <type_traits>

#include "simplexvol/errors.hpp"

namespace simplexvol {

/// Arbitrary-precision integer and rational, used on all exact paths.
/// Expression templates are disabled so that every operator returns a
/// materialized value: callables over these types may safely return
/// subexpressions like `s * s` without dangling into dead locals.
using Int = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

template <class S>
inline constexpr bool is_exact_scalar_v = std::is_same_v<S, Rational>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int b = 1;
    for (unsigned j = 1; j <= k; ++j) {
        b *= n - k + j;
        b /= j;
    }
    return b;
}

template <class S>
S int_pow(const S& base, unsigned exp) {
    S result(1);
    S b = base;
    unsigned e = exp;
    while (e != 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

/// Parses "p/q", integers, and finite decimals ("-3", "7/12", "0.25") into an
/// exact rational.
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    std::string_view s = trim(text);
    if (s.empty()) throw ParseError("empty rational literal");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
        if (s.empty()) throw ParseError("bad rational literal '" + std::string(text) + "'");
    }

    std::string digits;
    long decimal_places = -1;
    for (char ch : s) {
        if (ch == '.') {
            if (decimal_places >= 0) throw ParseError("bad rational literal '" + std::string(text) + "'");
            decimal_places = 0;
        } else if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            if (decimal_places >= 0) ++decimal_places;
        } else {
            throw ParseError("bad rational literal '" + std::string(text) + "'");
        }
    }
    if (digits.empty()) throw ParseError("bad rational literal '" + std::string(text) + "'");

    Rational value{Int(digits)};
    if (decimal_places > 0) value /= int_pow(Int(10), static_cast<unsigned>(decimal_places));
    return negative ? -value : value;
}

/// "p" or "p/q" with no spaces; inverse of parse_rational on its output.
inline std::string format_rational(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

/// Shortest-faithful decimal with 17 significant digits, for report output.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace simplexvol
