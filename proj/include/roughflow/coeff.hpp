#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "roughflow/errors.hpp"

namespace roughflow {

// Exact coefficient backend. Arbitrary precision keeps algebraic identity
// tests (exp/log round trips, BCHD, Chen) free of rounding questions.
using Rational = boost::multiprecision::cpp_rational;

template <typename C>
struct coeff_traits;

template <>
struct coeff_traits<Rational> {
    static constexpr bool exact = true;

    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long long v) { return Rational(v); }

    static bool is_zero(const Rational& c) { return c == 0; }
    static Rational abs(const Rational& c) { return c < 0 ? Rational(-c) : c; }
    static double to_double(const Rational& c) { return c.template convert_to<double>(); }

    // Exact mode prunes exact zeros only.
    static bool negligible(const Rational& c, const Rational&) { return c == 0; }

    static std::string str(const Rational& c) { return c.str(); }
};

template <>
struct coeff_traits<double> {
    static constexpr bool exact = false;

    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long long v) { return static_cast<double>(v); }

    static bool is_zero(double c) { return c == 0.0; }
    static double abs(double c) { return std::fabs(c); }
    static double to_double(double c) { return c; }

    // Relative pruning threshold; keeps canonical sparsity without erasing
    // genuinely small cross terms (threshold scales with the largest
    // coefficient of the element being normalized).
    static bool negligible(double c, double max_mag) {
        return std::fabs(c) < 1e-15 * max_mag;
    }

    static std::string str(double c) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", c);
        return std::string(buf);
    }
};

// Parses "p/q", plain integers and decimal literals ("-0.125") exactly.
Rational rational_from_string(const std::string& s);

double double_from_string(const std::string& s);

template <typename C>
C coeff_from_string(const std::string& s);

template <>
inline Rational coeff_from_string<Rational>(const std::string& s) {
    return rational_from_string(s);
}

template <>
inline double coeff_from_string<double>(const std::string& s) {
    return double_from_string(s);
}

} // namespace roughflow
