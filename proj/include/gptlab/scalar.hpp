#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace gptlab {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Exact rational arithmetic; comparisons are decidable with no tolerance.
struct Exact {
    using Value = Rational;
    static constexpr bool is_exact = true;

    int sign(const Value& v) const { return v.sign(); }
    bool is_zero(const Value& v) const { return v.is_zero(); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    bool lt(const Value& a, const Value& b) const { return a < b; }
    bool leq(const Value& a, const Value& b) const { return a <= b; }
    Value snap(const Value& v) const { return v; }
    Value abs(const Value& v) const { return v < 0 ? Value(-v) : v; }
    static double to_double(const Value& v) { return v.convert_to<double>(); }
};

/// Double precision with a single tolerance used by every comparison.
struct Approx {
    using Value = double;
    static constexpr bool is_exact = false;
    double eps = 1e-9;

    int sign(double v) const { return v > eps ? 1 : (v < -eps ? -1 : 0); }
    bool is_zero(double v) const { return std::fabs(v) <= eps; }
    bool eq(double a, double b) const { return std::fabs(a - b) <= eps; }
    bool lt(double a, double b) const { return a < b - eps; }
    bool leq(double a, double b) const { return a <= b + eps; }
    double snap(double v) const { return std::fabs(v) <= eps ? 0.0 : v; }
    double abs(double v) const { return std::fabs(v); }
    static double to_double(double v) { return v; }
};

template <class B>
using Vec = Eigen::Matrix<typename B::Value, Eigen::Dynamic, 1>;
template <class B>
using Mat = Eigen::Matrix<typename B::Value, Eigen::Dynamic, Eigen::Dynamic>;

/// Parses "p/q" or a plain integer string into a rational.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline std::string format_rational(const Rational& v) {
    std::string s = boost::multiprecision::numerator(v).str();
    if (boost::multiprecision::denominator(v) != 1)
        s += "/" + boost::multiprecision::denominator(v).str();
    return s;
}

}  // namespace gptlab
