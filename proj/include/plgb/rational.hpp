#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace plgb {

// Exact coefficient field. The gmp-backed rational keeps gcd-reduced form
// with a positive denominator, which is exactly the invariant we need.
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline std::string to_string(const Rational& r) {
    const Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Parses "p" or "p/q" with optional leading sign. q must be nonzero.
inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        const Integer num(s.substr(0, slash));
        const Integer den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    }
}

inline Rational rational_pow(const Rational& base, int e) {
    if (e == 0) return Rational(1);
    if (base == 0 && e < 0) throw std::domain_error("0 raised to a negative power");
    Rational acc(1);
    const Rational b = e > 0 ? base : Rational(1) / base;
    for (int i = 0; i < (e > 0 ? e : -e); ++i) acc *= b;
    return acc;
}

}  // namespace plgb
