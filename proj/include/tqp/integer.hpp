#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>

#include "tqp/error.hpp"

namespace tqp {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer abs_value(const Integer& n) { return n < 0 ? Integer(-n) : n; }

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

/// Floor division, rounding toward negative infinity.
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) { return -floor_div(-a, b); }

/// Least nonnegative residue.
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

inline Integer pow_int(const Integer& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

inline Integer pow2(int exponent) { return Integer(1) << exponent; }

/// Floor square root of a nonnegative integer.
inline Integer isqrt(const Integer& n) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "isqrt of a negative integer");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Integer& n) {
    if (n < 0) return false;
    Integer r = isqrt(n);
    return r * r == n;
}

/// Largest k with p^k | n. Requires n != 0 and p >= 2.
inline int ordp(const Integer& n, const Integer& p) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "ordp of zero");
    if (p < 2) fail(ErrorKind::InvalidArgument, "ordp needs a prime");
    if (p == 2) return static_cast<int>(boost::multiprecision::lsb(abs_value(n)));
    int k = 0;
    Integer m = abs_value(n);
    while (m % p == 0) {
        m /= p;
        ++k;
    }
    return k;
}

/// n with every factor p removed (sign kept).
inline Integer prime_to_part(const Integer& n, const Integer& p) {
    if (n == 0) return n;
    Integer m = n;
    while (m % p == 0) m /= p;
    return m;
}

inline bool fits_int64(const Integer& n) {
    return n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max();
}

inline std::int64_t to_int64(const Integer& n) {
    if (!fits_int64(n)) fail(ErrorKind::InvalidArgument, "integer " + n.str() + " exceeds 64 bits");
    return n.convert_to<std::int64_t>();
}

/// Inverse of a modulo m (gcd(a, m) = 1 required).
inline Integer mod_inverse(const Integer& a, const Integer& m) {
    Integer old_r = mod_floor(a, m), r = m;
    Integer old_s = 1, s = 0;
    while (r != 0) {
        Integer q = old_r / r;
        Integer t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) fail(ErrorKind::InvalidArgument, "no inverse of " + a.str() + " modulo " + m.str());
    return mod_floor(old_s, m);
}

/// Reduces a p-integral rational (denominator prime to p) modulo m = p^k.
inline Integer rational_mod(const Rational& r, const Integer& m) {
    const Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    return mod_floor(mod_floor(num, m) * mod_inverse(den, m), m);
}

/// p-adic valuation of a nonzero rational.
inline int ordp(const Rational& r, const Integer& p) {
    if (r == 0) fail(ErrorKind::InvalidArgument, "ordp of zero");
    return ordp(Integer(boost::multiprecision::numerator(r)), p) -
           ordp(Integer(boost::multiprecision::denominator(r)), p);
}

inline std::string to_string(const Integer& n) { return n.str(); }

}  // namespace tqp
