#pragma once

#include "tqp/error.hpp"
#include "tqp/integer.hpp"

namespace tqp {

/// Legendre symbol (a | p) for an odd prime p.
inline int legendre(const Integer& a, const Integer& p) {
    if (p < 3 || p % 2 == 0) fail(ErrorKind::InvalidArgument, "legendre needs an odd prime");
    const Integer r = mod_floor(a, p);
    if (r == 0) return 0;
    return boost::multiprecision::powm(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Least positive quadratic nonresidue modulo an odd prime.
inline Integer least_nonresidue(const Integer& p) {
    for (Integer r = 2;; ++r)
        if (legendre(r, p) == -1) return r;
}

/// Hilbert symbol (a, b) over the 2-adic numbers.
inline int hilbert2(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) fail(ErrorKind::InvalidArgument, "hilbert2 of zero");
    const int alpha = ordp(a, Integer(2)), beta = ordp(b, Integer(2));
    const int u = static_cast<int>(mod_floor(a >> alpha, Integer(8))), v = static_cast<int>(mod_floor(b >> beta, Integer(8)));
    const auto eps = [](int w) { return w % 4 == 3 ? 1 : 0; };
    const auto omega = [](int w) { return (w == 3 || w == 5) ? 1 : 0; };
    const int exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    return exponent % 2 == 0 ? 1 : -1;
}

}  // namespace tqp
