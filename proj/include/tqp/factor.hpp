#pragma once

#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "tqp/error.hpp"
#include "tqp/integer.hpp"

namespace tqp {

/// Effort limits for integer factorization.
struct FactorOptions {
    std::uint64_t trial_limit = 1'000'000;
    std::uint64_t rho_iterations = 2'000'000;
};

namespace detail {

inline bool probably_prime(const Integer& n) {
    if (n < 2) return false;
    return boost::multiprecision::miller_rabin_test(n, 40);
}

// Brent's variant of Pollard rho; returns a nontrivial factor or 0 when the budget runs out.
inline Integer pollard_rho(const Integer& n, std::uint64_t budget) {
    if (n % 2 == 0) return 2;
    std::mt19937_64 rng(0x5eed'f00dULL);  // local deterministic state
    std::uint64_t spent = 0;
    while (spent < budget) {
        const Integer c = Integer(rng() % 1'000'003) + 1;
        Integer y = Integer(rng() % 1'000'003) % n, x, q = 1, g = 1, ys;
        const std::uint64_t m = 64;
        for (std::uint64_t r = 1; g == 1 && spent < budget; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            for (std::uint64_t k = 0; k < r && g == 1; k += m) {
                ys = y;
                const std::uint64_t lim = std::min(m, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = (q * abs_value(x - y)) % n;
                }
                g = gcd(q, n);
                spent += lim;
            }
        }
        if (g == n) {
            do {
                ys = (ys * ys + c) % n;
                g = gcd(abs_value(x - ys), n);
            } while (g == 1);
        }
        if (g != n && g != 1) return g;
    }
    return 0;
}

inline void factor_into(const Integer& n, std::map<Integer, int>& out, const FactorOptions& opts) {
    if (n == 1) return;
    if (probably_prime(n)) {
        ++out[n];
        return;
    }
    const Integer d = pollard_rho(n, opts.rho_iterations);
    if (d == 0) fail(ErrorKind::FactorizationLimit, "could not factor " + n.str() + " within the configured effort");
    factor_into(d, out, opts);
    factor_into(n / d, out, opts);
}

}  // namespace detail

/// Prime factorization of |n| (n != 0): trial division up to the configured limit, then Pollard rho.
inline std::map<Integer, int> factorize(const Integer& n, const FactorOptions& opts = {}) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "factorize of zero");
    std::map<Integer, int> out;
    Integer m = abs_value(n);
    if (m == 1) return out;
    if (int k = ordp(m, Integer(2)); k > 0) {
        out[2] = k;
        m >>= k;
    }
    if (fits_int64(m)) {
        auto r = static_cast<std::uint64_t>(to_int64(m));
        for (std::uint64_t d = 3; d <= opts.trial_limit && d * d <= r; d += 2) {
            while (r % d == 0) {
                ++out[Integer(d)];
                r /= d;
            }
        }
        m = Integer(r);
    } else {
        for (std::uint64_t d = 3; d <= opts.trial_limit && Integer(d) * d <= m; d += 2) {
            while (m % d == 0) {
                ++out[Integer(d)];
                m /= d;
            }
        }
    }
    detail::factor_into(m, out, opts);
    return out;
}

/// Odd primes dividing n.
inline std::vector<Integer> odd_prime_divisors(const Integer& n, const FactorOptions& opts = {}) {
    std::vector<Integer> out;
    for (const auto& [p, e] : factorize(n, opts))
        if (p != 2) out.push_back(p);
    return out;
}

/// Squarefree part of the odd part of |n|: the odd part divided by its largest square divisor.
inline Integer odd_squarefree_part(const Integer& n, const FactorOptions& opts = {}) {
    Integer r = 1;
    for (const auto& [p, e] : factorize(n, opts))
        if (p != 2 && e % 2 == 1) r *= p;
    return r;
}

}  // namespace tqp
