#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "tqp/coset.hpp"
#include "tqp/error.hpp"
#include "tqp/integer.hpp"
#include "tqp/lattice.hpp"

namespace tqp {

struct EnumerationOptions {
    /// Maximum number of lattice points visited by one enumeration.
    std::uint64_t budget = 4'000'000'000ULL;
    unsigned threads = 1;
};

struct Spectrum {
    std::uint64_t bound = 0;
    std::vector<std::uint8_t> represented;  ///< index t in [0, bound]
    std::vector<std::uint64_t> exceptions;
    std::uint64_t points_visited = 0;

    bool represents(std::uint64_t t) const { return t <= bound && represented[t] != 0; }
};

namespace detail {

using i128 = __int128;

inline i128 isqrt_i128(i128 n) {
    if (n <= 0) return 0;
    auto r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline i128 floor_div_i128(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline i128 ceil_div_i128(i128 a, i128 b) { return -floor_div_i128(-a, b); }

// Smallest value >= v congruent to parity mod 2.
inline i128 align_up(i128 v, int parity) { return ((v % 2 + 2) % 2 == parity) ? v : v + 1; }

/// Points y = 2x + w (so y = 2(x + nu)) of the doubled coset with Q(y) <= T, via exact
/// completion of squares: Q g11 A = A L1^2 + L2^2 + g11 D y3^2, with A the leading 2x2 minor,
/// L2 = A y2 + (g11 g23 - g12 g13) y3 and L1 = g11 y1 + g12 y2 + g13 y3.
class CosetEnumerator {
public:
    CosetEnumerator(const CosetInstance& inst, const Integer& T) {
        const auto& g = inst.gram;
        Integer max_g = 0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) max_g = std::max(max_g, abs_value(g(i, j)));
        const Integer a = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
        const Integer big = abs_value(a) * g(0, 0) * (T + 1) * 4 + max_g * max_g * max_g * 64;
        if (T < 0 || boost::multiprecision::msb(big + 1) >= 120 || !fits_int64(T))
            fail(ErrorKind::EnumerationBudgetExceeded, "enumeration range exceeds the supported 128-bit bounds");
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) g_[i][j] = to_int64(g(i, j));
            parity_[i] = static_cast<int>(mod_floor(inst.w[i], Integer(2)));
        }
        T_ = to_int64(T);
        a_ = g_[0][0] * g_[1][1] - g_[0][1] * g_[0][1];
        bc_ = g_[0][0] * g_[1][2] - g_[0][1] * g_[0][2];
        d_ = static_cast<i128>(to_int64(determinant(g)));
        y3_max_ = isqrt_i128(floor_div_i128(a_ * T_, d_));
    }

    i128 y3_max() const { return y3_max_; }
    int parity(std::size_t i) const { return parity_[i]; }

    // Calls row(y2, y3, y1_lo, y1_hi, c, r): candidates y1 in [y1_lo, y1_hi] stepping by 2 with
    // Q = g11 y1^2 + 2 c y1 + r.
    template <class Row>
    void for_each_row(i128 y3, Row&& row) const {
        const i128 g11 = g_[0][0];
        const i128 r2 = a_ * g11 * T_ - g11 * d_ * y3 * y3;
        if (r2 < 0) return;
        const i128 s2 = isqrt_i128(r2);
        i128 y2 = align_up(ceil_div_i128(-s2 - bc_ * y3, a_), parity_[1]);
        const i128 y2_hi = floor_div_i128(s2 - bc_ * y3, a_);
        for (; y2 <= y2_hi; y2 += 2) {
            const i128 l2 = a_ * y2 + bc_ * y3;
            const i128 rest = r2 - l2 * l2;
            if (rest < 0) continue;
            const i128 s1 = isqrt_i128(rest / a_);
            const i128 c = g_[0][1] * y2 + g_[0][2] * y3;
            const i128 lo = align_up(ceil_div_i128(-s1 - c, g11), parity_[0]);
            const i128 hi = floor_div_i128(s1 - c, g11);
            const i128 r = g_[1][1] * y2 * y2 + 2 * g_[1][2] * y2 * y3 + g_[2][2] * y3 * y3;
            row(y2, lo, hi, c, r);
        }
    }

    const i128& g(std::size_t i, std::size_t j) const { return g_[i][j]; }
    i128 limit() const { return T_; }

private:
    i128 g_[3][3]{};
    int parity_[3]{};
    i128 T_ = 0, a_ = 0, bc_ = 0, d_ = 0, y3_max_ = 0;
};

inline Integer to_integer_i128(i128 v) {
    const bool neg = v < 0;
    auto u = static_cast<unsigned __int128>(neg ? -v : v);
    Integer r = Integer(static_cast<std::uint64_t>(u >> 64));
    r <<= 64;
    r += Integer(static_cast<std::uint64_t>(u));
    return neg ? Integer(-r) : r;
}

class BudgetCounter {
public:
    explicit BudgetCounter(std::uint64_t budget) : budget_(budget) {}
    void add(std::uint64_t n) {
        if (used_.fetch_add(n, std::memory_order_relaxed) + n > budget_)
            fail(ErrorKind::EnumerationBudgetExceeded,
                 "lattice point enumeration exceeded the budget of " + std::to_string(budget_) + " points");
    }
    std::uint64_t used() const { return used_.load(); }

private:
    std::uint64_t budget_;
    std::atomic<std::uint64_t> used_{0};
};

// Solutions of Q(y) = S with y = w mod 2, visited until `visit` returns false.
inline void for_each_shell_vector(const CosetInstance& inst, const Integer& S, const EnumerationOptions& opts,
                                  const std::function<bool(i128, i128, i128)>& visit) {
    if (S <= 0) return;
    const CosetEnumerator en(inst, S);
    BudgetCounter budget(opts.budget);
    const i128 target = en.limit();
    const i128 g11 = en.g(0, 0);
    bool stop = false;
    for (i128 y3 = align_up(-en.y3_max(), en.parity(2)); y3 <= en.y3_max() && !stop; y3 += 2) {
        en.for_each_row(y3, [&](i128 y2, i128 lo, i128 hi, i128 c, i128 r) {
            if (stop || lo > hi) return;
            budget.add(1);
            // g11 y1^2 + 2 c y1 + (r - S) = 0
            const i128 disc = c * c - g11 * (r - target);
            if (disc < 0) return;
            const i128 s = isqrt_i128(disc);
            if (s * s != disc) return;
            for (const i128 num : {-c - s, -c + s}) {
                if (num % g11 != 0) continue;
                const i128 y1 = num / g11;
                if (((y1 % 2) + 2) % 2 != en.parity(0)) continue;
                if (!visit(y1, y2, y3)) {
                    stop = true;
                    return;
                }
                if (s == 0) break;
            }
        });
    }
}

}  // namespace detail

/// All y = 2(x + nu), x integral, with Q(x + nu) = m; returned in doubled coordinates, so Q(y) = 4m.
inline std::vector<Vector> shell_vectors(const CosetInstance& inst, const Integer& m, const EnumerationOptions& opts = {}) {
    if (m <= 0) fail(ErrorKind::InvalidArgument, "shell_vectors needs m > 0");
    std::vector<Vector> out;
    detail::for_each_shell_vector(inst, 4 * m, opts, [&](auto y1, auto y2, auto y3) {
        out.push_back({detail::to_integer_i128(y1), detail::to_integer_i128(y2), detail::to_integer_i128(y3)});
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

/// True iff H(x) = t for some integral x.
inline bool represents_H(const CosetInstance& inst, const Integer& t, const EnumerationOptions& opts = {}) {
    const Integer m = pow2(inst.alpha) * t + inst.q_nu;
    if (m <= 0) return false;
    if (t == 0) return true;
    bool found = false;
    detail::for_each_shell_vector(inst, 4 * m, opts, [&](auto, auto, auto) {
        found = true;
        return false;
    });
    return found;
}

/// Every t in [0, bound] represented by H, from one enumeration of Q(y) <= 4 (2^alpha bound + Q(nu)).
inline Spectrum spectrum(const CosetInstance& inst, std::uint64_t bound, const EnumerationOptions& opts = {}) {
    if (bound < 1) fail(ErrorKind::InvalidArgument, "spectrum bound must be positive");
    const Integer qw = 4 * inst.q_nu;
    const Integer T = 4 * (pow2(inst.alpha) * Integer(bound) + inst.q_nu);
    const detail::CosetEnumerator en(inst, T);
    const detail::i128 qw_i = static_cast<detail::i128>(to_int64(qw));
    const int shift = inst.alpha + 2;
    const detail::i128 g11 = en.g(0, 0);
    detail::BudgetCounter budget(opts.budget);

    const unsigned threads = std::max(1u, opts.threads);
    std::vector<std::vector<std::uint8_t>> maps(threads, std::vector<std::uint8_t>(bound + 1, 0));
    std::vector<std::exception_ptr> errors(threads);

    auto work = [&](unsigned id) {
        try {
            auto& map = maps[id];
            std::uint64_t index = 0;
            for (detail::i128 y3 = detail::align_up(-en.y3_max(), en.parity(2)); y3 <= en.y3_max(); y3 += 2, ++index) {
                if (index % threads != id) continue;
                en.for_each_row(y3, [&](detail::i128, detail::i128 lo, detail::i128 hi, detail::i128 c, detail::i128 r) {
                    if (lo > hi) return;
                    budget.add(static_cast<std::uint64_t>((hi - lo) / 2 + 1));
                    // Q(y1) = g11 y1^2 + 2 c y1 + r; Q(y1 + 2) - Q(y1) = 4 (g11 y1 + g11 + c).
                    detail::i128 q = g11 * lo * lo + 2 * c * lo + r;
                    for (detail::i128 y1 = lo; y1 <= hi; y1 += 2) {
                        const detail::i128 diff = q - qw_i;
                        if (diff >= 0) map[static_cast<std::uint64_t>(diff >> shift)] = 1;
                        q += 4 * (g11 * y1 + g11 + c);
                    }
                });
            }
        } catch (...) {
            errors[id] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    Spectrum out;
    out.bound = bound;
    out.represented = std::move(maps[0]);
    for (unsigned id = 1; id < threads; ++id)
        for (std::size_t t = 0; t <= bound; ++t) out.represented[t] |= maps[id][t];
    for (std::uint64_t t = 0; t <= bound; ++t)
        if (!out.represented[t]) out.exceptions.push_back(t);
    out.points_visited = budget.used();
    return out;
}

/// Primes up to `limit`, ascending.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

/// (rad_odd q^2 - epsilon) / 2^shift for primes q <= q_limit not dividing 2 det, kept when
/// integral and positive.
inline std::vector<Integer> predicted_miss_candidates(const Integer& rad_odd, const Integer& epsilon, int shift,
                                                      std::uint64_t q_limit, const Integer& det = 1) {
    std::vector<Integer> out;
    const Integer den = pow2(shift);
    for (std::uint64_t q : primes_up_to(q_limit)) {
        if (q == 2 || det % q == 0) continue;
        const Integer num = rad_odd * q * q - epsilon;
        if (num <= 0 || num % den != 0) continue;
        out.push_back(num / den);
    }
    return out;
}

/// Candidate exceptions of the progression attached to the spinor-exceptional branch.
inline std::vector<Integer> predicted_misses(const CosetInstance& inst, std::uint64_t q_limit) {
    const int shift = inst.alpha - inst.beta;
    if (shift != 2 && shift != 3)
        fail(ErrorKind::PreconditionViolated, "predicted misses need alpha - beta in {2, 3}");
    return predicted_miss_candidates(inst.rad_odd, inst.epsilon, shift, q_limit, inst.det);
}

}  // namespace tqp
