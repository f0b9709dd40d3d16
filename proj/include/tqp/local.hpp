#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "tqp/error.hpp"
#include "tqp/integer.hpp"
#include "tqp/jordan.hpp"
#include "tqp/lattice.hpp"
#include "tqp/symbols.hpp"

namespace tqp {

/// Integer representatives of the square classes of a rational diagonalization of g.
inline std::vector<Integer> rational_diagonal(const GramMatrix& g) {
    const std::size_t n = g.rank();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Rational(g(i, j));

    std::vector<Integer> out;
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t j = k + 1;
            while (j < n && m[j][j] == 0) ++j;
            if (j < n) {
                std::swap(m[k], m[j]);
                for (auto& row : m) std::swap(row[k], row[j]);
            } else {
                j = k + 1;
                while (j < n && m[k][j] == 0) ++j;
                if (j == n) fail(ErrorKind::InvalidArgument, "degenerate form has no diagonalization");
                // e_k <- e_k + e_j
                for (std::size_t i = 0; i < n; ++i) m[k][i] += m[j][i];
                for (std::size_t i = 0; i < n; ++i) m[i][k] += m[i][j];
            }
        }
        const Rational pivot = m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const Rational c = m[i][k] / pivot;
            if (c == 0) continue;
            for (std::size_t j = k; j < n; ++j) m[i][j] -= c * m[k][j];
            for (std::size_t j = k; j < n; ++j) m[j][i] = (j == i) ? m[i][i] : m[i][j];
        }
        for (std::size_t i = k + 1; i < n; ++i) m[k][i] = m[i][k] = 0;
        out.push_back(boost::multiprecision::numerator(pivot) * boost::multiprecision::denominator(pivot));
    }
    return out;
}

/// True iff the rational quadratic space of g has no nontrivial zero over the 2-adic numbers.
inline bool is_anisotropic2(const GramMatrix& g) {
    if (determinant(g) == 0) fail(ErrorKind::InvalidArgument, "is_anisotropic2 needs a nondegenerate form");
    const auto d = rational_diagonal(g);
    if (d.size() == 2) {
        // <a, b> is isotropic iff -ab is a square.
        const Integer minus_ab = -d[0] * d[1];
        const int k = ordp(minus_ab, Integer(2));
        return k % 2 != 0 || mod_floor(minus_ab >> k, Integer(8)) != 1;
    }
    int hasse = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) hasse *= hilbert2(d[i], d[j]);
    const Integer det = d[0] * d[1] * d[2];
    return hasse != hilbert2(Integer(-1), Integer(-det));
}

/// Hensel certificate: ord_p(Q(x) - t) = residual > 2 * gradient, gradient = min_i ord_p((2 G x)_i).
struct LocalWitness {
    Vector x;
    Integer modulus;  ///< x is meaningful modulo this power of p
    int gradient_valuation = 0;
    IdealExponent residual_valuation;
};

struct LocalVerdict {
    bool represented = false;
    std::optional<LocalWitness> witness;
};

namespace detail {

using i128 = __int128;

inline i128 pow_i128(std::int64_t p, int k) {
    i128 r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

// Nonnegative values below 2^126 only.
inline i128 to_i128(const Integer& v) {
    const Integer mask = (Integer(1) << 64) - 1;
    const auto lo = static_cast<std::uint64_t>((v & mask).convert_to<std::uint64_t>());
    const auto hi = static_cast<std::uint64_t>((v >> 64).convert_to<std::uint64_t>());
    return static_cast<i128>((static_cast<unsigned __int128>(hi) << 64) | lo);
}

inline i128 mod_i128(i128 a, i128 m) {
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

// Search for a primitive x with a Hensel certificate for Q(x) = t (content-free g, t given mod p^(2V+1)).
class PrimitiveSearch {
public:
    PrimitiveSearch(const GramMatrix& g, const Integer& t, std::int64_t p) : n_(g.rank()), p_(p) {
        const Integer det = determinant(g);
        max_valuation_ = ordp(Integer(2), Integer(p)) + ordp(det, Integer(p));
        // |Q(x)| <= 9 * max|g| * p^(2V+2) must stay inside 126 bits.
        Integer bound = 9;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                gram_[i][j] = to_int64(g(i, j));
                if (abs_value(g(i, j)) * 9 > bound) bound = abs_value(g(i, j)) * 9;
            }
        bound *= pow_int(Integer(p), static_cast<unsigned>(2 * max_valuation_ + 2));
        if (boost::multiprecision::msb(bound) >= 125)
            fail(ErrorKind::InvalidArgument, "local representation search exceeds supported precision");
        const Integer tm = mod_floor(t, Integer(pow_int(Integer(p), static_cast<unsigned>(2 * max_valuation_ + 1))));
        target_ = to_i128(tm);
    }

    std::optional<std::pair<std::vector<i128>, int>> run() {
        std::vector<i128> x(n_, 0);
        return descend_start(x, 0);
    }

private:
    std::optional<std::pair<std::vector<i128>, int>> descend_start(std::vector<i128>& x, std::size_t i) {
        if (i == n_) {
            bool zero = true;
            for (auto c : x) zero = zero && c == 0;
            if (zero) return std::nullopt;
            return visit(x, 1);
        }
        for (std::int64_t d = 0; d < p_; ++d) {
            x[i] = d;
            if (auto r = descend_start(x, i + 1)) return r;
        }
        x[i] = 0;
        return std::nullopt;
    }

    // x holds residues modulo p^level with 2 G x == 0 mod p^(level-1).
    std::optional<std::pair<std::vector<i128>, int>> visit(std::vector<i128>& x, int level) {
        const i128 pk = pow_i128(p_, level);
        bool all_zero = true;
        for (std::size_t i = 0; i < n_; ++i) {
            i128 s = 0;
            for (std::size_t j = 0; j < n_; ++j) s += 2 * static_cast<i128>(gram_[i][j]) * x[j];
            if (mod_i128(s, pk) != 0) all_zero = false;
        }
        i128 q = 0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) q += x[i] * static_cast<i128>(gram_[i][j]) * x[j];
        if (!all_zero) {
            const int v = level - 1;
            if (mod_i128(q - target_, pow_i128(p_, 2 * v + 1)) == 0) return std::make_pair(x, v);
            return std::nullopt;
        }
        if (level > max_valuation_) return std::nullopt;  // primitive vectors have gradient valuation <= V
        // 2 G x == 0 mod p^level fixes Q mod p^(2 level) on the whole branch, and any certificate below needs it to match t
        if (mod_i128(q - target_, pow_i128(p_, 2 * level)) != 0) return std::nullopt;
        std::vector<i128> child = x;
        return descend_children(child, x, pk, 0, level);
    }

    std::optional<std::pair<std::vector<i128>, int>> descend_children(std::vector<i128>& child, const std::vector<i128>& base,
                                                                      i128 pk, std::size_t i, int level) {
        if (i == n_) return visit(child, level + 1);
        for (std::int64_t d = 0; d < p_; ++d) {
            child[i] = base[i] + pk * d;
            if (auto r = descend_children(child, base, pk, i + 1, level)) return r;
        }
        child[i] = base[i];
        return std::nullopt;
    }

    std::size_t n_;
    std::int64_t p_;
    std::int64_t gram_[3][3]{};
    int max_valuation_ = 0;
    i128 target_ = 0;
};

inline Integer to_integer(i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    Integer r = 0;
    Integer scale = 1;
    while (u != 0) {
        r += scale * Integer(static_cast<std::uint64_t>(u % 1'000'000'000'000'000'000ULL));
        scale *= Integer(1'000'000'000'000'000'000ULL);
        u /= 1'000'000'000'000'000'000ULL;
    }
    return neg ? Integer(-r) : r;
}

inline int gradient_valuation(const GramMatrix& g, const Vector& x, const Integer& p) {
    int best = std::numeric_limits<int>::max();
    for (const auto& c : gram_times(g, x))
        if (c != 0) best = std::min(best, ordp(Integer(2 * c), p));
    return best;
}

// Newton steps until the certificate holds for (g, t) itself.
inline LocalWitness certify(const GramMatrix& g, const Integer& t, Vector x, const Integer& p) {
    for (int iter = 0; iter < 64; ++iter) {
        const int v = gradient_valuation(g, x, p);
        const Integer f = eval_quadratic(g, x) - t;
        const IdealExponent e = f == 0 ? IdealExponent::infinity() : IdealExponent(ordp(f, p));
        if (e > 2 * v) {
            // Every lift of x modulo p^(v+1) keeps the certificate.
            return {x, pow_int(p, static_cast<unsigned>(v + 1)), v, e};
        }
        const Vector grad = gram_times(g, x);
        std::size_t k = 0;
        while (grad[k] == 0 || ordp(Integer(2 * grad[k]), p) != v) ++k;
        const Integer modulus = pow_int(p, static_cast<unsigned>(2 * e.value() + 2));
        const Integer pv = pow_int(p, static_cast<unsigned>(v));
        // delta = f / (2 G x)_k computed p-adically: both divisible by p^v.
        const Integer delta = mod_floor((f / pv) * mod_inverse(Integer(2 * grad[k]) / pv, modulus), modulus);
        x[k] = mod_floor(x[k] - delta, modulus);
    }
    fail(ErrorKind::InvalidArgument, "Hensel lifting did not converge");
}

// Odd p: with g = sum_k p^k L_k (L_k unimodular, diagonal) and t = p^e tau, only constituents of
// scale <= e matter. An isotropic unimodular part represents everything; an anisotropic one forces
// its coordinates into p Z_p, which lowers e by one after dividing through by p.
inline bool odd_represents_by_jordan(const JordanSplitting& js, const Integer& t, const Integer& p) {
    std::vector<std::pair<int, int>> comps;  // (scale, Legendre class)
    for (const auto& c : js.constituents)
        for (int u : c.diag_units) comps.emplace_back(c.scale_exp, u);
    int e = ordp(t, p);
    const int tau = legendre(prime_to_part(t, p), p);
    const int minus_one = legendre(Integer(-1), p);
    while (true) {
        std::vector<int> unimodular;
        for (const auto& [k, chi] : comps)
            if (k == 0) unimodular.push_back(chi);
        if (e == 0) {
            if (unimodular.size() >= 2) return true;
            return unimodular.size() == 1 && unimodular[0] == tau;
        }
        if (unimodular.size() >= 3) return true;
        if (unimodular.size() == 2 && minus_one * unimodular[0] * unimodular[1] == 1) return true;
        std::vector<std::pair<int, int>> next;
        for (const auto& [k, chi] : comps)
            if (k <= e) next.emplace_back(k == 0 ? 1 : k - 1, chi);
        comps = std::move(next);
        --e;
    }
}

}  // namespace detail

/// Odd primes above this use the Jordan decision instead of the vector search.
inline constexpr std::int64_t kLocalSearchPrimeLimit = 50;

/// Decides whether t is represented by the form g over the p-adic integers.
///
/// Primitive representations are found by a search over x mod p^(v+1) keeping only vectors whose
/// gradient 2Gx vanishes to the current depth; a vector with gradient valuation exactly v and
/// Q(x) = t mod p^(2v+1) lifts by Hensel's lemma. Imprimitive ones reduce to t / p^2. Large odd
/// primes are decided from the Jordan splitting and carry no witness.
inline LocalVerdict local_represents(const GramMatrix& g, const Integer& t, const Integer& p) {
    if (determinant(g) == 0) fail(ErrorKind::InvalidArgument, "local_represents needs a nondegenerate form");
    if (t == 0) return {true, std::nullopt};
    if (p != 2 && p > kLocalSearchPrimeLimit) return {detail::odd_represents_by_jordan(jordan_split(g, p), t, p), std::nullopt};
    const auto [scale, norm] = scale_norm_exponents(g, p);
    const int s = scale.value();
    if (ordp(t, p) < s) return {false, std::nullopt};
    const Integer ps = pow_int(p, static_cast<unsigned>(s));
    std::vector<Integer> reduced;
    for (std::size_t i = 0; i < g.rank(); ++i)
        for (std::size_t j = 0; j < g.rank(); ++j) reduced.push_back(g(i, j) / ps);
    const GramMatrix h(g.rank(), reduced);
    const std::int64_t pi = to_int64(p);

    Integer target = t / ps;
    int imprimitive_depth = 0;
    while (true) {
        if (auto hit = detail::PrimitiveSearch(h, target, pi).run()) {
            Vector x;
            const Integer scale_up = pow_int(p, static_cast<unsigned>(imprimitive_depth));
            for (auto c : hit->first) x.push_back(detail::to_integer(c) * scale_up);
            return {true, detail::certify(g, t, x, p)};
        }
        if (target % (p * p) != 0) return {false, std::nullopt};
        target /= p * p;
        ++imprimitive_depth;
    }
}

/// True iff the p-adic lattice of g (p odd) represents every p-adic integer.
///
/// Checks the classes 1, r, p, p r with r the least nonresidue; every nonzero p-adic integer is
/// p^(2k) times a unit square times one of these.
inline bool represents_all_odd(const GramMatrix& g, const Integer& p) {
    if (p == 2) fail(ErrorKind::InvalidArgument, "represents_all_odd needs an odd prime");
    const Integer r = least_nonresidue(p);
    for (const Integer& t : {Integer(1), r, p, Integer(p * r)})
        if (!local_represents(g, t, p).represented) return false;
    return true;
}

}  // namespace tqp
