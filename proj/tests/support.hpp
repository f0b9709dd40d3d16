#pragma once

// Instance builders and brute-force oracles shared by the test binaries. The oracles use only
// plain integer arithmetic so they stay independent of the library code they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "tqp/tqp.hpp"

namespace tqp::testing {

inline GramMatrix gram(std::initializer_list<long> upper) {
    std::vector<Integer> u;
    for (long v : upper) u.emplace_back(v);
    return GramMatrix::from_upper(u);
}

inline GramMatrix diag(long a, long b, long c) { return gram({a, 0, 0, b, 0, c}); }

inline GramMatrix gram2(long a, long b, long d) { return GramMatrix(2, {Integer(a), Integer(b), Integer(b), Integer(d)}); }

inline Vector vec(std::initializer_list<long> v) {
    Vector out;
    for (long x : v) out.emplace_back(x);
    return out;
}

inline CosetInstance lattice_instance(const GramMatrix& g, std::initializer_list<long> w) {
    return normalize(LatticeInput{g, vec(w), 0});
}

/// sum of three triangular numbers, written as a polynomial
inline CosetInstance triangular() {
    PolynomialInput p;
    p.quadratic = {4, 0, 0, 4, 0, 4};
    p.linear = {4, 4, 4};
    return normalize(p);
}

inline CosetInstance diag2_2_8() { return lattice_instance(diag(2, 2, 8), {1, 1, 0}); }
inline CosetInstance diag2_2_18() { return lattice_instance(diag(2, 2, 18), {1, 1, 0}); }

inline std::int64_t i64(const Integer& v) { return to_int64(v); }

// ---------------------------------------------------------------------------------------------
// Box enumeration of H(x) = (x^T G x + x^T G w) / 2^alpha.

struct SmallForm {
    std::int64_t g[3][3];
    std::int64_t w[3];
    int alpha;
    std::int64_t det;
    std::int64_t adj_diag[3];
};

inline SmallForm small_form(const CosetInstance& inst) {
    SmallForm f{};
    for (int i = 0; i < 3; ++i) {
        f.w[i] = i64(inst.w[i]);
        for (int j = 0; j < 3; ++j) f.g[i][j] = i64(inst.gram(i, j));
    }
    f.alpha = inst.alpha;
    const auto& g = f.g;
    f.det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
            g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    f.adj_diag[0] = g[1][1] * g[2][2] - g[1][2] * g[1][2];
    f.adj_diag[1] = g[0][0] * g[2][2] - g[0][2] * g[0][2];
    f.adj_diag[2] = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    return f;
}

/// Calls fn(x, H(x)) for every x with H(x) <= bound. Uses y_i^2 <= Q(y) (G^-1)_ii with y = x + w/2.
template <class Fn>
void for_each_box_point(const SmallForm& f, std::int64_t bound, Fn&& fn) {
    std::int64_t qw = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) qw += f.w[i] * f.g[i][j] * f.w[j];
    // Q(x + w/2) = 2^alpha H(x) + Q(w)/4
    const double m = std::ldexp(static_cast<double>(bound), f.alpha) + qw / 4.0;
    std::int64_t lo[3], hi[3];
    for (int i = 0; i < 3; ++i) {
        const double r = std::sqrt(m * static_cast<double>(f.adj_diag[i]) / static_cast<double>(f.det)) + 1.0;
        lo[i] = static_cast<std::int64_t>(std::floor(-r - f.w[i] / 2.0)) - 1;
        hi[i] = static_cast<std::int64_t>(std::ceil(r - f.w[i] / 2.0)) + 1;
    }
    const std::int64_t den = std::int64_t{1} << f.alpha;
    std::int64_t x[3];
    for (x[0] = lo[0]; x[0] <= hi[0]; ++x[0])
        for (x[1] = lo[1]; x[1] <= hi[1]; ++x[1])
            for (x[2] = lo[2]; x[2] <= hi[2]; ++x[2]) {
                std::int64_t num = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) num += x[i] * f.g[i][j] * (x[j] + f.w[j]);
                if (num % den != 0) continue;
                const std::int64_t h = num / den;
                if (h >= 0 && h <= bound) fn(x, h);
            }
}

inline std::vector<std::uint64_t> box_exceptions(const CosetInstance& inst, std::int64_t bound) {
    std::vector<char> hit(static_cast<std::size_t>(bound) + 1, 0);
    for_each_box_point(small_form(inst), bound, [&](const std::int64_t*, std::int64_t h) { hit[h] = 1; });
    std::vector<std::uint64_t> out;
    for (std::int64_t t = 1; t <= bound; ++t)
        if (!hit[t]) out.push_back(static_cast<std::uint64_t>(t));
    return out;
}

inline bool box_represents(const CosetInstance& inst, std::int64_t t) {
    bool found = false;
    for_each_box_point(small_form(inst), t, [&](const std::int64_t*, std::int64_t h) { found = found || h == t; });
    return found;
}

// ---------------------------------------------------------------------------------------------
// Value sets of diagonal forms modulo p^K.

/// Bitset over Z / M.
class ResidueSet {
public:
    explicit ResidueSet(std::uint64_t modulus) : m_(modulus), bits_((modulus + 63) / 64, 0) {}

    void insert(std::uint64_t r) { bits_[r >> 6] |= std::uint64_t{1} << (r & 63); }
    bool contains(std::uint64_t r) const { return (bits_[r >> 6] >> (r & 63)) & 1; }
    std::uint64_t modulus() const { return m_; }

    std::vector<std::uint64_t> elements() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t r = 0; r < m_; ++r)
            if (contains(r)) out.push_back(r);
        return out;
    }

    /// {a + b mod M}: ORs one rotated copy of the larger operand per element of the smaller one.
    friend ResidueSet operator+(const ResidueSet& a, const ResidueSet& b) {
        const auto ea = a.elements(), eb = b.elements();
        const bool a_small = ea.size() <= eb.size();
        const auto& small = a_small ? ea : eb;
        const ResidueSet& large = a_small ? b : a;
        const std::uint64_t m = a.m_;
        // doubled[j] = large[j mod M] for j in [0, 2M), so the rotation by s starts at bit M - s
        std::vector<std::uint64_t> doubled((2 * m + 127) / 64, 0);
        for (std::uint64_t j = 0; j < 2 * m; ++j)
            if (large.contains(j % m)) doubled[j >> 6] |= std::uint64_t{1} << (j & 63);
        ResidueSet out(m);
        const std::size_t words = out.bits_.size();
        for (auto s : small) {
            const std::uint64_t off = s == 0 ? 0 : m - s;
            const std::size_t q = off >> 6;
            const unsigned r = off & 63;
            for (std::size_t i = 0; i < words; ++i) {
                std::uint64_t v = doubled[q + i] >> r;
                if (r) v |= doubled[q + i + 1] << (64 - r);
                out.bits_[i] |= v;
            }
        }
        if (m % 64) out.bits_.back() &= (std::uint64_t{1} << (m % 64)) - 1;
        return out;
    }

private:
    std::uint64_t m_;
    std::vector<std::uint64_t> bits_;
};

inline ResidueSet square_multiples(std::int64_t a, std::uint64_t modulus) {
    ResidueSet s(modulus);
    const auto am = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(modulus)) + modulus) % modulus);
    for (std::uint64_t x = 0; x < modulus; ++x) {
        const auto sq = static_cast<unsigned __int128>(x) * x % modulus;
        s.insert(static_cast<std::uint64_t>(sq * am % modulus));
    }
    return s;
}

/// Values of a x^2 + b y^2 + c z^2 modulo p^K; t is p-adically represented iff t mod p^K lies in
/// this set once K exceeds ord_p(t) plus a margin depending on the coefficients.
inline ResidueSet diagonal_values(std::int64_t a, std::int64_t b, std::int64_t c, std::uint64_t modulus) {
    return square_multiples(a, modulus) + square_multiples(b, modulus) + square_multiples(c, modulus);
}

inline std::uint64_t ipow(std::uint64_t p, int k) {
    std::uint64_t r = 1;
    while (k-- > 0) r *= p;
    return r;
}

inline int ord(std::int64_t n, std::int64_t p) {
    int k = 0;
    while (n != 0 && n % p == 0) {
        n /= p;
        ++k;
    }
    return k;
}

/// Representative of the p-adic square class of a positive integer with the same valuation.
inline std::int64_t square_class(std::int64_t a, std::int64_t p) {
    const int k = ord(a, p);
    std::int64_t u = a;
    for (int i = 0; i < k; ++i) u /= p;
    std::int64_t pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    if (p == 2) return pk * (u % 8);
    // unit classes mod squares: 1 or the least nonresidue
    std::int64_t e = 1, base = u % p, exp = (p - 1) / 2;
    while (exp > 0) {
        if (exp & 1) e = e * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    if (e == 1) return pk;
    for (std::int64_t r = 2;; ++r) {
        std::int64_t f = 1, b2 = r % p, x = (p - 1) / 2;
        while (x > 0) {
            if (x & 1) f = f * b2 % p;
            b2 = b2 * b2 % p;
            x >>= 1;
        }
        if (f != 1) return pk * r;
    }
}

/// Exhaustive modular oracle for p-adic representation by diag(a, b, c), memoized by square class.
class DiagonalLocalOracle {
public:
    DiagonalLocalOracle(std::int64_t p, int exponent) : p_(p), modulus_(ipow(static_cast<std::uint64_t>(p), exponent)) {}

    bool represents(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t t) {
        std::array<std::int64_t, 3> key{square_class(a, p_), square_class(b, p_), square_class(c, p_)};
        std::sort(key.begin(), key.end());
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, diagonal_values(key[0], key[1], key[2], modulus_)).first;
        return it->second.contains(static_cast<std::uint64_t>(t) % modulus_);
    }

    std::uint64_t modulus() const { return modulus_; }

private:
    std::int64_t p_;
    std::uint64_t modulus_;
    std::map<std::array<std::int64_t, 3>, ResidueSet> cache_;
};

/// Hilbert symbol (a, b)_2 from a primitive solution of z^2 = a x^2 + b y^2 modulo 2^k.
inline int hilbert2_oracle(std::int64_t a, std::int64_t b, int k = 8) {
    const std::int64_t m = std::int64_t{1} << k;
    std::vector<char> square(m, 0), odd_square(m, 0);
    for (std::int64_t z = 0; z < m; ++z) {
        square[z * z % m] = 1;
        if (z % 2) odd_square[z * z % m] = 1;
    }
    const std::int64_t am = ((a % m) + m) % m, bm = ((b % m) + m) % m;
    for (std::int64_t x = 0; x < m; ++x)
        for (std::int64_t y = 0; y < m; ++y) {
            const std::int64_t v = (am * (x * x % m) + bm * (y * y % m)) % m;
            if ((x % 2 || y % 2) ? square[v] : odd_square[v]) return 1;
        }
    return -1;
}

/// Ternary isotropy at 2 for a diagonal form with coefficients of 2-adic valuation <= 1: a primitive
/// zero modulo 2^6 has gradient valuation <= 2 and lifts.
inline bool isotropic2_oracle(std::int64_t a, std::int64_t b, std::int64_t c) {
    const std::int64_t m = 64;
    for (std::int64_t x = 0; x < m; ++x)
        for (std::int64_t y = 0; y < m; ++y)
            for (std::int64_t z = 0; z < m; ++z) {
                if (x % 2 == 0 && y % 2 == 0 && z % 2 == 0) continue;
                if (((a * x * x + b * y * y + c * z * z) % m + m) % m == 0) return true;
            }
    return false;
}

// ---------------------------------------------------------------------------------------------
// Random data.

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Random integer matrix with odd determinant, i.e. invertible over Z_2.
inline std::vector<std::vector<Integer>> random_unimodular_at_2(std::mt19937_64& rng, std::size_t n, std::int64_t e) {
    while (true) {
        std::vector<std::vector<Integer>> u(n, std::vector<Integer>(n));
        for (auto& row : u)
            for (auto& x : row) x = uniform(rng, -e, e);
        std::vector<Integer> flat;
        for (auto& row : u) flat.insert(flat.end(), row.begin(), row.end());
        Integer det;
        if (n == 2) det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        else
            det = u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1]) - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0]) +
                  u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]);
        if (det % 2 != 0) return u;
    }
}

/// U^T G U
inline GramMatrix congruent(const GramMatrix& g, const std::vector<std::vector<Integer>>& u) {
    const std::size_t n = g.rank();
    std::vector<Integer> out(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Integer s = 0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) s += u[k][i] * g(k, l) * u[l][j];
            out[i * n + j] = s;
        }
    return GramMatrix(n, out);
}

inline GramMatrix random_positive_definite(std::mt19937_64& rng, std::int64_t e) {
    while (true) {
        const auto g = gram({uniform(rng, 1, e), uniform(rng, -e, e), uniform(rng, -e, e), uniform(rng, 1, e),
                             uniform(rng, -e, e), uniform(rng, 1, e)});
        if (is_positive_definite(g)) return g;
    }
}

inline std::vector<CosetInstance> corpus(std::size_t count, std::uint64_t seed, std::int64_t entry_bound = 8) {
    GeneratorOptions go;
    go.count = count;
    go.seed = seed;
    go.entry_bound = entry_bound;
    return generate_instances(go);
}

inline bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace tqp::testing
