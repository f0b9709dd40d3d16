#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tqp/error.hpp"
#include "tqp/integer.hpp"

namespace tqp {

using Vector = std::vector<Integer>;

/// Exponent k of a local ideal p^k Z_p; the infinite value stands for the zero ideal.
class IdealExponent {
public:
    constexpr IdealExponent() = default;
    constexpr explicit IdealExponent(int k) : value_(k) {}

    static constexpr IdealExponent infinity() { return IdealExponent(); }

    bool is_infinite() const { return !value_.has_value(); }
    int value() const {
        if (!value_) fail(ErrorKind::InvalidArgument, "infinite ideal exponent has no finite value");
        return *value_;
    }

    friend bool operator==(const IdealExponent&, const IdealExponent&) = default;
    friend bool operator==(const IdealExponent& a, int k) { return a.value_ && *a.value_ == k; }
    friend std::strong_ordering operator<=>(const IdealExponent& a, const IdealExponent& b) {
        if (!a.value_ || !b.value_) return !a.value_ <=> !b.value_;
        return *a.value_ <=> *b.value_;
    }
    friend std::strong_ordering operator<=>(const IdealExponent& a, int k) { return a <=> IdealExponent(k); }

    std::string str() const { return value_ ? std::to_string(*value_) : std::string("inf"); }

private:
    std::optional<int> value_;
};

inline std::ostream& operator<<(std::ostream& os, const IdealExponent& e) { return os << e.str(); }

/// p-adic valuation of the ideal generated by a list of integers.
inline IdealExponent ideal_exponent(std::span<const Integer> generators, const Integer& p) {
    IdealExponent best = IdealExponent::infinity();
    for (const auto& g : generators) {
        if (g == 0) continue;
        IdealExponent e(ordp(g, p));
        if (e < best) best = e;
    }
    return best;
}

/// Symmetric integer matrix of a bilinear form of rank 2 or 3; entry (i, j) is B(e_i, e_j).
class GramMatrix {
public:
    GramMatrix() = default;

    GramMatrix(std::size_t rank, std::initializer_list<Integer> row_major)
        : GramMatrix(rank, std::vector<Integer>(row_major)) {}

    GramMatrix(std::size_t rank, std::vector<Integer> row_major) : rank_(rank) {
        if (rank != 2 && rank != 3) fail(ErrorKind::InvalidArgument, "Gram matrix rank must be 2 or 3");
        if (row_major.size() != rank * rank) fail(ErrorKind::InvalidArgument, "Gram matrix needs rank^2 entries");
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < rank; ++j) entries_[i][j] = row_major[i * rank + j];
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = i + 1; j < rank; ++j)
                if (entries_[i][j] != entries_[j][i]) fail(ErrorKind::InvalidArgument, "Gram matrix is not symmetric");
    }

    /// Builds from the upper triangle b11 b12 (b13) b22 (b23 b33).
    static GramMatrix from_upper(std::span<const Integer> upper) {
        if (upper.size() == 3) return GramMatrix(2, {upper[0], upper[1], upper[1], upper[2]});
        if (upper.size() == 6)
            return GramMatrix(3, {upper[0], upper[1], upper[2], upper[1], upper[3], upper[4], upper[2], upper[4], upper[5]});
        fail(ErrorKind::InvalidArgument, "upper triangle needs 3 or 6 entries");
    }

    static GramMatrix diagonal(std::span<const Integer> d) {
        std::vector<Integer> m(d.size() * d.size(), Integer(0));
        for (std::size_t i = 0; i < d.size(); ++i) m[i * d.size() + i] = d[i];
        return GramMatrix(d.size(), std::move(m));
    }
    static GramMatrix diagonal(std::initializer_list<Integer> d) { return diagonal(std::span<const Integer>(d.begin(), d.size())); }

    std::size_t rank() const { return rank_; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i][j]; }

    std::vector<Integer> upper() const {
        std::vector<Integer> out;
        for (std::size_t i = 0; i < rank_; ++i)
            for (std::size_t j = i; j < rank_; ++j) out.push_back(entries_[i][j]);
        return out;
    }

    friend bool operator==(const GramMatrix& a, const GramMatrix& b) {
        if (a.rank_ != b.rank_) return false;
        for (std::size_t i = 0; i < a.rank_; ++i)
            for (std::size_t j = 0; j < a.rank_; ++j)
                if (a.entries_[i][j] != b.entries_[i][j]) return false;
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rank_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < rank_; ++j) os << (j ? "," : "") << entries_[i][j];
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    std::size_t rank_ = 0;
    std::array<std::array<Integer, 3>, 3> entries_{};
};

inline std::ostream& operator<<(std::ostream& os, const GramMatrix& g) { return os << g.str(); }

inline Integer determinant(const GramMatrix& g) {
    if (g.rank() == 2) return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
           g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
}

/// Leading principal minors m_1, ..., m_rank.
inline std::vector<Integer> leading_minors(const GramMatrix& g) {
    std::vector<Integer> m{g(0, 0), g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)};
    if (g.rank() == 3) m.push_back(determinant(g));
    return m;
}

inline bool is_positive_definite(const GramMatrix& g) {
    const auto minors = leading_minors(g);
    return std::all_of(minors.begin(), minors.end(), [](const Integer& m) { return m > 0; });
}

/// Adjugate matrix, so that g * adj = det * I.
inline std::array<std::array<Integer, 3>, 3> adjugate(const GramMatrix& g) {
    std::array<std::array<Integer, 3>, 3> a{};
    if (g.rank() == 2) {
        a[0][0] = g(1, 1);
        a[1][1] = g(0, 0);
        a[0][1] = -g(0, 1);
        a[1][0] = -g(1, 0);
        return a;
    }
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            a[i][j] = g(r0, c0) * g(r1, c1) - g(r0, c1) * g(r1, c0);
        }
    return a;
}

inline Integer bilinear(const GramMatrix& g, std::span<const Integer> x, std::span<const Integer> y) {
    if (x.size() != g.rank() || y.size() != g.rank()) fail(ErrorKind::InvalidArgument, "vector length does not match rank");
    Integer s = 0;
    for (std::size_t i = 0; i < g.rank(); ++i)
        for (std::size_t j = 0; j < g.rank(); ++j) s += x[i] * g(i, j) * y[j];
    return s;
}

/// Q(x) = x^T G x.
inline Integer eval_quadratic(const GramMatrix& g, std::span<const Integer> x) { return bilinear(g, x, x); }

/// G x as a column vector.
inline Vector gram_times(const GramMatrix& g, std::span<const Integer> x) {
    if (x.size() != g.rank()) fail(ErrorKind::InvalidArgument, "vector length does not match rank");
    Vector out(g.rank(), Integer(0));
    for (std::size_t i = 0; i < g.rank(); ++i)
        for (std::size_t j = 0; j < g.rank(); ++j) out[i] += g(i, j) * x[j];
    return out;
}

/// Gram matrix of the vectors `basis` (columns of the change of basis): U^T G U.
inline GramMatrix restrict_to(const GramMatrix& g, const std::vector<Vector>& basis) {
    const std::size_t n = basis.size();
    std::vector<Integer> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = bilinear(g, basis[i], basis[j]);
    return GramMatrix(n, std::move(m));
}

/// Exponents (scale, norm) of the p-adic localization: ord_p of gcd of all entries and
/// ord_p of gcd of the diagonal together with doubled off-diagonal entries.
inline std::pair<IdealExponent, IdealExponent> scale_norm_exponents(const GramMatrix& g, const Integer& p) {
    std::vector<Integer> scale_gens, norm_gens;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        for (std::size_t j = i; j < g.rank(); ++j) {
            scale_gens.push_back(g(i, j));
            norm_gens.push_back(i == j ? g(i, j) : Integer(2 * g(i, j)));
        }
    }
    return {ideal_exponent(scale_gens, p), ideal_exponent(norm_gens, p)};
}

/// Global norm generator: gcd of the diagonal and doubled off-diagonal entries.
inline Integer norm_generator(const GramMatrix& g) {
    Integer n = 0;
    for (std::size_t i = 0; i < g.rank(); ++i)
        for (std::size_t j = i; j < g.rank(); ++j) n = gcd(n, i == j ? g(i, j) : Integer(2 * g(i, j)));
    return n;
}

namespace detail {

inline Integer gcd_of(std::span<const Integer> v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

// First nonzero coordinate made positive.
inline void normalize_sign(Vector& v) {
    for (const auto& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        return;
    }
}

inline std::pair<Integer, Integer> bezout(const Integer& a, const Integer& b) {
    Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Integer q = floor_div(old_r, r);
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_s, old_t};
}

}  // namespace detail

/// Basis of the saturated rank-2 lattice {x in Z^3 : row . x = 0}.
///
/// The first vector lives in the span of e_1, e_2; the second is reduced against the first
/// at the first's leading coordinate. Both have their first nonzero coordinate positive.
inline std::array<Vector, 2> integer_kernel(std::span<const Integer> row) {
    if (row.size() != 3) fail(ErrorKind::InvalidArgument, "integer_kernel expects a 3-vector");
    const Integer &a = row[0], &b = row[1], &c = row[2];
    if (a == 0 && b == 0 && c == 0) fail(ErrorKind::InvalidArgument, "integer_kernel of the zero functional");

    Vector v1, v2;
    if (a == 0 && b == 0) {
        v1 = {1, 0, 0};
        v2 = {0, 1, 0};
    } else {
        const Integer g = gcd(a, b);
        v1 = {b / g, -a / g, 0};
        detail::normalize_sign(v1);
        const Integer big_g = gcd(g, c);
        const auto [s, t] = detail::bezout(a, b);  // a s + b t = g
        const Integer k = -(c / big_g);
        v2 = {k * s, k * t, g / big_g};
        const std::size_t lead = v1[0] != 0 ? 0 : 1;
        const Integer shift = floor_div(v2[lead], v1[lead]);
        for (std::size_t i = 0; i < 3; ++i) v2[i] -= shift * v1[i];
        detail::normalize_sign(v2);
    }

    // Saturation: the 2x2 minors of [v1; v2] are coprime.
    const std::array<Integer, 3> minors{v1[1] * v2[2] - v1[2] * v2[1], v1[2] * v2[0] - v1[0] * v2[2],
                                        v1[0] * v2[1] - v1[1] * v2[0]};
    if (detail::gcd_of(minors) != 1) fail(ErrorKind::InvalidArgument, "kernel basis failed saturation");
    return {v1, v2};
}

inline std::string vector_str(std::span<const Integer> v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

}  // namespace tqp
