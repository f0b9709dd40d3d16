#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "tqp/error.hpp"
#include "tqp/integer.hpp"
#include "tqp/lattice.hpp"
#include "tqp/symbols.hpp"

namespace tqp {

/// Type I constituents are odd (norm equals scale); type II are even (norm is twice the scale).
enum class JordanType { I, II };

inline std::string to_string(JordanType t) { return t == JordanType::I ? "I" : "II"; }

struct JordanConstituent {
    int scale_exp = 0;
    int rank = 0;
    JordanType type = JordanType::I;
    /// p = 2, type I: unit parts of an orthogonal basis, mod 8. Odd p: Legendre classes (+1 / -1).
    std::vector<int> diag_units;
    /// p = 2: odd part of the constituent determinant, mod 8. Odd p: its Legendre class.
    int det_unit = 1;
};

using RationalMatrix = std::vector<std::vector<Rational>>;
using IntegerMatrix = std::vector<std::vector<Integer>>;

struct JordanSplitting {
    Integer prime;
    int precision = 0;
    std::vector<JordanConstituent> constituents;
    /// Columns are the new basis vectors; entries are p-integral and the determinant is 1.
    RationalMatrix transform_exact;
    /// transform^T * G * transform, block diagonal in the order of `constituents`.
    RationalMatrix blocks_exact;
    /// The same two matrices reduced modulo p^precision.
    IntegerMatrix transform;
    IntegerMatrix blocks;

    std::string summary() const {
        std::string out;
        for (const auto& c : constituents) {
            if (!out.empty()) out += " + ";
            out += prime.str() + "^" + std::to_string(c.scale_exp) + "[rank " + std::to_string(c.rank) +
                   ", type " + to_string(c.type) + ", det " + std::to_string(c.det_unit) + "]";
        }
        return out;
    }
};

namespace detail {

class JordanBuilder {
public:
    JordanBuilder(const GramMatrix& g, Integer p) : p_(std::move(p)), n_(g.rank()) {
        m_.assign(n_, std::vector<Rational>(n_));
        t_.assign(n_, std::vector<Rational>(n_, Rational(0)));
        for (std::size_t i = 0; i < n_; ++i) {
            t_[i][i] = 1;
            for (std::size_t j = 0; j < n_; ++j) m_[i][j] = Rational(g(i, j));
        }
    }

    struct Piece {
        int scale;
        std::vector<std::size_t> idx;
        bool even;
    };

    std::vector<Piece> split_all() {
        std::vector<std::size_t> active(n_);
        for (std::size_t i = 0; i < n_; ++i) active[i] = i;
        auto pieces = split(active);

        if (p_ != 2) return pieces;
        // A rank-1 and an even rank-2 piece of equal scale form an odd unimodular rank-3
        // constituent (up to scaling); rediagonalize it.
        std::map<int, std::vector<Piece>> by_scale;
        for (auto& pc : pieces) by_scale[pc.scale].push_back(pc);
        std::vector<Piece> out;
        for (auto& [scale, group] : by_scale) {
            const bool has_odd = std::any_of(group.begin(), group.end(), [](const Piece& pc) { return !pc.even; });
            const auto even_it = std::find_if(group.begin(), group.end(), [](const Piece& pc) { return pc.even; });
            if (!has_odd || even_it == group.end()) {
                out.insert(out.end(), group.begin(), group.end());
                continue;
            }
            const std::size_t e = std::find_if(group.begin(), group.end(), [](const Piece& pc) { return !pc.even; })->idx[0];
            const std::size_t f1 = even_it->idx[0], f2 = even_it->idx[1];
            add_multiple(f1, e, Rational(1));
            std::vector<std::size_t> rest{e, f2};
            pivot_rank1(f1, rest);
            out.push_back({scale, {f1}, false});
            auto tail = split(rest);
            for (auto& pc : tail) {
                if (pc.even || pc.scale != scale)
                    fail(ErrorKind::InvalidArgument, "odd unimodular constituent failed to diagonalize");
                out.push_back(pc);
            }
        }
        return out;
    }

    const RationalMatrix& gram() const { return m_; }
    const RationalMatrix& transform() const { return t_; }

private:
    // e_k <- e_k + c e_i.
    void add_multiple(std::size_t k, std::size_t i, const Rational& c) {
        if (c == 0) return;
        const Rational mkk = m_[k][k] + 2 * c * m_[k][i] + c * c * m_[i][i];
        for (std::size_t l = 0; l < n_; ++l) {
            if (l == k) continue;
            m_[k][l] += c * m_[i][l];
            m_[l][k] = m_[k][l];
        }
        m_[k][k] = mkk;
        for (std::size_t r = 0; r < n_; ++r) t_[r][k] += c * t_[r][i];
    }

    void pivot_rank1(std::size_t i, std::vector<std::size_t>& active) {
        for (std::size_t k : active)
            if (k != i) add_multiple(k, i, -m_[k][i] / m_[i][i]);
        active.erase(std::remove(active.begin(), active.end(), i), active.end());
    }

    std::vector<Piece> split(std::vector<std::size_t> active) {
        std::vector<Piece> pieces;
        while (!active.empty()) {
            int s = std::numeric_limits<int>::max();
            for (std::size_t i : active)
                for (std::size_t j : active)
                    if (m_[i][j] != 0) s = std::min(s, ordp(m_[i][j], p_));
            if (s == std::numeric_limits<int>::max()) fail(ErrorKind::InvalidArgument, "jordan_split of a degenerate form");

            auto diag = std::find_if(active.begin(), active.end(),
                                     [&](std::size_t i) { return m_[i][i] != 0 && ordp(m_[i][i], p_) == s; });
            if (diag != active.end()) {
                const std::size_t i = *diag;
                pivot_rank1(i, active);
                pieces.push_back({s, {i}, false});
                continue;
            }
            std::size_t pi = 0, pj = 0;
            for (std::size_t a = 0; a < active.size() && pi == pj; ++a)
                for (std::size_t b = a + 1; b < active.size(); ++b)
                    if (m_[active[a]][active[b]] != 0 && ordp(m_[active[a]][active[b]], p_) == s) {
                        pi = active[a];
                        pj = active[b];
                        break;
                    }
            if (p_ != 2) {
                add_multiple(pi, pj, Rational(1));  // diagonal now has valuation s
                continue;
            }
            const Rational a = m_[pi][pi], b = m_[pi][pj], d = m_[pj][pj];
            const Rational det = a * d - b * b;
            for (std::size_t k : active) {
                if (k == pi || k == pj) continue;
                const Rational u = m_[pi][k], v = m_[pj][k];
                const Rational ci = -(d * u - b * v) / det, cj = -(a * v - b * u) / det;
                add_multiple(k, pi, ci);
                add_multiple(k, pj, cj);
            }
            active.erase(std::remove_if(active.begin(), active.end(), [&](std::size_t k) { return k == pi || k == pj; }),
                         active.end());
            pieces.push_back({s, {pi, pj}, true});
        }
        return pieces;
    }

    Integer p_;
    std::size_t n_;
    RationalMatrix m_;
    RationalMatrix t_;
};

inline int unit_class(const Rational& unit, const Integer& p) {
    if (p == 2) return static_cast<int>(rational_mod(unit, Integer(8)));
    const Integer rep = boost::multiprecision::numerator(unit) * boost::multiprecision::denominator(unit);
    return legendre(rep, p);
}

inline Rational pow_rational(const Integer& p, int k) { return Rational(pow_int(p, static_cast<unsigned>(k))); }

}  // namespace detail

inline int default_jordan_precision(const GramMatrix& g, const Integer& p) {
    return ordp(Integer(2 * determinant(g)), p) + 5;
}

/// Jordan splitting of g over the p-adic integers.
///
/// Greedy: repeatedly take an entry of minimal valuation; a diagonal pivot splits off a rank-1
/// piece, otherwise (p = 2) the off-diagonal pivot splits off an even rank-2 piece. Pieces of equal
/// scale are merged; a merged group is type I iff it contains a rank-1 piece.
inline JordanSplitting jordan_split(const GramMatrix& g, const Integer& p, int precision = 0) {
    if (determinant(g) == 0) fail(ErrorKind::InvalidArgument, "jordan_split needs a nondegenerate form");
    if (precision <= 0) precision = default_jordan_precision(g, p);
    if (precision < default_jordan_precision(g, p))
        fail(ErrorKind::InvalidArgument, "jordan_split precision below ord_p(2 det) + 5");

    detail::JordanBuilder builder(g, p);
    auto pieces = builder.split_all();
    std::stable_sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.scale < b.scale; });

    const auto& m = builder.gram();
    const auto& t = builder.transform();
    const std::size_t n = g.rank();

    // Reorder basis so that constituents appear in increasing scale.
    std::vector<std::size_t> order;
    for (const auto& pc : pieces) order.insert(order.end(), pc.idx.begin(), pc.idx.end());

    JordanSplitting out;
    out.prime = p;
    out.precision = precision;
    out.transform_exact.assign(n, std::vector<Rational>(n));
    out.blocks_exact.assign(n, std::vector<Rational>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            out.transform_exact[r][c] = t[r][order[c]];
            out.blocks_exact[r][c] = m[order[r]][order[c]];
        }

    for (const auto& pc : pieces) {
        if (out.constituents.empty() || out.constituents.back().scale_exp != pc.scale) {
            JordanConstituent c;
            c.scale_exp = pc.scale;
            c.type = JordanType::II;
            out.constituents.push_back(c);
        }
        auto& c = out.constituents.back();
        c.rank += static_cast<int>(pc.idx.size());
        const Rational ps = detail::pow_rational(p, pc.scale);
        if (!pc.even) {
            c.type = JordanType::I;
            const int u = detail::unit_class(m[pc.idx[0]][pc.idx[0]] / ps, p);
            c.diag_units.push_back(u);
        }
        Rational det_unit;
        if (pc.even) {
            const std::size_t i = pc.idx[0], j = pc.idx[1];
            det_unit = (m[i][i] * m[j][j] - m[i][j] * m[i][j]) / (ps * ps);
        } else {
            det_unit = m[pc.idx[0]][pc.idx[0]] / ps;
        }
        const int du = detail::unit_class(det_unit, p);
        c.det_unit = (p == 2) ? (c.det_unit * du) % 8 : c.det_unit * du;
    }
    // A type I group keeps only rank-1 pieces (even pieces were rediagonalized above).
    for (auto& c : out.constituents)
        if (c.type == JordanType::II) c.diag_units.clear();

    const Integer modulus = pow_int(p, static_cast<unsigned>(precision));
    out.transform.assign(n, std::vector<Integer>(n));
    out.blocks.assign(n, std::vector<Integer>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            out.transform[r][c] = rational_mod(out.transform_exact[r][c], modulus);
            out.blocks[r][c] = rational_mod(out.blocks_exact[r][c], modulus);
        }
    return out;
}

/// True iff every constituent of the 2-adic Jordan splitting is of type I.
inline bool is_diagonalizable2(const GramMatrix& g) {
    const auto js = jordan_split(g, Integer(2));
    return std::all_of(js.constituents.begin(), js.constituents.end(),
                       [](const JordanConstituent& c) { return c.type == JordanType::I; });
}

}  // namespace tqp
