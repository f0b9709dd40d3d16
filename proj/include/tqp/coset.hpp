#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tqp/error.hpp"
#include "tqp/factor.hpp"
#include "tqp/integer.hpp"
#include "tqp/lattice.hpp"

namespace tqp {

/// f(x) = sum_{i<=j} q_ij x_i x_j + sum_i l_i x_i + c.
struct PolynomialInput {
    std::array<Integer, 6> quadratic;  ///< q11 q12 q13 q22 q23 q33
    std::array<Integer, 3> linear;
    Integer constant = 0;
};

/// Gram matrix of N and w = 2 nu.
struct LatticeInput {
    GramMatrix gram;
    Vector w;
    Integer constant = 0;
};

using InstanceDescription = std::variant<PolynomialInput, LatticeInput>;

/// A validated coset nu + N of conductor 2 together with every derived invariant.
struct CosetInstance {
    GramMatrix gram;
    Vector w;  ///< 2 nu, integral and not in 2 Z^3
    Integer constant = 0;  ///< echoed only
    Integer conductor = 2;
    int alpha = 0;  ///< n(nu, N) = 2^alpha Z
    int beta = 0;   ///< ord_2 Q(nu)
    Integer q_nu;   ///< Q(nu) = w^T G w / 4
    Integer epsilon;  ///< Q(nu) / 2^beta, odd
    Integer det;
    int ord2_det = 0;
    int lambda = 1;
    Integer rad_odd;  ///< odd squarefree part of det
    std::vector<Integer> odd_primes;
    IdealExponent b_nu_exp;  ///< ord_2 of the ideal B(nu, N_2)

    friend bool operator==(const CosetInstance&, const CosetInstance&) = default;
};

struct G2Lattice {
    std::array<Vector, 2> basis;
    GramMatrix gram;
    IdealExponent norm_exp2;
};

/// min_i ord_2((G w)_i / 2).
inline IdealExponent b_nu_exponent(const GramMatrix& g, const Vector& w) {
    Vector half;
    for (const auto& c : gram_times(g, w)) half.push_back(c / 2);
    return ideal_exponent(half, Integer(2));
}

inline IdealExponent b_nu_exponent(const CosetInstance& inst) { return b_nu_exponent(inst.gram, inst.w); }

inline CosetInstance normalize(const LatticeInput& in, const FactorOptions& opts = {}) {
    const GramMatrix& g = in.gram;
    if (g.rank() != 3) fail(ErrorKind::InvalidArgument, "the lattice must have rank 3");
    if (in.w.size() != 3) fail(ErrorKind::InvalidArgument, "w must have 3 coordinates");
    if (!is_positive_definite(g)) fail(ErrorKind::NotPositiveDefinite, "Gram matrix " + g.str() + " is not positive definite");
    const Vector& w = in.w;
    if (std::all_of(w.begin(), w.end(), [](const Integer& c) { return c % 2 == 0; }))
        fail(ErrorKind::OutOfScope, "nu lies in N (conductor 1)");

    const Vector gw = gram_times(g, w);
    for (const auto& c : gw)
        if (c % 2 != 0) fail(ErrorKind::AssumptionViolated, "B(nu, N) is not integral");
    const Integer qw = eval_quadratic(g, w);
    if (qw % 4 != 0) fail(ErrorKind::AssumptionViolated, "Q(nu) is not integral");

    // n(nu, N) is generated by g(e_i) = Q(e_i) + 2 B(nu, e_i) and 2 B(e_i, e_j).
    Integer n_gcd = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        n_gcd = gcd(n_gcd, g(i, i) + gw[i]);
        for (std::size_t j = i; j < 3; ++j) n_gcd = gcd(n_gcd, Integer(2 * g(i, j)));
    }
    const int alpha = ordp(n_gcd, Integer(2));
    if ((n_gcd >> alpha) != 1)
        fail(ErrorKind::AssumptionViolated, "n(nu, N) = " + n_gcd.str() + " Z is not a power of 2");
    if (alpha == 0) fail(ErrorKind::AssumptionViolated, "n(nu, N) = Z (alpha = 0)");

    CosetInstance inst;
    inst.gram = g;
    inst.w = w;
    inst.constant = in.constant;
    inst.alpha = alpha;
    inst.q_nu = qw / 4;
    inst.beta = ordp(inst.q_nu, Integer(2));
    inst.epsilon = inst.q_nu >> inst.beta;
    inst.det = determinant(g);
    inst.ord2_det = ordp(inst.det, Integer(2));
    inst.lambda = (inst.ord2_det - 3 * inst.beta) % 2 == 0 ? 1 : 2;
    const auto factors = factorize(inst.det, opts);
    inst.rad_odd = 1;
    for (const auto& [p, e] : factors) {
        if (p == 2) continue;
        inst.odd_primes.push_back(p);
        if (e % 2 == 1) inst.rad_odd *= p;
    }
    inst.b_nu_exp = b_nu_exponent(g, w);
    return inst;
}

/// Polynomial coefficients to lattice form: B_ii = q_ii, B_ij = q_ij / 2, G w = l.
inline LatticeInput to_lattice(const PolynomialInput& in) {
    const auto& q = in.quadratic;
    for (std::size_t k : {1u, 2u, 4u})
        if (q[k] % 2 != 0) fail(ErrorKind::NonClassicForm, "cross coefficient " + q[k].str() + " is odd");
    const GramMatrix g = GramMatrix::from_upper(std::vector<Integer>{q[0], q[1] / 2, q[2] / 2, q[3], q[4] / 2, q[5]});
    if (!is_positive_definite(g)) fail(ErrorKind::NotPositiveDefinite, "quadratic part is not positive definite");
    const Integer det = determinant(g);
    const auto adj = adjugate(g);
    Vector w(3);
    for (std::size_t i = 0; i < 3; ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < 3; ++j) s += adj[i][j] * in.linear[j];
        if (s % det != 0) fail(ErrorKind::OutOfScope, "2 nu is not integral (conductor exceeds 2)");
        w[i] = s / det;
    }
    return {g, w, in.constant};
}

inline CosetInstance normalize(const PolynomialInput& in, const FactorOptions& opts = {}) {
    return normalize(to_lattice(in), opts);
}

inline CosetInstance normalize(const InstanceDescription& in, const FactorOptions& opts = {}) {
    return std::visit([&](const auto& v) { return normalize(v, opts); }, in);
}

/// The polynomial f with f(x) = Q(x) + 2 B(nu, x) + c for the instance.
inline PolynomialInput to_polynomial(const CosetInstance& inst) {
    const auto& g = inst.gram;
    const Vector l = gram_times(g, inst.w);
    return {{g(0, 0), 2 * g(0, 1), 2 * g(0, 2), g(1, 1), 2 * g(1, 2), g(2, 2)}, {l[0], l[1], l[2]}, inst.constant};
}

/// Replaces nu by nu + x0.
inline CosetInstance translate(const CosetInstance& inst, std::span<const Integer> x0, const FactorOptions& opts = {}) {
    if (x0.size() != 3) fail(ErrorKind::InvalidArgument, "translation vector needs 3 coordinates");
    Vector w = inst.w;
    for (std::size_t i = 0; i < 3; ++i) w[i] += 2 * x0[i];
    CosetInstance out = normalize(LatticeInput{inst.gram, w, inst.constant}, opts);
    if (out.alpha != inst.alpha) fail(ErrorKind::InvalidArgument, "translation changed alpha");
    return out;
}

/// Orthogonal complement of nu in N: the saturated kernel of x -> B(w, x).
inline G2Lattice complement_G2(const CosetInstance& inst) {
    const Vector row = gram_times(inst.gram, inst.w);
    const auto basis = integer_kernel(row);
    const GramMatrix g2 = restrict_to(inst.gram, {basis[0], basis[1]});
    return {basis, g2, scale_norm_exponents(g2, Integer(2)).second};
}

/// H(x) = (Q(x) + 2 B(nu, x)) / 2^alpha.
inline Integer eval_H(const CosetInstance& inst, std::span<const Integer> x) {
    const Integer num = eval_quadratic(inst.gram, x) + bilinear(inst.gram, x, inst.w);
    const Integer den = pow2(inst.alpha);
    if (num % den != 0) fail(ErrorKind::InvalidArgument, "H took a non-integral value");
    return num / den;
}

}  // namespace tqp
