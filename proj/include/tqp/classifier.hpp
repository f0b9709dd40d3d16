#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tqp/coset.hpp"
#include "tqp/error.hpp"
#include "tqp/factor.hpp"
#include "tqp/jordan.hpp"
#include "tqp/local.hpp"
#include "tqp/spectrum.hpp"

namespace tqp {

enum class Status { AlmostUniversal, NotAlmostUniversal, AssumptionViolated, OutOfScope, Inconclusive };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::AlmostUniversal: return "AlmostUniversal";
        case Status::NotAlmostUniversal: return "NotAlmostUniversal";
        case Status::AssumptionViolated: return "AssumptionViolated";
        case Status::OutOfScope: return "OutOfScope";
        case Status::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline std::optional<Status> status_from_string(std::string_view s) {
    for (Status st : {Status::AlmostUniversal, Status::NotAlmostUniversal, Status::AssumptionViolated, Status::OutOfScope,
                      Status::Inconclusive})
        if (to_string(st) == s) return st;
    return std::nullopt;
}

/// Clause identifiers in evaluation order.
inline const std::vector<std::string>& clause_ids() {
    static const std::vector<std::string> ids{"1a",    "1b.i",   "1b.ii",  "1b.iii", "2a.i", "2a.ii", "2a.iii",
                                              "2a.iv", "2b.i",   "2b.ii",  "2b.iii", "3a",   "3b",    "3c",
                                              "3d",    "3e",     "3f",     "4"};
    return ids;
}

struct TraceEntry {
    std::string predicate;
    std::string inputs;
    bool value = false;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Global enumeration spent on clause (4).
struct OracleBudget {
    bool ran = false;
    std::optional<Integer> target;  ///< t tested by represents_H
    std::uint64_t budget = 0;

    friend bool operator==(const OracleBudget&, const OracleBudget&) = default;
};

struct Verdict {
    Status status = Status::Inconclusive;
    std::optional<std::string> clause;  ///< fired clause, or odd-local / alpha-range / exhausted
    std::vector<TraceEntry> trace;
    OracleBudget oracle;
    std::vector<std::string> invariant_violations;
    std::string message;  ///< error text for Inconclusive and invalid instances

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct ClassifierConfig {
    FactorOptions factor;
    EnumerationOptions enumeration;
};

namespace detail {

// Lazily computed 2-adic data shared by the clauses.
class ClauseContext {
public:
    ClauseContext(const CosetInstance& inst, const ClassifierConfig& cfg) : inst_(inst), cfg_(cfg) {}

    const CosetInstance& inst() const { return inst_; }
    const ClassifierConfig& cfg() const { return cfg_; }
    int b() const { return inst_.b_nu_exp.value(); }
    int d() const { return inst_.ord2_det; }
    int beta() const { return inst_.beta; }
    int alpha() const { return inst_.alpha; }
    int d_rel() const { return inst_.ord2_det - 3 * inst_.beta; }

    const JordanSplitting& jordan() {
        if (!jordan_) jordan_ = jordan_split(inst_.gram, Integer(2));
        return *jordan_;
    }
    bool n_diagonalizable() {
        if (!n_diag_) {
            const auto& js = jordan();
            n_diag_ = std::all_of(js.constituents.begin(), js.constituents.end(),
                                  [](const JordanConstituent& c) { return c.type == JordanType::I; });
        }
        return *n_diag_;
    }
    const G2Lattice& g2() {
        if (!g2_) g2_ = complement_G2(inst_);
        return *g2_;
    }
    int g2_norm() { return g2().norm_exp2.value(); }
    bool g2_diagonalizable() {
        if (!g2_diag_) g2_diag_ = is_diagonalizable2(g2().gram);
        return *g2_diag_;
    }
    // Some prime q | rad_odd with (-lambda | q) = -1; the witness is recorded.
    std::optional<Integer> legendre_witness() const {
        for (const auto& q : inst_.odd_primes)
            if (inst_.rad_odd % q == 0 && legendre(Integer(-inst_.lambda), q) == -1) return q;
        return std::nullopt;
    }

    std::optional<OracleBudget> oracle;

private:
    const CosetInstance& inst_;
    const ClassifierConfig& cfg_;
    std::optional<JordanSplitting> jordan_;
    std::optional<bool> n_diag_;
    std::optional<G2Lattice> g2_;
    std::optional<bool> g2_diag_;
};

struct ClauseResult {
    bool value;
    std::string inputs;
};

inline std::string kv(std::initializer_list<std::pair<const char*, std::string>> items) {
    std::string out;
    for (const auto& [k, v] : items) {
        if (!out.empty()) out += ' ';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

inline std::string str(int v) { return std::to_string(v); }
inline std::string str(bool v) { return v ? "true" : "false"; }
inline std::string str(const Integer& v) { return v.str(); }

inline ClauseResult binary_det5(ClauseContext& ctx) {
    std::string seen;
    bool hit = false;
    for (const auto& c : ctx.jordan().constituents) {
        if (c.rank == 2) {
            seen += (seen.empty() ? "" : ",") + std::to_string(c.det_unit);
            hit = hit || c.det_unit == 5;
        } else if (c.rank == 3 && c.type == JordanType::I) {
            const auto& u = c.diag_units;
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = i + 1; j < 3; ++j) {
                    const int prod = (u[i] * u[j]) % 8;
                    seen += (seen.empty() ? "" : ",") + std::to_string(prod);
                    hit = hit || prod == 5;
                }
        }
    }
    return {hit, kv({{"b", str(ctx.b())}, {"beta", str(ctx.beta())}, {"binary_det_units", "[" + seen + "]"}})};
}

inline ClauseResult legendre_clause(ClauseContext& ctx, std::initializer_list<std::pair<const char*, std::string>> pre,
                                    bool gate) {
    const auto q = gate ? ctx.legendre_witness() : std::nullopt;
    std::string inputs = kv(pre);
    if (!inputs.empty()) inputs += ' ';
    inputs += kv({{"rad_odd", str(ctx.inst().rad_odd)}, {"lambda", str(ctx.inst().lambda)},
                  {"witness", q ? q->str() : std::string("none")}});
    return {q.has_value(), inputs};
}

inline ClauseResult evaluate_clause_detail(ClauseContext& ctx, const std::string& id) {
    const auto& inst = ctx.inst();
    const int beta = ctx.beta(), b = ctx.b(), d = ctx.d(), rel = ctx.d_rel();
    const auto base = [&] { return kv({{"b", str(b)}, {"beta", str(beta)}}); };

    if (id == "1a") return {b == beta - 1, base()};
    if (id == "1b.i") {
        const auto [s, n] = scale_norm_exponents(inst.gram, Integer(2));
        const Integer ng = norm_generator(inst.gram);
        const Integer odd = ng >> ordp(ng, Integer(2));
        const bool v = b >= beta && s == beta + 1 && n == beta + 2 && odd == 1;
        return {v, base() + " " + kv({{"scale_exp", s.str()}, {"norm_exp", n.str()}, {"norm_odd_part", str(odd)}})};
    }
    if (id == "1b.ii") {
        const bool diag = b >= beta && ctx.n_diagonalizable();
        return {diag && d == 3 + 3 * beta, base() + " " + kv({{"diagonalizable", str(ctx.n_diagonalizable())}, {"d", str(d)}})};
    }
    if (id == "1b.iii") {
        const bool v = b >= beta && ctx.n_diagonalizable() && d == 5 + 3 * beta && b == beta + 1;
        return {v, base() + " " + kv({{"diagonalizable", str(ctx.n_diagonalizable())}, {"d", str(d)}})};
    }
    if (id == "2a.i") return {b == beta && rel % 2 != 0, base() + " " + kv({{"d_minus_3beta", str(rel)}})};
    if (id == "2a.ii") return {b == beta && rel == 4, base() + " " + kv({{"d_minus_3beta", str(rel)}})};
    if (id == "2a.iii") return legendre_clause(ctx, {{"b", str(b)}, {"beta", str(beta)}}, b == beta);
    if (id == "2a.iv") {
        if (b != beta) return {false, base()};
        return binary_det5(ctx);
    }
    if (id.starts_with("2b")) {
        const bool pre = b == beta + 1 && ctx.g2_norm() == beta + 2;
        const std::string inputs = base() + " " + kv({{"g2_norm_exp", str(ctx.g2_norm())}});
        if (id == "2b.i") return {pre && rel % 2 != 0, inputs + " " + kv({{"d_minus_3beta", str(rel)}})};
        if (id == "2b.ii") return {pre && rel == 6, inputs + " " + kv({{"d_minus_3beta", str(rel)}})};
        if (id == "2b.iii")
            return legendre_clause(ctx, {{"b", str(b)}, {"beta", str(beta)}, {"g2_norm_exp", str(ctx.g2_norm())}}, pre);
    }
    if (id == "3a") return {!ctx.g2_diagonalizable(), kv({{"g2", ctx.g2().gram.str()}, {"g2_diagonalizable", str(ctx.g2_diagonalizable())}})};
    if (id == "3b") {
        const bool v = ctx.g2_norm() == ctx.alpha() && (rel % 2 == 0 || d == 9 + 3 * beta);
        return {v, kv({{"g2_norm_exp", str(ctx.g2_norm())}, {"alpha", str(ctx.alpha())}, {"d", str(d)}, {"beta", str(beta)}})};
    }
    if (id == "3c") {
        const bool v = ctx.g2_norm() == ctx.alpha() + 1 && rel % 2 != 0;
        return {v, kv({{"g2_norm_exp", str(ctx.g2_norm())}, {"alpha", str(ctx.alpha())}, {"d_minus_3beta", str(rel)}})};
    }
    if (id == "3d") return legendre_clause(ctx, {}, true);
    if (id == "3e") {
        const Integer r = mod_floor(inst.rad_odd, Integer(8)), e = mod_floor(inst.epsilon, Integer(8));
        return {r != e, kv({{"rad_odd_mod8", str(r)}, {"epsilon_mod8", str(e)}})};
    }
    if (id == "3f") {
        const bool norm_ok = ctx.g2_norm() == ctx.alpha();
        bool represented = true;
        if (norm_ok) represented = local_represents(ctx.g2().gram, pow2(ctx.alpha()) * inst.q_nu, Integer(2)).represented;
        return {norm_ok && !represented,
                kv({{"g2_norm_exp", str(ctx.g2_norm())}, {"alpha", str(ctx.alpha())},
                    {"target", str(Integer(pow2(ctx.alpha()) * inst.q_nu))},
                    {"represented", norm_ok ? str(represented) : std::string("skipped")}})};
    }
    if (id == "4") {
        const int rel_alpha = ctx.alpha() - beta;
        if (rel_alpha != 2 && rel_alpha != 3) return {false, kv({{"alpha_minus_beta", str(rel_alpha)}})};
        const Integer num = pow2(beta) * inst.rad_odd - inst.q_nu;
        const Integer den = pow2(ctx.alpha());
        if (num % den != 0) return {false, kv({{"numerator", str(num)}, {"integral", "false"}})};
        const Integer t = num / den;
        OracleBudget ob{true, t, ctx.cfg().enumeration.budget};
        ctx.oracle = ob;
        const bool v = represents_H(inst, t, ctx.cfg().enumeration);
        return {v, kv({{"numerator", str(num)}, {"t", str(t)}})};
    }
    fail(ErrorKind::InvalidArgument, "unknown clause id '" + id + "'");
}

}  // namespace detail

/// Truth value of one clause of the characterization, with no gating.
inline bool evaluate_clause(const CosetInstance& inst, const std::string& id, const ClassifierConfig& cfg = {}) {
    detail::ClauseContext ctx(inst, cfg);
    return detail::evaluate_clause_detail(ctx, id).value;
}

/// Decides almost-universality of H; clauses are tried in order and the first true one is reported.
inline Verdict evaluate(const CosetInstance& inst, const ClassifierConfig& cfg = {}) {
    using detail::kv;
    using detail::str;
    Verdict v;
    detail::ClauseContext ctx(inst, cfg);
    auto record = [&](const std::string& pred, const std::string& inputs, bool value) {
        v.trace.push_back({pred, inputs, value});
        return value;
    };
    auto conclude = [&](Status s, std::string clause) {
        v.status = s;
        v.clause = std::move(clause);
        if (s == Status::AlmostUniversal && !is_anisotropic2(inst.gram))
            v.invariant_violations.push_back("almost universal but N is isotropic at 2");
        if (ctx.oracle) v.oracle = *ctx.oracle;
        return v;
    };

    for (const auto& p : inst.odd_primes)
        if (!record("represents_all_odd", kv({{"p", str(p)}}), represents_all_odd(inst.gram, p)))
            return conclude(Status::NotAlmostUniversal, "odd-local");

    const int rel = inst.alpha - inst.beta;
    if (!record("alpha_range", kv({{"alpha", str(inst.alpha)}, {"beta", str(inst.beta)}}), rel >= 1 && rel <= 3))
        return conclude(Status::NotAlmostUniversal, "alpha-range");

    const int b = ctx.b();
    if (b < inst.beta - 1 || b > inst.beta + 1)
        v.invariant_violations.push_back("ord_2 B(nu, N_2) = " + str(b) + " outside [beta - 1, beta + 1]");
    if (rel == 3 && b != inst.beta + 1) v.invariant_violations.push_back("alpha = beta + 3 but ord_2 B(nu, N_2) != beta + 1");
    if (rel == 2 && b != inst.beta && b != inst.beta + 1)
        v.invariant_violations.push_back("alpha = beta + 2 but ord_2 B(nu, N_2) not in {beta, beta + 1}");
    if (rel == 2 && b == inst.beta && !ctx.n_diagonalizable())
        v.invariant_violations.push_back("alpha = beta + 2 and ord_2 B(nu, N_2) = beta but N_2 is not diagonalizable");

    try {
        const char prefix = static_cast<char>('0' + rel);
        for (const auto& id : clause_ids()) {
            if (id[0] != prefix) continue;
            const auto r = detail::evaluate_clause_detail(ctx, id);
            if (record("clause " + id, r.inputs, r.value)) return conclude(Status::AlmostUniversal, id);
        }
        if (rel == 2 || rel == 3) {
            const Integer mod = pow2(rel);
            if (mod_floor(inst.epsilon - inst.rad_odd, mod) != 0)
                v.invariant_violations.push_back("clauses (2)/(3) failed but epsilon != rad_odd mod 2^(alpha - beta)");
            const auto r = detail::evaluate_clause_detail(ctx, "4");
            if (ctx.oracle) v.oracle = *ctx.oracle;
            if (record("clause 4", r.inputs, r.value)) return conclude(Status::AlmostUniversal, "4");
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EnumerationBudgetExceeded) throw;
        v.status = Status::Inconclusive;
        v.clause.reset();
        v.message = e.what();
        if (ctx.oracle) v.oracle = *ctx.oracle;
        return v;
    }
    return conclude(Status::NotAlmostUniversal, "exhausted");
}

/// True iff the verdict lies on the spinor-exceptional branch: all clauses failed with alpha - beta in {2, 3}.
inline bool on_spinor_branch(const CosetInstance& inst, const Verdict& v) {
    const int rel = inst.alpha - inst.beta;
    return v.status == Status::NotAlmostUniversal && v.clause == "exhausted" && (rel == 2 || rel == 3);
}

/// Predicted exceptions for a verdict on the spinor-exceptional branch.
inline std::vector<Integer> predicted_misses(const CosetInstance& inst, const Verdict& v, std::uint64_t q_limit) {
    if (!on_spinor_branch(inst, v))
        fail(ErrorKind::PreconditionViolated, "predicted misses apply only after clauses (2)-(4) all fail");
    return predicted_misses(inst, q_limit);
}

}  // namespace tqp
