#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tqp/classifier.hpp"
#include "tqp/coset.hpp"
#include "tqp/jordan.hpp"
#include "tqp/spectrum.hpp"
#include "tqp/verify.hpp"

namespace tqp::io {

using Json = nlohmann::ordered_json;

struct InstanceEcho {
    std::string form;  ///< "polynomial" or "lattice"
    std::vector<Integer> quadratic;  ///< polynomial form only
    std::vector<Integer> linear;
    Integer constant = 0;
    std::vector<Integer> gram;  ///< canonical lattice form (upper triangle); empty if unavailable
    std::vector<Integer> w;

    friend bool operator==(const InstanceEcho&, const InstanceEcho&) = default;
};

struct InvariantsSummary {
    Integer conductor;
    int alpha = 0;
    int beta = 0;
    Integer q_nu;
    Integer epsilon;
    Integer det;
    int ord2_det = 0;
    int lambda = 1;
    Integer rad_odd;
    std::vector<Integer> odd_primes;
    int b_nu_exp = 0;
    std::string jordan2;
    std::vector<Integer> g2_gram;
    int g2_norm_exp2 = 0;

    friend bool operator==(const InvariantsSummary&, const InvariantsSummary&) = default;
};

struct SpectrumSummary {
    std::uint64_t bound = 0;
    std::vector<std::uint64_t> exceptions;
    std::optional<std::uint64_t> largest_exception;
    std::optional<std::uint64_t> largest_gap;  ///< widest distance between consecutive exceptions
    std::uint64_t points_visited = 0;

    friend bool operator==(const SpectrumSummary&, const SpectrumSummary&) = default;
};

struct VerificationSummary {
    bool consistent = false;
    std::uint64_t bound = 0;
    bool escalated = false;
    std::uint64_t top_half_exceptions = 0;
    bool spinor_branch = false;
    std::uint64_t q_limit = 0;
    std::vector<Integer> predicted;
    std::vector<Integer> confirmed;
    std::string reason;

    friend bool operator==(const VerificationSummary&, const VerificationSummary&) = default;
};

struct Report {
    std::string command;
    std::string source;
    InstanceEcho instance;
    std::optional<InvariantsSummary> invariants;
    Status status = Status::Inconclusive;
    std::optional<std::string> clause;
    std::optional<std::string> error;  ///< error kind when the instance was rejected or a limit was hit
    std::string message;
    std::vector<TraceEntry> trace;
    OracleBudget oracle;
    std::vector<std::string> invariant_violations;
    std::optional<SpectrumSummary> spectrum;
    std::optional<VerificationSummary> verification;

    friend bool operator==(const Report&, const Report&) = default;
};

inline InstanceEcho echo(const InstanceDescription& in) {
    InstanceEcho e;
    if (const auto* p = std::get_if<PolynomialInput>(&in)) {
        e.form = "polynomial";
        e.quadratic.assign(p->quadratic.begin(), p->quadratic.end());
        e.linear.assign(p->linear.begin(), p->linear.end());
        e.constant = p->constant;
    } else {
        const auto& l = std::get<LatticeInput>(in);
        e.form = "lattice";
        e.gram = l.gram.upper();
        e.w = l.w;
    }
    return e;
}

inline Report make_report(std::string command, std::string source, const InstanceDescription& in) {
    Report r;
    r.command = std::move(command);
    r.source = std::move(source);
    r.instance = echo(in);
    return r;
}

inline void attach_instance(Report& r, const CosetInstance& inst) {
    r.instance.gram = inst.gram.upper();
    r.instance.w = inst.w;
    InvariantsSummary s;
    s.conductor = inst.conductor;
    s.alpha = inst.alpha;
    s.beta = inst.beta;
    s.q_nu = inst.q_nu;
    s.epsilon = inst.epsilon;
    s.det = inst.det;
    s.ord2_det = inst.ord2_det;
    s.lambda = inst.lambda;
    s.rad_odd = inst.rad_odd;
    s.odd_primes = inst.odd_primes;
    s.b_nu_exp = inst.b_nu_exp.value();
    s.jordan2 = jordan_split(inst.gram, Integer(2)).summary();
    const auto g2 = complement_G2(inst);
    s.g2_gram = g2.gram.upper();
    s.g2_norm_exp2 = g2.norm_exp2.value();
    r.invariants = std::move(s);
}

inline void attach_verdict(Report& r, const Verdict& v) {
    r.status = v.status;
    r.clause = v.clause;
    r.trace = v.trace;
    r.oracle = v.oracle;
    r.invariant_violations = v.invariant_violations;
    if (v.status == Status::Inconclusive) {
        r.error = to_string(ErrorKind::EnumerationBudgetExceeded);
        r.message = v.message;
    }
}

/// Records a rejected instance or resource failure.
inline void attach_error(Report& r, const Error& e) {
    switch (e.kind()) {
        case ErrorKind::AssumptionViolated: r.status = Status::AssumptionViolated; break;
        case ErrorKind::OutOfScope:
        case ErrorKind::NonClassicForm:
        case ErrorKind::NotPositiveDefinite: r.status = Status::OutOfScope; break;
        default: r.status = Status::Inconclusive; break;
    }
    r.clause.reset();
    r.error = to_string(e.kind());
    r.message = e.what();
}

inline SpectrumSummary summarize(const Spectrum& s) {
    SpectrumSummary out;
    out.bound = s.bound;
    out.exceptions = s.exceptions;
    out.points_visited = s.points_visited;
    if (!s.exceptions.empty()) out.largest_exception = s.exceptions.back();
    for (std::size_t i = 1; i < s.exceptions.size(); ++i) {
        const auto gap = s.exceptions[i] - s.exceptions[i - 1];
        if (!out.largest_gap || gap > *out.largest_gap) out.largest_gap = gap;
    }
    return out;
}

inline void attach_spectrum(Report& r, const Spectrum& s) { r.spectrum = summarize(s); }

inline void attach_verification(Report& r, const VerifyResult& v) {
    r.spectrum = summarize(v.spectrum);
    VerificationSummary s;
    s.consistent = v.consistent;
    s.bound = v.bound;
    s.escalated = v.escalated;
    s.top_half_exceptions = v.top_half_exceptions;
    s.spinor_branch = v.spinor_branch;
    s.q_limit = v.q_limit;
    s.predicted = v.predicted;
    s.confirmed = v.confirmed;
    s.reason = v.reason;
    r.verification = std::move(s);
}

// ---- JSON ----

namespace detail {

inline Json int_json(const Integer& v) {
    if (fits_int64(v)) return v.convert_to<std::int64_t>();
    return v.str();
}

inline Integer int_from(const Json& j) {
    if (j.is_string()) return Integer(j.get<std::string>());
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
    fail(ErrorKind::Parse, "expected an integer in machine report");
}

inline Json ints_json(const std::vector<Integer>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(int_json(x));
    return a;
}

inline std::vector<Integer> ints_from(const Json& j) {
    std::vector<Integer> out;
    for (const auto& x : j) out.push_back(int_from(x));
    return out;
}

template <class T>
Json opt_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> opt_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

}  // namespace detail

inline Json to_json(const Report& r) {
    using namespace detail;
    Json j;
    j["command"] = r.command;
    j["source"] = r.source;

    Json inst;
    inst["form"] = r.instance.form;
    if (r.instance.form == "polynomial") {
        inst["quadratic"] = ints_json(r.instance.quadratic);
        inst["linear"] = ints_json(r.instance.linear);
        inst["constant"] = int_json(r.instance.constant);
    }
    inst["gram"] = r.instance.gram.empty() ? Json(nullptr) : ints_json(r.instance.gram);
    inst["w"] = r.instance.w.empty() ? Json(nullptr) : ints_json(r.instance.w);
    j["instance"] = inst;

    if (r.invariants) {
        const auto& s = *r.invariants;
        Json inv;
        inv["conductor"] = int_json(s.conductor);
        inv["alpha"] = s.alpha;
        inv["beta"] = s.beta;
        inv["q_nu"] = int_json(s.q_nu);
        inv["epsilon"] = int_json(s.epsilon);
        inv["det"] = int_json(s.det);
        inv["ord2_det"] = s.ord2_det;
        inv["lambda"] = s.lambda;
        inv["rad_odd"] = int_json(s.rad_odd);
        inv["odd_primes"] = ints_json(s.odd_primes);
        inv["b_nu_exp"] = s.b_nu_exp;
        inv["jordan2"] = s.jordan2;
        inv["g2_gram"] = ints_json(s.g2_gram);
        inv["g2_norm_exp2"] = s.g2_norm_exp2;
        j["invariants"] = inv;
    } else {
        j["invariants"] = nullptr;
    }

    Json verdict;
    verdict["status"] = to_string(r.status);
    verdict["clause"] = opt_json(r.clause);
    verdict["error"] = opt_json(r.error);
    verdict["message"] = r.message;
    Json trace = Json::array();
    for (const auto& t : r.trace) {
        Json e;
        e["predicate"] = t.predicate;
        e["inputs"] = t.inputs;
        e["value"] = t.value;
        trace.push_back(e);
    }
    verdict["trace"] = trace;
    Json oracle;
    oracle["ran"] = r.oracle.ran;
    oracle["target"] = r.oracle.target ? int_json(*r.oracle.target) : Json(nullptr);
    oracle["budget"] = r.oracle.budget;
    verdict["oracle"] = oracle;
    verdict["invariant_violations"] = r.invariant_violations;
    j["verdict"] = verdict;

    if (r.spectrum) {
        const auto& s = *r.spectrum;
        Json sp;
        sp["bound"] = s.bound;
        sp["exception_count"] = s.exceptions.size();
        sp["exceptions"] = s.exceptions;
        sp["largest_exception"] = opt_json(s.largest_exception);
        sp["largest_gap"] = opt_json(s.largest_gap);
        sp["points_visited"] = s.points_visited;
        j["spectrum"] = sp;
    } else {
        j["spectrum"] = nullptr;
    }

    if (r.verification) {
        const auto& v = *r.verification;
        Json ver;
        ver["consistent"] = v.consistent;
        ver["bound"] = v.bound;
        ver["escalated"] = v.escalated;
        ver["top_half_exceptions"] = v.top_half_exceptions;
        ver["spinor_branch"] = v.spinor_branch;
        ver["q_limit"] = v.q_limit;
        ver["predicted"] = ints_json(v.predicted);
        ver["confirmed"] = ints_json(v.confirmed);
        ver["reason"] = v.reason;
        j["verification"] = ver;
    } else {
        j["verification"] = nullptr;
    }
    return j;
}

inline Report report_from_json(const Json& j) {
    using namespace detail;
    try {
        Report r;
        r.command = j.at("command").get<std::string>();
        r.source = j.at("source").get<std::string>();
        const auto& inst = j.at("instance");
        r.instance.form = inst.at("form").get<std::string>();
        if (r.instance.form == "polynomial") {
            r.instance.quadratic = ints_from(inst.at("quadratic"));
            r.instance.linear = ints_from(inst.at("linear"));
            r.instance.constant = int_from(inst.at("constant"));
        }
        if (!inst.at("gram").is_null()) r.instance.gram = ints_from(inst.at("gram"));
        if (!inst.at("w").is_null()) r.instance.w = ints_from(inst.at("w"));

        if (const auto& inv = j.at("invariants"); !inv.is_null()) {
            InvariantsSummary s;
            s.conductor = int_from(inv.at("conductor"));
            s.alpha = inv.at("alpha").get<int>();
            s.beta = inv.at("beta").get<int>();
            s.q_nu = int_from(inv.at("q_nu"));
            s.epsilon = int_from(inv.at("epsilon"));
            s.det = int_from(inv.at("det"));
            s.ord2_det = inv.at("ord2_det").get<int>();
            s.lambda = inv.at("lambda").get<int>();
            s.rad_odd = int_from(inv.at("rad_odd"));
            s.odd_primes = ints_from(inv.at("odd_primes"));
            s.b_nu_exp = inv.at("b_nu_exp").get<int>();
            s.jordan2 = inv.at("jordan2").get<std::string>();
            s.g2_gram = ints_from(inv.at("g2_gram"));
            s.g2_norm_exp2 = inv.at("g2_norm_exp2").get<int>();
            r.invariants = std::move(s);
        }

        const auto& v = j.at("verdict");
        const auto status = status_from_string(v.at("status").get<std::string>());
        if (!status) fail(ErrorKind::Parse, "unknown status in machine report");
        r.status = *status;
        r.clause = opt_from<std::string>(v.at("clause"));
        r.error = opt_from<std::string>(v.at("error"));
        r.message = v.at("message").get<std::string>();
        for (const auto& t : v.at("trace"))
            r.trace.push_back({t.at("predicate").get<std::string>(), t.at("inputs").get<std::string>(), t.at("value").get<bool>()});
        const auto& o = v.at("oracle");
        r.oracle.ran = o.at("ran").get<bool>();
        if (!o.at("target").is_null()) r.oracle.target = int_from(o.at("target"));
        r.oracle.budget = o.at("budget").get<std::uint64_t>();
        r.invariant_violations = v.at("invariant_violations").get<std::vector<std::string>>();

        if (const auto& sp = j.at("spectrum"); !sp.is_null()) {
            SpectrumSummary s;
            s.bound = sp.at("bound").get<std::uint64_t>();
            s.exceptions = sp.at("exceptions").get<std::vector<std::uint64_t>>();
            s.largest_exception = opt_from<std::uint64_t>(sp.at("largest_exception"));
            s.largest_gap = opt_from<std::uint64_t>(sp.at("largest_gap"));
            s.points_visited = sp.at("points_visited").get<std::uint64_t>();
            r.spectrum = std::move(s);
        }
        if (const auto& ver = j.at("verification"); !ver.is_null()) {
            VerificationSummary s;
            s.consistent = ver.at("consistent").get<bool>();
            s.bound = ver.at("bound").get<std::uint64_t>();
            s.escalated = ver.at("escalated").get<bool>();
            s.top_half_exceptions = ver.at("top_half_exceptions").get<std::uint64_t>();
            s.spinor_branch = ver.at("spinor_branch").get<bool>();
            s.q_limit = ver.at("q_limit").get<std::uint64_t>();
            s.predicted = ints_from(ver.at("predicted"));
            s.confirmed = ints_from(ver.at("confirmed"));
            s.reason = ver.at("reason").get<std::string>();
            r.verification = std::move(s);
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("malformed machine report: ") + e.what());
    }
}

inline std::string render_machine(const Report& r) { return to_json(r).dump(2) + "\n"; }

inline Report parse_machine(const std::string& text) {
    try {
        return report_from_json(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("malformed machine report: ") + e.what());
    }
}

// ---- text ----

namespace detail {

inline std::string list_str(const std::vector<Integer>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
    return out + "]";
}

inline std::string list_str(const std::vector<std::uint64_t>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
    return out + "]";
}

}  // namespace detail

inline std::string render_text(const Report& r) {
    using detail::list_str;
    std::ostringstream os;
    os << "command: " << r.command << "\n";
    os << "source: " << r.source << "\n";
    os << "instance: form " << r.instance.form << "\n";
    if (r.instance.form == "polynomial") {
        os << "  quadratic: " << list_str(r.instance.quadratic) << "\n";
        os << "  linear: " << list_str(r.instance.linear) << "\n";
        os << "  constant: " << r.instance.constant << " (ignored)\n";
    }
    if (!r.instance.gram.empty()) os << "  gram: " << list_str(r.instance.gram) << "\n";
    if (!r.instance.w.empty()) os << "  w: " << list_str(r.instance.w) << "\n";
    if (r.invariants) {
        const auto& s = *r.invariants;
        os << "invariants:\n";
        os << "  conductor: " << s.conductor << "\n";
        os << "  alpha: " << s.alpha << "\n";
        os << "  beta: " << s.beta << "\n";
        os << "  q_nu: " << s.q_nu << "\n";
        os << "  epsilon: " << s.epsilon << "\n";
        os << "  det: " << s.det << "\n";
        os << "  ord2_det: " << s.ord2_det << "\n";
        os << "  lambda: " << s.lambda << "\n";
        os << "  rad_odd: " << s.rad_odd << "\n";
        os << "  odd_primes: " << list_str(s.odd_primes) << "\n";
        os << "  b_nu_exp: " << s.b_nu_exp << "\n";
        os << "  jordan2: " << s.jordan2 << "\n";
        os << "  g2_gram: " << list_str(s.g2_gram) << "\n";
        os << "  g2_norm_exp2: " << s.g2_norm_exp2 << "\n";
    }
    os << "verdict: " << to_string(r.status);
    if (r.clause) os << " (clause " << *r.clause << ")";
    os << "\n";
    if (r.error) os << "  error: " << *r.error << "\n";
    if (!r.message.empty()) os << "  message: " << r.message << "\n";
    if (!r.trace.empty()) {
        os << "trace:\n";
        for (const auto& t : r.trace)
            os << "  " << t.predicate << " [" << t.inputs << "] -> " << (t.value ? "true" : "false") << "\n";
    }
    if (r.oracle.ran)
        os << "oracle: ran=true target=" << (r.oracle.target ? r.oracle.target->str() : "none")
           << " budget=" << r.oracle.budget << "\n";
    for (const auto& v : r.invariant_violations) os << "invariant violation: " << v << "\n";
    if (r.spectrum) {
        const auto& s = *r.spectrum;
        os << "spectrum: bound " << s.bound << ", " << s.exceptions.size() << " exceptions\n";
        os << "  exceptions: " << (s.exceptions.empty() ? std::string("none") : list_str(s.exceptions)) << "\n";
        os << "  largest_exception: " << (s.largest_exception ? std::to_string(*s.largest_exception) : "none") << "\n";
        os << "  largest_gap: " << (s.largest_gap ? std::to_string(*s.largest_gap) : "none") << "\n";
        os << "  points_visited: " << s.points_visited << "\n";
    }
    if (r.verification) {
        const auto& v = *r.verification;
        os << "verification: " << (v.consistent ? "consistent" : "INCONSISTENT") << "\n";
        os << "  reason: " << v.reason << "\n";
        os << "  bound: " << v.bound << (v.escalated ? " (escalated)" : "") << "\n";
        os << "  top_half_exceptions: " << v.top_half_exceptions << "\n";
        os << "  spinor_branch: " << (v.spinor_branch ? "true" : "false") << "\n";
        if (v.spinor_branch) {
            os << "  q_limit: " << v.q_limit << "\n";
            os << "  predicted: " << list_str(v.predicted) << "\n";
            os << "  confirmed: " << list_str(v.confirmed) << "\n";
        }
    }
    return os.str();
}

}  // namespace tqp::io
