#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tqp/classifier.hpp"
#include "tqp/coset.hpp"
#include "tqp/spectrum.hpp"

namespace tqp {

struct VerifyOptions {
    std::uint64_t bound = 20'000;
    std::uint64_t escalated_bound = 0;  ///< 0 means 4 * bound
    std::uint64_t q_limit = 50;
    std::uint64_t q_limit_escalated = 150;
    EnumerationOptions enumeration;
};

struct VerifyResult {
    bool consistent = false;
    std::uint64_t bound = 0;  ///< bound of the last enumeration
    bool escalated = false;
    std::uint64_t top_half_exceptions = 0;  ///< exceptions in (bound / 2, bound]
    std::optional<std::uint64_t> largest_exception;
    bool spinor_branch = false;
    std::uint64_t q_limit = 0;
    std::vector<Integer> predicted;
    std::vector<Integer> confirmed;
    std::string reason;
    Spectrum spectrum;
};

namespace detail {

inline bool top_half_ok(Status status, std::uint64_t top) {
    return status == Status::AlmostUniversal ? top == 0 : top > 0;
}

inline std::uint64_t count_top_half(const Spectrum& s) {
    std::uint64_t n = 0;
    for (auto t : s.exceptions)
        if (t > s.bound / 2) ++n;
    return n;
}

}  // namespace detail

/// Cross-checks a verdict against the representation spectrum.
///
/// Almost universal verdicts must show no exceptions in (B/2, B], the others at least one; a failed
/// check is retried once at the escalated bound. On the spinor-exceptional branch at least one
/// predicted miss must be a confirmed exception, with one retry at the larger prime limit.
inline VerifyResult verify(const CosetInstance& inst, const Verdict& verdict, const VerifyOptions& opts = {}) {
    VerifyResult r;
    if (verdict.status != Status::AlmostUniversal && verdict.status != Status::NotAlmostUniversal) {
        r.reason = "verdict " + to_string(verdict.status) + " cannot be verified";
        return r;
    }
    const std::uint64_t high = opts.escalated_bound ? opts.escalated_bound : 4 * opts.bound;
    r.bound = opts.bound;
    r.spectrum = spectrum(inst, r.bound, opts.enumeration);
    r.top_half_exceptions = detail::count_top_half(r.spectrum);
    if (!detail::top_half_ok(verdict.status, r.top_half_exceptions) && high > r.bound) {
        r.escalated = true;
        r.bound = high;
        r.spectrum = spectrum(inst, r.bound, opts.enumeration);
        r.top_half_exceptions = detail::count_top_half(r.spectrum);
    }
    if (!r.spectrum.exceptions.empty()) r.largest_exception = r.spectrum.exceptions.back();
    const bool spectrum_ok = detail::top_half_ok(verdict.status, r.top_half_exceptions);

    bool spinor_ok = true;
    r.spinor_branch = on_spinor_branch(inst, verdict);
    if (r.spinor_branch) {
        for (std::uint64_t q_limit : {opts.q_limit, opts.q_limit_escalated}) {
            r.q_limit = q_limit;
            r.predicted = predicted_misses(inst, verdict, q_limit);
            r.confirmed.clear();
            for (const auto& n : r.predicted) {
                const bool hit = n <= r.bound ? !r.spectrum.represents(n.convert_to<std::uint64_t>())
                                              : !represents_H(inst, n, opts.enumeration);
                if (hit) r.confirmed.push_back(n);
            }
            if (!r.confirmed.empty() || q_limit >= opts.q_limit_escalated) break;
        }
        spinor_ok = !r.confirmed.empty();
    }

    r.consistent = spectrum_ok && spinor_ok;
    if (!spectrum_ok)
        r.reason = verdict.status == Status::AlmostUniversal
                       ? std::to_string(r.top_half_exceptions) + " exceptions in the top half of [0, " + std::to_string(r.bound) + "]"
                       : "no exception in the top half of [0, " + std::to_string(r.bound) + "]";
    else if (!spinor_ok)
        r.reason = "no predicted miss up to q = " + std::to_string(r.q_limit) + " is an exception";
    else
        r.reason = "consistent";
    return r;
}

}  // namespace tqp
