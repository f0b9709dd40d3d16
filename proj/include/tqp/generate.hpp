#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tqp/coset.hpp"
#include "tqp/error.hpp"

namespace tqp {

struct GeneratorOptions {
    std::size_t count = 1;
    std::uint64_t seed = 1;
    std::int64_t entry_bound = 8;
    std::uint64_t max_rejections = 1'000'000;
    FactorOptions factor;
};

namespace detail {

// Uniform on [lo, hi]; the mapping is fixed so corpora match across standard libraries.
inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

}  // namespace detail

/// Rejection-samples valid conductor-2 instances: positive definite Gram matrices with diagonal in
/// [1, E], off-diagonal entries in [-E, E], and w in {0,1}^3 \ {0}. Deterministic for a fixed seed.
inline std::vector<CosetInstance> generate_instances(const GeneratorOptions& opts) {
    if (opts.entry_bound < 1) fail(ErrorKind::InvalidArgument, "entry bound must be positive");
    std::mt19937_64 rng(opts.seed);
    std::vector<CosetInstance> out;
    std::uint64_t rejections = 0;
    const std::int64_t e = opts.entry_bound;
    while (out.size() < opts.count) {
        const std::vector<Integer> upper{detail::draw(rng, 1, e), detail::draw(rng, -e, e), detail::draw(rng, -e, e),
                                         detail::draw(rng, 1, e), detail::draw(rng, -e, e), detail::draw(rng, 1, e)};
        const auto mask = detail::draw(rng, 1, 7);
        const Vector w{Integer(mask & 1), Integer((mask >> 1) & 1), Integer((mask >> 2) & 1)};
        try {
            out.push_back(normalize(LatticeInput{GramMatrix::from_upper(upper), w, 0}, opts.factor));
        } catch (const Error& err) {
            if (err.kind() == ErrorKind::FactorizationLimit) throw;
            if (++rejections > opts.max_rejections)
                fail(ErrorKind::GiveUp, "generator gave up after " + std::to_string(opts.max_rejections) +
                                            " rejected samples with " + std::to_string(out.size()) + " of " +
                                            std::to_string(opts.count) + " instances");
        }
    }
    return out;
}

}  // namespace tqp
