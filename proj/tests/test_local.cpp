#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace tqp;
using namespace tqp::testing;

namespace {

bool rep(const GramMatrix& g, long t, long p) { return local_represents(g, Integer(t), Integer(p)).represented; }

bool sum_of_three_squares_shape(std::int64_t t) {
    while (t % 4 == 0) t /= 4;
    return t % 8 == 7;
}

}  // namespace

TEST(Anisotropic2, Examples) {
    EXPECT_TRUE(is_anisotropic2(diag(1, 1, 1)));
    EXPECT_FALSE(is_anisotropic2(diag(1, -1, 1)));
    EXPECT_TRUE(is_anisotropic2(diag(4, 4, 4)));
}

TEST(Anisotropic2, MatchesPrimitiveZeroSearch) {
    const std::vector<long> coeffs{1, 3, 5, 7, 2, 6, 10, 14, -1, -2};
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (std::size_t j = i; j < coeffs.size(); ++j)
            for (std::size_t k = j; k < coeffs.size(); ++k) {
                const long a = coeffs[i], b = coeffs[j], c = coeffs[k];
                ASSERT_EQ(is_anisotropic2(diag(a, b, c)), !isotropic2_oracle(a, b, c)) << a << " " << b << " " << c;
            }
}

TEST(Anisotropic2, InvariantUnderUnimodularChange) {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 200; ++it) {
        const auto g = random_positive_definite(rng, 20);
        const auto u = random_unimodular_at_2(rng, 3, 3);
        EXPECT_EQ(is_anisotropic2(g), is_anisotropic2(congruent(g, u))) << g;
    }
}

TEST(LocalRepresents, Examples) {
    EXPECT_FALSE(rep(diag(1, 1, 1), 7, 2));
    EXPECT_TRUE(rep(diag(1, 1, 1), 3, 2));
    EXPECT_TRUE(rep(gram2(8, -4, 8), 24, 2));
    EXPECT_FALSE(rep(diag(2, 2, 18), 3, 3));
}

TEST(LocalRepresents, SumOfThreeSquaresAtTwo) {
    for (std::int64_t t = 1; t <= 512; ++t)
        ASSERT_EQ(rep(diag(1, 1, 1), t, 2), !sum_of_three_squares_shape(t)) << t;
}

TEST(LocalRepresents, WitnessCarriesHenselCertificate) {
    std::mt19937_64 rng(22);
    for (int it = 0; it < 200; ++it) {
        const auto g = random_positive_definite(rng, 12);
        const long p = std::vector<long>{2, 3, 5, 7}[it % 4];
        const long t = uniform(rng, 1, 400);
        const auto v = local_represents(g, Integer(t), Integer(p));
        if (!v.represented) continue;
        ASSERT_TRUE(v.witness.has_value());
        const auto& w = *v.witness;
        // gradient valuation v and residual valuation > 2v, recomputed from scratch
        int grad = 1000;
        for (const auto& c : gram_times(g, w.x))
            if (c != 0) grad = std::min(grad, ordp(Integer(2 * c), Integer(p)));
        const Integer f = eval_quadratic(g, w.x) - t;
        EXPECT_EQ(grad, w.gradient_valuation);
        if (f != 0) { EXPECT_GT(ordp(f, Integer(p)), 2 * grad); }
    }
}

TEST(LocalRepresents, MatchesModularOracleOnDiagonalForms) {
    // A reduced version of the full sweep in the acceptance binary.
    DiagonalLocalOracle o2(2, 16), o3(3, 10), o5(5, 7);
    for (long a = 1; a <= 8; ++a)
        for (long b = a; b <= 8; ++b)
            for (long c = b; c <= 12; c += 3)
                for (long t = 1; t <= 128; ++t) {
                    const auto g = diag(a, b, c);
                    ASSERT_EQ(rep(g, t, 2), o2.represents(a, b, c, t)) << a << " " << b << " " << c << " t=" << t;
                    ASSERT_EQ(rep(g, t, 3), o3.represents(a, b, c, t)) << a << " " << b << " " << c << " t=" << t;
                    ASSERT_EQ(rep(g, t, 5), o5.represents(a, b, c, t)) << a << " " << b << " " << c << " t=" << t;
                }
}

TEST(LocalRepresents, ModularOracleIsStableInThePrecision) {
    // Raising the modulus does not change any answer on the tested range.
    DiagonalLocalOracle lo2(2, 14), hi2(2, 17), lo3(3, 8), hi3(3, 11);
    for (long a : {1, 2, 3, 4, 6, 8})
        for (long b : {1, 3, 5, 12})
            for (long c : {7, 10, 16})
                for (long t = 1; t <= 256; ++t) {
                    ASSERT_EQ(lo2.represents(a, b, c, t), hi2.represents(a, b, c, t));
                    ASSERT_EQ(lo3.represents(a, b, c, t), hi3.represents(a, b, c, t));
                }
}

TEST(LocalRepresents, JordanDecisionMatchesSearchForOddPrimes) {
    std::mt19937_64 rng(23);
    const std::vector<long> primes{3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43};
    for (int it = 0; it < 150; ++it) {
        const long p = primes[it % primes.size()];
        // forms with p in the determinant exercise the non-unimodular constituents
        auto g = random_positive_definite(rng, 10);
        if (it % 2) g = congruent(diag(uniform(rng, 1, 3), p * uniform(rng, 1, 3), p * p * uniform(rng, 1, 2)),
                                  random_unimodular_at_2(rng, 3, 2));
        if (determinant(g) % p != 0 && it % 3) continue;
        const auto js = jordan_split(g, Integer(p));
        for (long t : {1L, 2L, 3L, p, 2 * p, p * p, 3 * p * p, p * p * p, least_nonresidue(Integer(p)).convert_to<long>()}) {
            const bool by_search = local_represents(g, Integer(t), Integer(p)).represented;
            const bool by_jordan = detail::odd_represents_by_jordan(js, Integer(t), Integer(p));
            ASSERT_EQ(by_search, by_jordan) << g << " p=" << p << " t=" << t;
        }
    }
}

TEST(LocalRepresents, LargePrimeUsesJordanDecision) {
    const long p = 101;
    const auto g = diag(1, p, p * p);
    EXPECT_TRUE(rep(g, 1, p));
    EXPECT_TRUE(rep(g, p, p));
    const long n = least_nonresidue(Integer(p)).convert_to<long>();
    // n is a nonresidue unit; only the unimodular rank-1 part can reach it
    EXPECT_FALSE(rep(g, n, p));
    EXPECT_TRUE(rep(g, n * p, p) == (legendre(Integer(n), Integer(p)) == 1));
}

TEST(LocalRepresents, SquareClassInvariance) {
    // t and t u^2 (u a unit) are represented together.
    std::mt19937_64 rng(24);
    for (int it = 0; it < 200; ++it) {
        const auto g = random_positive_definite(rng, 10);
        const long t = uniform(rng, 1, 200);
        EXPECT_EQ(rep(g, t, 2), rep(g, t * 9, 2));
        EXPECT_EQ(rep(g, t, 3), rep(g, t * 4, 3));
        EXPECT_EQ(rep(g, t, 5), rep(g, t * 4, 5));
    }
}

TEST(LocalRepresents, GloballyRepresentedValuesAreLocallyRepresented) {
    std::mt19937_64 rng(25);
    for (int it = 0; it < 100; ++it) {
        const auto g = random_positive_definite(rng, 15);
        const auto x = vec({uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5)});
        const Integer t = eval_quadratic(g, x);
        if (t == 0) continue;
        for (long p : {2L, 3L, 5L, 7L, 53L}) EXPECT_TRUE(local_represents(g, t, Integer(p)).represented) << g << " t=" << t;
    }
}

TEST(RepresentsAllOdd, Examples) {
    EXPECT_TRUE(represents_all_odd(diag(1, 1, 1), Integer(3)));
    EXPECT_FALSE(represents_all_odd(diag(2, 2, 18), Integer(3)));
    EXPECT_TRUE(represents_all_odd(diag(1, 1, 1), Integer(5)));
    EXPECT_THROW(represents_all_odd(diag(1, 1, 1), Integer(2)), Error);
}

TEST(RepresentsAllOdd, AgreesWithEveryTargetUpToBound) {
    std::mt19937_64 rng(26);
    for (int it = 0; it < 60; ++it) {
        const auto g = random_positive_definite(rng, 12);
        for (long p : {3L, 5L, 7L}) {
            bool every = true;
            for (long t = 1; t <= 2 * p * p * p && every; ++t) every = rep(g, t, p);
            EXPECT_EQ(represents_all_odd(g, Integer(p)), every) << g << " p=" << p;
        }
    }
}
