#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "casesens/bernoulli_sum.hpp"
#include "casesens/error.hpp"
#include "casesens/inference.hpp"
#include "casesens/power.hpp"
#include "casesens/simulation.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace casesens;

namespace {

std::vector<double> random_probs(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(n);
    for (auto& x : p) {
        // Mix in exact 0s and 1s now and then.
        const auto pick = rng() % 10;
        x = pick == 0 ? 0.0 : (pick == 1 ? 1.0 : u(rng));
    }
    return p;
}

Study random_study(std::mt19937_64& rng, int sets, int max_j) {
    std::vector<MatchedSet> out;
    for (int i = 0; i < sets; ++i) {
        MatchedSet s;
        s.set_id = i + 1;
        s.size = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_j - 1));
        s.case_exposed = rng() % 2;
        s.exposed_count =
            static_cast<int>(rng() % static_cast<unsigned>(s.size)) + (s.case_exposed ? 1 : 0);
        s.is_narrow = rng() % 3 != 0;
        out.push_back(s);
    }
    if (std::none_of(out.begin(), out.end(), [](const MatchedSet& s) { return s.is_narrow; })) {
        out[0].is_narrow = true;
    }
    return Study(out);
}

// Three pairs with one exposed subject each and every case exposed.
Study three_exposed_pairs() {
    return Study({{1, 2, 1, true, false}, {2, 2, 1, true, false}, {3, 2, 1, true, false}});
}

double binomial_sf(int n, double p, int k) {
    double total = 0.0;
    for (int j = k; j <= n; ++j) {
        total += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0)) *
                 std::pow(p, j) * std::pow(1.0 - p, n - j);
    }
    return total;
}

}  // namespace

TEST(BernoulliSum, SmallExamples) {
    EXPECT_DOUBLE_EQ(BernoulliSum({0.5, 0.5}).tail_ge(1), 0.75);
    EXPECT_NEAR(BernoulliSum({0.2, 0.3, 0.5}).tail_ge(2), 0.25, 1e-15);
    for (double p : {0.05, 0.3, 0.71}) {
        EXPECT_NEAR(BernoulliSum(std::vector<double>(10, p)).tail_ge(4), binomial_sf(10, p, 4),
                    1e-13);
    }
}

TEST(BernoulliSum, Boundaries) {
    const BernoulliSum d({0.1, 0.9, 0.4});
    EXPECT_EQ(d.tail_ge(0), 1.0);
    EXPECT_EQ(d.tail_ge(4), 0.0);
    EXPECT_EQ(d.tail_le(3), 1.0);
    EXPECT_EQ(d.tail_le(-1), 0.0);
    EXPECT_THROW(d.tail_ge(5), Error);
    EXPECT_THROW(d.tail_ge(-1), Error);
    EXPECT_THROW(BernoulliSum({0.5, 1.5}), Error);
    EXPECT_NEAR(d.mean(), 1.4, 1e-15);
    EXPECT_NEAR(d.variance(), 0.09 + 0.09 + 0.24, 1e-15);
}

TEST(BernoulliSum, MatchesEnumeration) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 1 + rng() % 12;
        const auto probs = random_probs(rng, n);
        const BernoulliSum d(probs);
        double pmf_total = 0.0;
        for (double x : d.pmf()) pmf_total += x;
        EXPECT_NEAR(pmf_total, 1.0, 1e-12);
        for (std::int64_t k = 0; k <= static_cast<std::int64_t>(n) + 1; ++k) {
            EXPECT_NEAR(d.tail_ge(k), testkit::enumerate_tail_ge(probs, k), 1e-12);
            EXPECT_NEAR(d.tail_le(k - 1), 1.0 - testkit::enumerate_tail_ge(probs, k), 1e-12);
        }
    }
}

TEST(BernoulliSum, TinyProbabilitiesKeepRelativePrecision) {
    const BernoulliSum d(std::vector<double>(50, 1e-20));
    EXPECT_NEAR(d.tail_ge(1) / 50e-20, 1.0, 1e-12);
    const BernoulliSum sure(std::vector<double>(50, 1.0 - 1e-12));
    EXPECT_NEAR(sure.tail_le(49) / 50e-12, 1.0, 1e-3);
}

TEST(BroadTest, RandomizationPValue) {
    const auto r = broad_test(three_exposed_pairs(), 1.0);
    EXPECT_DOUBLE_EQ(r.lower, 0.125);
    EXPECT_DOUBLE_EQ(r.upper, 0.125);
    EXPECT_EQ(r.statistic, 3);
    EXPECT_EQ(r.n_sets_used, 3);
}

TEST(BroadTest, GammaTwoBounds) {
    const auto r = broad_test(three_exposed_pairs(), 2.0);
    EXPECT_NEAR(r.upper, 8.0 / 27.0, 1e-15);
    EXPECT_NEAR(r.lower, 1.0 / 27.0, 1e-15);
}

TEST(BroadTest, GammaOneCollapsesAndMatchesEnumeration) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Study s = random_study(rng, 1 + static_cast<int>(rng() % 5), 6);
        const auto r = broad_test(s, 1.0);
        EXPECT_EQ(r.lower, r.upper);
        EXPECT_NEAR(r.upper, testkit::enumerate_randomization_p(s), 1e-12);
    }
}

TEST(BroadTest, EmptyStudy) {
    try {
        broad_test(Study{}, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyStudy);
    }
}

TEST(BroadTest, LessMirrorsWithOppositeAllocation) {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 50; ++trial) {
        const Study s = random_study(rng, 1 + static_cast<int>(rng() % 8), 5);
        const double g = 1.0 + static_cast<double>(rng() % 300) / 100.0;
        std::vector<double> lo, hi;
        std::int64_t y = 0;
        for (const auto& m : s.sets()) {
            const auto b = broad_bounds(m.exposed_count, m.size, g);
            lo.push_back(b.lower);
            hi.push_back(b.upper);
            y += m.case_exposed;
        }
        const auto less = broad_test(s, g, Alternative::Less);
        EXPECT_NEAR(less.upper, 1.0 - testkit::enumerate_tail_ge(lo, y + 1), 1e-12);
        EXPECT_NEAR(less.lower, 1.0 - testkit::enumerate_tail_ge(hi, y + 1), 1e-12);
    }
}

TEST(BroadTest, TwoSidedDoublesSmallerUpper) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const Study s = random_study(rng, 2 + static_cast<int>(rng() % 20), 6);
        const double g = 1.0 + static_cast<double>(rng() % 300) / 100.0;
        for (auto method : {Method::Exact, Method::Normal}) {
            const auto gt = broad_test(s, g, Alternative::Greater, method);
            const auto lt = broad_test(s, g, Alternative::Less, method);
            const auto two = broad_test(s, g, Alternative::TwoSided, method);
            EXPECT_DOUBLE_EQ(two.upper, std::min(1.0, 2.0 * std::min(gt.upper, lt.upper)));
            EXPECT_LE(two.lower, two.upper);
        }
    }
}

TEST(BroadTest, UpperMonotoneInGamma) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const Study s = random_study(rng, 3 + static_cast<int>(rng() % 30), 7);
        double prev = 0.0;
        for (double g = 1.0; g < 6.0; g += 0.25) {
            const double p = broad_test(s, g).upper;
            EXPECT_GE(p, prev - 1e-15);
            prev = p;
        }
    }
}

TEST(NarrowTest, Examples) {
    const Study one({{1, 2, 1, true, true}});
    const auto plain = narrow_test(one, {1.0, 1.0, ThetaSense::UpperOnly});
    EXPECT_DOUBLE_EQ(plain.lower, 0.5);
    EXPECT_DOUBLE_EQ(plain.upper, 0.5);
    const auto shifted = narrow_test(one, {1.0, 3.0, ThetaSense::UpperOnly});
    EXPECT_DOUBLE_EQ(shifted.upper, 0.75);
    EXPECT_DOUBLE_EQ(shifted.lower, 0.5);
}

TEST(NarrowTest, NoNarrowSets) {
    const Study none({{1, 2, 1, true, false}});
    try {
        narrow_test(none, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoNarrowSets);
        EXPECT_TRUE(is_statistical(e.code()));
    }
    EXPECT_THROW(combined_test(none, {}), Error);
}

TEST(NarrowTest, ThetaOneEqualsBroadOnNarrowSets) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const Study s = random_study(rng, 1 + static_cast<int>(rng() % 40), 6);
        const double g = 1.0 + static_cast<double>(rng() % 400) / 100.0;
        for (auto alt : {Alternative::Greater, Alternative::Less, Alternative::TwoSided}) {
            for (auto method : {Method::Exact, Method::Normal}) {
                const auto n = narrow_test(s, {g, 1.0, ThetaSense::UpperOnly}, alt, method);
                const auto b = broad_test(s.narrow_only(), g, alt, method);
                EXPECT_EQ(n.upper, b.upper);
                EXPECT_EQ(n.lower, b.lower);
                EXPECT_EQ(n.statistic, b.statistic);
            }
        }
    }
}

TEST(NarrowTest, UpperMonotoneInTheta) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const Study s = random_study(rng, 3 + static_cast<int>(rng() % 30), 6);
        double prev = 0.0;
        for (double t = 1.0; t < 4.0; t += 0.25) {
            const double p = narrow_test(s, {1.5, t, ThetaSense::UpperOnly}).upper;
            EXPECT_GE(p, prev - 1e-15);
            prev = p;
        }
    }
}

TEST(CombinedTest, BonferroniRule) {
    EXPECT_DOUBLE_EQ(bonferroni(0.01, 0.04), 0.02);
    EXPECT_DOUBLE_EQ(bonferroni(0.9, 0.8), 1.0);
}

TEST(CombinedTest, NoBiasUsesRandomizationPValues) {
    const Study s = testkit::synthetic_suicide_study();
    const Study small({{1, 3, 2, true, true}, {2, 4, 1, true, false}, {3, 2, 1, false, true}});
    for (const Study* st : {&s, &small}) {
        const auto r = combined_test(*st, {1.0, 1.0, ThetaSense::UpperOnly});
        const double pb = broad_test(*st, 1.0).upper;
        const double pn = broad_test(st->narrow_only(), 1.0).upper;
        EXPECT_DOUBLE_EQ(r.bonferroni_p, std::min(1.0, 2.0 * std::min(pb, pn)));
        EXPECT_GE(r.bonferroni_p, std::min(r.p_broad_upper, r.p_narrow_upper));
        EXPECT_LE(r.bonferroni_p, 2.0 * std::min(r.p_broad_upper, r.p_narrow_upper));
    }
    EXPECT_NEAR(combined_test(small, {}).p_narrow_upper,
                testkit::enumerate_randomization_p(small.narrow_only()), 1e-15);
}

TEST(NormalTail, StandardNormalTable) {
    const std::vector<double> p(100, 0.5);
    const auto r = normal_tail_bounds(p, p, 60);
    EXPECT_NEAR(r.upper, 0.022750131948179, 1e-12);
    EXPECT_EQ(r.method, Method::Normal);
    EXPECT_FALSE(r.zero_variance);
    const auto whole = normal_tail_bounds(p, p, 0);
    EXPECT_EQ(whole.upper, 1.0);
    EXPECT_EQ(whole.lower, 1.0);
    EXPECT_THROW(normal_tail_bounds({}, {}, 1), Error);
}

TEST(NormalTail, ZeroVarianceFallsBackToExact) {
    const std::vector<double> p{1.0, 0.0, 1.0};
    const auto hit = normal_tail_bounds(p, p, 2);
    EXPECT_TRUE(hit.zero_variance);
    EXPECT_EQ(hit.upper, 1.0);
    const auto miss = normal_tail_bounds(p, p, 3);
    EXPECT_EQ(miss.upper, 0.0);
}

TEST(NormalTail, CloseToExactOnLargeHeterogeneousSum) {
    std::mt19937_64 rng(500);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<double> p(500);
    for (auto& x : p) x = u(rng);
    double mean = 0.0;
    double var = 0.0;
    for (double x : p) {
        mean += x;
        var += x * (1.0 - x);
    }
    // Without continuity correction the gap is about half the point mass at k.
    const double tol = 0.5 / std::sqrt(2.0 * M_PI * var) + 0.005;
    const BernoulliSum exact(p);
    for (int offset : {-20, -5, 0, 5, 10, 20, 30}) {
        const auto k = static_cast<std::int64_t>(std::llround(mean)) + offset;
        EXPECT_NEAR(normal_tail_bounds(p, p, k).upper, exact.tail_ge(k), tol) << k;
    }
}

TEST(NormalTail, AgreesWithExactOnLargeStudies) {
    FavorableModel model;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto rng = replicate_engine(seed, 0);
        const Study s = generate_study(model, 600, rng);
        for (double g : {1.0, 2.0, 3.0, 4.0}) {
            const auto exact = broad_test(s, g, Alternative::Greater, Method::Exact);
            const auto normal = broad_test(s, g, Alternative::Greater, Method::Normal);
            EXPECT_NEAR(exact.upper, normal.upper, 0.03);
            EXPECT_NEAR(exact.lower, normal.lower, 0.03);
        }
    }
}

TEST(Names, ParseAndPrint) {
    EXPECT_EQ(parse_alternative("two-sided"), Alternative::TwoSided);
    EXPECT_EQ(parse_alternative("two_sided"), Alternative::TwoSided);
    EXPECT_EQ(to_string(Alternative::TwoSided), "two-sided");
    EXPECT_EQ(parse_method("normal"), Method::Normal);
    EXPECT_EQ(parse_test_kind("combined"), TestKind::Combined);
    EXPECT_THROW(parse_method("bootstrap"), Error);
}
