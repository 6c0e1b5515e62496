#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <rastab/errors.hpp>
#include <rastab/regions.hpp>
#include <rastab/service_rates.hpp>

#include "oracles.hpp"

namespace rastab {
namespace {

using testing::collision;

std::vector<double> alphas_of(const CollisionChannel &c) {
    std::vector<double> a;
    for (double q : c.q_solo) {
        a.push_back(alpha(c.m_destinations, q));
    }
    return a;
}

TEST(TwoSourceCondition, EmptySystemIsStable) {
    const auto mu = service_rates(ChannelModel{presets::mpr_weak()}, TransmitPolicy{{0.4, 0.7}});
    EXPECT_TRUE(stability_condition_2src(mu, ArrivalRates{{0.0, 0.0}}));
}

TEST(TwoSourceCondition, InteriorOfBackloggedRectangle) {
    for (const auto &c : {presets::mpr_weak(), presets::mpr_strong()}) {
        const auto mu = service_rates_2x2(c, TransmitPolicy{{0.6, 0.3}});
        EXPECT_TRUE(stability_condition_2src(mu, ArrivalRates{{mu.mu_b[0] - 1e-6, mu.mu_b[1] - 1e-6}}));
    }
}

TEST(TwoSourceCondition, CollisionChannelWorkedExample) {
    ServiceRates mu{{0.25, 0.25}, {0.5, 0.5}};
    EXPECT_TRUE(stability_condition_2src(mu, ArrivalRates{{0.3, 0.1}}));
    EXPECT_FALSE(stability_condition_2src(mu, ArrivalRates{{0.3, 0.2}}));
}

TEST(TwoSourceCondition, HypothesisIsChecked) {
    EXPECT_THROW(stability_condition_2src(ServiceRates{{0.3, 0.2}, {0.25, 0.4}}, ArrivalRates{{0.1, 0.1}}),
                 HypothesisError);
}

TEST(TwoSourceCondition, AgreesWithBoundaryFunction) {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const ChannelModel &c : {ChannelModel{presets::mpr_weak()}, ChannelModel{presets::mpr_strong()},
                                 ChannelModel{collision(2, 3, {0.7, 0.9})}}) {
        for (int trial = 0; trial < 2000; ++trial) {
            const TransmitPolicy p{{0.02 + 0.98 * u(gen), 0.02 + 0.98 * u(gen)}};
            const double l1 = 0.6 * u(gen);
            const double top = max_lambda2_at(c, RegionKind::stability_exact, l1, p);
            if (!(top > 1e-6)) {
                continue;
            }
            const auto mu = service_rates(c, p);
            EXPECT_TRUE(stability_condition_2src(mu, ArrivalRates{{l1, top - 1e-9}}));
            EXPECT_FALSE(stability_condition_2src(mu, ArrivalRates{{l1, top + 1e-9}}));
        }
    }
}

TEST(ThroughputCondition, Examples) {
    const std::vector<double> mu{0.25, 0.25};
    EXPECT_TRUE(throughput_condition(mu, ArrivalRates{{0.0, 0.0}}));
    EXPECT_TRUE(throughput_condition(mu, ArrivalRates{{0.2, 0.2}}));
    EXPECT_FALSE(throughput_condition(mu, ArrivalRates{{0.25, 0.1}}));
}

TEST(RankSources, Examples) {
    const std::vector<double> unit{1.0, 1.0, 1.0};
    auto r = rank_sources(ArrivalRates{{0.1, 0.1, 0.1}}, TransmitPolicy{{0.5, 0.5, 0.5}}, unit);
    EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1, 2}));

    const std::vector<double> two{1.0, 1.0};
    r = rank_sources(ArrivalRates{{0.1, 0.2}}, TransmitPolicy{{0.5, 0.5}}, two);
    EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1}));
    EXPECT_NEAR(r.ratios[0], 0.1, 1e-15);
    EXPECT_NEAR(r.ratios[1], 0.2, 1e-15);

    const std::vector<double> a{0.9, 0.9};
    r = rank_sources(ArrivalRates{{0.1, 0.1}}, TransmitPolicy{{0.8, 0.4}}, a);
    EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1}));
    EXPECT_NEAR(r.ratios[0], 0.02777777777777778, 1e-12);
    EXPECT_NEAR(r.ratios[1], 0.16666666666666667, 1e-12);
}

TEST(RankSources, ScaleInvariance) {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + gen() % 6;
        std::vector<double> lambda, p, a;
        for (std::size_t i = 0; i < n; ++i) {
            lambda.push_back(0.1 * u(gen));
            p.push_back(u(gen));
            a.push_back(u(gen));
        }
        const auto base = rank_sources(ArrivalRates{lambda}, TransmitPolicy{p}, a);
        for (double scale : {0.1, 3.0, 7.5}) {
            std::vector<double> scaled = lambda;
            for (double &v : scaled) {
                v *= scale;
            }
            EXPECT_EQ(rank_sources(ArrivalRates{scaled}, TransmitPolicy{p}, a).order, base.order);
        }
    }
}

TEST(RankSources, UndefinedKey) {
    const std::vector<double> a{1.0, 1.0};
    EXPECT_THROW(rank_sources(ArrivalRates{{0.1, 0.1}}, TransmitPolicy{{0.0, 0.5}}, a), std::domain_error);
}

TEST(RankBounds, SingleSource) {
    const std::vector<double> a{0.7};
    const std::vector<double> p{0.4};
    EXPECT_NEAR(sufficient_bound(a, std::vector<double>{0.1}, p).bounds[0], 0.28, 1e-15);
    EXPECT_NEAR(necessary_bound(a, std::vector<double>{0.1}, p).bounds[0], 0.28, 1e-15);
    EXPECT_TRUE(sufficient_bound(a, std::vector<double>{0.27}, p).stable);
    EXPECT_FALSE(sufficient_bound(a, std::vector<double>{0.29}, p).stable);
    EXPECT_FALSE(necessary_bound(a, std::vector<double>{0.29}, p).possibly_stable);
}

TEST(RankBounds, ZeroArrivalsAlwaysPass) {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + gen() % 6;
        std::vector<double> a, p;
        for (std::size_t i = 0; i < n; ++i) {
            a.push_back(u(gen));
            p.push_back(u(gen));
        }
        const std::vector<double> zero(n, 0.0);
        EXPECT_TRUE(sufficient_bound(a, zero, p).stable);
        EXPECT_TRUE(necessary_bound(a, zero, p).possibly_stable);
    }
}

TEST(RankBounds, SufficientImpliesNecessary) {
    std::mt19937_64 gen(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int stable_cases = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        const std::size_t n = 2 + gen() % 5;
        const auto c = collision(n, 1 + gen() % 10, std::vector<double>(n, 0.5 + 0.5 * u(gen)));
        std::vector<double> lambda, p;
        for (std::size_t i = 0; i < n; ++i) {
            p.push_back(0.02 + 0.6 * u(gen));
            lambda.push_back(0.25 * u(gen) / static_cast<double>(n));
        }
        const auto a = alphas_of(c);
        for (auto ordering : {RankOrdering::sorted, RankOrdering::index}) {
            SolverSettings s;
            s.ordering = ordering;
            if (rank_test(RegionKind::stability_lower, a, lambda, p, s)) {
                ++stable_cases;
                EXPECT_TRUE(rank_test(RegionKind::stability_upper, a, lambda, p, s));
            }
        }
    }
    EXPECT_GT(stable_cases, 1000);
}

TEST(Optimize, SingleSourceReachesAlpha) {
    const auto c = collision(1, 4, {0.75});
    const double a = alpha(4, 0.75);
    for (auto kind : {RegionKind::throughput, RegionKind::stability_lower, RegionKind::stability_upper}) {
        const auto r = optimize_lambdaN(c, {}, kind);
        EXPECT_NEAR(r.lambda[0], a, 1e-7) << to_string(kind);
        EXPECT_GT(r.p_opt[0], 0.999);
    }
}

TEST(Optimize, AlohaCorner) {
    const std::vector<double> fixed{0.25};
    const auto r = optimize_lambdaN(collision(2, 1, {1.0, 1.0}), fixed, RegionKind::throughput);
    EXPECT_NEAR(r.lambda[1], 0.25, 1e-9);
    EXPECT_NEAR(r.p_opt[0], 0.5, 1e-4);
    EXPECT_NEAR(r.p_opt[1], 0.5, 1e-4);
}

TEST(Optimize, ThroughputBeatsBruteForceGrid) {
    std::mt19937_64 gen(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const auto c = collision(3, 1 + gen() % 10, {0.5 + 0.5 * u(gen), 0.5 + 0.5 * u(gen), 0.5 + 0.5 * u(gen)});
        const std::vector<double> fixed{0.08 * u(gen), 0.08 * u(gen)};
        const auto r = optimize_lambdaN(c, fixed, RegionKind::throughput);
        const double grid = testing::brute_force_throughput(c, fixed, 101);
        EXPECT_GE(r.lambda[2], grid - 1e-12);
        EXPECT_LE(r.lambda[2], grid + 5e-3);
        // The reported policy attains the value.
        const auto mu = service_rates_collision(c, r.p_opt);
        EXPECT_GE(mu.mu_b[0], fixed[0] - 1e-9);
        EXPECT_GE(mu.mu_b[1], fixed[1] - 1e-9);
        EXPECT_NEAR(mu.mu_b[2], r.lambda[2], 1e-9);
    }
}

// Random policies never admit more than the optimizer's value, and the
// returned policy admits slightly less.
void check_rank_optimum(RegionKind kind, const CollisionChannel &c, const std::vector<double> &fixed,
                        std::uint64_t seed) {
    const SolverSettings settings;
    const auto r = optimize_lambdaN(c, fixed, kind, settings);
    ASSERT_TRUE(r.feasible);
    const auto a = alphas_of(c);
    std::vector<double> lambda = fixed;
    lambda.push_back(r.lambda.lambda.back());
    // The optimum lies on the closure: every condition holds with <=.
    const auto bounds = kind == RegionKind::stability_lower ? sufficient_bound(a, lambda, r.p_opt.p).bounds
                                                            : necessary_bound(a, lambda, r.p_opt.p).bounds;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        EXPECT_LE(lambda[k], bounds[k] + 1e-9) << to_string(kind) << " k=" << k;
    }
    EXPECT_NEAR(bounds.back(), lambda.back(), 1e-7);
    lambda.back() += 1e-6;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    for (int trial = 0; trial < 20000; ++trial) {
        std::vector<double> p;
        for (std::size_t i = 0; i < c.n_sources; ++i) {
            p.push_back(u(gen));
        }
        ASSERT_FALSE(rank_test(kind, a, lambda, p, settings)) << to_string(kind);
    }
}

TEST(Optimize, UpperBoundIsMaximal) {
    check_rank_optimum(RegionKind::stability_upper, collision(3, 4, {0.8, 0.7, 0.9}), {0.05, 0.1}, 59);
    check_rank_optimum(RegionKind::stability_upper, collision(4, 10, {0.8, 0.8, 0.8, 0.8}), {0.02, 0.03, 0.05}, 61);
}

TEST(Optimize, LowerBoundIsMaximal) {
    check_rank_optimum(RegionKind::stability_lower, collision(3, 4, {0.8, 0.7, 0.9}), {0.05, 0.1}, 67);
    check_rank_optimum(RegionKind::stability_lower, collision(4, 10, {0.8, 0.8, 0.8, 0.8}), {0.02, 0.03, 0.05}, 71);
}

TEST(Optimize, PublishedFiveSourceRow) {
    const auto c = collision(5, 10, {0.8, 0.8, 0.8, 0.8, 0.8});
    const std::vector<double> fixed(4, 0.01);
    EXPECT_NEAR(optimize_lambdaN(c, fixed, RegionKind::throughput).lambda[4], 0.1939, 3e-3);
    EXPECT_NEAR(optimize_lambdaN(c, fixed, RegionKind::stability_lower).lambda[4], 0.1939, 3e-3);
    EXPECT_NEAR(optimize_lambdaN(c, fixed, RegionKind::stability_upper).lambda[4], 0.2078, 3e-3);
}

TEST(Optimize, Sandwich) {
    std::mt19937_64 gen(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + gen() % 3;
        std::vector<double> q, fixed;
        for (std::size_t i = 0; i < n; ++i) {
            q.push_back(0.6 + 0.4 * u(gen));
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            fixed.push_back(0.05 * u(gen));
        }
        const auto c = collision(n, 1 + gen() % 10, q);
        const double lower = optimize_lambdaN(c, fixed, RegionKind::stability_lower).lambda.lambda.back();
        const double thr = optimize_lambdaN(c, fixed, RegionKind::throughput).lambda.lambda.back();
        const double upper = optimize_lambdaN(c, fixed, RegionKind::stability_upper).lambda.lambda.back();
        EXPECT_LE(lower, thr + 1e-9);
        EXPECT_LE(thr, upper + 1e-9);
    }
}

TEST(Optimize, InfeasibleFixedRates) {
    const std::vector<double> fixed{0.5, 0.5};
    const auto r = optimize_lambdaN(collision(3, 2, {0.8, 0.8, 0.8}), fixed, RegionKind::throughput);
    EXPECT_FALSE(r.feasible);
}

TEST(Boundary, ZeroFirstRate) {
    const std::vector<double> grid{0.0};
    auto b = boundary_2src(ChannelModel{collision(2, 1, {1.0, 1.0})}, RegionKind::throughput, grid);
    ASSERT_EQ(b.points.size(), 1u);
    EXPECT_NEAR(b.points[0].lambda[1], 1.0, 1e-9);
    EXPECT_NEAR(b.points[0].p_opt[1], 1.0, 1e-6);
    b = boundary_2src(ChannelModel{collision(2, 2, {0.8, 0.8})}, RegionKind::throughput, grid);
    EXPECT_NEAR(b.points[0].lambda[1], 0.96 / 1.4, 1e-9);
}

TEST(Boundary, NonIncreasingAndAboveBruteForce) {
    for (const ChannelModel &c : {ChannelModel{presets::mpr_weak()}, ChannelModel{presets::mpr_strong()}}) {
        for (auto kind : {RegionKind::throughput, RegionKind::stability_exact}) {
            const std::vector<double> grid{0.0, 0.05, 0.15, 0.3, 0.45};
            const auto b = boundary_2src(c, kind, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (i > 0) {
                    EXPECT_LE(b.points[i].lambda[1], b.points[i - 1].lambda[1] + 1e-12);
                }
                // The search resolves policies to about 1e-11.
                const double grid_best = testing::brute_force_lambda2(c, kind, grid[i], 201);
                EXPECT_GE(b.points[i].lambda[1], grid_best - 1e-9)
                    << to_string(kind) << " lambda1=" << grid[i] << " short by " << grid_best - b.points[i].lambda[1];
            }
        }
    }
}

TEST(Boundary, ThroughputAlwaysInsideExact) {
    const std::vector<double> grid{0.02, 0.1, 0.2, 0.3, 0.4, 0.5};
    for (const ChannelModel &c : {ChannelModel{presets::mpr_weak()}, ChannelModel{presets::mpr_strong()}}) {
        const auto thr = boundary_2src(c, RegionKind::throughput, grid);
        const auto exact = boundary_2src(c, RegionKind::stability_exact, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            EXPECT_LE(thr.points[i].lambda[1], exact.points[i].lambda[1] + 1e-9);
        }
    }
}

TEST(Boundary, SymmetricChannelGivesSymmetricBoundary) {
    const ChannelModel c{collision(2, 3, {0.75, 0.75})};
    for (double l1 : {0.05, 0.12, 0.2}) {
        const std::vector<double> there{l1};
        const double l2 = boundary_2src(c, RegionKind::throughput, there).points[0].lambda[1];
        const std::vector<double> back{l2};
        EXPECT_NEAR(boundary_2src(c, RegionKind::throughput, back).points[0].lambda[1], l1, 1e-7);
    }
}

TEST(Boundary, UnicastAloha) {
    const ChannelModel c{collision(2, 1, {1.0, 1.0})};
    const std::vector<double> grid{0.01, 0.1, 0.25, 0.5, 0.8};
    const auto b = boundary_2src(c, RegionKind::throughput, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected = std::pow(1.0 - std::sqrt(grid[i]), 2.0);
        EXPECT_NEAR(b.points[i].lambda[1], expected, 1e-6);
    }
}

TEST(RegionKind, NamesRoundTrip) {
    for (auto kind : {RegionKind::stability_exact, RegionKind::stability_lower, RegionKind::stability_upper,
                      RegionKind::throughput}) {
        EXPECT_EQ(region_kind_from_string(to_string(kind)), kind);
    }
    EXPECT_THROW(region_kind_from_string("nonsense"), std::invalid_argument);
}

} // namespace
} // namespace rastab
