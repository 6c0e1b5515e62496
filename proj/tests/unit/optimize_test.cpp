#include <cmath>

#include <gtest/gtest.h>

#include <rastab/optimize.hpp>

namespace rastab::optimize {
namespace {

double bowl(std::span<const double> x) {
    return -((x[0] - 0.3) * (x[0] - 0.3) + 2.0 * (x[1] - 0.7) * (x[1] - 0.7));
}

const Box unit{{0.0, 0.0}, {1.0, 1.0}};

TEST(GridSearch, KeepsBestNodesInOrder) {
    std::size_t evals = 0;
    const auto top = grid_search(bowl, unit, 11, 3, &evals);
    EXPECT_EQ(evals, 121u);
    ASSERT_EQ(top.size(), 3u);
    EXPECT_NEAR(top[0].x[0], 0.3, 1e-12);
    EXPECT_NEAR(top[0].x[1], 0.7, 1e-12);
    EXPECT_GE(top[0].value, top[1].value);
    EXPECT_GE(top[1].value, top[2].value);
}

TEST(NelderMead, FindsInteriorMaximum) {
    const auto r = nelder_mead(bowl, unit, {0.9, 0.1});
    EXPECT_NEAR(r.best.x[0], 0.3, 1e-5);
    EXPECT_NEAR(r.best.x[1], 0.7, 1e-5);
}

TEST(NelderMead, RespectsTheBox) {
    const Objective uphill = [](std::span<const double> x) { return x[0] + x[1]; };
    const auto r = nelder_mead(uphill, unit, {0.2, 0.2});
    EXPECT_LE(r.best.x[0], 1.0);
    EXPECT_LE(r.best.x[1], 1.0);
    EXPECT_NEAR(r.best.value, 2.0, 1e-5);
}

TEST(CoordinateDescent, FindsSeparableMaximum) {
    const auto r = coordinate_descent(bowl, unit, {0.0, 0.0});
    EXPECT_NEAR(r.best.x[0], 0.3, 1e-7);
    EXPECT_NEAR(r.best.x[1], 0.7, 1e-7);
}

TEST(ZoomSearch, ResolvesNarrowPeak) {
    const Objective spike = [](std::span<const double> x) { return -std::abs(x[0] - 0.123456789); };
    const Box line{{0.0}, {1.0}};
    const auto r = zoom_search(spike, line, {0.5}, 0.5);
    EXPECT_NEAR(r.best.x[0], 0.123456789, 1e-9);
}

TEST(Box, Clamp) {
    std::vector<double> x{-1.0, 2.0};
    unit.clamp(x);
    EXPECT_EQ(x, (std::vector<double>{0.0, 1.0}));
}

} // namespace
} // namespace rastab::optimize
