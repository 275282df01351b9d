#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qwi/oracle.hpp"
#include "test_support.hpp"

using namespace qwi;
using namespace qwi::oracle;
using qwi::testing::single_point;
using qwi::testing::symmetric_pair;

namespace {

double distance(const TransferMatrix& a, const TransferMatrix& b) {
    return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                     std::abs(a.m22 - b.m22)});
}

} // namespace

TEST(RegionMatrix, ZeroWidthIsIdentity) {
    for (const double e : {-1.0, 0.0, 2.0})
        EXPECT_EQ(distance(region_matrix(e, 0.0, {}, 0.0), TransferMatrix{}), 0.0);
}

TEST(RegionMatrix, PlaneWave) {
    // k = 1: [[cos, sin], [-sin, cos]]
    const auto m = region_matrix(0.5, 0.0, {}, 0.7);
    EXPECT_NEAR(m.m11.real(), std::cos(0.7), 1e-15);
    EXPECT_NEAR(m.m12.real(), std::sin(0.7), 1e-15);
    EXPECT_NEAR(m.m21.real(), -std::sin(0.7), 1e-15);
    const auto free = region_matrix(1.0, 1.0, {}, 2.0);
    EXPECT_EQ(free.m12, complex{2.0});
    EXPECT_EQ(free.m21, complex{});
}

TEST(RegionMatrix, UnimodularAndComposable) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> e(-5.0, 5.0);
    std::uniform_real_distribution<double> w(0.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double energy = e(rng), height = e(rng), dx = w(rng), split = dx * unit(rng);
        const auto whole = region_matrix(energy, height, {}, dx);
        EXPECT_LE(std::abs(whole.determinant() - 1.0), 1e-13 * std::max(1.0, std::norm(whole.m11)));
        const auto parts = region_matrix(energy, height, {}, dx - split) * region_matrix(energy, height, {}, split);
        const double scale = std::max(1.0, std::abs(whole.m11) + std::abs(whole.m12) + std::abs(whole.m21));
        EXPECT_LE(distance(parts, whole), 1e-13 * scale);
    }
}

TEST(PointMatrix, Examples) {
    EXPECT_EQ(distance(point_matrix({0.0, 0.0, 0.0}, {}), TransferMatrix{}), 0.0);
    const auto d = point_matrix({0.0, 1.5, 0.0}, {});
    EXPECT_EQ(d.m11, complex{1.0});
    EXPECT_EQ(d.m12, complex{});
    EXPECT_EQ(d.m21, complex{3.0});
    EXPECT_EQ(d.m22, complex{1.0});
    const auto dp = point_matrix({0.0, -1.0, 0.5}, {});
    EXPECT_NEAR(dp.m11.real(), 3.0, 1e-15);
    EXPECT_NEAR(dp.m22.real(), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(dp.m21.real(), -2.0 / 0.75, 1e-15);
    EXPECT_THROW(point_matrix({0.0, 1.0, 1.0}, {}), domain_error);
    EXPECT_THROW(point_matrix({0.0, 1.0, -4.0}, {2.0, 1.0}), domain_error);
}

TEST(PointMatrix, Unimodular) {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> a(-3.0, 3.0);
    std::uniform_real_distribution<double> b(-0.95, 0.95);
    for (int i = 0; i < 500; ++i)
        EXPECT_LE(std::abs(point_matrix({0.0, a(rng), b(rng)}, {}).determinant() - 1.0), 1e-13);
}

TEST(OracleScatter, SingleDelta) {
    const auto res = oracle_scatter(single_point(1.0), 0.5);
    EXPECT_NEAR(res.R, 0.5, 1e-15);
    EXPECT_NEAR(res.T, 0.5, 1e-15);
}

TEST(OracleScatter, DeltaDeltaPrimeIsUnitary) {
    const auto res = oracle_scatter(single_point(-1.0, 0.5), 0.5);
    EXPECT_LE(std::abs(res.R + res.T - 1.0), 1e-12);
    EXPECT_NEAR(res.T, 0.5625 / 2.5625, 1e-14);
}

TEST(OracleScatter, UnitaryOnRandomSpecs) {
    qwi::testing::SpecGenerator gen(53);
    std::uniform_real_distribution<double> e(0.01, 8.0);
    for (int i = 0; i < 500; ++i) {
        const auto spec = gen();
        const double energy = std::max(spec.left_asymptote(), spec.right_asymptote()) + e(gen.engine());
        for (const auto side : {IncidentSide::left, IncidentSide::right})
            EXPECT_LE(std::abs(oracle_scatter(spec, energy, side).unitarity_defect), 1e-12);
    }
}

TEST(OracleScatter, NoChannelThrows) {
    const auto spec = qwi::testing::from_text("segment -inf 0 2\nsegment 0 inf 0\n");
    EXPECT_THROW(oracle_scatter(spec, 1.0, IncidentSide::left), domain_error);
    const auto res = oracle_scatter(spec, 1.0, IncidentSide::right);
    EXPECT_NEAR(res.R, 1.0, 1e-14);
    EXPECT_EQ(res.T, 0.0);
}

TEST(OracleBoundStates, Examples) {
    const auto single = oracle_bound_states(single_point(-1.0), -10.0, 1e-13);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_NEAR(single[0].energy, -0.5, 1e-12);

    const auto pair = oracle_bound_states(symmetric_pair(-1.0, 1.0), -10.0, 1e-13);
    ASSERT_EQ(pair.size(), 2u);
    EXPECT_NEAR(pair[0].energy, -0.614782536287897672, 1e-12);
    EXPECT_NEAR(pair[1].energy, -0.317454785273520666, 1e-12);

    EXPECT_TRUE(oracle_bound_states(PotentialSpec{}, -10.0, 1e-13).empty());
    EXPECT_TRUE(oracle_bound_states(single_point(-1.0), 1.0, 1e-13).empty());
}

TEST(OracleBoundStates, ClosePairInsideOneGridCell) {
    // Distant delta wells: kappa = 1 +- exp(-2 kappa a), split far below the grid spacing.
    const double a = 4.0;
    auto level = [&](double sign) {
        double kappa = 1.0;
        for (int i = 0; i < 200; ++i)
            kappa = 1.0 + sign * std::exp(-2.0 * kappa * a);
        return -0.5 * kappa * kappa;
    };
    const auto states = oracle_bound_states(symmetric_pair(-1.0, a), -1e5, 1e-14, 64);
    ASSERT_EQ(states.size(), 2u);
    EXPECT_NEAR(states[0].energy, level(1.0), 1e-12);
    EXPECT_NEAR(states[1].energy, level(-1.0), 1e-12);
}

TEST(TotalMatrix, SpansFirstToLastBoundary) {
    const auto spec = symmetric_pair(0.0, 1.0);
    const auto m = total_matrix(spec, 0.5);
    const auto free = region_matrix(0.5, 0.0, {}, 2.0);
    EXPECT_LE(distance(m, free), 1e-15);
    EXPECT_EQ(distance(total_matrix(PotentialSpec{}, 0.3), TransferMatrix{}), 0.0);
}
