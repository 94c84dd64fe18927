#include <gtest/gtest.h>

#include <cmath>
#include <variant>

#include "flowtrap/cf.hpp"
#include "flowtrap/error.hpp"
#include "support.hpp"

namespace flowtrap {
namespace {

TEST(CfConstants, TwoDimensionalExample) {
  EXPECT_NEAR(cf_delta(1e-3, 2), 0.04, 1e-15);
  EXPECT_EQ(cf_descent_steps(cf_delta(1e-3, 2), 1e-3), 1600u);
  EXPECT_EQ(cf_outer_steps(1e-3, 2), 21u);
}

TEST(CfConstants, InitialStateIsTheCube) {
  Oracle o(catalog("trig_mix", 3, 0));
  const auto s = initial_cf_state(o, 1e-2);
  EXPECT_EQ(s.domain.rect, HyperRect::unit(3));
  EXPECT_EQ(s.domain.pivot, (Point{0.5, 0.5, 0.5}));
  EXPECT_TRUE(s.domain.all_p0());
  EXPECT_EQ(s.descent_steps, cf_descent_steps(cf_delta(1e-2, 3), 1e-2));
  EXPECT_THROW(initial_cf_state(o, 0.0), Error);
}

TEST(EdgeRatios, AcceptsHalvesAndRejectsOthers) {
  EXPECT_TRUE(edge_ratios_ok(HyperRect({0.0, 0.0}, {0.5, 1.0})));
  EXPECT_TRUE(edge_ratios_ok(HyperRect({0.0, 0.0, 0.0}, {0.5, 0.5, 0.25})));
  EXPECT_FALSE(edge_ratios_ok(HyperRect({0.0, 0.0}, {0.25, 1.0})));
  EXPECT_FALSE(edge_ratios_ok(HyperRect({0.0, 0.0}, {0.3, 1.0})));
}

TEST(Bisection, UnitSquareSplitsAxisZeroAtTheMiddle) {
  Oracle o(catalog("trig_mix", 2, 0));
  const auto s = initial_cf_state(o, 1e-2);
  const auto b = bisection_step(o, s);
  EXPECT_EQ(b.axis, 0u);
  EXPECT_EQ(b.lower, HyperRect({0.0, 0.0}, {0.5, 1.0}));
  EXPECT_EQ(b.upper, HyperRect({0.5, 0.0}, {1.0, 1.0}));
  EXPECT_EQ(b.shared.fixed_value, 0.5);
}

TEST(Bisection, PivotBarTakesTheBetterNetPoint) {
  Oracle o(testing::linear({0.0, -1.0}));
  const auto s = initial_cf_state(o, 1e-2);
  const auto b = bisection_step(o, s);
  EXPECT_LE(b.pivot_bar_value, s.domain.pivot_value);
  EXPECT_EQ(b.pivot_bar, (Point{0.5, 1.0}));
  EXPECT_EQ(b.pivot_bar_value, -1.0);
}

TEST(Descent, StationaryPivotBarExitsAfterOneGradientQuery) {
  Oracle o(make_quadratic({0.5, 0.5}));
  const auto s = initial_cf_state(o, 1e-2);
  const auto b = bisection_step(o, s);
  const auto before = o.ledger();
  const auto out = descent_step(o, b, s, 1e-2);
  ASSERT_TRUE(std::holds_alternative<FoundStationary>(out));
  EXPECT_EQ(std::get<FoundStationary>(out).grad_norm, 0.0);
  const auto after = o.ledger();
  EXPECT_EQ(after.gradient_queries - before.gradient_queries, 1u);
  EXPECT_EQ(after.value_queries, before.value_queries);
}

// The outer loop with a small net parameter so descent runs only a few
// iterations and many bisections happen.
TEST(CfProperty, InvariantsAlongTheOuterLoop) {
  const double eps = 1e-3;
  std::size_t exercised = 0;
  for (std::size_t d : {2u, 3u}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      auto f = catalog(seed % 2 ? "trig_mix" : "separable_wells", d, seed);
      Oracle o(f);
      CfState s = initial_cf_state(o, eps);
      s.delta = 2.0 * eps;
      const double sqrt_d = std::sqrt(double(d));
      for (std::size_t t = 0; s.domain.rect.diam() > eps; ++t) {
        ASSERT_LE(t, cf_outer_steps(eps, d) + d);
        const auto b = bisection_step(o, s);
        EXPECT_TRUE(edge_ratios_ok(b.lower));
        EXPECT_TRUE(edge_ratios_ok(b.upper));
        EXPECT_LE(b.pivot_bar_value, s.domain.pivot_value);
        DescentStats stats;
        const auto out = descent_step(o, b, s, eps, &stats);
        if (const auto* found = std::get_if<FoundStationary>(&out)) {
          EXPECT_LE(found->grad_norm, eps);
          EXPECT_LE(projected_gradient_norm(*f, found->point), eps);
          break;
        }
        const CfState& next = std::get<CfState>(out);
        ++exercised;
        EXPECT_GE(stats.iterations, cf_descent_steps(b.delta, eps));
        EXPECT_GE(stats.certified_decrease, double(cf_descent_steps(b.delta, eps)) * eps * eps / 2.0);
        EXPECT_TRUE(domain_certified(next.domain));
        EXPECT_TRUE(next.domain.all_p0());
        const std::size_t shared = 2 * b.axis + (next.domain.rect == b.lower ? 1 : 0);
        const auto& c = next.domain.certs[shared];
        EXPECT_EQ(c.status, CertStatus::P0);
        EXPECT_LT(c.pivot_value, c.net_min - c.delta * c.delta / 8.0);
        EXPECT_LE(next.domain.pivot_value, s.domain.pivot_value);
        EXPECT_TRUE(edge_ratios_ok(next.domain.rect));
        EXPECT_LE(next.domain.rect.diam(), std::pow(0.5, double((t + 1) / d)) * sqrt_d + 1e-12);
        s = next;
      }
    }
  }
  EXPECT_GT(exercised, 10u);
}

class CfRun : public ::testing::TestWithParam<std::tuple<std::string, std::size_t, double>> {};

TEST_P(CfRun, BudgetAndClaim) {
  const auto [fn, d, eps] = GetParam();
  Oracle o(catalog(fn, d, 0));
  const auto rep = run_cf(o, eps);
  EXPECT_TRUE(rep.verified);
  EXPECT_LE(rep.proj_grad_norm, eps);
  const double dd = double(d);
  const double bound = 5.0 * dd * dd * dd * std::log2(dd / eps) * std::pow(eps, -(2.0 * dd - 2.0) / (dd + 1.0));
  EXPECT_LE(double(rep.total_queries()), bound);
  EXPECT_LE(rep.depth, rep.total_queries());
  for (std::size_t t = 1; t < rep.audit.size(); ++t) {
    EXPECT_TRUE(edge_ratios_ok(rep.audit[t].domain.rect));
    EXPECT_LE(rep.audit[t].domain.pivot_value, rep.audit[t - 1].domain.pivot_value);
    EXPECT_LE(rep.audit[t].domain.rect.diam(), std::pow(0.5, double(t / d)) * std::sqrt(dd) + 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, CfRun,
                         ::testing::Combine(::testing::Values("quadratic", "trig_mix", "separable_wells"),
                                            ::testing::Values(std::size_t{2}, std::size_t{3}),
                                            ::testing::Values(1e-2, 1e-3)));

TEST(Cf, QuadraticInThreeDimensions) {
  Oracle o(catalog("quadratic", 3, 0));
  const auto rep = run_cf(o, 1e-2);
  EXPECT_LE(rep.proj_grad_norm, 1e-2);
}

}  // namespace
}  // namespace flowtrap
