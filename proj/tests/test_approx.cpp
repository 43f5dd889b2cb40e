#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "musielak/approx.hpp"
#include "oracles.hpp"

using namespace musielak;

namespace {
MusielakFunction power() { return catalog::get("power_tu2", {}, TDomain::interval(0, 1)); }
}  // namespace

TEST(Simple, PowerSupErrorBound) {
  const auto a = simple_approximation(power(), {0.0, 1.0, 1.0}, 10);
  EXPECT_LE(a.sup_error(), 2e-3);
  EXPECT_EQ(a.cells(), 1024u);
  EXPECT_DOUBLE_EQ(a.quantum(), 1.0 / 1024.0);
}

TEST(Simple, ExponentialSupErrorStrictlyDecreasing) {
  const auto e = catalog::get("exp_abs");
  double prev = std::numeric_limits<double>::infinity();
  for (int L = 6; L <= 12; ++L) {
    const double err = simple_approximation(e, {-1.0, 1.0, 2.0}, L).sup_error();
    EXPECT_LT(err, prev) << "L=" << L;
    prev = err;
  }
}

TEST(Simple, SupErrorNonincreasingForCatalog) {
  for (const auto& name : catalog::names()) {
    const auto m = catalog::get(name);
    const Rectangle rect{m.t_domain().lo(), m.t_domain().hi(), 2.0};
    double prev = std::numeric_limits<double>::infinity();
    for (int L = 2; L <= 10; ++L) {
      const double err = simple_approximation(m, rect, L).sup_error();
      EXPECT_LE(err, prev) << name << " L=" << L;
      prev = err;
    }
  }
}

TEST(Simple, ZeroLevelAndEvenness) {
  const auto a = simple_approximation(catalog::get("exp_abs"), {-1.0, 1.0, 2.0}, 6);
  for (double t : linspace(-1.0, 1.0, 41)) {
    EXPECT_EQ(a(t, 0.0), 0.0);
    for (double u : linspace(0.0, 2.0, 21)) EXPECT_EQ(a(t, u), a(t, -u));
  }
}

TEST(Simple, MidpointConvexityWithinTwoQuanta) {
  for (const auto& name : {"power_tu2", "exp_abs"}) {
    const auto m = catalog::get(name);
    const auto a = simple_approximation(m, {m.t_domain().lo(), m.t_domain().hi(), 2.0}, 8);
    const auto us = linspace(-2.0, 2.0, 41);
    for (double t : linspace(m.t_domain().lo(), m.t_domain().hi(), 17))
      for (double u1 : us)
        for (double u2 : us)
          EXPECT_LE(a(t, 0.5 * (u1 + u2)), 0.5 * (a(t, u1) + a(t, u2)) + 2 * a.quantum()) << name;
  }
}

TEST(Simple, ConstantInTIsQuantizationOnly) {
  const auto m = MusielakFunction::from_expression("u^2 + u^4", {}, TDomain::interval(0, 1));
  const auto a = simple_approximation(m, {0.0, 1.0, 1.5}, 7);
  EXPECT_LE(a.sup_error(), a.quantum());
}

TEST(Simple, Errors) {
  EXPECT_THROW(simple_approximation(power(), {0, 1, 1}, 0), InvalidArgument);
  EXPECT_THROW(simple_approximation(power(), {0, 1, 1}, 21), InvalidArgument);
  const auto e = catalog::get("exp_abs");
  try {
    simple_approximation(e, {0.0, 1.0, 800.0}, 4);
    FAIL();
  } catch (const UnboundedOnRectangle& x) {
    EXPECT_GT(std::fabs(x.u()), 600.0);
  }
}

TEST(Convergence, PowerOnUnitInterval) {
  const auto space = MeasureSpace::lebesgue(0, 1);
  const auto r = approx_space_convergence(power(), {0.0, 1.0, 2.0}, {6, 8, 10, 12}, ScalarField::constant(1.0),
                                          space, 1e-3);
  EXPECT_NEAR(r.target_norm, oracle::kInvSqrt3, 1e-6);
  EXPECT_TRUE(r.gaps_nonincreasing);
  EXPECT_LE(r.gaps.back(), 1e-2);
  EXPECT_TRUE(r.passed());
}

TEST(Convergence, ZeroField) {
  const auto space = MeasureSpace::lebesgue(0, 1);
  const auto r = approx_space_convergence(power(), {0.0, 1.0, 2.0}, {6, 8}, ScalarField::constant(0.0), space, 1e-3);
  for (double n : r.norms) EXPECT_EQ(n, 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(Convergence, ConstantInT) {
  const auto m = MusielakFunction::from_expression("u^2", {}, TDomain::interval(0, 1));
  const auto space = MeasureSpace::lebesgue(0, 1);
  const auto r = approx_space_convergence(m, {0.0, 1.0, 2.0}, {6, 8, 10, 12}, ScalarField::constant(1.0), space,
                                          1e-3);
  EXPECT_NEAR(r.target_norm, 1.0, 1e-6);
  EXPECT_TRUE(r.passed());
}

TEST(Convergence, AllCatalogEntriesRandomFields) {
  for (const auto& name : catalog::names()) {
    const auto m = catalog::get(name);
    const double lo = m.t_domain().lo(), hi = m.t_domain().hi();
    const auto space = MeasureSpace::lebesgue(lo, hi, {QuadratureScheme::Simpson, 201});
    const std::vector<double> nodes(space.nodes().begin(), space.nodes().end());
    for (const auto& f : oracle::random_fields(20, nodes, 77, 0.2, 2.0)) {
      const double u_max = 1.05 * *std::max_element(f.begin(), f.end()) / luxemburg_norm(f, m, space).norm;
      const auto r = approx_space_convergence(m, {lo, hi, u_max}, {6, 8, 10, 12}, f, space, 1e-3);
      EXPECT_LE(r.gaps.back(), 1e-2) << name;
    }
  }
}

TEST(Convergence, Preconditions) {
  const auto space = MeasureSpace::lebesgue(0, 2);
  EXPECT_THROW(approx_space_convergence(power(), {0, 1, 2}, {6}, ScalarField::constant(1.0), space, 1e-3),
               InvalidArgument);
  // ||3||_M = 3 * sqrt(8/3) on [0, 2], so 3 / ||3|| is about 0.61.
  EXPECT_THROW(approx_space_convergence(power(), {0, 2, 0.5}, {6}, ScalarField::constant(3.0), space, 1e-3),
               InvalidArgument);
}
