#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "musielak/measure.hpp"
#include "oracles.hpp"

using namespace musielak;

TEST(Integrate, SinglePointMass) {
  const auto s = MeasureSpace::discrete({{0.5, 2.0}});
  EXPECT_DOUBLE_EQ(integrate(ScalarField::constant(3.0), s), 6.0);
}

TEST(Integrate, SquareOnUnitInterval) {
  const auto s = MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::Simpson, 101});
  EXPECT_NEAR(integrate(ScalarField::parse("t^2"), s), 1.0 / 3.0, 1e-9);
}

TEST(Integrate, ZeroField) {
  const auto s = MeasureSpace::lebesgue(-1.0, 2.0);
  EXPECT_EQ(integrate(ScalarField::constant(0.0), s), 0.0);
}

TEST(Integrate, LinearAndMonotone) {
  const auto s = MeasureSpace::lebesgue(0.0, 2.0, {QuadratureScheme::Simpson, 201});
  const auto f = ScalarField::parse("exp(-t)").values_on(s);
  const auto g = ScalarField::parse("t + 1").values_on(s);
  std::vector<double> h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[i] = 2.0 * f[i] + 3.0 * g[i];
  const double lhs = integrate_values(h, s);
  const double rhs = 2.0 * integrate_values(f, s) + 3.0 * integrate_values(g, s);
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::fabs(rhs));
  std::vector<double> bigger(g);
  for (double& v : bigger) v += 0.1;
  EXPECT_GE(integrate_values(bigger, s), integrate_values(g, s));
}

TEST(Integrate, SimpsonConvergesAtFourthOrder) {
  const double exact = std::exp(1.0) - 1.0;
  double prev = 0.0;
  for (std::size_t n : {11, 21, 41, 81}) {
    const auto s = MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::Simpson, n});
    const double err = std::fabs(integrate(ScalarField::parse("exp(t)"), s) - exact);
    if (prev > 0.0) EXPECT_GE(prev / err, 8.0);
    prev = err;
  }
}

TEST(Integrate, OtherRules) {
  const auto gl = MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::GaussLegendre, 8});
  EXPECT_NEAR(integrate(ScalarField::parse("t^7 + t^3"), gl), 1.0 / 8.0 + 1.0 / 4.0, 1e-14);
  const auto mp = MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::Midpoint, 1000});
  EXPECT_NEAR(integrate(ScalarField::parse("t^2"), mp), 1.0 / 3.0, 1e-6);
  EXPECT_THROW(MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::Simpson, 100}), InvalidArgument);
}

TEST(Integrate, DensityWeightsNodes) {
  dsl::Grammar g;
  g.allow_u = false;
  const auto s = MeasureSpace::interval(0.0, 1.0, dsl::parse("2*t", g), {QuadratureScheme::Simpson, 101});
  EXPECT_NEAR(s.mass(), 1.0, 1e-12);
  EXPECT_NEAR(integrate(ScalarField::parse("t"), s), 2.0 / 3.0, 1e-12);
}

TEST(Integrate, BitDeterministic) {
  const auto s = MeasureSpace::lebesgue(0.0, 3.0, {QuadratureScheme::Simpson, 10001});
  const auto f = ScalarField::parse("exp(t)*log(1 + t)");
  const double a = integrate(f, s), b = integrate(f, s);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(Integrate, Errors) {
  const auto s = MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::Simpson, 5});
  try {
    integrate(ScalarField::from_values({1, 2, 3}), s);
    FAIL();
  } catch (const NodeMismatch& e) {
    EXPECT_EQ(e.node_count(), 5u);
  }
  EXPECT_THROW(integrate(ScalarField::from_values({1, 1, 1e308, 1e308, 1}), MeasureSpace::lebesgue(0.0, 100.0, {QuadratureScheme::Simpson, 5})),
               Overflow);
  EXPECT_THROW(integrate(ScalarField::from_values({1, -1, 1, 1, 1}), s), InvalidArgument);
  EXPECT_THROW(MeasureSpace::discrete({{0.0, -1.0}}), InvalidArgument);
}

TEST(CompensatedSum, RecoversCancellation) {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  EXPECT_DOUBLE_EQ(s.value(), 1.0);
}

TEST(Threads, ParallelEvaluationMatchesSerial) {
  const auto s = MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::Simpson, 4001});
  auto g = [](std::size_t, double t) { return std::sin(7 * t) * std::exp(t); };
  const auto one = evaluate_at_nodes(s, g, 1);
  const auto four = evaluate_at_nodes(s, g, 4);
  EXPECT_EQ(one, four);
}
