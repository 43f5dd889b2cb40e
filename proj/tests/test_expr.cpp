#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "musielak/expr.hpp"
#include "oracles.hpp"

using namespace musielak;
using namespace musielak::dsl;

TEST(Parse, PowerOfProductTree) {
  const auto e = parse("(t*u)^2");
  using namespace build;
  EXPECT_EQ(e, node(Op::Pow, {node(Op::Mul, {var("t"), var("u")}), num(2)}));
  EXPECT_EQ(e.pretty(), "(t * u)^2");
}

TEST(Parse, LiteralExponentialFormula) {
  const auto e = parse("exp(abs(u)+abs(t)) - abs(u) - abs(t)");
  using namespace build;
  const auto au = node(Op::Abs, {var("u")}), at = node(Op::Abs, {var("t")});
  EXPECT_EQ(e, node(Op::Sub, {node(Op::Sub, {node(Op::Exp, {node(Op::Add, {au, at})}), au}), at}));
}

TEST(Parse, TruncatedInputReportsOffset) {
  try {
    parse("t *");
    FAIL() << "no exception";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(eval(parse("2^3^2"), 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(eval(parse("-u^2"), 0, 3), -9.0);
  EXPECT_DOUBLE_EQ(eval(parse("1 - 2 - 3"), 0, 0), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("8 / 4 / 2"), 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(eval(parse("2 * 3 + 4 * 5"), 0, 0), 26.0);
  EXPECT_DOUBLE_EQ(eval(parse("--u"), 0, 3), 3.0);
  EXPECT_DOUBLE_EQ(eval(parse(" max ( t , u ) "), 1, 2), 2.0);
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse("t + b");
    FAIL();
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.name(), "b");
  }
  EXPECT_NO_THROW(parse("t + b", ParamMap{{"b", 1.0}}));
  Grammar g;
  g.allow_u = false;
  EXPECT_THROW(parse("t*u", g), UnknownIdentifier);
}

TEST(Parse, ArityChecked) {
  EXPECT_THROW(parse("max(t)"), SyntaxError);
  EXPECT_THROW(parse("abs(t, u)"), SyntaxError);
}

TEST(Eval, Examples) {
  EXPECT_NEAR(eval(parse("a^(t*u)-1", ParamMap{{"a", 0}}), 1, 1, {{"a", std::numbers::e}}), std::numbers::e - 1.0,
              1e-15);
  EXPECT_DOUBLE_EQ(eval(parse("(t*u)^2"), 2, 3), 36.0);
}

TEST(Eval, DomainErrors) {
  EXPECT_THROW(eval(parse("log(u)"), 0, 0), DomainError);
  EXPECT_THROW(eval(parse("1/u"), 0, 0), DomainError);
  EXPECT_THROW(eval(parse("u^0.5"), 0, -1), DomainError);
  EXPECT_DOUBLE_EQ(eval(parse("u^3"), 0, -2), -8.0);
  try {
    eval(parse("t + log(u)"), 1, -1);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_FALSE(e.is_overflow());
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.path(), std::vector<std::size_t>{1});
  }
  try {
    eval(parse("exp(u)"), 0, 1000);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_TRUE(e.is_overflow());
  }
}

TEST(Eval, UnboundParameter) {
  const auto e = parse("a*u", ParamMap{{"a", 1}});
  EXPECT_THROW(e(0, 1), UnboundParameter);
  EXPECT_THROW(eval(e, 0, 1), UnboundParameter);
  EXPECT_DOUBLE_EQ(e.bind({{"a", 3}})(0, 2), 6.0);
}

TEST(Eval, CatalogFormulasMatchDirectCode) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  const auto p = parse("(t*u)^2");
  const auto x = parse("exp(abs(t))*(exp(abs(u)) - 1 - abs(u))");
  const auto g = parse("a^(t*abs(u)) - 1", ParamMap{{"a", 0}});
  const auto a = parse("(t + 1)^2*abs(u)");
  for (int i = 0; i < 100; ++i) {
    const double t = d(rng), u = d(rng);
    EXPECT_LE(oracle::rel_err(eval(p, t, u), oracle::power_tu2(t, u)), 1e-12);
    EXPECT_LE(oracle::rel_err(eval(x, t, u), oracle::exp_abs(t, u)), 1e-12);
    EXPECT_LE(oracle::rel_err(eval(g, t, u, {{"a", 2.5}}), oracle::geo_minus_one(t, u, 2.5)), 1e-12);
    EXPECT_LE(oracle::rel_err(eval(a, t, u), oracle::affine_slope(t, u)), 1e-12);
  }
}

TEST(Eval, RandomExpressionsMatchDirectEvaluator) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const auto r = oracle::random_expr(rng, 4);
    const auto e = parse(r.text);
    const double t = d(rng), u = d(rng);
    const double want = r.fn(t, u);
    const double got = eval(e, t, u);
    EXPECT_LE(std::fabs(got - want), 1e-12 * std::max(1.0, std::fabs(want))) << r.text;
  }
}

TEST(Pretty, RoundTripIsStable) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto r = oracle::random_expr(rng, 5);
    const auto e = parse(r.text);
    const auto again = parse(e.pretty());
    EXPECT_EQ(again, e) << r.text << " -> " << e.pretty();
    EXPECT_EQ(again.pretty(), e.pretty());
  }
  for (const char* s : {"-u^2", "(-u)^2", "2^3^2", "(2^3)^2", "a - (b - c)", "a / (b * c)", "-(t + u)", "1e-7 * t",
                        "-2.5"}) {
    const auto e = parse(s, ParamMap{{"a", 0}, {"b", 0}, {"c", 0}});
    EXPECT_EQ(parse(e.pretty(), ParamMap{{"a", 0}, {"b", 0}, {"c", 0}}), e) << s;
  }
}

TEST(Fuzz, MalformedInputsRejectedWithOffsets) {
  const auto corpus = oracle::mutations(31337, 6000);
  const ParamMap params{{"a", 2.0}};
  std::size_t rejected = 0;
  for (const auto& text : corpus) {
    try {
      const auto e = parse(text, params);
      try {
        const double v = eval(e, 0.7, -1.3, params);
        EXPECT_TRUE(std::isfinite(v)) << text;
      } catch (const DomainError& d) {
        EXPECT_LE(d.offset(), text.size());
      }
    } catch (const SyntaxError& s) {
      EXPECT_LE(s.offset(), text.size()) << text;
      ++rejected;
    }
  }
  EXPECT_GE(rejected, 1000u);
}
