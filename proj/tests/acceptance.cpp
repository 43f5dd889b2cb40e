// Acceptance gate: one [PASS]/[FAIL] line per criterion; nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "musielak/musielak.hpp"
#include "oracles.hpp"

using namespace musielak;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

std::vector<double> nodes_of(const MeasureSpace& s) { return {s.nodes().begin(), s.nodes().end()}; }

MusielakFunction unit_power() { return catalog::get("power_tu2", {}, TDomain::interval(0, 1)); }

Check criterion1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto space = MeasureSpace::lebesgue(0, 1, {QuadratureScheme::Simpson, 1001});
  const auto r = luxemburg_norm(ScalarField::constant(1.0), unit_power(), space);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require(std::fabs(r.norm - oracle::kInvSqrt3) <= 1e-6, "norm off");
  c.require(secs < 1.0, "too slow");
  c.detail << "norm=" << r.norm << " time=" << secs << "s";
  return c;
}

Check criterion2() {
  Check c;
  c.require(classify(catalog::get("power_tu2")).verdict == Verdict::MusielakN, "power_tu2 not MusielakN; ");
  c.require(classify(catalog::get("exp_abs")).verdict == Verdict::MusielakN, "exp_abs not MusielakN; ");

  AxiomGrid g = AxiomGrid::standard(TDomain::interval(1, 2));
  g.t = {1.0, 2.0};
  const auto geo = classify(catalog::get("geo_minus_one", {{"a", std::numbers::e}}), g);
  c.require(geo.verdict == Verdict::MusielakOrliczOnly, "geo_minus_one verdict; ");
  for (std::size_t i = 0; i < g.t.size(); ++i)
    c.require(std::fabs(geo.report.limit0_per_t[i] - g.t[i]) <= 0.05 * g.t[i], "geo limit0 per t; ");

  g.t = {1.0};
  const auto aff = classify(catalog::get("affine_slope"), g);
  c.require(aff.verdict == Verdict::MusielakOrliczOnly, "affine_slope verdict; ");
  c.require(std::fabs(aff.report.limit0_estimate - 4.0) <= 0.2, "affine limit0; ");
  c.require(std::fabs(aff.report.limit_inf_slope - 4.0) <= 0.2, "affine limit inf; ");
  c.detail << "geo limit0=(" << geo.report.limit0_per_t[0] << ", " << geo.report.limit0_per_t[1]
           << ") affine=(" << aff.report.limit0_estimate << ", " << aff.report.limit_inf_slope << ")";
  return c;
}

Check criterion3() {
  Check c;
  const auto t = linspace(-1, 1, 33);
  const auto u = linspace(-3, 3, 61);
  RepresentationOptions opt;
  opt.inner_nodes = 2001;
  const double dp = representation_defect(catalog::get("power_tu2"), t, u, opt);
  const double de = representation_defect(catalog::get("exp_abs"), t, u, opt);
  c.require(dp <= 1e-4 && de <= 1e-4, "defect too large");
  c.detail << "defects " << dp << ", " << de;
  return c;
}

Check criterion4() {
  Check c;
  const auto space = MeasureSpace::lebesgue(0, 1);
  const auto fam = FunctionFamily::from_expression("(1 - 1/n)*(t*u)^2", "n", 2, 64, {}, TDomain::interval(0, 1));
  const auto r = family_norm_check(fam, ScalarField::constant(1.0), space);
  double worst = 0.0;
  for (std::size_t j = 0; j < r.member_norms.size(); ++j)
    worst = std::max(worst, std::fabs(r.member_norms[j] - oracle::monotone_member_norm(r.member_index[j])));
  c.require(r.member_norms.size() == 63, "member count; ");
  c.require(worst <= 1e-6, "member norm off; ");
  c.require(std::fabs(r.sup_norm - oracle::kInvSqrt3) <= 2e-2, "sup norm off; ");
  c.require(std::fabs(r.inf_norm - oracle::monotone_member_norm(2)) <= 1e-6, "inf norm off; ");
  c.require(r.passed, "identities failed; ");
  c.detail << "max member error " << worst << ", sup " << r.sup_norm << ", inf " << r.inf_norm;
  return c;
}

Check criterion5() {
  Check c;
  const auto space = MeasureSpace::lebesgue(0, 1);
  const auto m = unit_power();
  NormOptions opt;
  const auto fs = oracle::random_fields(200, nodes_of(space), 501);
  const auto gs = oracle::random_fields(200, nodes_of(space), 502);
  int violations = 0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const double a = luxemburg_norm(fs[k], m, space, opt).norm;
    const double b = luxemburg_norm(gs[k], m, space, opt).norm;
    if (!(a > 0.0)) ++violations;
    for (double alpha : {-2.0, -1.0, 0.5, 3.0}) {
      const double s = luxemburg_norm(ScalarField::scaled(fs[k], alpha), m, space, opt).norm;
      if (std::fabs(s - std::fabs(alpha) * a) > 2 * opt.rel_tol * std::fabs(alpha) * a) ++violations;
    }
    std::vector<double> h(fs[k].size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = fs[k][i] + gs[k][i];
    if (luxemburg_norm(h, m, space, opt).norm > a + b + 2 * opt.rel_tol * (a + b)) ++violations;
  }
  std::vector<double> zero(space.size(), 0.0);
  if (luxemburg_norm(zero, m, space, opt).norm != 0.0) ++violations;
  c.require(violations == 0, "violations found; ");
  c.detail << violations << " violations over 200 fields";
  return c;
}

Check criterion6() {
  Check c;
  const auto space = MeasureSpace::lebesgue(0, 1);
  const auto m = unit_power();
  const auto e = catalog::get("exp_abs", {}, TDomain::interval(0, 1));
  int violations = 0;
  double worst_additivity = 0.0;
  for (const auto& f : oracle::random_fields(50, nodes_of(space), 601)) {
    const double base = luxemburg_norm(f, m, space).norm;
    for (double r : {1.0, 2.0, 5.0}) {
      const double s = luxemburg_norm(f, scale(r, m), space).norm;
      if (s < base - 1e-6 || s > r * base + 1e-6) ++violations;
    }
    const double lhs = modular(f, sum(m, e), space).value;
    const double rhs = modular(f, m, space).value + modular(f, e, space).value;
    worst_additivity = std::max(worst_additivity, std::fabs(lhs - rhs) / rhs);
  }
  c.require(violations == 0, "sandwich violated; ");
  c.require(worst_additivity <= 4 * std::numeric_limits<double>::epsilon(), "additivity; ");
  c.detail << violations << " sandwich violations, additivity rel. diff " << worst_additivity;
  return c;
}

Check criterion7() {
  Check c;
  const auto p = delta2_check(catalog::get("power_tu2"), 0.1);
  const auto e = delta2_check(catalog::get("exp_abs"), 0.1);
  c.require(std::fabs(p.k_estimate - 4.0) <= 1e-9 && p.bounded, "power_tu2; ");
  c.require(!e.bounded && e.k_estimate > 1e6, "exp_abs; ");
  c.detail << "K(power)=" << p.k_estimate << " K(exp)=" << e.k_estimate;
  return c;
}

Check criterion8() {
  Check c;
  const auto space = MeasureSpace::lebesgue(0, 1);
  const auto m1 = unit_power();
  EmbeddingGrid grid{linspace(0, 1, 33), log_spaced(0.1, 1024, 64)};
  auto fields = oracle::random_fields(50, nodes_of(space), 801, 0.1, 4.0);
  for (auto& f : fields)
    for (double& v : f) v = std::max(v, 0.1);
  const auto ok = embedding_check(m1, scale(0.5, m1), 1.0, 0.1, grid, fields, space);
  const auto bad = embedding_check(m1, catalog::get("exp_abs"), 1.0, 0.1, grid, fields, space);
  c.require(ok.holds() && ok.fields_checked == 50, "0.5 M case; ");
  c.require(!bad.hypothesis_holds && bad.witness.has_value(), "exp case; ");
  if (bad.witness) c.detail << "witness t=" << bad.witness->t << " u=" << bad.witness->u;
  return c;
}

Check criterion9() {
  Check c;
  const std::vector<int> levels = {6, 8, 10, 12};
  for (const auto& [name, rect] : std::vector<std::pair<std::string, Rectangle>>{
           {"power_tu2", {0.0, 1.0, 2.0}}, {"exp_abs", {-1.0, 1.0, 2.0}}}) {
    const auto m = catalog::get(name);
    double prev = std::numeric_limits<double>::infinity();
    for (int L : levels) {
      const double err = simple_approximation(m, rect, L).sup_error();
      c.require(err < prev, name + " supError not decreasing; ");
      prev = err;
    }
  }
  const auto r = approx_space_convergence(catalog::get("power_tu2"), {0.0, 1.0, 2.0}, levels,
                                          ScalarField::constant(1.0), MeasureSpace::lebesgue(0, 1), 1e-3);
  c.require(r.gaps_nonincreasing, "gaps increase; ");
  c.require(r.gaps.back() <= 1e-2, "final gap; ");
  c.detail << "final gap " << r.gaps.back();
  return c;
}

Check criterion10() {
  Check c;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto r = oracle::random_expr(rng, 4);
    const double t = d(rng), u = d(rng);
    const double want = r.fn(t, u);
    const double got = dsl::eval(dsl::parse(r.text), t, u);
    worst = std::max(worst, std::fabs(got - want) / std::max(1.0, std::fabs(want)));
  }
  c.require(worst <= 1e-12, "evaluator mismatch; ");

  std::size_t rejected = 0, bad = 0;
  const dsl::ParamMap params{{"a", 2.0}};
  for (const auto& text : oracle::mutations(4242, 8000)) {
    if (rejected == 1000) break;
    try {
      const auto e = dsl::parse(text, params);
      try {
        if (!std::isfinite(dsl::eval(e, 0.7, -1.3, params))) ++bad;
      } catch (const DomainError&) {
      }
    } catch (const SyntaxError& s) {
      if (s.offset() > text.size()) ++bad;
      ++rejected;
    } catch (...) {
      ++bad;
    }
  }
  c.require(rejected == 1000, "corpus too small; ");
  c.require(bad == 0, "unexpected failures; ");
  c.detail << "max rel. error " << worst << ", " << rejected << " malformed rejected, " << bad << " bad";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"Luxemburg norm closed form", criterion1},
      {"classification table", criterion2},
      {"representation identity", criterion3},
      {"monotone family norm identity", criterion4},
      {"norm axioms on 200 random fields", criterion5},
      {"scale sandwich and modular additivity", criterion6},
      {"Delta2 checks", criterion7},
      {"embedding hypothesis and conclusion", criterion8},
      {"simple approximation convergence", criterion9},
      {"parser agreement and fuzz corpus", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    std::printf("[%s] %zu: %s (%s)\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, c.detail.str().c_str());
    failures += c.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
