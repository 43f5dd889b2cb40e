#pragma once

// Command-line front end. Exit codes: 0 success, 1 property violation,
// 2 input or parse error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "musielak/approx.hpp"
#include "musielak/io.hpp"
#include "musielak/measure.hpp"
#include "musielak/nfunc.hpp"
#include "musielak/space.hpp"

namespace musielak::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kInputError = 2 };

struct Options {
  std::string nfunc;
  std::string nfunc2;
  std::string measure = "lebesgue01";
  std::string field = "const:1";
  std::vector<std::string> params;
  std::string tgrid;
  double tol = 1e-8;
  double atol = 1e-6;
  int tail = 64;
  int first = 1;
  std::string levels = "6,8,10,12";
  std::string json_path;
  std::string expect;
  unsigned threads = 1;
  double r = 1.0;
  double r2 = 0.0;
  double u0 = 0.1;
  double umax = 0.0;
  std::size_t fields = 50;
  std::uint64_t seed = 1;
  std::string family;
  std::string variant = "monotone";
  std::string dominator;
  std::string limit;
  std::string trange;
  std::size_t inner_nodes = 2001;
};

namespace detail {

inline std::string fmt(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw io::InputError(what + ": '" + s + "' is not a number");
  }
}

inline dsl::ParamMap parse_params(const std::vector<std::string>& items) {
  dsl::ParamMap p;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw io::InputError("--param expects NAME=VALUE, got '" + item + "'");
    p[item.substr(0, eq)] = to_double(item.substr(eq + 1), "--param " + item.substr(0, eq));
  }
  return p;
}

// A spec is inline JSON, a "prefix:payload" shorthand, or a path to a JSON file.
inline io::json load_spec_json(const std::string& spec, const std::string& flag) {
  if (!spec.empty() && spec.front() == '{') {
    try {
      return io::json::parse(spec);
    } catch (const io::json::parse_error& e) {
      throw io::InputError(flag + ": " + e.what());
    }
  }
  return io::read_json_file(spec);
}

template <typename F>
auto with_source(const std::string& source, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const io::InputError&) {
    throw;
  } catch (const io::json::exception& e) {
    throw io::InputError(source + ": " + e.what());
  } catch (const Error& e) {
    throw io::InputError(source + ": " + e.what());
  }
}

inline MusielakFunction load_nfunc(const std::string& spec, const dsl::ParamMap& params, const std::string& flag) {
  if (spec.empty()) throw io::InputError(flag + " is required");
  return with_source(flag + " " + spec, [&] {
    if (spec.rfind("catalog:", 0) == 0) return catalog::get(spec.substr(8), params);
    if (spec.rfind("expr:", 0) == 0)
      return MusielakFunction::from_expression(spec.substr(5), params, TDomain::interval(0.0, 1.0));
    return io::load_function(load_spec_json(spec, flag), params);
  });
}

inline MeasureSpace load_measure(const std::string& spec) {
  return with_source("--measure " + spec, [&] {
    const bool builtin = spec == "lebesgue01" || (spec == "lebesgue01.json" && !std::ifstream(spec));
    if (builtin) return MeasureSpace::lebesgue(0.0, 1.0, {QuadratureScheme::Simpson, 1001});
    return io::load_measure(load_spec_json(spec, "--measure"));
  });
}

inline ScalarField load_field(const std::string& spec) {
  return with_source("--field " + spec, [&] {
    if (spec.rfind("const:", 0) == 0) return ScalarField::constant(to_double(spec.substr(6), "--field"));
    if (spec.rfind("expr:", 0) == 0) return ScalarField::parse(spec.substr(5));
    return io::load_field(load_spec_json(spec, "--field"));
  });
}

inline std::vector<double> parse_tgrid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw io::InputError("--tgrid expects lo:hi:n, got '" + s + "'");
  const double lo = to_double(parts[0], "--tgrid"), hi = to_double(parts[1], "--tgrid");
  const double n = to_double(parts[2], "--tgrid");
  if (n < 1 || n != std::floor(n) || hi < lo) throw io::InputError("--tgrid needs lo <= hi and integer n >= 1");
  return linspace(lo, hi, static_cast<std::size_t>(n));
}

inline std::pair<double, double> parse_range(const std::string& s, const char* flag) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw io::InputError(std::string(flag) + " expects lo:hi");
  return {to_double(parts[0], flag), to_double(parts[1], flag)};
}

inline std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  for (const auto& p : split(s, ',')) {
    const double v = to_double(p, "--levels");
    if (v != std::floor(v)) throw io::InputError("--levels must be integers");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw io::InputError("--levels is empty");
  return out;
}

inline std::optional<Verdict> parse_expect(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "n-function") return Verdict::MusielakN;
  if (s == "orlicz-only") return Verdict::MusielakOrliczOnly;
  if (s == "neither") return Verdict::Neither;
  throw io::InputError("--expect must be n-function, orlicz-only or neither");
}

inline std::string witness_text(const Witness& w) {
  return "(t=" + fmt(w.t, 6) + ", u=" + fmt(w.u, 6) + ", value=" + fmt(w.value, 6) + ")";
}

}  // namespace detail

struct Outcome {
  int code = kOk;
  io::json report;
  std::string summary;
};

// ---------------------------------------------------------------------------
// Verbs

inline Outcome run_verify(const Options& o, bool classify_only) {
  const auto params = detail::parse_params(o.params);
  const auto m = detail::load_nfunc(o.nfunc, params, "--nfunc");
  const auto expect = detail::parse_expect(o.expect);
  AxiomGrid grid = AxiomGrid::standard(m.t_domain());
  if (!o.tgrid.empty()) grid.t = detail::parse_tgrid(o.tgrid);
  const auto c = classify(m, grid);
  const auto& r = c.report;

  Outcome out;
  out.report = {{"function", io::to_json(m)}, {"axiom_report", io::to_json(r)}, {"verdict", to_string(c.verdict)}};
  std::ostringstream s;
  s << "function: " << m.describe() << "\n";
  const char* names[] = {"even+convex", "positive", "lim M/u = 0 (u->0)", "lim M/u = inf (u->inf)"};
  for (std::size_t i = 0; i < 4; ++i) {
    s << "  axiom " << i + 1 << " (" << names[i] << "): " << (r.axiom[i] ? "pass" : "FAIL");
    if (!r.axiom[i] && r.witness[i]) s << " witness " << detail::witness_text(*r.witness[i]);
    s << "\n";
  }
  s << "  axiom 5 (measurable in t): by construction\n";
  s << "  limit0 estimate " << detail::fmt(r.limit0_estimate) << ", limit-inf slope "
    << detail::fmt(r.limit_inf_slope) << ", M(t,0) defect " << detail::fmt(r.zero_at_zero_defect) << "\n";
  s << "verdict: " << to_string(c.verdict) << "\n";

  if (expect) {
    out.report["expect"] = to_string(*expect);
    if (c.verdict != *expect) {
      out.code = kViolation;
      s << "expected " << to_string(*expect) << ": VIOLATED\n";
    }
  } else if (!classify_only && !r.all_pass()) {
    out.code = kViolation;
  }
  out.summary = s.str();
  return out;
}

inline Outcome run_norm(const Options& o, bool modular_only) {
  const auto params = detail::parse_params(o.params);
  const auto m = detail::load_nfunc(o.nfunc, params, "--nfunc");
  const auto space = detail::load_measure(o.measure);
  const auto field = detail::load_field(o.field);
  const auto values = detail::with_source("--field " + o.field, [&] { return field.values_on(space); });
  Outcome out;
  out.report = {{"function", io::to_json(m)}, {"nodes", space.size()}, {"mass", space.mass()}};
  std::ostringstream s;
  s << "function: " << m.describe() << "\n";
  if (modular_only) {
    const auto q = modular(values, m, space, o.threads);
    out.report["modular"] = io::to_json(q);
    s << "modular = " << (q.overflow ? std::string("overflow") : detail::fmt(q.value, 12)) << "\n";
  } else {
    NormOptions nopt;
    nopt.rel_tol = o.tol;
    nopt.threads = o.threads;
    const auto n = luxemburg_norm(values, m, space, nopt);
    out.report.update(io::to_json(n));
    s << "norm = " << detail::fmt(n.norm, 12) << "  (bracket [" << detail::fmt(n.bracket_lo, 12) << ", "
      << detail::fmt(n.bracket_hi, 12) << "], " << n.iterations << " iterations, modular at norm "
      << detail::fmt(n.modular_at_norm, 12) << ")\n";
  }
  out.summary = s.str();
  return out;
}

inline Outcome run_delta2(const Options& o) {
  const auto params = detail::parse_params(o.params);
  const auto m = detail::load_nfunc(o.nfunc, params, "--nfunc");
  const auto ts = o.tgrid.empty() ? m.t_domain().sample() : detail::parse_tgrid(o.tgrid);
  Delta2Options dopt;
  if (o.umax > 0.0) dopt.u_max = o.umax;
  const auto r = delta2_check(m, o.u0, ts, dopt);
  Outcome out;
  out.report = {{"function", io::to_json(m)}, {"delta2", io::to_json(r)}};
  std::ostringstream s;
  s << "function: " << m.describe() << "\n"
    << "K estimate = " << (r.overflow ? std::string("overflow") : detail::fmt(r.k_estimate, 12))
    << " on u in [" << detail::fmt(r.u0) << ", " << detail::fmt(r.u_max) << "], bounded: " << (r.bounded ? "yes" : "no")
    << "\n  max ratio at " << detail::witness_text(r.witness) << "\n";
  out.summary = s.str();
  return out;
}

inline Outcome run_embed(const Options& o) {
  const auto params = detail::parse_params(o.params);
  const auto m1 = detail::load_nfunc(o.nfunc, params, "--nfunc");
  const auto m2 = detail::load_nfunc(o.nfunc2, params, "--nfunc2");
  const auto space = detail::load_measure(o.measure);
  EmbeddingGrid grid;
  grid.t = o.tgrid.empty() ? std::vector<double>(space.nodes().begin(), space.nodes().end())
                           : detail::parse_tgrid(o.tgrid);
  grid.u = log_spaced(o.u0, o.umax > 0.0 ? o.umax : 1024.0, 64);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> dist(o.u0, o.u0 + 4.0);
  std::vector<std::vector<double>> fields(o.fields, std::vector<double>(space.size()));
  for (auto& f : fields)
    for (double& v : f) v = dist(rng);

  Outcome out;
  std::ostringstream s;
  s << "M1: " << m1.describe() << "\nM2: " << m2.describe() << "\n";
  auto describe = [&](const EmbeddingReport& r, const char* label) {
    s << label << " hypothesis (u >= " << detail::fmt(r.u0) << ", r = " << detail::fmt(r.r)
      << "): " << (r.hypothesis_holds ? "holds" : "VIOLATED");
    if (r.witness) s << " witness " << detail::witness_text(*r.witness);
    s << "\n" << label << " modular inequality on " << r.fields_checked << " fields: "
      << (r.modular_inequality_holds ? "holds" : "VIOLATED") << "\n";
  };
  const auto fwd = embedding_check(m1, m2, o.r, o.u0, grid, fields, space);
  out.report = {{"M1", io::to_json(m1)}, {"M2", io::to_json(m2)}, {"embedding", io::to_json(fwd)}};
  describe(fwd, "L_M1 in L_M2:");
  bool ok = fwd.holds();
  if (o.r2 > 0.0) {
    const auto back = embedding_check(m2, m1, o.r2, o.u0, grid, fields, space);
    out.report["reverse_embedding"] = io::to_json(back);
    describe(back, "L_M2 in L_M1:");
    ok = ok && back.holds();
  }
  out.code = ok ? kOk : kViolation;
  out.summary = s.str();
  return out;
}

inline Outcome run_family(const Options& o) {
  const auto params = detail::parse_params(o.params);
  if (o.family.empty()) throw io::InputError("--family is required");
  FunctionFamily fam = detail::with_source("--family " + o.family, [&] {
    if (o.family.rfind("expr:", 0) == 0)
      return FunctionFamily::from_expression(o.family.substr(5), "n", o.first, o.tail, params,
                                             TDomain::interval(0.0, 1.0));
    return io::load_family(detail::load_spec_json(o.family, "--family"), params, o.tail);
  });
  if (!o.dominator.empty())
    fam.dominator = std::make_shared<const MusielakFunction>(detail::load_nfunc(o.dominator, params, "--dominator"));
  const auto space = detail::load_measure(o.measure);
  const auto field = detail::load_field(o.field);
  const auto values = detail::with_source("--field " + o.field, [&] { return field.values_on(space); });
  FamilyNormOptions fopt;
  if (o.variant == "monotone") fopt.variant = FamilyVariant::Monotone;
  else if (o.variant == "dominated") fopt.variant = FamilyVariant::Dominated;
  else throw io::InputError("--variant must be monotone or dominated");
  fopt.rel_tol = std::min(o.tol, 1e-9);
  fopt.identity_tol = o.atol;
  if (!o.limit.empty()) fopt.limit = detail::load_nfunc(o.limit, params, "--limit");

  Outcome out;
  std::ostringstream s;
  try {
    const auto r = family_norm_check(fam, values, space, fopt);
    out.report = {{"family_norm", io::to_json(r)}};
    s << "family n=" << fam.first_index << ".." << fam.tail() << " (" << r.member_norms.size()
      << " nondegenerate members), variant " << o.variant << "\n";
    if (fopt.variant == FamilyVariant::Monotone) {
      s << "  sup norm " << detail::fmt(r.sup_norm, 12) << " vs max member " << detail::fmt(r.max_member_norm, 12)
        << ": " << (r.sup_identity ? "ok" : "VIOLATED") << "\n"
        << "  inf norm " << detail::fmt(r.inf_norm, 12) << " vs min member " << detail::fmt(r.min_member_norm, 12)
        << ": " << (r.inf_identity ? "ok" : "VIOLATED") << "\n";
    } else {
      s << "  limit norm " << detail::fmt(r.limit_norm, 12) << ", last gap "
        << detail::fmt(r.gaps.empty() ? 0.0 : r.gaps.back(), 6)
        << ", gaps nonincreasing: " << (r.gaps_nonincreasing ? "yes" : "NO") << "\n";
    }
    out.code = r.passed ? kOk : kViolation;
  } catch (const MonotonicityViolated& e) {
    out.code = kViolation;
    out.report = {{"error", "MonotonicityViolated"},
                  {"witness", {{"n", e.index()}, {"t", e.t()}, {"u", e.u()}}}};
    s << e.what() << "\n";
  } catch (const DominationViolated& e) {
    out.code = kViolation;
    out.report = {{"error", "DominationViolated"}, {"witness", {{"n", e.index()}, {"t", e.t()}, {"u", e.u()}}}};
    s << e.what() << "\n";
  }
  out.summary = s.str();
  return out;
}

inline Outcome run_approx(const Options& o) {
  const auto params = detail::parse_params(o.params);
  const auto m = detail::load_nfunc(o.nfunc, params, "--nfunc");
  Rectangle rect{m.t_domain().lo(), m.t_domain().hi(), o.umax > 0.0 ? o.umax : 1.0};
  if (!o.trange.empty()) std::tie(rect.t_lo, rect.t_hi) = detail::parse_range(o.trange, "--trange");
  const auto levels = detail::parse_levels(o.levels);
  std::optional<MeasureSpace> space;
  std::vector<double> values;
  if (o.measure != "none") {
    space = detail::load_measure(o.measure);
    const auto field = detail::load_field(o.field);
    values = detail::with_source("--field " + o.field, [&] { return field.values_on(*space); });
    if (o.trange.empty() && !space->nodes().empty()) {
      const auto [lo, hi] = std::minmax_element(space->nodes().begin(), space->nodes().end());
      rect.t_lo = *lo;
      rect.t_hi = *hi;
    }
    // Default rectangle height: the largest value the norm probes, f / ||f||.
    if (o.umax <= 0.0) {
      const double norm = luxemburg_norm(values, m, *space).norm;
      double top = 0.0;
      for (double v : values) top = std::max(top, std::fabs(v));
      if (norm > 0.0 && top > 0.0) rect.u_max = 1.05 * top / norm;
    }
  }

  Outcome out;
  std::ostringstream s;
  s << "function: " << m.describe() << " on t in [" << detail::fmt(rect.t_lo) << ", " << detail::fmt(rect.t_hi)
    << "], |u| <= " << detail::fmt(rect.u_max) << "\n";
  io::json per_level = io::json::array();
  std::vector<double> errors;
  for (int L : levels) {
    const auto a = simple_approximation(m, rect, L);
    errors.push_back(a.sup_error());
    per_level.push_back({{"levels", L}, {"quantization_step", a.quantum()}, {"sup_error", a.sup_error()}});
    s << "  L=" << L << "  Delta=" << detail::fmt(a.quantum(), 6) << "  sup error=" << detail::fmt(a.sup_error(), 6)
      << "\n";
  }
  bool ok = true;
  for (std::size_t i = 1; i < errors.size(); ++i) ok = ok && errors[i] < errors[i - 1];
  out.report = {{"function", io::to_json(m)}, {"approximations", per_level}, {"sup_error_decreasing", ok}};
  if (!o.json_path.empty() && levels.size() == 1)
    out.report["simple_function"] = io::to_json(simple_approximation(m, rect, levels.front()));
  if (space) {
    const double rel_tol = std::max(o.tol, 1e-3);
    const auto conv = approx_space_convergence(m, rect, levels, values, *space, rel_tol);
    out.report["convergence"] = io::to_json(conv);
    s << "  norm under M " << detail::fmt(conv.target_norm, 10) << ", final gap "
      << detail::fmt(conv.gaps.back(), 6) << " (limit " << detail::fmt(10.0 * rel_tol, 3)
      << "), gaps nonincreasing: " << (conv.gaps_nonincreasing ? "yes" : "NO") << "\n";
    ok = ok && conv.passed();
  }
  s << "sup error strictly decreasing: " << (out.report["sup_error_decreasing"].get<bool>() ? "yes" : "NO") << "\n";
  out.code = ok ? kOk : kViolation;
  out.summary = s.str();
  return out;
}

inline Outcome run_repr(const Options& o) {
  const auto params = detail::parse_params(o.params);
  const auto m = detail::load_nfunc(o.nfunc, params, "--nfunc");
  const auto ts = o.tgrid.empty() ? m.t_domain().sample() : detail::parse_tgrid(o.tgrid);
  const double umax = o.umax > 0.0 ? o.umax : 3.0;
  const auto us = linspace(-umax, umax, 61);
  RepresentationOptions ropt;
  ropt.inner_nodes = o.inner_nodes;
  const auto r = representation_check(m, ts, us, ropt);
  Outcome out;
  out.report = {{"function", io::to_json(m)},
                {"defect", r.defect},
                {"atol", o.atol},
                {"witness", {{"t", r.witness_t}, {"u", r.witness_u}}},
                {"holds", r.defect <= o.atol}};
  std::ostringstream s;
  s << "function: " << m.describe() << "\nmax |M(t,u) - int_0^|u| p+(t,s) ds| = " << detail::fmt(r.defect, 6)
    << " at (t=" << detail::fmt(r.witness_t, 6) << ", u=" << detail::fmt(r.witness_u, 6) << "), tolerance "
    << detail::fmt(o.atol, 3) << ": " << (r.defect <= o.atol ? "holds" : "VIOLATED") << "\n";
  out.code = r.defect <= o.atol ? kOk : kViolation;
  out.summary = s.str();
  return out;
}

// ---------------------------------------------------------------------------

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Musielak N-function and Musielak-Orlicz space toolkit", "musielak"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--nfunc", o.nfunc, "function: catalog:NAME, expr:TEXT, JSON file or inline JSON");
    sub->add_option("--param", o.params, "parameter binding NAME=VALUE (repeatable)");
    sub->add_option("--tgrid", o.tgrid, "t-grid lo:hi:n");
    sub->add_option("--tol", o.tol, "norm bisection relative tolerance");
    sub->add_option("--atol", o.atol, "absolute tolerance for identity checks");
    sub->add_option("--json", o.json_path, "write the JSON report here ('-' for stdout)");
    sub->add_option("--expect", o.expect, "n-function | orlicz-only | neither");
    sub->add_option("--threads", o.threads, "integrand evaluation threads");
    sub->add_option("--measure", o.measure, "measure: lebesgue01, JSON file or inline JSON");
    sub->add_option("--field", o.field, "field: const:C, expr:TEXT, JSON file or inline JSON");
    sub->add_option("--tail", o.tail, "family tail index N");
    sub->add_option("--levels", o.levels, "comma-separated approximation levels");
    sub->add_option("--u0", o.u0, "threshold u0");
    sub->add_option("--umax", o.umax, "largest |u| examined (approx: rectangle height)");
  };
  auto* verify = app.add_subcommand("verify", "check axioms 1-5");
  auto* classify_cmd = app.add_subcommand("classify", "MusielakN / MusielakOrliczOnly / Neither");
  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a field");
  auto* modular_cmd = app.add_subcommand("modular", "modular of a field");
  auto* delta2 = app.add_subcommand("delta2", "estimate the Delta2 constant");
  auto* embed = app.add_subcommand("embed", "check L_M1 in L_M2 via M2 <= r M1");
  auto* family = app.add_subcommand("family-norm", "family norm identities");
  auto* approx = app.add_subcommand("approx", "simple-function approximation");
  auto* repr = app.add_subcommand("repr-check", "integral representation by p+");
  for (auto* sub : {verify, classify_cmd, norm, modular_cmd, delta2, embed, family, approx, repr}) common(sub);
  embed->add_option("--nfunc2", o.nfunc2, "second function M2");
  embed->add_option("--r", o.r, "constant r in M2 <= r M1");
  embed->add_option("--r2", o.r2, "constant for the reverse direction (checks equality of spaces)");
  embed->add_option("--fields", o.fields, "number of random test fields");
  embed->add_option("--seed", o.seed, "random seed for test fields");
  family->add_option("--family", o.family, "family: expr:TEXT in n, JSON file or inline JSON");
  family->add_option("--first", o.first, "first family index");
  family->add_option("--variant", o.variant, "monotone | dominated");
  family->add_option("--dominator", o.dominator, "dominating function G");
  family->add_option("--limit", o.limit, "pointwise limit function (dominated variant)");
  approx->add_option("--trange", o.trange, "t-rectangle lo:hi");
  repr->add_option("--inner-nodes", o.inner_nodes, "Simpson nodes for the inner integral");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  Outcome result;
  try {
    if (verify->parsed()) result = run_verify(o, false);
    else if (classify_cmd->parsed()) result = run_verify(o, true);
    else if (norm->parsed()) result = run_norm(o, false);
    else if (modular_cmd->parsed()) result = run_norm(o, true);
    else if (delta2->parsed()) result = run_delta2(o);
    else if (embed->parsed()) result = run_embed(o);
    else if (family->parsed()) result = run_family(o);
    else if (approx->parsed()) result = run_approx(o);
    else if (repr->parsed()) result = run_repr(o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  io::json report = result.report;
  report["schema"] = io::kSchema;
  report["command"] = verb;
  report["exit_code"] = result.code;
  out << result.summary;
  if (o.json_path == "-") {
    out << report.dump(2) << "\n";
  } else if (!o.json_path.empty()) {
    std::ofstream f(o.json_path);
    if (!f) {
      err << "error: cannot write " << o.json_path << "\n";
      return kInputError;
    }
    f << report.dump(2) << "\n";
  }
  return result.code;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace musielak::cli
