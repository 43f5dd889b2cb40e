#pragma once

// JSON specs for measures, fields and functions, and JSON forms of every report.
//
//   measure:  {"kind":"discrete","points":[[t,w],...]}
//             {"kind":"interval","a":0,"b":1,"density":"1","rule":{"scheme":"simpson","n":1001}}
//   field:    {"values":[...]} | {"expr":"<expr in t>"}
//   function: {"catalog":"power_tu2","params":{...},"tdomain":[lo,hi]}
//             {"expr":"(t*u)^2","params":{...},"tdomain":[lo,hi] | {"points":[...]}}
//             {"combinator":"sum","children":[...]}
//             {"combinator":"scale","r":3,"child":{...}}
//             {"combinator":"sup"|"inf"|"limsup"|"liminf","family":{...}}
//   family:   {"expr":"(1-1/n)*(t*u)^2","index":"n","first":1,"tail":64,"params":{...},
//              "tdomain":..., "dominator":{function}}
//             {"members":[function,...],"first":1,"dominator":{function}}

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "musielak/approx.hpp"
#include "musielak/error.hpp"
#include "musielak/measure.hpp"
#include "musielak/nfunc.hpp"
#include "musielak/space.hpp"

namespace musielak::io {

using nlohmann::json;

inline constexpr const char* kSchema = "musielak-kit/1";

/// Malformed or inconsistent input, tagged with where it came from.
class InputError : public Error {
 public:
  using Error::Error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}


/// JSON number, or null when not finite.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

// ---------------------------------------------------------------------------
// Loading

inline dsl::ParamMap load_params(const json& j) {
  dsl::ParamMap p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw InputError("\"params\" must be an object");
  for (const auto& [k, v] : j.items()) p[k] = v.get<double>();
  return p;
}

inline TDomain load_tdomain(const json& j) {
  if (j.is_array() && j.size() == 2) return TDomain::interval(j[0].get<double>(), j[1].get<double>());
  if (j.is_object() && j.contains("points")) return TDomain::points(j["points"].get<std::vector<double>>());
  throw InputError("\"tdomain\" must be [lo, hi] or {\"points\": [...]}");
}

inline MeasureSpace load_measure(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "discrete") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw InputError("discrete points are [t, w] pairs");
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return MeasureSpace::discrete(std::move(pts));
  }
  if (kind == "interval") {
    QuadratureRule rule;
    if (j.contains("rule")) {
      const auto& r = j["rule"];
      if (r.contains("scheme")) rule.scheme = scheme_from_string(r["scheme"].get<std::string>());
      if (r.contains("n")) rule.n = r["n"].get<std::size_t>();
    }
    dsl::Grammar g;
    g.allow_u = false;
    const auto density = dsl::parse(j.value("density", std::string("1")), g);
    return MeasureSpace::interval(j.at("a").get<double>(), j.at("b").get<double>(), density, rule);
  }
  throw InputError("measure \"kind\" must be \"discrete\" or \"interval\"");
}

inline ScalarField load_field(const json& j) {
  if (j.contains("values")) return ScalarField::from_values(j["values"].get<std::vector<double>>());
  if (j.contains("expr")) return ScalarField::parse(j["expr"].get<std::string>());
  throw InputError("field needs \"values\" or \"expr\"");
}

inline MusielakFunction load_function(const json& j, const dsl::ParamMap& extra = {});

inline FunctionFamily load_family(const json& j, const dsl::ParamMap& extra = {}, std::optional<int> tail = {}) {
  FunctionFamily fam;
  if (j.contains("members")) {
    fam.first_index = j.value("first", 1);
    for (const auto& m : j["members"]) fam.members.push_back(load_function(m, extra));
    if (fam.members.empty()) throw EmptyFamily();
  } else if (j.contains("expr")) {
    dsl::ParamMap params = extra;
    for (const auto& [k, v] : load_params(j.value("params", json()))) params[k] = v;
    const TDomain dom = j.contains("tdomain") ? load_tdomain(j["tdomain"]) : TDomain::interval(0.0, 1.0);
    fam = FunctionFamily::from_expression(j["expr"].get<std::string>(), j.value("index", std::string("n")),
                                          j.value("first", 1), tail.value_or(j.value("tail", 64)), params, dom);
  } else {
    throw InputError("family needs \"members\" or \"expr\"");
  }
  if (j.contains("dominator"))
    fam.dominator = std::make_shared<const MusielakFunction>(load_function(j["dominator"], extra));
  return fam;
}

inline MusielakFunction load_function(const json& j, const dsl::ParamMap& extra) {
  if (!j.is_object()) throw InputError("function spec must be a JSON object");
  dsl::ParamMap params = extra;
  for (const auto& [k, v] : load_params(j.value("params", json()))) params[k] = v;
  std::optional<TDomain> dom;
  if (j.contains("tdomain")) dom = load_tdomain(j["tdomain"]);

  if (j.contains("catalog")) return catalog::get(j["catalog"].get<std::string>(), params, dom);
  if (j.contains("expr")) {
    // Only names the expression uses need binding; keep extra params available.
    return MusielakFunction::from_expression(j["expr"].get<std::string>(), params,
                                             dom.value_or(TDomain::interval(0.0, 1.0)));
  }
  if (j.contains("combinator")) {
    const auto kind = j["combinator"].get<std::string>();
    MusielakFunction out = [&] {
      if (kind == "sum") {
        std::vector<MusielakFunction> ch;
        for (const auto& c : j.at("children")) ch.push_back(load_function(c, extra));
        return sum(std::move(ch));
      }
      if (kind == "scale") {
        const json& child = j.contains("child") ? j["child"] : j.at("children").at(0);
        return scale(j.at("r").get<double>(), load_function(child, extra));
      }
      const auto fam = load_family(j.at("family"), extra);
      if (kind == "sup") return pointwise_sup(fam);
      if (kind == "inf") return pointwise_inf(fam);
      if (kind == "limsup") return lim_sup(fam);
      if (kind == "liminf") return lim_inf(fam);
      throw InputError("unknown combinator '" + kind + "'");
    }();
    return dom ? out.with_domain(*dom) : out;
  }
  throw InputError("function spec needs \"catalog\", \"expr\" or \"combinator\"");
}

// ---------------------------------------------------------------------------
// Serialization

inline json to_json(const TDomain& d) {
  if (d.is_interval()) return json::array({d.lo(), d.hi()});
  return json{{"points", d.point_set()}};
}

inline json to_json(const MusielakFunction& m) {
  json j = std::visit(
      [](const auto& b) -> json {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, MusielakFunction::CatalogBody>) {
          json p = json::object();
          for (const auto& [k, v] : b.params) p[k] = v;
          return json{{"catalog", b.name}, {"params", p}};
        } else if constexpr (std::is_same_v<B, MusielakFunction::ExprBody>) {
          json p = json::object();
          for (const auto& [k, v] : b.params) p[k] = v;
          return json{{"expr", b.expr.pretty()}, {"params", p}};
        } else if constexpr (std::is_same_v<B, MusielakFunction::CallableBody>) {
          return json{{"callable", b.description}};
        } else {
          json c{{"combinator", to_string(b.kind)}};
          if (b.kind == CombinatorKind::Sum) {
            c["children"] = json::array();
            for (const auto& ch : b.children) c["children"].push_back(to_json(ch));
          } else if (b.kind == CombinatorKind::Scale) {
            c["r"] = b.factor;
            c["child"] = to_json(b.children[0]);
          } else if (b.generator) {
            json p = json::object();
            for (const auto& [k, v] : b.generator->params) p[k] = v;
            c["family"] = json{{"expr", b.generator->expr},
                               {"index", b.generator->index},
                               {"first", b.first_index},
                               {"tail", b.first_index + static_cast<int>(b.children.size()) - 1},
                               {"params", p}};
          } else {
            json members = json::array();
            for (const auto& ch : b.children) members.push_back(to_json(ch));
            c["family"] = json{{"members", members}, {"first", b.first_index}};
          }
          return c;
        }
      },
      m.body());
  j["tdomain"] = to_json(m.t_domain());
  return j;
}

inline json to_json(const Witness& w) { return json{{"t", number(w.t)}, {"u", number(w.u)}, {"value", number(w.value)}}; }

inline json to_json(const AxiomReport& r) {
  json verdicts = json::array();
  for (bool a : r.axiom) verdicts.push_back(a);
  json witnesses = json::object();
  for (std::size_t i = 0; i < r.witness.size(); ++i)
    if (r.witness[i]) witnesses["axiom" + std::to_string(i + 1)] = to_json(*r.witness[i]);
  std::vector<int> growth(r.growth_per_t.begin(), r.growth_per_t.end());
  std::vector<int> overflow(r.overflow_per_t.begin(), r.overflow_per_t.end());
  return json{{"even_defect", number(r.even_defect)},
              {"convexity_defect", number(r.convexity_defect)},
              {"half_convexity_defect", number(r.half_convexity_defect)},
              {"positivity_ok", r.positivity_ok},
              {"nonnegative", r.nonnegative},
              {"limit0_estimate", number(r.limit0_estimate)},
              {"limit_inf_slope", number(r.limit_inf_slope)},
              {"growth_trend", r.growth_trend},
              {"zero_at_zero_defect", number(r.zero_at_zero_defect)},
              {"right_continuous_at_zero", r.right_continuous_at_zero},
              {"t_grid", numbers(r.t_grid)},
              {"limit0_per_t", numbers(r.limit0_per_t)},
              {"limit_inf_per_t", numbers(r.limit_inf_per_t)},
              {"growth_per_t", growth},
              {"overflow_per_t", overflow},
              {"axioms", verdicts},
              {"axiom5", "by-construction"},
              {"witnesses", witnesses}};
}

inline json to_json(const Delta2Report& r) {
  return json{{"K_estimate", number(r.k_estimate)}, {"u0", r.u0},       {"u_max", r.u_max},
              {"bounded", r.bounded},              {"overflow", r.overflow}, {"witness", to_json(r.witness)}};
}

inline json to_json(const NormResult& r) {
  return json{{"norm", number(r.norm)},
              {"bracket", json::array({number(r.bracket_lo), number(r.bracket_hi)})},
              {"iterations", r.iterations},
              {"modular_at_norm", number(r.modular_at_norm)}};
}

inline json to_json(const ModularResult& r) { return json{{"value", number(r.value)}, {"overflow", r.overflow}}; }

inline json to_json(const EmbeddingReport& r) {
  json j{{"r", r.r},
         {"u0", r.u0},
         {"hypothesis_holds", r.hypothesis_holds},
         {"max_violation", number(r.max_violation)},
         {"fields_checked", r.fields_checked},
         {"fields_skipped", r.fields_skipped},
         {"modular_inequality_holds", r.modular_inequality_holds}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (r.failing_field) j["failing_field"] = *r.failing_field;
  return j;
}

inline json to_json(const FamilyNormReport& r) {
  json j{{"variant", r.variant == FamilyVariant::Monotone ? "monotone" : "dominated"},
         {"member_index", r.member_index},
         {"member_norms", numbers(r.member_norms)},
         {"degenerate", r.degenerate},
         {"max_member_norm", number(r.max_member_norm)},
         {"min_member_norm", number(r.min_member_norm)},
         {"passed", r.passed}};
  if (r.variant == FamilyVariant::Monotone) {
    j["sup_norm"] = number(r.sup_norm);
    j["inf_norm"] = number(r.inf_norm);
    j["sup_identity"] = r.sup_identity;
    j["inf_identity"] = r.inf_identity;
  } else {
    j["limit_norm"] = number(r.limit_norm);
    j["gaps"] = numbers(r.gaps);
    j["gaps_nonincreasing"] = r.gaps_nonincreasing;
  }
  return j;
}

inline json to_json(const SimpleApprox& a) {
  json cells = json::array();
  for (const auto& row : a.value_table()) cells.push_back(numbers(row));
  return json{{"levels", a.levels()},
              {"rectangle", json{{"t", json::array({a.rect().t_lo, a.rect().t_hi})}, {"u_max", a.rect().u_max}}},
              {"cell_boundaries", numbers(a.cell_boundaries())},
              {"quantization_step", number(a.quantum())},
              {"table_u", numbers(a.table_u())},
              {"cell_values", cells},
              {"sup_error", number(a.sup_error())}};
}

inline json to_json(const ApproxConvergenceReport& r) {
  return json{{"levels", r.levels},
              {"sup_errors", numbers(r.sup_errors)},
              {"norms", numbers(r.norms)},
              {"target_norm", number(r.target_norm)},
              {"gaps", numbers(r.gaps)},
              {"gaps_nonincreasing", r.gaps_nonincreasing},
              {"final_gap_ok", r.final_gap_ok}};
}

}  // namespace musielak::io
