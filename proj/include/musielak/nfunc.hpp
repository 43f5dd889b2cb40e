#pragma once

// Musielak N-functions and Musielak-Orlicz functions M(t, u): representation,
// built-in catalog, combinators, and the sampled checks that decide which
// class a concrete function belongs to.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "musielak/error.hpp"
#include "musielak/expr.hpp"

namespace musielak {

/// Values above this are treated as overflow by every sampled check.
inline constexpr double kValueCap = 1e300;

enum class FunctionClass { MusielakN, MusielakOrlicz, Unclassified };

enum class Verdict { MusielakN, MusielakOrliczOnly, Neither };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::MusielakN: return "MusielakN";
    case Verdict::MusielakOrliczOnly: return "MusielakOrliczOnly";
    case Verdict::Neither: return "Neither";
  }
  return "?";
}

inline const char* to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::MusielakN: return "MusielakN";
    case FunctionClass::MusielakOrlicz: return "MusielakOrlicz";
    case FunctionClass::Unclassified: return "Unclassified";
  }
  return "?";
}

/// Where t lives: an interval or a finite point set.
class TDomain {
 public:
  static TDomain interval(double lo, double hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw InvalidArgument("t-domain interval needs finite lo <= hi");
    TDomain d;
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
  }

  static TDomain points(std::vector<double> pts) {
    if (pts.empty()) throw InvalidArgument("t-domain point set is empty");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    TDomain d;
    d.points_ = std::move(pts);
    d.lo_ = d.points_.front();
    d.hi_ = d.points_.back();
    return d;
  }

  bool is_interval() const noexcept { return points_.empty(); }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<double>& point_set() const noexcept { return points_; }

  bool contains(double t) const {
    if (is_interval()) return t >= lo_ && t <= hi_;
    return std::binary_search(points_.begin(), points_.end(), t);
  }

  /// `n` uniform samples including both ends; a point set returns its points.
  std::vector<double> sample(std::size_t n = 33) const {
    if (!is_interval()) return points_;
    if (n <= 1 || lo_ == hi_) return {lo_};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = i + 1 == n ? hi_ : lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
  }

  static TDomain intersect(const TDomain& a, const TDomain& b) {
    if (a.is_interval() && b.is_interval()) {
      const double lo = std::max(a.lo_, b.lo_), hi = std::min(a.hi_, b.hi_);
      if (lo > hi) throw InvalidArgument("t-domains do not intersect");
      return interval(lo, hi);
    }
    const TDomain& set = a.is_interval() ? b : a;
    const TDomain& other = a.is_interval() ? a : b;
    std::vector<double> pts;
    for (double t : set.points_)
      if (other.contains(t)) pts.push_back(t);
    if (pts.empty()) throw InvalidArgument("t-domains do not intersect");
    return points(std::move(pts));
  }

  friend bool operator==(const TDomain&, const TDomain&) = default;

 private:
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> points_;
};

enum class CombinatorKind { Sum, Scale, Sup, Inf, LimSup, LimInf };

inline const char* to_string(CombinatorKind k) {
  switch (k) {
    case CombinatorKind::Sum: return "sum";
    case CombinatorKind::Scale: return "scale";
    case CombinatorKind::Sup: return "sup";
    case CombinatorKind::Inf: return "inf";
    case CombinatorKind::LimSup: return "limsup";
    case CombinatorKind::LimInf: return "liminf";
  }
  return "?";
}

class MusielakFunction;

/// How a family was generated, kept for serialization.
struct FamilyGenerator {
  std::string expr;
  std::string index = "n";
  dsl::ParamMap params;
};

/// An indexed family {M_n}, n = first_index .. tail(), with an optional dominator G.
struct FunctionFamily {
  std::vector<MusielakFunction> members;
  int first_index = 1;
  std::shared_ptr<const MusielakFunction> dominator;
  std::optional<FamilyGenerator> generator;

  int tail() const noexcept { return first_index + static_cast<int>(members.size()) - 1; }
  const MusielakFunction& member(int n) const;

  /// Builds members by binding `index` to first..tail in `expr`.
  static FunctionFamily from_expression(const std::string& expr, const std::string& index, int first,
                                        int tail, const dsl::ParamMap& params, const TDomain& domain);
};

class MusielakFunction {
 public:
  struct CatalogBody {
    std::string name;
    dsl::ParamMap params;
    dsl::Expr bound;
  };
  struct ExprBody {
    dsl::Expr expr;
    dsl::ParamMap params;
    dsl::Expr bound;
  };
  struct CombinatorBody {
    CombinatorKind kind;
    double factor = 1.0;  // Scale only
    std::vector<MusielakFunction> children;
    int first_index = 1;  // families only
    std::optional<FamilyGenerator> generator;
  };
  /// Arbitrary code, e.g. a simple-function surrogate.
  struct CallableBody {
    std::string description;
    std::function<double(double, double)> fn;
  };
  using Body = std::variant<CatalogBody, ExprBody, CombinatorBody, CallableBody>;

  /// M(t, u) from expression text; every parameter must be bound in `params`.
  static MusielakFunction from_expression(std::string_view text, const dsl::ParamMap& params,
                                          TDomain domain) {
    dsl::Expr e = dsl::parse(text, params);
    return from_expression(std::move(e), params, std::move(domain));
  }

  static MusielakFunction from_expression(dsl::Expr e, const dsl::ParamMap& params, TDomain domain) {
    dsl::Expr bound = e.bind(params);
    if (auto unbound = bound.parameters(); !unbound.empty()) throw UnboundParameter(unbound.front());
    return MusielakFunction(ExprBody{std::move(e), params, std::move(bound)}, std::move(domain),
                            FunctionClass::Unclassified);
  }

  static MusielakFunction from_callable(std::function<double(double, double)> fn, TDomain domain,
                                        std::string description) {
    return MusielakFunction(CallableBody{std::move(description), std::move(fn)}, std::move(domain),
                            FunctionClass::Unclassified);
  }

  double operator()(double t, double u) const { return evaluate(t, u); }

  double evaluate(double t, double u) const {
    return std::visit([&](const auto& body) { return eval_body(body, t, u); }, impl_->body);
  }

  const Body& body() const noexcept { return impl_->body; }
  const TDomain& t_domain() const noexcept { return impl_->domain; }
  FunctionClass claimed_class() const noexcept { return impl_->claimed; }

  /// Same body under a different t-domain.
  MusielakFunction with_domain(TDomain domain) const {
    return MusielakFunction(impl_->body, std::move(domain), impl_->claimed);
  }

  /// One-line provenance: catalog name, expression text or combinator tree.
  std::string describe() const {
    return std::visit(
        [](const auto& b) -> std::string {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, CatalogBody>) {
            std::string s = "catalog:" + b.name;
            for (const auto& [k, v] : b.params) s += " " + k + "=" + std::to_string(v);
            return s;
          } else if constexpr (std::is_same_v<B, ExprBody>) {
            return b.expr.pretty();
          } else if constexpr (std::is_same_v<B, CallableBody>) {
            return b.description;
          } else {
            if (b.kind == CombinatorKind::Scale)
              return "scale(" + std::to_string(b.factor) + ", " + b.children[0].describe() + ")";
            if (b.kind == CombinatorKind::Sum) {
              std::string s = "sum(";
              for (std::size_t i = 0; i < b.children.size(); ++i)
                s += (i ? ", " : "") + b.children[i].describe();
              return s + ")";
            }
            std::string s = std::string(to_string(b.kind)) + "{";
            if (b.generator) s += b.generator->expr + " | " + b.generator->index + "=";
            else s += "n=";
            s += std::to_string(b.first_index) + ".." +
                 std::to_string(b.first_index + static_cast<int>(b.children.size()) - 1) + "}";
            return s;
          }
        },
        impl_->body);
  }

  // Internal: catalog and combinator construction.
  MusielakFunction(Body body, TDomain domain, FunctionClass claimed)
      : impl_(std::make_shared<const Impl>(Impl{std::move(body), std::move(domain), claimed})) {}

 private:
  struct Impl {
    Body body;
    TDomain domain;
    FunctionClass claimed;
  };

  static double eval_body(const CatalogBody& b, double t, double u) { return b.bound(t, u); }
  static double eval_body(const ExprBody& b, double t, double u) { return b.bound(t, u); }
  static double eval_body(const CallableBody& b, double t, double u) { return b.fn(t, u); }

  static double eval_body(const CombinatorBody& b, double t, double u) {
    const auto& ch = b.children;
    switch (b.kind) {
      case CombinatorKind::Sum: {
        double s = 0.0;
        for (const auto& c : ch) s += c(t, u);
        return s;
      }
      case CombinatorKind::Scale: return b.factor * ch[0](t, u);
      case CombinatorKind::Sup: {
        double m = ch[0](t, u);
        for (std::size_t i = 1; i < ch.size(); ++i) m = std::max(m, ch[i](t, u));
        return m;
      }
      case CombinatorKind::Inf: {
        double m = ch[0](t, u);
        for (std::size_t i = 1; i < ch.size(); ++i) m = std::min(m, ch[i](t, u));
        return m;
      }
      case CombinatorKind::LimSup:
      case CombinatorKind::LimInf: {
        // inf_n sup_{k in [n, tail]} M_k (resp. sup_n inf_k) via suffix extrema.
        const bool sup = b.kind == CombinatorKind::LimSup;
        double suffix = ch.back()(t, u);
        double outer = suffix;
        for (std::size_t i = ch.size() - 1; i-- > 0;) {
          const double v = ch[i](t, u);
          suffix = sup ? std::max(suffix, v) : std::min(suffix, v);
          outer = sup ? std::min(outer, suffix) : std::max(outer, suffix);
        }
        return outer;
      }
    }
    return 0.0;
  }

  std::shared_ptr<const Impl> impl_;
};

inline const MusielakFunction& FunctionFamily::member(int n) const {
  if (n < first_index || n > tail()) throw InvalidArgument("family index out of range");
  return members[static_cast<std::size_t>(n - first_index)];
}

inline FunctionFamily FunctionFamily::from_expression(const std::string& expr, const std::string& index,
                                                      int first, int tail, const dsl::ParamMap& params,
                                                      const TDomain& domain) {
  if (tail < first) throw EmptyFamily();
  dsl::ParamMap names = params;
  names[index] = 0.0;
  const dsl::Expr parsed = dsl::parse(expr, names);
  FunctionFamily fam;
  fam.first_index = first;
  fam.generator = FamilyGenerator{expr, index, params};
  for (int n = first; n <= tail; ++n) {
    dsl::ParamMap bound = params;
    bound[index] = static_cast<double>(n);
    fam.members.push_back(MusielakFunction::from_expression(parsed, bound, domain));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Catalog

namespace catalog {

struct Entry {
  const char* name;
  const char* expression;
  FunctionClass claimed;
  double t_lo, t_hi;
};

/// Built-in examples. exp_abs is the zero-normalized exponential
/// e^{|t|}(e^{|u|} - 1 - |u|); see the README for why it is not taken verbatim.
inline constexpr std::array<Entry, 4> kEntries{{
    {"power_tu2", "(t*u)^2", FunctionClass::MusielakN, 0.5, 2.0},
    {"exp_abs", "exp(abs(t))*(exp(abs(u)) - 1 - abs(u))", FunctionClass::MusielakN, -1.0, 1.0},
    {"geo_minus_one", "a^(t*abs(u)) - 1", FunctionClass::MusielakOrlicz, 0.5, 2.0},
    {"affine_slope", "(t + 1)^2*abs(u)", FunctionClass::MusielakOrlicz, 0.0, 2.0},
}};

inline std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& e : kEntries) out.emplace_back(e.name);
  return out;
}

inline MusielakFunction get(const std::string& name, dsl::ParamMap params = {},
                            std::optional<TDomain> domain = std::nullopt) {
  for (const auto& e : kEntries) {
    if (name != e.name) continue;
    if (name == "geo_minus_one") {
      params.try_emplace("a", std::numbers::e);
      if (!(params.at("a") > 1.0)) throw InvalidArgument("geo_minus_one needs a > 1");
    }
    const dsl::Expr expr = dsl::parse(e.expression, params);
    dsl::Expr bound = expr.bind(params);
    if (auto unbound = bound.parameters(); !unbound.empty()) throw UnboundParameter(unbound.front());
    // Keep only the parameters the formula uses.
    dsl::ParamMap used;
    for (const auto& p : expr.parameters()) used[p] = params.at(p);
    return MusielakFunction(MusielakFunction::CatalogBody{name, std::move(used), std::move(bound)},
                            domain.value_or(TDomain::interval(e.t_lo, e.t_hi)), e.claimed);
  }
  throw InvalidArgument("unknown catalog entry '" + name + "'");
}

}  // namespace catalog

// ---------------------------------------------------------------------------
// Combinators

inline MusielakFunction sum(std::vector<MusielakFunction> children) {
  if (children.empty()) throw EmptyFamily();
  TDomain d = children.front().t_domain();
  for (std::size_t i = 1; i < children.size(); ++i) d = TDomain::intersect(d, children[i].t_domain());
  return MusielakFunction(
      MusielakFunction::CombinatorBody{CombinatorKind::Sum, 1.0, std::move(children), 1, std::nullopt},
      std::move(d), FunctionClass::Unclassified);
}

inline MusielakFunction sum(const MusielakFunction& a, const MusielakFunction& b) { return sum({a, b}); }

/// r * M, r > 0.
inline MusielakFunction scale(double r, const MusielakFunction& m) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("scale factor must be finite and > 0");
  return MusielakFunction(MusielakFunction::CombinatorBody{CombinatorKind::Scale, r, {m}, 1, std::nullopt},
                          m.t_domain(), FunctionClass::Unclassified);
}

namespace detail {
inline MusielakFunction family_combinator(CombinatorKind kind, const FunctionFamily& fam) {
  if (fam.members.empty()) throw EmptyFamily();
  TDomain d = fam.members.front().t_domain();
  for (std::size_t i = 1; i < fam.members.size(); ++i)
    d = TDomain::intersect(d, fam.members[i].t_domain());
  return MusielakFunction(
      MusielakFunction::CombinatorBody{kind, 1.0, fam.members, fam.first_index, fam.generator}, std::move(d),
      FunctionClass::Unclassified);
}
}  // namespace detail

inline MusielakFunction pointwise_sup(const FunctionFamily& f) {
  return detail::family_combinator(CombinatorKind::Sup, f);
}
inline MusielakFunction pointwise_inf(const FunctionFamily& f) {
  return detail::family_combinator(CombinatorKind::Inf, f);
}
/// min over n of max over k in [n, tail] of M_k.
inline MusielakFunction lim_sup(const FunctionFamily& f) {
  return detail::family_combinator(CombinatorKind::LimSup, f);
}
/// max over n of min over k in [n, tail] of M_k.
inline MusielakFunction lim_inf(const FunctionFamily& f) {
  return detail::family_combinator(CombinatorKind::LimInf, f);
}

// ---------------------------------------------------------------------------
// Sampled evaluation helpers

/// M(t, u), or nullopt when the value overflows or exceeds kValueCap.
inline std::optional<double> try_evaluate(const MusielakFunction& m, double t, double u) {
  try {
    const double v = m(t, u);
    if (!std::isfinite(v) || std::fabs(v) > kValueCap) return std::nullopt;
    return v;
  } catch (const DomainError& e) {
    if (e.is_overflow()) return std::nullopt;
    throw;
  }
}

/// `count` log-spaced magnitudes in [lo, hi].
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) return {lo};
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = i + 1 == count ? hi : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) return {lo};
  for (std::size_t i = 0; i < count; ++i)
    out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Right derivative and the integral representation

struct PPlusOptions {
  double h0 = 0.0;  // 0 selects 1/16 * max(1, u)
  int steps = 8;
};

/// Right derivative p+(t, u) from right difference quotients on h = h0 * 2^-k,
/// Richardson-extrapolated. Throws NonmonotoneQuotient if the quotients grow
/// as h shrinks, which a convex M cannot do.
inline double p_plus(const MusielakFunction& m, double t, double u, PPlusOptions opt = {}) {
  if (!(u >= 0.0)) throw InvalidArgument("p_plus needs u >= 0");
  const double h0 = opt.h0 > 0.0 ? opt.h0 : 0.0625 * std::max(1.0, u);
  const int steps = std::max(1, opt.steps);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double m0 = m(t, u);
  std::vector<std::vector<double>> table(static_cast<std::size_t>(steps) + 1);
  double h = h0;
  double prev = 0.0;
  for (int k = 0; k <= steps; ++k, h *= 0.5) {
    const double m1 = m(t, u + h);
    const double q = (m1 - m0) / h;
    if (k > 0) {
      const double slack = 1e-9 * (1.0 + std::fabs(prev)) + 8.0 * eps * (std::fabs(m0) + std::fabs(m1)) / h;
      if (q > prev + slack) throw NonmonotoneQuotient(t, u, h);
    }
    prev = q;
    auto& row = table[static_cast<std::size_t>(k)];
    row.push_back(q);
    double factor = 1.0;
    for (int j = 1; j <= k; ++j) {
      factor *= 2.0;
      const double above = table[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
      row.push_back(row[static_cast<std::size_t>(j - 1)] + (row[static_cast<std::size_t>(j - 1)] - above) / (factor - 1.0));
    }
  }
  // Diagonal entry whose change from its predecessor is smallest.
  double best = table[0][0];
  double best_change = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= steps; ++k) {
    const double cur = table[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    const double change = std::fabs(cur - table[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(k - 1)]);
    if (change < best_change) {
      best_change = change;
      best = cur;
    }
  }
  return best;
}

struct RepresentationOptions {
  std::size_t inner_nodes = 2001;  // total Simpson nodes on [0, max |u|]
  PPlusOptions p_plus;
};

struct RepresentationResult {
  double defect = 0.0;
  double witness_t = 0.0;
  double witness_u = 0.0;
};

/// max over the grid of |M(t,u) - int_0^{|u|} p+(t,s) ds|, the inner integral by
/// composite Simpson on a refinement of the |u| grid.
inline RepresentationResult representation_check(const MusielakFunction& m, const std::vector<double>& t_grid,
                                                  const std::vector<double>& u_grid,
                                                  RepresentationOptions opt = {}) {
  std::vector<double> mags{0.0};
  for (double u : u_grid) mags.push_back(std::fabs(u));
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
  const double top = mags.back();

  // Fine grid: each gap of the magnitude grid split into an even number of panels.
  std::vector<double> fine{0.0};
  std::vector<std::size_t> break_index{0};
  const double panels_total = static_cast<double>(std::max<std::size_t>(opt.inner_nodes, 3) - 1);
  for (std::size_t i = 1; i < mags.size(); ++i) {
    const double gap = mags[i] - mags[i - 1];
    auto count = static_cast<std::size_t>(std::ceil(panels_total * gap / top / 2.0)) * 2;
    count = std::max<std::size_t>(count, 2);
    for (std::size_t k = 1; k <= count; ++k)
      fine.push_back(k == count ? mags[i] : mags[i - 1] + gap * static_cast<double>(k) / static_cast<double>(count));
    break_index.push_back(fine.size() - 1);
  }

  RepresentationResult res;
  std::vector<double> p(fine.size());
  for (double t : t_grid) {
    for (std::size_t k = 0; k < fine.size(); ++k) p[k] = p_plus(m, t, fine[k], opt.p_plus);
    double integral = 0.0;
    for (std::size_t i = 1; i < break_index.size(); ++i) {
      const std::size_t lo = break_index[i - 1], hi = break_index[i];
      const double h = (fine[hi] - fine[lo]) / static_cast<double>(hi - lo);
      double s = p[lo] + p[hi];
      for (std::size_t k = lo + 1; k < hi; ++k) s += ((k - lo) % 2 == 1 ? 4.0 : 2.0) * p[k];
      integral += s * h / 3.0;
      const double mag = mags[i];
      for (double sign : {1.0, -1.0}) {
        const double u = sign * mag;
        if (std::find(u_grid.begin(), u_grid.end(), u) == u_grid.end()) continue;
        const double d = std::fabs(m(t, u) - integral);
        if (d > res.defect) res = {d, t, u};
      }
    }
    // u = 0 is represented by the empty integral.
    if (std::find(u_grid.begin(), u_grid.end(), 0.0) != u_grid.end()) {
      const double d = std::fabs(m(t, 0.0));
      if (d > res.defect) res = {d, t, 0.0};
    }
  }
  return res;
}

inline double representation_defect(const MusielakFunction& m, const std::vector<double>& t_grid,
                                    const std::vector<double>& u_grid, RepresentationOptions opt = {}) {
  return representation_check(m, t_grid, u_grid, opt).defect;
}

// ---------------------------------------------------------------------------
// Axiom verification and classification

struct Witness {
  double t = 0.0;
  double u = 0.0;
  double value = 0.0;
};

/// Sample points for the axiom checks.
struct AxiomGrid {
  std::vector<double> t;
  std::vector<double> u_magnitudes;  // evenness / convexity / positivity, both signs plus 0
  std::vector<double> limit_u;       // geometric, for the two limit axioms

  /// 33 uniform t samples of the domain; 64 log-spaced magnitudes in
  /// [1e-6, 2^10]; limit grid 1e-6 * 2^k up to 2^10.
  static AxiomGrid standard(const TDomain& domain, std::size_t t_count = 33) {
    AxiomGrid g;
    g.t = domain.sample(t_count);
    g.u_magnitudes = log_spaced(1e-6, 1024.0, 64);
    for (double u = 1e-6; u <= 1024.0; u *= 2.0) g.limit_u.push_back(u);
    return g;
  }
};

struct AxiomTolerances {
  double limit = 1e-3;       // axiom 3 ratio bound; axiom 4 uses 1/limit
  double convexity = 1e-10;  // scaled midpoint defect
  double evenness = 1e-12;   // scaled evenness defect
  double zero = 1e-12;       // |M(t, 0)|
};

struct AxiomReport {
  // Axiom 1
  double even_defect = 0.0;
  double convexity_defect = 0.0;       // over u of both signs
  double half_convexity_defect = 0.0;  // over u >= 0 only
  // Axiom 2
  bool positivity_ok = true;
  bool nonnegative = true;
  bool half_positivity_ok = true;  // u > 0 only
  bool half_nonnegative = true;
  // Axioms 3, 4
  double limit0_estimate = 0.0;  // max over t of M(t,u)/u at the smallest u
  double limit_inf_slope = 0.0;  // min over t of M(t,U)/U at the largest finite U
  bool growth_trend = true;
  double zero_at_zero_defect = 0.0;
  bool right_continuous_at_zero = true;
  std::vector<double> t_grid;
  std::vector<double> limit0_per_t;
  std::vector<double> limit_inf_per_t;
  std::vector<bool> growth_per_t;
  std::vector<bool> overflow_per_t;  // the large-u sequence hit the value cap

  std::array<bool, 4> axiom{};
  bool axiom5_by_construction = true;
  std::array<std::optional<Witness>, 4> witness;

  bool all_pass() const { return axiom[0] && axiom[1] && axiom[2] && axiom[3]; }

  /// Nonnegative, convex, zero at zero and positive on u > 0, judged on u >= 0.
  bool orlicz_core(const AxiomTolerances& tol) const {
    return half_nonnegative && half_positivity_ok && half_convexity_defect <= tol.convexity &&
           zero_at_zero_defect <= tol.zero && right_continuous_at_zero;
  }
};

namespace detail {

inline double scaled(double diff, double magnitude) { return diff / std::max(1.0, std::fabs(magnitude)); }

// Ratios M(t,u)/u along the limit grid, stopping at the first overflow.
struct RatioSequence {
  std::vector<double> u;
  std::vector<double> ratio;
  bool overflowed = false;
};

inline RatioSequence ratio_sequence(const MusielakFunction& m, double t, const std::vector<double>& limit_u) {
  RatioSequence s;
  for (double u : limit_u) {
    auto v = try_evaluate(m, t, u);
    if (!v) {
      s.overflowed = true;
      break;
    }
    s.u.push_back(u);
    s.ratio.push_back(*v / u);
  }
  return s;
}

inline bool nondecreasing_within(double a, double b) { return a <= b + 1e-12 + 1e-9 * std::fabs(b); }

}  // namespace detail

/// Samples the five axioms on `grid`. Verdicts depend only on the recorded
/// defects and `tol`; axiom 5 (measurability in t) holds by construction.
inline AxiomReport verify_axioms(const MusielakFunction& m, const AxiomGrid& grid, const AxiomTolerances& tol = {}) {
  AxiomReport r;
  r.t_grid = grid.t;
  r.limit0_estimate = -std::numeric_limits<double>::infinity();
  r.limit_inf_slope = std::numeric_limits<double>::infinity();
  auto note = [&](int axiom, double t, double u, double value) {
    if (!r.witness[static_cast<std::size_t>(axiom)]) r.witness[static_cast<std::size_t>(axiom)] = Witness{t, u, value};
  };
  bool limit0_ok = true;

  for (double t : grid.t) {
    // Values on the symmetric grid, truncated at the first overflowing magnitude.
    std::vector<double> mags;
    for (double a : grid.u_magnitudes) {
      auto vp = try_evaluate(m, t, a);
      auto vn = try_evaluate(m, t, -a);
      if (!vp || !vn) break;
      mags.push_back(a);
      // Axiom 1: evenness.
      const double ed = detail::scaled(std::fabs(*vn - *vp), *vp);
      if (ed > r.even_defect) r.even_defect = ed;
      if (ed > tol.evenness) note(0, t, a, ed);
      // Axiom 2: positivity on u > 0, nonnegativity everywhere.
      if (!(*vp > 0.0)) {
        r.positivity_ok = r.half_positivity_ok = false;
        note(1, t, a, *vp);
      }
      if (*vp < 0.0) r.nonnegative = r.half_nonnegative = false;
      if (*vn < 0.0) {
        r.nonnegative = false;
        note(1, t, -a, *vn);
      }
    }
    const double m0 = m(t, 0.0);
    r.zero_at_zero_defect = std::max(r.zero_at_zero_defect, std::fabs(m0));
    if (std::fabs(m0) > tol.zero) note(2, t, 0.0, m0);
    if (m0 < 0.0) r.nonnegative = r.half_nonnegative = false;

    // Symmetric sample list: -mags (descending), 0, +mags.
    std::vector<double> us;
    for (auto it = mags.rbegin(); it != mags.rend(); ++it) us.push_back(-*it);
    us.push_back(0.0);
    for (double a : mags) us.push_back(a);
    std::vector<double> vals(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) vals[i] = m(t, us[i]);
    const std::size_t zero_index = mags.size();

    // Axiom 1: midpoint convexity over all pairs.
    for (std::size_t i = 0; i < us.size(); ++i) {
      for (std::size_t j = i + 1; j < us.size(); ++j) {
        const double mid_u = 0.5 * (us[i] + us[j]);
        const double avg = 0.5 * (vals[i] + vals[j]);
        auto mid = try_evaluate(m, t, mid_u);
        const double viol = mid ? detail::scaled(std::max(0.0, *mid - avg), avg) : kValueCap;
        if (viol > r.convexity_defect) r.convexity_defect = viol;
        if (i >= zero_index && viol > r.half_convexity_defect) r.half_convexity_defect = viol;
        if (viol > tol.convexity) note(0, t, mid_u, viol);
      }
    }

    // Axiom 3: M(t,u)/u -> 0 along the smallest limit-grid points.
    const auto seq = detail::ratio_sequence(m, t, grid.limit_u);
    double est0 = std::numeric_limits<double>::infinity();
    bool pass0 = false;
    if (seq.ratio.size() >= 3) {
      est0 = seq.ratio[0];
      pass0 = detail::nondecreasing_within(seq.ratio[0], seq.ratio[1]) &&
              detail::nondecreasing_within(seq.ratio[1], seq.ratio[2]) && std::fabs(seq.ratio[0]) <= tol.limit;
      // Right-continuity at 0: M(t,u_k) decreases toward 0 as u_k shrinks.
      const double v0 = seq.ratio[0] * seq.u[0], v1 = seq.ratio[1] * seq.u[1], v2 = seq.ratio[2] * seq.u[2];
      const bool rc = std::fabs(v0) <= tol.limit && std::fabs(v0) <= std::fabs(v1) + 1e-15 &&
                      std::fabs(v1) <= std::fabs(v2) + 1e-15;
      if (!rc) r.right_continuous_at_zero = false;
    } else {
      r.right_continuous_at_zero = false;
    }
    if (!pass0) {
      limit0_ok = false;
      note(2, t, grid.limit_u.front(), est0);
    }
    r.limit0_per_t.push_back(est0);
    r.limit0_estimate = std::max(r.limit0_estimate, est0);

    // Axiom 4: M(t,u)/u -> infinity along the largest limit-grid points.
    bool growth = false;
    double slope = seq.ratio.empty() ? 0.0 : seq.ratio.back();
    if (seq.overflowed && !seq.ratio.empty()) {
      growth = true;  // superlinear blow-up past the value cap
    } else if (seq.ratio.size() >= 3) {
      const std::size_t k = seq.ratio.size() - 1;
      const double r0 = seq.ratio[k - 2], r1 = seq.ratio[k - 1], r2 = seq.ratio[k];
      const double d1 = r1 - r0, d2 = r2 - r1;
      // Strictly increasing with increments that do not decay like a convergent tail.
      growth = d1 > 0.0 && d2 > 0.0 && (d2 >= 0.75 * d1 || r2 >= 1.0 / tol.limit);
    }
    if (!growth) note(3, t, seq.u.empty() ? 0.0 : seq.u.back(), slope);
    r.growth_per_t.push_back(growth);
    r.overflow_per_t.push_back(seq.overflowed);
    r.limit_inf_per_t.push_back(slope);
    r.limit_inf_slope = std::min(r.limit_inf_slope, slope);
    r.growth_trend = r.growth_trend && growth;
  }

  r.axiom[0] = r.even_defect <= tol.evenness && r.convexity_defect <= tol.convexity;
  r.axiom[1] = r.positivity_ok && r.nonnegative;
  r.axiom[2] = limit0_ok && r.zero_at_zero_defect <= tol.zero && r.right_continuous_at_zero;
  r.axiom[3] = r.growth_trend;
  return r;
}

inline AxiomReport verify_axioms(const MusielakFunction& m, const AxiomTolerances& tol = {}) {
  return verify_axioms(m, AxiomGrid::standard(m.t_domain()), tol);
}

struct Classification {
  Verdict verdict = Verdict::Neither;
  AxiomReport report;
};

/// MusielakN when axioms 1-4 pass; MusielakOrliczOnly when only the Orlicz
/// core (nonnegative, convex, zero at zero, positive) passes; otherwise Neither.
inline Classification classify(const MusielakFunction& m, const AxiomGrid& grid, const AxiomTolerances& tol = {}) {
  Classification c;
  c.report = verify_axioms(m, grid, tol);
  if (c.report.all_pass()) c.verdict = Verdict::MusielakN;
  else if (c.report.orlicz_core(tol)) c.verdict = Verdict::MusielakOrliczOnly;
  else c.verdict = Verdict::Neither;
  return c;
}

inline Classification classify(const MusielakFunction& m, const AxiomTolerances& tol = {}) {
  return classify(m, AxiomGrid::standard(m.t_domain()), tol);
}

// ---------------------------------------------------------------------------
// Delta2

struct Delta2Options {
  double u_max = 30.0;
  std::size_t u_count = 64;
  double cap = 1e6;
  double stabilization = 1e-3;  // relative change allowed between the last two ratios
};

struct Delta2Report {
  double k_estimate = 0.0;  // max of M(t,2u)/M(t,u); +inf on overflow
  double u0 = 0.0;
  double u_max = 0.0;
  bool bounded = false;
  bool overflow = false;
  Witness witness;  // where the max ratio was attained
};

/// Checks M(t,2u) <= K M(t,u) for u >= u0 on a geometric u-grid.
inline Delta2Report delta2_check(const MusielakFunction& m, double u0, const std::vector<double>& t_grid,
                                 Delta2Options opt = {}) {
  if (!(u0 > 0.0)) throw InvalidArgument("delta2 needs u0 > 0");
  if (!(opt.u_max > u0)) throw InvalidArgument("delta2 needs u_max > u0");
  Delta2Report r;
  r.u0 = u0;
  r.u_max = opt.u_max;
  const auto us = log_spaced(u0, opt.u_max, std::max<std::size_t>(opt.u_count, 3));
  bool stable = true;
  for (double t : t_grid) {
    double last = 0.0, before_last = 0.0;
    for (double u : us) {
      auto base = try_evaluate(m, t, u);
      if (base && !(*base > 0.0)) throw NonPositiveValue(t, u);
      auto doubled = try_evaluate(m, t, 2.0 * u);
      double ratio = std::numeric_limits<double>::infinity();
      if (!base) r.overflow = true;
      else if (!doubled) r.overflow = true;
      else ratio = *doubled / *base;
      if (ratio > r.k_estimate) {
        r.k_estimate = ratio;
        r.witness = Witness{t, u, ratio};
      }
      before_last = last;
      last = ratio;
    }
    if (!(std::fabs(last - before_last) <= opt.stabilization * std::fabs(before_last))) stable = false;
  }
  r.bounded = !r.overflow && stable && r.k_estimate <= opt.cap;
  return r;
}

inline Delta2Report delta2_check(const MusielakFunction& m, double u0, Delta2Options opt = {}) {
  return delta2_check(m, u0, m.t_domain().sample(), opt);
}

}  // namespace musielak
