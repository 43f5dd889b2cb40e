#pragma once

// Finite measure spaces: weighted point sets and intervals with a density
// under a fixed quadrature rule. Every integral in the library reduces to
// sum_i w_i g(t_i) over the space's nodes, accumulated in ascending node
// order with Neumaier compensation so results are reproducible bit for bit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "musielak/error.hpp"
#include "musielak/expr.hpp"

namespace musielak {

enum class QuadratureScheme { Midpoint, Simpson, GaussLegendre };

inline const char* to_string(QuadratureScheme s) {
  switch (s) {
    case QuadratureScheme::Midpoint: return "midpoint";
    case QuadratureScheme::Simpson: return "simpson";
    case QuadratureScheme::GaussLegendre: return "gauss-legendre";
  }
  return "?";
}

inline QuadratureScheme scheme_from_string(const std::string& s) {
  if (s == "midpoint") return QuadratureScheme::Midpoint;
  if (s == "simpson") return QuadratureScheme::Simpson;
  if (s == "gauss-legendre" || s == "gauss") return QuadratureScheme::GaussLegendre;
  throw InvalidArgument("unknown quadrature scheme '" + s + "'");
}

struct QuadratureRule {
  QuadratureScheme scheme = QuadratureScheme::Simpson;
  std::size_t n = 101;  // node count
};

struct QuadratureNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
inline QuadratureNodes gauss_legendre_unit(std::size_t n) {
  // Returns (P_n(x), P_n'(x)) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    return std::pair{p1, dp};
  };
  QuadratureNodes q;
  q.nodes.resize(n);
  q.weights.resize(n);
  if (n == 1) {
    q.nodes[0] = 0.0;
    q.weights[0] = 2.0;
    return q;
  }
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

}  // namespace detail

/// Nodes and weights of `rule` on [a, b], nodes ascending.
inline QuadratureNodes quadrature(double a, double b, QuadratureRule rule) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument("quadrature interval must be finite with a < b");
  QuadratureNodes q;
  const std::size_t n = rule.n;
  switch (rule.scheme) {
    case QuadratureScheme::Midpoint: {
      if (n < 1) throw InvalidArgument("midpoint rule needs n >= 1");
      const double h = (b - a) / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        q.nodes.push_back(a + (static_cast<double>(i) + 0.5) * h);
        q.weights.push_back(h);
      }
      break;
    }
    case QuadratureScheme::Simpson: {
      if (n < 3 || n % 2 == 0) throw InvalidArgument("composite Simpson needs an odd node count >= 3");
      const double h = (b - a) / static_cast<double>(n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        q.nodes.push_back(i + 1 == n ? b : a + static_cast<double>(i) * h);
        const double c = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        q.weights.push_back(c * h / 3.0);
      }
      break;
    }
    case QuadratureScheme::GaussLegendre: {
      if (n < 1) throw InvalidArgument("Gauss-Legendre needs n >= 1");
      auto unit = detail::gauss_legendre_unit(n);
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t i = 0; i < n; ++i) {
        q.nodes.push_back(mid + half * unit.nodes[i]);
        q.weights.push_back(half * unit.weights[i]);
      }
      break;
    }
  }
  return q;
}

/// Neumaier-compensated accumulator. Order of `add` calls fixes the result.
class CompensatedSum {
 public:
  void add(double x) {
    const double s = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - s) + x;
    else comp_ += (x - s) + sum_;
    sum_ = s;
  }
  double value() const { return sum_ + comp_; }
  double partial() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// The (Omega, Sigma, mu) of the theory: finitely many weighted nodes, either
/// given directly or produced by a quadrature rule against a density.
class MeasureSpace {
 public:
  enum class Kind { DiscretePoints, IntervalDensity };

  static MeasureSpace discrete(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw InvalidArgument("discrete measure needs at least one point");
    MeasureSpace m;
    m.kind_ = Kind::DiscretePoints;
    for (const auto& [t, w] : points) {
      if (!std::isfinite(t) || !std::isfinite(w) || w < 0.0)
        throw InvalidArgument("discrete points need finite t and finite w >= 0");
      m.nodes_.push_back(t);
      m.weights_.push_back(w);
    }
    m.finish();
    return m;
  }

  /// Interval [a, b] with a density given by an expression in t.
  static MeasureSpace interval(double a, double b, const dsl::Expr& density, QuadratureRule rule) {
    MeasureSpace m = interval(a, b, [density](double t) { return density(t, 0.0); }, rule);
    m.density_text_ = density.pretty();
    return m;
  }

  static MeasureSpace interval(double a, double b, const std::function<double(double)>& density,
                               QuadratureRule rule) {
    auto q = quadrature(a, b, rule);
    MeasureSpace m;
    m.kind_ = Kind::IntervalDensity;
    m.a_ = a;
    m.b_ = b;
    m.rule_ = rule;
    m.density_text_ = "<function>";
    m.nodes_ = std::move(q.nodes);
    m.weights_.resize(m.nodes_.size());
    for (std::size_t i = 0; i < m.nodes_.size(); ++i) {
      const double d = density(m.nodes_[i]);
      if (!std::isfinite(d) || d < 0.0)
        throw InvalidArgument("density must be finite and nonnegative at t=" + std::to_string(m.nodes_[i]));
      m.weights_[i] = q.weights[i] * d;
    }
    m.finish();
    return m;
  }

  /// Lebesgue measure on [a, b].
  static MeasureSpace lebesgue(double a, double b, QuadratureRule rule = {QuadratureScheme::Simpson, 1001}) {
    MeasureSpace m = interval(a, b, [](double) { return 1.0; }, rule);
    m.density_text_ = "1";
    return m;
  }

  Kind kind() const noexcept { return kind_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double mass() const noexcept { return mass_; }

  // Interval metadata; meaningful for IntervalDensity only.
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  const std::string& density_text() const noexcept { return density_text_; }

  double min_node() const { return *std::min_element(nodes_.begin(), nodes_.end()); }
  double max_node() const { return *std::max_element(nodes_.begin(), nodes_.end()); }

 private:
  MeasureSpace() = default;

  void finish() {
    CompensatedSum s;
    for (double w : weights_) s.add(w);
    mass_ = s.value();
    if (!std::isfinite(mass_)) throw InvalidArgument("total mass is not finite");
  }

  Kind kind_ = Kind::DiscretePoints;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double mass_ = 0.0;
  double a_ = 0.0, b_ = 0.0;
  QuadratureRule rule_;
  std::string density_text_;
};

/// The nonnegative field t -> ||f(t)||, by node values or by an expression in t.
class ScalarField {
 public:
  static ScalarField from_values(std::vector<double> values) {
    for (double v : values)
      if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("field values must be finite and >= 0");
    ScalarField f;
    f.source_ = std::move(values);
    return f;
  }

  static ScalarField from_expression(dsl::Expr e) {
    ScalarField f;
    f.source_ = std::move(e);
    return f;
  }

  /// Parses an expression in t (u is not allowed).
  static ScalarField parse(std::string_view text) {
    dsl::Grammar g;
    g.allow_u = false;
    return from_expression(dsl::parse(text, g));
  }

  static ScalarField constant(double c) {
    if (!std::isfinite(c) || c < 0.0) throw InvalidArgument("constant field must be finite and >= 0");
    return from_expression(dsl::build::num(c));
  }

  bool has_values() const noexcept { return std::holds_alternative<std::vector<double>>(source_); }
  const std::vector<double>& values() const { return std::get<std::vector<double>>(source_); }
  const dsl::Expr& expression() const { return std::get<dsl::Expr>(source_); }

  /// Node values aligned with `space`.
  std::vector<double> values_on(const MeasureSpace& space) const {
    if (has_values()) {
      const auto& v = values();
      if (v.size() != space.size()) throw NodeMismatch(v.size(), space.size());
      return v;
    }
    std::vector<double> out(space.size());
    const auto nodes = space.nodes();
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double v = expression()(nodes[i], 0.0);
      if (v < 0.0)
        throw InvalidArgument("field expression is negative at t=" + std::to_string(nodes[i]));
      out[i] = v;
    }
    return out;
  }

  /// Node values of alpha*f; the norm field scales by |alpha|.
  static std::vector<double> scaled(std::span<const double> values, double alpha) {
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v *= std::fabs(alpha);
    return out;
  }

 private:
  ScalarField() = default;
  std::variant<std::vector<double>, dsl::Expr> source_;
};

/// sum_i w_i g_i over aligned node values, ascending index, compensated.
inline double integrate_values(std::span<const double> values, const MeasureSpace& space) {
  if (values.size() != space.size()) throw NodeMismatch(values.size(), space.size());
  const auto w = space.weights();
  constexpr double kMax = std::numeric_limits<double>::max();
  CompensatedSum s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw InvalidArgument("non-finite integrand at node " + std::to_string(i));
    const double term = w[i] * values[i];
    if (!std::isfinite(term)) throw Overflow(i);
    s.add(term);
    if (!std::isfinite(s.partial()) || std::fabs(s.partial()) > kMax) throw Overflow(i);
  }
  const double r = s.value();
  if (!std::isfinite(r)) throw Overflow(values.size() - 1);
  return r;
}

inline double integrate(const ScalarField& field, const MeasureSpace& space) {
  const auto v = field.values_on(space);
  return integrate_values(v, space);
}

/// Evaluates g(i, t_i) at every node. With threads > 1 the work is split in
/// contiguous chunks; the first failing chunk (lowest index) rethrows.
template <typename G>
std::vector<double> evaluate_at_nodes(const MeasureSpace& space, G&& g, unsigned threads = 1) {
  const auto nodes = space.nodes();
  std::vector<double> out(nodes.size());
  if (threads <= 1 || nodes.size() < 2 * threads) {
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = g(i, nodes[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (nodes.size() + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
      pool.emplace_back([&, k] {
        try {
          const std::size_t lo = k * chunk, hi = std::min(nodes.size(), lo + chunk);
          for (std::size_t i = lo; i < hi; ++i) out[i] = g(i, nodes[i]);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace musielak
