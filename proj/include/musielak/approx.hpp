#pragma once

// Simple-function surrogates phi_L of M on a rectangle [t_lo, t_hi] x [-U, U]:
// piecewise constant in t over 2^L uniform cells (sampled at the cell
// midpoint) and quantized in value to multiples of Delta = max_rect M / 2^L.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "musielak/error.hpp"
#include "musielak/measure.hpp"
#include "musielak/nfunc.hpp"
#include "musielak/space.hpp"

namespace musielak {

struct Rectangle {
  double t_lo = 0.0;
  double t_hi = 1.0;
  double u_max = 1.0;
};

class SimpleApprox {
 public:
  static constexpr int kMaxLevels = 20;
  static constexpr std::size_t kTableSize = 17;

  int levels() const noexcept { return levels_; }
  std::size_t cells() const noexcept { return cell_mid_.size(); }
  const Rectangle& rect() const noexcept { return rect_; }
  double quantum() const noexcept { return delta_; }
  double sup_error() const noexcept { return sup_error_; }
  double rect_max() const noexcept { return rect_max_; }
  const std::vector<double>& cell_midpoints() const noexcept { return cell_mid_; }

  /// Cell boundaries, cells() + 1 values.
  std::vector<double> cell_boundaries() const {
    return linspace(rect_.t_lo, rect_.t_hi, cells() + 1);
  }

  /// u sample points for value_table().
  std::vector<double> table_u() const { return linspace(0.0, rect_.u_max, kTableSize); }

  /// phi_L at the cell midpoints on table_u(), one row per cell.
  std::vector<std::vector<double>> value_table() const {
    const auto us = table_u();
    std::vector<std::vector<double>> out(cells());
    for (std::size_t c = 0; c < cells(); ++c)
      for (double u : us) out[c].push_back(quantize((*m_)(cell_mid_[c], u)));
    return out;
  }

  std::size_t cell_of(double t) const {
    const double w = (rect_.t_hi - rect_.t_lo) / static_cast<double>(cells());
    const double pos = std::floor((t - rect_.t_lo) / w);
    if (!(pos > 0.0)) return 0;
    return std::min(cells() - 1, static_cast<std::size_t>(pos));
  }

  /// phi_L(t, u). Outside the rectangle t clamps to the nearest cell and the
  /// same quantization rule continues in u.
  double operator()(double t, double u) const { return quantize((*m_)(cell_mid_[cell_of(t)], u)); }

  /// phi_L as a function object for the norm machinery.
  MusielakFunction as_function() const {
    auto self = std::make_shared<const SimpleApprox>(*this);
    return MusielakFunction::from_callable([self](double t, double u) { return (*self)(t, u); },
                                           TDomain::interval(rect_.t_lo, rect_.t_hi),
                                           "simple(L=" + std::to_string(levels_) + ", " + m_->describe() + ")");
  }

  friend SimpleApprox simple_approximation(const MusielakFunction& m, const Rectangle& rect, int levels);

 private:
  // Rounds toward zero so phi(t, 0) = 0 and |phi| is monotone wherever |M| is.
  double quantize(double v) const {
    if (delta_ <= 0.0) return 0.0;
    const double q = std::floor(std::fabs(v) / delta_) * delta_;
    return v < 0.0 ? -q : q;
  }

  std::shared_ptr<const MusielakFunction> m_;
  Rectangle rect_;
  int levels_ = 0;
  double delta_ = 0.0;
  double rect_max_ = 0.0;
  double sup_error_ = 0.0;
  std::vector<double> cell_mid_;
};

/// Builds phi_L and measures sup |M - phi_L| on a grid four times finer than
/// the t-partition, with 257 u samples on [-U, U].
inline SimpleApprox simple_approximation(const MusielakFunction& m, const Rectangle& rect, int levels) {
  if (levels < 1 || levels > SimpleApprox::kMaxLevels) throw InvalidArgument("levels must lie in [1, 20]");
  if (!(rect.t_lo < rect.t_hi) || !(rect.u_max > 0.0)) throw InvalidArgument("degenerate rectangle");
  SimpleApprox a;
  a.m_ = std::make_shared<const MusielakFunction>(m);
  a.rect_ = rect;
  a.levels_ = levels;
  const std::size_t cells = std::size_t{1} << levels;
  const double width = (rect.t_hi - rect.t_lo) / static_cast<double>(cells);
  a.cell_mid_.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) a.cell_mid_[c] = rect.t_lo + (static_cast<double>(c) + 0.5) * width;

  const auto us = linspace(-rect.u_max, rect.u_max, 257);
  std::vector<double> ts;
  ts.reserve(4 * cells + 1);
  for (std::size_t j = 0; j < 4 * cells; ++j) ts.push_back(rect.t_lo + static_cast<double>(j) * width / 4.0);
  ts.push_back(rect.t_hi);

  // Boundedness scan, which also fixes Delta.
  std::vector<double> exact(ts.size() * us.size());
  double top = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t k = 0; k < us.size(); ++k) {
      auto v = try_evaluate(m, ts[i], us[k]);
      if (!v) throw UnboundedOnRectangle(ts[i], us[k]);
      exact[i * us.size() + k] = *v;
      top = std::max(top, std::fabs(*v));
    }
  }
  for (double tc : a.cell_mid_) {
    for (double u : us) {
      auto v = try_evaluate(m, tc, u);
      if (!v) throw UnboundedOnRectangle(tc, u);
      top = std::max(top, std::fabs(*v));
    }
  }
  a.rect_max_ = top;
  a.delta_ = top / static_cast<double>(cells);

  // phi on the cell midpoints, cached per cell.
  std::vector<double> cell_vals(cells * us.size());
  for (std::size_t c = 0; c < cells; ++c)
    for (std::size_t k = 0; k < us.size(); ++k) cell_vals[c * us.size() + k] = a.quantize(m(a.cell_mid_[c], us[k]));

  double err = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::size_t c = a.cell_of(ts[i]);
    for (std::size_t k = 0; k < us.size(); ++k)
      err = std::max(err, std::fabs(exact[i * us.size() + k] - cell_vals[c * us.size() + k]));
  }
  a.sup_error_ = err;
  return a;
}

struct ApproxConvergenceReport {
  std::vector<int> levels;
  std::vector<double> sup_errors;
  std::vector<double> norms;  // under phi_L
  double target_norm = 0.0;   // under M
  std::vector<double> gaps;
  bool gaps_nonincreasing = false;
  bool final_gap_ok = false;
  bool passed() const { return gaps_nonincreasing && final_gap_ok; }
};

/// Norms of f under phi_L for each level against the norm under M. Gaps must be
/// nonincreasing in L and at most 10 * rel_tol at the largest level. Requires
/// |f| / ||f||_M <= U_max on the nodes.
inline ApproxConvergenceReport approx_space_convergence(const MusielakFunction& m, const Rectangle& rect,
                                                        std::vector<int> levels, std::span<const double> f,
                                                        const MeasureSpace& space, double rel_tol) {
  if (levels.empty()) throw InvalidArgument("level list is empty");
  std::sort(levels.begin(), levels.end());
  const auto nodes = space.nodes();
  for (double t : nodes)
    if (t < rect.t_lo || t > rect.t_hi) throw InvalidArgument("measure node t=" + std::to_string(t) + " outside the rectangle");

  ApproxConvergenceReport rep;
  // Bisection error must sit well below the approximation gap being measured.
  NormOptions nopt;
  nopt.rel_tol = std::min(rel_tol, 1e-3) * 1e-3;
  rep.target_norm = luxemburg_norm(f, m, space, nopt).norm;
  // The norm probes M at f / ||f||, so that is what the rectangle must cover.
  if (rep.target_norm > 0.0)
    for (double v : f)
      if (std::fabs(v) / rep.target_norm > rect.u_max * (1.0 + 1e-12))
        throw InvalidArgument("f / ||f|| exceeds the rectangle's U_max");
  for (int L : levels) {
    const auto a = simple_approximation(m, rect, L);
    rep.levels.push_back(L);
    rep.sup_errors.push_back(a.sup_error());
    rep.norms.push_back(luxemburg_norm(f, a.as_function(), space, nopt).norm);
    rep.gaps.push_back(std::fabs(rep.norms.back() - rep.target_norm));
  }
  rep.gaps_nonincreasing = true;
  for (std::size_t j = 1; j < rep.gaps.size(); ++j)
    if (rep.gaps[j] > rep.gaps[j - 1] + 2.0 * nopt.rel_tol * rep.target_norm) rep.gaps_nonincreasing = false;
  rep.final_gap_ok = rep.gaps.back() <= 10.0 * rel_tol;
  return rep;
}

inline ApproxConvergenceReport approx_space_convergence(const MusielakFunction& m, const Rectangle& rect,
                                                        std::vector<int> levels, const ScalarField& f,
                                                        const MeasureSpace& space, double rel_tol) {
  const auto v = f.values_on(space);
  return approx_space_convergence(m, rect, std::move(levels), v, space, rel_tol);
}

}  // namespace musielak
