#pragma once

// Modulars and Luxemburg norms of scalar fields over a measure space, plus
// the space-level checks: embeddings between L_{M1} and L_{M2} and norm
// identities for monotone and dominated families.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "musielak/error.hpp"
#include "musielak/measure.hpp"
#include "musielak/nfunc.hpp"

namespace musielak {

struct ModularResult {
  double value = 0.0;  // +inf when overflow
  bool overflow = false;
};

/// integral over the space of t -> M(t, f(t)) for node-aligned f.
inline ModularResult modular(std::span<const double> f, const MusielakFunction& m, const MeasureSpace& space,
                             unsigned threads = 1) {
  if (f.size() != space.size()) throw NodeMismatch(f.size(), space.size());
  ModularResult r;
  constexpr double kOverflowMarker = std::numeric_limits<double>::infinity();
  auto integrand = evaluate_at_nodes(
      space,
      [&](std::size_t i, double t) {
        auto v = try_evaluate(m, t, f[i]);
        return v ? *v : kOverflowMarker;
      },
      threads);
  for (double v : integrand) {
    if (!std::isfinite(v)) {
      r.overflow = true;
      r.value = std::numeric_limits<double>::infinity();
      return r;
    }
  }
  try {
    r.value = integrate_values(integrand, space);
  } catch (const Overflow&) {
    r.overflow = true;
    r.value = std::numeric_limits<double>::infinity();
  }
  return r;
}

inline ModularResult modular(const ScalarField& f, const MusielakFunction& m, const MeasureSpace& space,
                             unsigned threads = 1) {
  const auto v = f.values_on(space);
  return modular(v, m, space, threads);
}

struct NormResult {
  double norm = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double modular_at_norm = 0.0;
};

struct NormOptions {
  double rel_tol = 1e-8;
  /// Starting bracket; used when it straddles 1, otherwise ignored.
  std::optional<std::pair<double, double>> bracket_hint;
  int max_bracket_steps = 200;
  unsigned threads = 1;
};

namespace detail {

inline bool is_zero_field(std::span<const double> f, const MeasureSpace& space) {
  const auto w = space.weights();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (w[i] > 0.0 && f[i] != 0.0) return false;
  return true;
}

}  // namespace detail

/// inf{lambda > 0 : modular(f / lambda) <= 1} by doubling/halving from 1 and
/// bisection. The returned norm is the feasible end of the final bracket.
inline NormResult luxemburg_norm(std::span<const double> f, const MusielakFunction& m, const MeasureSpace& space,
                                 const NormOptions& opt = {}) {
  if (!(opt.rel_tol > 0.0 && opt.rel_tol <= 0.1)) throw InvalidArgument("rel_tol must lie in (0, 0.1]");
  if (f.size() != space.size()) throw NodeMismatch(f.size(), space.size());
  NormResult res;
  if (detail::is_zero_field(f, space)) return res;

  std::vector<double> scaled(f.size());
  auto rho = [&](double lambda) {
    for (std::size_t i = 0; i < f.size(); ++i) scaled[i] = f[i] / lambda;
    ++res.iterations;
    const auto r = modular(scaled, m, space, opt.threads);
    return r.overflow ? std::numeric_limits<double>::infinity() : r.value;
  };
  // rho is nonincreasing in lambda; `small` belongs to the smaller lambda.
  auto require_order = [](double small, double big, double lambda_small, double lambda_big) {
    if (small < big * (1.0 - 1e-12) - 1e-300)
      throw NonmonotoneModular("modular increased from " + std::to_string(small) + " at lambda=" +
                               std::to_string(lambda_small) + " to " + std::to_string(big) +
                               " at lambda=" + std::to_string(lambda_big));
  };

  double lo = 0.0, hi = 0.0, rho_lo = 0.0, rho_hi = 0.0;
  bool bracketed = false;
  if (opt.bracket_hint) {
    const auto [hl, hh] = *opt.bracket_hint;
    if (hl > 0.0 && hh > hl) {
      const double rl = rho(hl), rh = rho(hh);
      if (rl > 1.0 && rh <= 1.0) {
        lo = hl, hi = hh, rho_lo = rl, rho_hi = rh;
        bracketed = true;
      }
    }
  }
  if (!bracketed) {
    double lambda = 1.0;
    double r = rho(lambda);
    if (r <= 1.0) {
      hi = lambda, rho_hi = r;
      for (int step = 0;; ++step) {
        if (step == opt.max_bracket_steps)
          throw BracketFailure("modular(f/lambda) stays <= 1 down to lambda=" + std::to_string(hi));
        const double next = hi * 0.5;
        const double rn = rho(next);
        require_order(rn, rho_hi, next, hi);
        if (rn > 1.0) {
          lo = next, rho_lo = rn;
          break;
        }
        hi = next, rho_hi = rn;
      }
    } else {
      lo = lambda, rho_lo = r;
      for (int step = 0;; ++step) {
        if (step == opt.max_bracket_steps)
          throw BracketFailure("modular(f/lambda) stays > 1 up to lambda=" + std::to_string(lo));
        const double next = lo * 2.0;
        const double rn = rho(next);
        require_order(rho_lo, rn, lo, next);
        if (rn <= 1.0) {
          hi = next, rho_hi = rn;
          break;
        }
        lo = next, rho_lo = rn;
      }
    }
  }

  while (hi - lo > opt.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = rho(mid);
    require_order(rho_lo, r, lo, mid);
    require_order(r, rho_hi, mid, hi);
    if (r > 1.0) lo = mid, rho_lo = r;
    else hi = mid, rho_hi = r;
  }
  res.norm = hi;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.modular_at_norm = rho_hi;
  return res;
}

inline NormResult luxemburg_norm(const ScalarField& f, const MusielakFunction& m, const MeasureSpace& space,
                                 const NormOptions& opt = {}) {
  const auto v = f.values_on(space);
  return luxemburg_norm(v, m, space, opt);
}

// ---------------------------------------------------------------------------
// Embedding L_{M1} into L_{M2}

struct EmbeddingReport {
  double r = 1.0;
  double u0 = 0.0;
  bool hypothesis_holds = true;
  double max_violation = 0.0;  // max over the grid of M2 - r*M1 (<= 0 when the hypothesis holds)
  std::optional<Witness> witness;
  std::size_t fields_checked = 0;
  std::size_t fields_skipped = 0;  // some positive-weight node below u0
  bool modular_inequality_holds = true;
  std::optional<std::size_t> failing_field;
  bool holds() const { return hypothesis_holds && modular_inequality_holds; }
};

struct EmbeddingGrid {
  std::vector<double> t;
  std::vector<double> u;  // magnitudes >= u0
};

/// Checks M2(t,u) <= r M1(t,u) for u >= u0 on the grid, then
/// modular(f, M2) <= r modular(f, M1) for every test field with f >= u0.
inline EmbeddingReport embedding_check(const MusielakFunction& m1, const MusielakFunction& m2, double r, double u0,
                                       const EmbeddingGrid& grid, const std::vector<std::vector<double>>& fields,
                                       const MeasureSpace& space) {
  if (!(r > 0.0)) throw InvalidArgument("embedding needs r > 0");
  if (!(u0 > 0.0)) throw InvalidArgument("embedding needs u0 > 0");
  EmbeddingReport rep;
  rep.r = r;
  rep.u0 = u0;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (double t : grid.t) {
    for (double u : grid.u) {
      if (u < u0) continue;
      const auto a = try_evaluate(m1, t, u);
      const auto b = try_evaluate(m2, t, u);
      if (!a && !b) continue;
      double violation;
      if (!b) violation = std::numeric_limits<double>::infinity();
      else if (!a) violation = -std::numeric_limits<double>::infinity();
      else violation = *b - r * *a;
      const double bound = a ? std::max(1.0, r * std::fabs(*a)) : 1.0;
      if (violation > rep.max_violation) rep.max_violation = violation;
      if (violation > 1e-12 * bound && rep.hypothesis_holds) {
        rep.hypothesis_holds = false;
        rep.witness = Witness{t, u, violation};
      }
    }
  }
  const auto w = space.weights();
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto& f = fields[k];
    if (f.size() != space.size()) throw NodeMismatch(f.size(), space.size());
    bool admissible = true;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (w[i] > 0.0 && f[i] < u0) admissible = false;
    if (!admissible) {
      ++rep.fields_skipped;
      continue;
    }
    ++rep.fields_checked;
    const auto q1 = modular(f, m1, space);
    const auto q2 = modular(f, m2, space);
    const bool ok = q1.overflow || (!q2.overflow && q2.value <= r * q1.value * (1.0 + 1e-12) + 1e-300);
    if (!ok && rep.modular_inequality_holds) {
      rep.modular_inequality_holds = false;
      rep.failing_field = k;
    }
  }
  return rep;
}

/// Both directions: M2 <= r1 M1 and M1 <= r2 M2, so L_{M1} = L_{M2}.
inline std::pair<EmbeddingReport, EmbeddingReport> equivalence_check(
    const MusielakFunction& m1, const MusielakFunction& m2, double r1, double r2, double u0,
    const EmbeddingGrid& grid, const std::vector<std::vector<double>>& fields, const MeasureSpace& space) {
  return {embedding_check(m1, m2, r1, u0, grid, fields, space),
          embedding_check(m2, m1, r2, u0, grid, fields, space)};
}

// ---------------------------------------------------------------------------
// Family norm identities

enum class FamilyVariant { Monotone, Dominated };

struct FamilyNormOptions {
  FamilyVariant variant = FamilyVariant::Monotone;
  double rel_tol = 1e-9;
  double identity_tol = 1e-6;
  std::vector<double> u_grid;  // magnitudes for the pointwise checks; empty = default
  std::optional<MusielakFunction> limit;  // dominated variant; default lim_sup of the family
};

struct FamilyNormReport {
  FamilyVariant variant = FamilyVariant::Monotone;
  std::vector<int> member_index;  // nondegenerate members, ascending
  std::vector<double> member_norms;
  std::vector<int> degenerate;  // identically zero on the grid
  // Monotone variant.
  double sup_norm = 0.0, max_member_norm = 0.0;
  double inf_norm = 0.0, min_member_norm = 0.0;
  bool sup_identity = false, inf_identity = false;
  // Dominated variant.
  double limit_norm = 0.0;
  std::vector<double> gaps;  // |norm_n - limit_norm| per nondegenerate member
  bool gaps_nonincreasing = false;
  bool passed = false;
};

namespace detail {
inline std::vector<double> default_family_u_grid() { return log_spaced(1e-6, 1024.0, 64); }
}  // namespace detail

/// Monotone: the norm under sup (inf) of a nondecreasing family equals the
/// max (min) of the member norms. Dominated: member norms approach the limit
/// norm with nonincreasing gaps.
inline FamilyNormReport family_norm_check(const FunctionFamily& family, std::span<const double> f,
                                          const MeasureSpace& space, const FamilyNormOptions& opt = {}) {
  if (family.members.empty()) throw EmptyFamily();
  FamilyNormReport rep;
  rep.variant = opt.variant;
  const auto us = opt.u_grid.empty() ? detail::default_family_u_grid() : opt.u_grid;
  const auto ts = space.nodes();

  std::vector<bool> degenerate(family.members.size(), true);
  for (std::size_t k = 0; k < family.members.size(); ++k) {
    for (double t : ts) {
      for (double u : us) {
        const auto v = try_evaluate(family.members[k], t, u);
        if (!v || *v != 0.0) {
          degenerate[k] = false;
          break;
        }
      }
      if (!degenerate[k]) break;
    }
  }

  if (opt.variant == FamilyVariant::Monotone) {
    for (std::size_t k = 0; k + 1 < family.members.size(); ++k) {
      for (double t : ts) {
        for (double u : us) {
          const auto a = try_evaluate(family.members[k], t, u);
          const auto b = try_evaluate(family.members[k + 1], t, u);
          if (!b) continue;  // next member overflowed: it is larger
          if (!a || *a > *b + 1e-12 * std::max(1.0, std::fabs(*b)))
            throw MonotonicityViolated(family.first_index + static_cast<int>(k), t, u);
        }
      }
    }
  } else {
    if (!family.dominator) throw InvalidArgument("dominated variant needs a dominator");
    for (std::size_t k = 0; k < family.members.size(); ++k) {
      for (double t : ts) {
        for (double u : us) {
          const auto g = try_evaluate(*family.dominator, t, u);
          if (!g) continue;
          const auto v = try_evaluate(family.members[k], t, u);
          if (!v || std::fabs(*v) > *g + 1e-12 * std::max(1.0, *g))
            throw DominationViolated(family.first_index + static_cast<int>(k), t, u);
        }
      }
    }
  }

  FunctionFamily live;
  live.first_index = family.first_index;
  std::vector<std::size_t> live_pos;
  for (std::size_t k = 0; k < family.members.size(); ++k) {
    if (degenerate[k]) {
      rep.degenerate.push_back(family.first_index + static_cast<int>(k));
    } else {
      live.members.push_back(family.members[k]);
      live_pos.push_back(k);
    }
  }
  if (live.members.empty()) throw InvalidArgument("every family member is identically zero on the grid");

  NormOptions nopt;
  nopt.rel_tol = opt.rel_tol;
  if (opt.variant == FamilyVariant::Monotone) {
    const auto sup_res = luxemburg_norm(f, pointwise_sup(live), space, nopt);
    const auto inf_res = luxemburg_norm(f, pointwise_inf(live), space, nopt);
    rep.sup_norm = sup_res.norm;
    rep.inf_norm = inf_res.norm;
    // Every member lies between inf and sup, so this bracket is shared by all members.
    if (inf_res.norm > 0.0) nopt.bracket_hint = std::pair{inf_res.bracket_lo, sup_res.bracket_hi};
  } else {
    const MusielakFunction limit = opt.limit ? *opt.limit : lim_sup(live);
    rep.limit_norm = luxemburg_norm(f, limit, space, nopt).norm;
  }

  for (std::size_t j = 0; j < live.members.size(); ++j) {
    rep.member_index.push_back(family.first_index + static_cast<int>(live_pos[j]));
    rep.member_norms.push_back(luxemburg_norm(f, live.members[j], space, nopt).norm);
  }
  rep.max_member_norm = *std::max_element(rep.member_norms.begin(), rep.member_norms.end());
  rep.min_member_norm = *std::min_element(rep.member_norms.begin(), rep.member_norms.end());

  if (opt.variant == FamilyVariant::Monotone) {
    rep.sup_identity = std::fabs(rep.sup_norm - rep.max_member_norm) <= opt.identity_tol;
    rep.inf_identity = std::fabs(rep.inf_norm - rep.min_member_norm) <= opt.identity_tol;
    rep.passed = rep.sup_identity && rep.inf_identity;
  } else {
    rep.gaps_nonincreasing = true;
    for (std::size_t j = 0; j < rep.member_norms.size(); ++j) {
      rep.gaps.push_back(std::fabs(rep.member_norms[j] - rep.limit_norm));
      const double slack = 2.0 * opt.rel_tol * std::max(rep.limit_norm, rep.member_norms[j]);
      if (j > 0 && rep.gaps[j] > rep.gaps[j - 1] + slack) rep.gaps_nonincreasing = false;
    }
    rep.passed = rep.gaps_nonincreasing;
  }
  return rep;
}

inline FamilyNormReport family_norm_check(const FunctionFamily& family, const ScalarField& f,
                                          const MeasureSpace& space, const FamilyNormOptions& opt = {}) {
  const auto v = f.values_on(space);
  return family_norm_check(family, v, space, opt);
}

}  // namespace musielak
