#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pcclone/cloner.hpp"
#include "pcclone/common.hpp"

namespace pcclone {

struct ScalarOptimum {
  real x = 0.0;
  real fx = 0.0;
  int iterations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops once the bracket is narrower than tol; throws NumericError if that
/// takes more than max_iter iterations.
template <class F>
ScalarOptimum golden_section_maximize(F&& f, real lo, real hi, real tol, int max_iter = 200) {
  static const real inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  real a = lo, b = hi;
  real c = b - inv_phi * (b - a);
  real d = a + inv_phi * (b - a);
  real fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > tol) {
    if (++it > max_iter)
      throw NumericError("golden-section search did not converge in " + std::to_string(max_iter) + " iterations");
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarOptimum out;
  out.x = (a + b) / 2.0;
  out.fx = f(out.x);
  out.iterations = it;
  // Keep the best point actually evaluated.
  if (fc > out.fx) out = {c, fc, it};
  if (fd > out.fx) out = {d, fd, it};
  return out;
}

/// beta = +sqrt(1 - alpha^2) on the feasible quarter circle.
inline real beta_from_alpha(real alpha) { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }

inline real fidelity_along_alpha(std::size_t d, real alpha) {
  return fidelity_closed_form(d, alpha, beta_from_alpha(alpha));
}

struct FidelityOptimum {
  real alpha_star = 0.0;
  real f_star = 0.0;
};

/// Numerical maximum of the fidelity over alpha in [0, 1].
inline FidelityOptimum maximize_fidelity(std::size_t d, real tol = 1e-12) {
  if (d < 2) throw DimensionError("d must be >= 2");
  if (!(tol >= 1e-14)) throw ParameterError("tol must be >= 1e-14");
  const auto opt = golden_section_maximize([d](real a) { return fidelity_along_alpha(d, a); }, 0.0, 1.0, tol);
  return {opt.x, opt.fx};
}

struct SweepRow {
  real alpha;
  real beta;
  real f;
};

struct SweepTable {
  std::size_t d = 0;
  std::vector<SweepRow> rows;
  real argmax_alpha = 0.0;
  real max_f = 0.0;
};

/// Uniform alpha grid on [0, 1], endpoints included.
inline SweepTable sweep_alpha(std::size_t d, std::size_t n_points) {
  if (d < 2) throw DimensionError("d must be >= 2");
  if (n_points < 3) throw ParameterError("sweep needs at least 3 points");
  SweepTable t;
  t.d = d;
  t.rows.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const real alpha = i + 1 == n_points ? 1.0 : static_cast<real>(i) / static_cast<real>(n_points - 1);
    const real beta = beta_from_alpha(alpha);
    t.rows.push_back({alpha, beta, fidelity_closed_form(d, alpha, beta)});
  }
  const auto best = std::max_element(t.rows.begin(), t.rows.end(),
                                     [](const SweepRow& x, const SweepRow& y) { return x.f < y.f; });
  t.argmax_alpha = best->alpha;
  t.max_f = best->f;
  return t;
}

/// Number of sign changes in the sequence of consecutive differences of f.
inline int difference_sign_changes(const SweepTable& t) {
  int changes = 0;
  int prev = 0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const real diff = t.rows[i].f - t.rows[i - 1].f;
    const int s = (diff > 0) - (diff < 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

/// Largest pairwise disagreement between the numerical maximum, the closed-form
/// optimum, and the fidelity evaluated at the closed-form parameters.
inline real optimum_disagreement(std::size_t d) {
  const real numeric = maximize_fidelity(d, 1e-12).f_star;
  const real analytic = optimal_fidelity(d);
  const auto p = optimal_params(d);
  const real at_params = fidelity_closed_form(d, p.alpha, p.beta);
  return std::max({std::abs(numeric - analytic), std::abs(numeric - at_params), std::abs(analytic - at_params)});
}

inline bool verify_optimum(std::size_t d) { return optimum_disagreement(d) < 1e-9; }

}  // namespace pcclone
