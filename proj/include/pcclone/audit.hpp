#pragma once

// End-to-end verification suite. Every check records its worst residual over
// the dimensions it covers; nothing aborts on failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pcclone/cloner.hpp"
#include "pcclone/linalg.hpp"
#include "pcclone/optimize.hpp"
#include "pcclone/states.hpp"

namespace pcclone {

/// Largest d for which checks simulate the isometry directly. Closed-form and
/// optimization checks run over the full requested range.
inline constexpr std::size_t kSimulationDMax = 16;

struct AuditCheck {
  std::string name;
  std::size_t d_min = 0;
  std::size_t d_max = 0;
  bool passed = false;
  real residual = 0.0;
  real tolerance = 0.0;
  std::string error;  // set when the check threw
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  std::uint64_t seed = 0;
  bool overall = false;
};

/// Fault injection for exercising the failure path.
struct AuditHooks {
  // When set, machines in the isometry check are built from (alpha, beta)
  // rescaled so that alpha^2 + beta^2 equals this value.
  std::optional<real> corrupt_norm2;
};

/// max over random phase vectors phi of
///   || reduced(rho(phi)) - U_phi reduced(rho(0)) U_phi^dagger ||_F
inline real check_covariance_structure(std::size_t d, real alpha, real beta, std::size_t n_random,
                                       std::uint64_t seed) {
  const auto m = build_machine(d, alpha, beta);
  const DensityMatrix base = reduced_clone(clone_state(m, phase_state(PhaseVector::zero(d))));
  real worst = 0.0;
  for (std::size_t i = 0; i < n_random; ++i) {
    const auto pv = random_phase_vector(d, derive_seed(seed, 0xC0DA, i));
    const DensityMatrix out = reduced_clone(clone_state(m, phase_state(pv)));
    const Matrix u = phase_unitary(pv);
    worst = std::max(worst, frobenius_distance(out.mat, u * base.mat * u.adjoint()));
  }
  return worst;
}

namespace detail {

// Stream ids for seed derivation, one per randomized check.
enum Stream : std::uint64_t {
  kIsometry = 1,
  kOutput,
  kSymmetry,
  kOracle,
  kCovariance,
  kConstancy,
  kScalar,
};

inline MachineParams random_params(UniformSource& src) {
  const real theta = src.next(0.0, kPi / 2.0);
  return {std::cos(theta), std::sin(theta)};
}

// (optimal params) followed by n_random random points on the quarter circle.
inline std::vector<MachineParams> param_samples(std::size_t d, std::size_t n_random, std::uint64_t seed) {
  std::vector<MachineParams> out{optimal_params(d)};
  UniformSource src(seed);
  for (std::size_t i = 0; i < n_random; ++i) out.push_back(random_params(src));
  return out;
}

inline real sample_std(const std::vector<real>& xs) {
  if (xs.size() < 2) return 0.0;
  real mean = 0.0;
  for (real x : xs) mean += x;
  mean /= static_cast<real>(xs.size());
  real ss = 0.0;
  for (real x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<real>(xs.size() - 1));
}

class AuditBuilder {
 public:
  explicit AuditBuilder(AuditReport& report) : report_(report) {}

  // residual_fn(d) gives the residual for one dimension; the check passes
  // when the worst one is <= tol.
  template <class Fn>
  void per_dimension(const std::string& name, const std::vector<std::size_t>& ds, real tol, Fn&& residual_fn) {
    if (ds.empty()) return;
    AuditCheck c{name, ds.front(), ds.back(), false, 0.0, tol, {}};
    try {
      for (auto d : ds) c.residual = std::max(c.residual, residual_fn(d));
      c.passed = std::isfinite(c.residual) && c.residual <= tol;
    } catch (const std::exception& e) {
      fail(c, e.what());
    }
    report_.checks.push_back(std::move(c));
  }

  // For ordering claims: fn fills (violation, holds). violation is the size of
  // the worst breach (0 when none), holds is the strict claim itself.
  template <class Fn>
  void ordering(const std::string& name, std::size_t d_min, std::size_t d_max, Fn&& fn) {
    AuditCheck c{name, d_min, d_max, false, 0.0, 0.0, {}};
    try {
      bool holds = true;
      fn(c.residual, holds);
      c.passed = holds && std::isfinite(c.residual);
    } catch (const std::exception& e) {
      fail(c, e.what());
    }
    report_.checks.push_back(std::move(c));
  }

 private:
  static void fail(AuditCheck& c, const char* what) {
    c.passed = false;
    c.residual = std::numeric_limits<real>::max();
    c.error = what;
  }

  AuditReport& report_;
};

inline std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t d = lo; d <= hi; ++d) out.push_back(d);
  return out;
}

}  // namespace detail

/// Runs every invariant for d in 2..d_max (simulation-based checks stop at
/// kSimulationDMax). Deterministic in seed.
inline AuditReport run_audit(std::size_t d_max, std::size_t n_random, std::uint64_t seed,
                             const AuditHooks& hooks = {}) {
  if (d_max < 2) throw DimensionError("d_max must be >= 2");
  if (n_random < 1) throw ParameterError("n_random must be >= 1");
  using namespace detail;

  AuditReport report;
  report.seed = seed;
  AuditBuilder b(report);

  const auto all_d = range(2, d_max);
  const auto sim_d = range(2, std::min(d_max, kSimulationDMax));
  std::vector<std::size_t> mub_all, mub_sim;
  for (auto d : all_d)
    if (d != 2 && is_prime(d)) {
      mub_all.push_back(d);
      if (d <= kSimulationDMax) mub_sim.push_back(d);
    }

  // --- simulation against closed forms ---------------------------------------

  b.per_dimension("isometry", sim_d, kEqTol, [&](std::size_t d) {
    real worst = 0.0;
    for (auto p : param_samples(d, n_random, derive_seed(seed, kIsometry, d))) {
      if (hooks.corrupt_norm2) {
        const real s = std::sqrt(*hooks.corrupt_norm2);
        worst = std::max(worst, detail::build_machine_unchecked(d, p.alpha * s, p.beta * s).isometry_residual());
      } else {
        worst = std::max(worst, build_machine(d, p.alpha, p.beta).isometry_residual());
      }
    }
    return worst;
  });

  // Shared loop body for checks on (random params) x (random phase state).
  auto over_samples = [&](std::uint64_t stream, auto&& body) {
    return [&, stream, body](std::size_t d) {
      real worst = 0.0;
      const auto params = param_samples(d, n_random, derive_seed(seed, stream, d));
      for (std::size_t i = 0; i < params.size(); ++i) {
        const auto m = build_machine(d, params[i].alpha, params[i].beta);
        const auto pv = random_phase_vector(d, derive_seed(seed, stream + 1000, d * 100003 + i));
        worst = std::max(worst, body(m, pv));
      }
      return worst;
    };
  };

  b.per_dimension("output_hermitian_unit_trace", sim_d, kEqTol,
                  over_samples(kOutput, [](const CloningMachine& m, const PhaseVector& pv) {
                    const auto c = check_density(clone_state(m, phase_state(pv)));
                    return std::max(c.hermiticity, c.trace_error);
                  }));

  b.per_dimension("output_psd", sim_d, kPsdTol,
                  over_samples(kOutput, [](const CloningMachine& m, const PhaseVector& pv) {
                    return std::max(0.0, -check_density(clone_state(m, phase_state(pv))).min_eigenvalue);
                  }));

  b.per_dimension("output_expression", sim_d, kEqTol,
                  over_samples(kOutput, [](const CloningMachine& m, const PhaseVector& pv) {
                    return frobenius_distance(clone_state(m, phase_state(pv)),
                                              output_closed_form(m.alpha(), m.beta(), pv));
                  }));

  b.per_dimension("swap_symmetry", sim_d, kEqTol,
                  over_samples(kSymmetry, [](const CloningMachine& m, const PhaseVector& pv) {
                    const auto rho = clone_state(m, phase_state(pv));
                    return frobenius_distance(permute_factors(rho, {1, 0}), rho);
                  }));

  b.per_dimension("clone_symmetry", sim_d, kEqTol,
                  over_samples(kSymmetry, [](const CloningMachine& m, const PhaseVector& pv) {
                    const auto rho = clone_state(m, phase_state(pv));
                    return frobenius_distance(partial_trace(rho, {0}), partial_trace(rho, {1}));
                  }));

  b.per_dimension("reduced_output_closed_form", sim_d, kEqTol,
                  over_samples(kOracle, [](const CloningMachine& m, const PhaseVector& pv) {
                    return frobenius_distance(reduced_clone(clone_state(m, phase_state(pv))),
                                              reduced_output_closed_form(m.alpha(), m.beta(), pv));
                  }));

  b.per_dimension("fidelity_oracle", sim_d, kEqTol,
                  over_samples(kOracle, [](const CloningMachine& m, const PhaseVector& pv) {
                    const Ket psi = phase_state(pv);
                    const real sim = fidelity_pure(psi, reduced_clone(clone_state(m, psi)));
                    return std::abs(sim - fidelity_closed_form(m.d(), m.alpha(), m.beta()));
                  }));

  b.per_dimension("scalar_form", sim_d, kEqTol,
                  over_samples(kScalar, [](const CloningMachine& m, const PhaseVector& pv) {
                    const Ket psi = phase_state(pv);
                    const real eta = shrink_factor(m.d(), m.alpha(), m.beta());
                    return frobenius_distance(reduced_clone(clone_state(m, psi)), scalar_form(psi, eta));
                  }));

  b.per_dimension("phase_covariance", sim_d, kEqTol, [&](std::size_t d) {
    real worst = 0.0;
    const auto params = param_samples(d, std::min<std::size_t>(n_random, 4), derive_seed(seed, kCovariance, d));
    for (std::size_t i = 0; i < params.size(); ++i)
      worst = std::max(worst, check_covariance_structure(d, params[i].alpha, params[i].beta, n_random,
                                                         derive_seed(seed, kCovariance + 1000, d * 100003 + i)));
    return worst;
  });

  b.per_dimension("fidelity_constancy", sim_d, kEqTol, [&](std::size_t d) {
    const auto p = optimal_params(d);
    const auto m = build_machine(d, p.alpha, p.beta);
    std::vector<real> fs;
    for (std::size_t i = 0; i < n_random; ++i) {
      const Ket psi = phase_state(random_phase_vector(d, derive_seed(seed, kConstancy, d * 100003 + i)));
      fs.push_back(fidelity_pure(psi, reduced_clone(clone_state(m, psi))));
    }
    return sample_std(fs);
  });

  // --- closed forms and optimization ------------------------------------------

  b.per_dimension("optimal_params_normalization", all_d, 1e-14, [](std::size_t d) {
    const auto p = optimal_params(d);
    return std::abs(p.alpha * p.alpha + p.beta * p.beta - 1.0);
  });

  b.per_dimension("optimal_fidelity_consistency", all_d, kEqTol, [](std::size_t d) {
    const auto p = optimal_params(d);
    return std::abs(optimal_fidelity(d) - fidelity_closed_form(d, p.alpha, p.beta));
  });

  b.per_dimension("numeric_optimum", all_d, 1e-9, [](std::size_t d) { return optimum_disagreement(d); });

  b.per_dimension("numeric_argmax", all_d, 1e-6, [](std::size_t d) {
    return std::abs(maximize_fidelity(d, 1e-12).alpha_star - optimal_params(d).alpha);
  });

  b.per_dimension("sweep_unimodal", all_d, 0.0, [](std::size_t d) {
    return std::abs(static_cast<real>(difference_sign_changes(sweep_alpha(d, 1001)) - 1));
  });

  b.per_dimension("level2", {2}, kEqTol,
                  [](std::size_t) { return std::abs(optimal_fidelity(2) - (0.5 + std::sqrt(1.0 / 8.0))); });

  if (d_max >= 3)
    b.per_dimension("level3", {3}, kEqTol,
                    [](std::size_t) { return std::abs(optimal_fidelity(3) - (5.0 + std::sqrt(17.0)) / 12.0); });

  b.ordering("uqcm_superiority", 2, d_max, [&](real& violation, bool& holds) {
    for (auto d : all_d) {
      const real gap = optimal_fidelity(d) - uqcm_fidelity(d);
      holds = holds && gap > 0.0;
      violation = std::max(violation, -gap);
    }
  });

  b.ordering("uqcm_gap_decreasing", 2, d_max, [&](real& violation, bool& holds) {
    for (std::size_t d = 3; d <= d_max; ++d) {
      const real step = (optimal_fidelity(d) - uqcm_fidelity(d)) - (optimal_fidelity(d - 1) - uqcm_fidelity(d - 1));
      holds = holds && step < 0.0;
      violation = std::max(violation, step);
    }
  });

  b.ordering("optimal_fidelity_decreasing", 2, d_max, [&](real& violation, bool& holds) {
    for (auto d : all_d) {
      const real f = optimal_fidelity(d);
      holds = holds && f > 0.5;
      violation = std::max(violation, 0.5 - f);
      if (d > 2) {
        const real step = f - optimal_fidelity(d - 1);
        holds = holds && step < 0.0;
        violation = std::max(violation, step);
      }
    }
  });

  // --- mutually unbiased bases ------------------------------------------------

  b.per_dimension("mub_orthonormal", mub_all, kEqTol, [](std::size_t d) {
    real worst = 0.0;
    for (std::size_t l = 0; l < d; ++l) worst = std::max(worst, orthonormality_residual(mub_basis(d, l)));
    return worst;
  });

  b.per_dimension("mub_unbiased", mub_all, kPsdTol, [](std::size_t d) {
    std::vector<Basis> bases{standard_basis(d)};
    for (std::size_t l = 0; l < d; ++l) bases.push_back(mub_basis(d, l));
    real worst = 0.0;
    for (std::size_t x = 0; x < bases.size(); ++x)
      for (std::size_t y = x + 1; y < bases.size(); ++y)
        worst = std::max(worst, unbiasedness_residual(bases[x], bases[y]));
    return worst;
  });

  b.per_dimension("mub_cloning_uniformity", mub_sim, kEqTol, [](std::size_t d) {
    const auto p = optimal_params(d);
    const auto m = build_machine(d, p.alpha, p.beta);
    const real target = optimal_fidelity(d);
    real worst = 0.0;
    for (std::size_t l = 0; l < d; ++l)
      for (const auto& psi : mub_basis(d, l))
        worst = std::max(worst, std::abs(fidelity_pure(psi, reduced_clone(clone_state(m, psi))) - target));
    return worst;
  });

  report.overall = std::all_of(report.checks.begin(), report.checks.end(), [](const AuditCheck& c) { return c.passed; });
  return report;
}

}  // namespace pcclone
