#pragma once

// 1 -> 2 phase-covariant cloning machine for qudits.
//
// The machine acts as
//
//   U|j>|Q> = alpha |jj>|R_j> + beta / sqrt(2(d-1)) * sum_{l != j} (|jl> + |lj>) |R_l>
//
// with real alpha, beta >= 0, alpha^2 + beta^2 = 1, and the ancilla states
// |R_j> realized as the computational basis of a d-level register. Composite
// states use the factor order (clone A, clone B, ancilla).

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "pcclone/common.hpp"
#include "pcclone/linalg.hpp"
#include "pcclone/states.hpp"

namespace pcclone {

/// Tolerance on alpha^2 + beta^2 - 1 below which parameters are renormalized
/// rather than rejected.
inline constexpr real kNormalizationSlack = 1e-9;

class CloningMachine;
CloningMachine build_machine(std::size_t d, real alpha, real beta);

namespace detail {
CloningMachine build_machine_unchecked(std::size_t d, real alpha, real beta);
}

class CloningMachine {
 public:
  std::size_t d() const { return d_; }
  real alpha() const { return alpha_; }
  real beta() const { return beta_; }

  /// d^3 x d; column j is U|j>|Q>.
  const Matrix& isometry() const { return isometry_; }

  /// ||V^dagger V - I_d||_F
  real isometry_residual() const {
    const auto n = static_cast<Eigen::Index>(d_);
    return (isometry_.adjoint() * isometry_ - Matrix::Identity(n, n)).norm();
  }

  /// Full pure output U|psi>|Q> on (clone A, clone B, ancilla).
  Ket apply(const Ket& psi) const {
    if (psi.dims.size() != 1 || psi.dim() != d_)
      throw DimensionError("input must be a single qudit of dimension " + std::to_string(d_));
    return Ket({d_, d_, d_}, isometry_ * psi.amps);
  }

 private:
  CloningMachine(std::size_t d, real alpha, real beta) : d_(d), alpha_(alpha), beta_(beta) {
    const auto n = static_cast<Eigen::Index>(d);
    isometry_ = Matrix::Zero(n * n * n, n);
    const real cross = beta / std::sqrt(2.0 * static_cast<real>(d - 1));
    auto row = [n](Eigen::Index a, Eigen::Index b, Eigen::Index r) { return (a * n + b) * n + r; };
    for (Eigen::Index j = 0; j < n; ++j) {
      isometry_(row(j, j, j), j) = alpha;
      for (Eigen::Index l = 0; l < n; ++l) {
        if (l == j) continue;
        isometry_(row(j, l, l), j) = cross;
        isometry_(row(l, j, l), j) = cross;
      }
    }
  }

  std::size_t d_;
  real alpha_;
  real beta_;
  Matrix isometry_;

  friend CloningMachine build_machine(std::size_t, real, real);
  friend CloningMachine detail::build_machine_unchecked(std::size_t, real, real);
};

/// Requires d >= 2, alpha, beta >= 0 and |alpha^2 + beta^2 - 1| <= 1e-9;
/// parameters within that slack are rescaled onto the unit circle.
inline CloningMachine build_machine(std::size_t d, real alpha, real beta) {
  if (d < 2) throw DimensionError("d must be >= 2");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 || beta < 0.0)
    throw ParameterError("alpha and beta must be finite and nonnegative");
  const real n2 = alpha * alpha + beta * beta;
  if (std::abs(n2 - 1.0) > kNormalizationSlack)
    throw ParameterError("alpha^2 + beta^2 = " + std::to_string(n2) + " is not 1");
  const real s = std::sqrt(n2);
  return CloningMachine(d, alpha / s, beta / s);
}

namespace detail {
/// Skips parameter validation. Test hook for fault injection only.
inline CloningMachine build_machine_unchecked(std::size_t d, real alpha, real beta) {
  if (d < 2) throw DimensionError("d must be >= 2");
  return CloningMachine(d, alpha, beta);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Simulation

/// Two-clone output with the ancilla traced out, on dims (d, d).
inline DensityMatrix clone_state(const CloningMachine& m, const Ket& psi) {
  return partial_trace(m.apply(psi), {0, 1});
}

/// Single-clone reduction of a two-clone output (traces out clone B).
inline DensityMatrix reduced_clone(const DensityMatrix& rho_out) {
  if (rho_out.dims.size() != 2 || rho_out.dims[0] != rho_out.dims[1])
    throw DimensionError("reduced_clone expects a (d, d) two-clone operator");
  return partial_trace(rho_out, {0});
}

/// Clone A's state, traced directly from the pure three-party output. Same
/// result as reduced_clone(clone_state(m, psi)) without forming the d^2 x d^2
/// two-clone operator.
inline DensityMatrix clone_single(const CloningMachine& m, const Ket& psi) {
  return partial_trace(m.apply(psi), {0});
}

// ---------------------------------------------------------------------------
// Closed forms

/// Off-diagonal coefficient c of the single-clone output: entry (j, k), j != k,
/// equals c e^{i(phi_j - phi_k)}.
inline real offdiag_coefficient(std::size_t d, real alpha, real beta) {
  const real dd = static_cast<real>(d);
  return alpha * beta * std::sqrt(2.0 / (dd - 1.0)) / dd + beta * beta * (dd - 2.0) / (2.0 * dd * (dd - 1.0));
}

inline real fidelity_closed_form(std::size_t d, real alpha, real beta) {
  const real dd = static_cast<real>(d);
  return 1.0 / dd + alpha * beta * std::sqrt(2.0 * (dd - 1.0)) / dd + beta * beta * (dd - 2.0) / (2.0 * dd);
}

struct MachineParams {
  real alpha;
  real beta;
};

inline MachineParams optimal_params(std::size_t d) {
  if (d < 2) throw DimensionError("d must be >= 2");
  const real dd = static_cast<real>(d);
  const real q = (dd - 2.0) / (2.0 * std::sqrt(dd * dd + 4.0 * dd - 4.0));
  return {std::sqrt(0.5 - q), std::sqrt(0.5 + q)};
}

inline real optimal_fidelity(std::size_t d) {
  if (d < 2) throw DimensionError("d must be >= 2");
  const real dd = static_cast<real>(d);
  return 1.0 / dd + (dd - 2.0 + std::sqrt(dd * dd + 4.0 * dd - 4.0)) / (4.0 * dd);
}

/// Optimal universal 1 -> 2 cloning fidelity, (d+3)/(2(d+1)).
inline real uqcm_fidelity(std::size_t d) {
  if (d < 2) throw DimensionError("d must be >= 2");
  const real dd = static_cast<real>(d);
  return (dd + 3.0) / (2.0 * (dd + 1.0));
}

/// eta such that the single-clone output is eta rho_in + (1 - eta)/d I for
/// every phase-state input.
inline real shrink_factor(std::size_t d, real alpha, real beta) {
  return static_cast<real>(d) * offdiag_coefficient(d, alpha, beta);
}

/// eta rho_in + (1 - eta)/d I
inline DensityMatrix scalar_form(const Ket& input, real eta) {
  const auto n = input.amps.size();
  Matrix m = eta * (input.amps * input.amps.adjoint()) +
             ((1.0 - eta) / static_cast<real>(n)) * Matrix::Identity(n, n);
  return DensityMatrix(input.dims, std::move(m));
}

/// Single-clone output for a phase-state input, evaluated entrywise from the
/// closed form: 1/d on the diagonal, c e^{i(phi_j - phi_k)} off it.
inline DensityMatrix reduced_output_closed_form(real alpha, real beta, const PhaseVector& pv) {
  const std::size_t d = pv.d();
  const auto n = static_cast<Eigen::Index>(d);
  const real c = offdiag_coefficient(d, alpha, beta);
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      m(j, k) = j == k ? cplx(1.0 / static_cast<real>(d), 0.0)
                       : std::polar(c, pv[static_cast<std::size_t>(j)] - pv[static_cast<std::size_t>(k)]);
  return DensityMatrix({d}, std::move(m));
}

/// Two-clone output for a phase-state input, assembled term by term from the
/// three-part closed-form expansion (diagonal alpha^2 part, alpha*beta
/// coherences, beta^2 part). Independent of the isometry.
inline DensityMatrix output_closed_form(real alpha, real beta, const PhaseVector& pv) {
  const std::size_t d = pv.d();
  const auto n = static_cast<Eigen::Index>(d);
  const real dd = static_cast<real>(d);
  auto idx = [n](Eigen::Index a, Eigen::Index b) { return a * n + b; };
  auto ph = [&pv](Eigen::Index a, Eigen::Index b) {
    return std::polar(1.0, pv[static_cast<std::size_t>(a)] - pv[static_cast<std::size_t>(b)]);
  };
  Matrix m = Matrix::Zero(n * n, n * n);

  for (Eigen::Index j = 0; j < n; ++j) m(idx(j, j), idx(j, j)) += alpha * alpha / dd;

  const real c1 = alpha * beta / (dd * std::sqrt(2.0 * (dd - 1.0)));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l) {
      if (j == l) continue;
      const cplx w = c1 * ph(j, l);
      // |jj>(<jl| + <lj|)
      m(idx(j, j), idx(j, l)) += w;
      m(idx(j, j), idx(l, j)) += w;
      // (|jl> + |lj>)<ll|
      m(idx(j, l), idx(l, l)) += w;
      m(idx(l, j), idx(l, l)) += w;
    }

  const real c2 = beta * beta / (2.0 * dd * (dd - 1.0));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index jp = 0; jp < n; ++jp)
      for (Eigen::Index l = 0; l < n; ++l) {
        if (l == j || l == jp) continue;
        const cplx w = c2 * ph(j, jp);
        // (|jl> + |lj>)(<lj'| + <j'l|)
        m(idx(j, l), idx(l, jp)) += w;
        m(idx(j, l), idx(jp, l)) += w;
        m(idx(l, j), idx(l, jp)) += w;
        m(idx(l, j), idx(jp, l)) += w;
      }
  return DensityMatrix({d, d}, std::move(m));
}

// ---------------------------------------------------------------------------
// Report row

struct FidelityReport {
  std::size_t d = 0;
  real alpha = 0.0;
  real beta = 0.0;
  real f_closed = 0.0;
  real f_simulated = 0.0;
  real f_uqcm = 0.0;
  real eta = 0.0;
  std::uint64_t phase_seed = 0;
};

/// Closed-form figures plus one simulated fidelity on the phase state drawn
/// from phase_seed.
inline FidelityReport make_fidelity_report(std::size_t d, real alpha, real beta, std::uint64_t phase_seed) {
  const auto m = build_machine(d, alpha, beta);
  const Ket psi = phase_state(random_phase_vector(d, phase_seed));
  FidelityReport r;
  r.d = d;
  r.alpha = m.alpha();
  r.beta = m.beta();
  r.f_closed = fidelity_closed_form(d, r.alpha, r.beta);
  r.f_simulated = fidelity_pure(psi, clone_single(m, psi));
  r.f_uqcm = uqcm_fidelity(d);
  r.eta = shrink_factor(d, r.alpha, r.beta);
  r.phase_seed = phase_seed;
  return r;
}

inline FidelityReport optimal_fidelity_report(std::size_t d, std::uint64_t phase_seed) {
  const auto p = optimal_params(d);
  return make_fidelity_report(d, p.alpha, p.beta, phase_seed);
}

}  // namespace pcclone
