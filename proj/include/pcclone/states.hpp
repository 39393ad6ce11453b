#pragma once

// Input-state families: phase states, symmetric two-qudit basis vectors and
// mutually unbiased bases in odd prime dimension.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pcclone/common.hpp"
#include "pcclone/linalg.hpp"

namespace pcclone {

// ---------------------------------------------------------------------------
// Seeding and sampling

/// SplitMix64 finalizer. Used to derive independent sub-seeds from a master
/// seed, e.g. one per (check, dimension, trial).
inline constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return mix_seed(mix_seed(mix_seed(seed) ^ stream) ^ index);
}

/// Deterministic uniform sampler over [0, 1).
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The conversion to double takes the top 53 bits directly instead
/// of going through std::uniform_real_distribution, whose algorithm is
/// implementation-defined, so sequences are identical across toolchains.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  real next() { return static_cast<real>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  real next(real lo, real hi) {
    const real x = lo + (hi - lo) * next();
    return x < hi ? x : lo;
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Phase states

/// Phases (phi_0, ..., phi_{d-1}) of an input phase state, with phi_0 = 0 and
/// every entry in [0, 2 pi).
class PhaseVector {
 public:
  explicit PhaseVector(std::vector<real> phases) : phases_(std::move(phases)) {
    if (phases_.size() < 2) throw DimensionError("phase vector needs d >= 2 entries");
    if (phases_[0] != 0.0) throw ParameterError("phi_0 must be 0");
    for (real p : phases_)
      if (!(p >= 0.0 && p < 2.0 * kPi)) throw ParameterError("phase outside [0, 2 pi): " + std::to_string(p));
  }

  /// All-zero phases.
  static PhaseVector zero(std::size_t d) { return PhaseVector(std::vector<real>(d, 0.0)); }

  std::size_t d() const { return phases_.size(); }
  const std::vector<real>& phases() const { return phases_; }
  real operator[](std::size_t j) const { return phases_[j]; }

 private:
  std::vector<real> phases_;
};

/// d^{-1/2} sum_j e^{i phi_j} |j>
inline Ket phase_state(const PhaseVector& pv) {
  const std::size_t d = pv.d();
  const real amp = 1.0 / std::sqrt(static_cast<real>(d));
  Vector v(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) v[static_cast<Eigen::Index>(j)] = std::polar(amp, pv[j]);
  return Ket({d}, std::move(v));
}

/// phases[0] = 0, the rest i.i.d. uniform on [0, 2 pi). Deterministic in seed.
inline PhaseVector random_phase_vector(std::size_t d, std::uint64_t seed) {
  if (d < 2) throw DimensionError("d must be >= 2");
  UniformSource src(seed);
  std::vector<real> phases(d, 0.0);
  for (std::size_t j = 1; j < d; ++j) phases[j] = src.next(0.0, 2.0 * kPi);
  return PhaseVector(std::move(phases));
}

/// diag(e^{i phi_j})
inline Matrix phase_unitary(const PhaseVector& pv) {
  const auto n = static_cast<Eigen::Index>(pv.d());
  Matrix u = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) u(j, j) = std::polar(1.0, pv[static_cast<std::size_t>(j)]);
  return u;
}

// ---------------------------------------------------------------------------
// Symmetric two-qudit vectors

/// |jj> if j == l, else (|jl> + |lj>)/sqrt(2).
inline Ket symmetric_pair(std::size_t d, std::size_t j, std::size_t l) {
  if (d < 2) throw DimensionError("d must be >= 2");
  if (j >= d || l >= d) throw DimensionError("symmetric_pair index out of range");
  const auto n = static_cast<Eigen::Index>(d);
  Vector v = Vector::Zero(n * n);
  const auto jj = static_cast<Eigen::Index>(j), ll = static_cast<Eigen::Index>(l);
  if (j == l) {
    v[jj * n + jj] = 1.0;
  } else {
    const real s = 1.0 / std::sqrt(2.0);
    v[jj * n + ll] = s;
    v[ll * n + jj] = s;
  }
  return Ket({d, d}, std::move(v));
}

// ---------------------------------------------------------------------------
// Mutually unbiased bases

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

/// The quadratic-phase MUB construction is only used for odd primes; d = 2
/// gives a constant s_j and cannot produce a complete set.
inline void require_odd_prime(std::size_t d) {
  if (d == 2 || !is_prime(d))
    throw UnsupportedDimension("MUB construction requires an odd prime dimension, got " + std::to_string(d));
}

/// State t of basis l in prime dimension d.
struct MubLabel {
  std::size_t d;
  std::size_t l;
  std::size_t t;

  MubLabel(std::size_t d_, std::size_t l_, std::size_t t_) : d(d_), l(l_), t(t_) {
    require_odd_prime(d);
    if (l >= d || t >= d) throw DimensionError("MUB label out of range");
  }
};

/// s_j = j + (j+1) + ... + (d-1)
inline std::size_t mub_s(std::size_t d, std::size_t j) { return (d * (d - 1) - j * (j - 1)) / 2; }

/// |psi_t^l> = d^{-1/2} sum_j (w^t)^{d-j} (w^{-l})^{s_j} |j>,  w = exp(2 pi i / d).
///
/// The exponent is reduced modulo d in integer arithmetic before taking the
/// complex exponential.
inline Ket mub_state(const MubLabel& label) {
  const std::size_t d = label.d;
  const real amp = 1.0 / std::sqrt(static_cast<real>(d));
  Vector v(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t plus = (label.t * (d - j)) % d;
    const std::size_t minus = (label.l * (mub_s(d, j) % d)) % d;
    const std::size_t e = (plus + d - minus) % d;
    v[static_cast<Eigen::Index>(j)] = std::polar(amp, 2.0 * kPi * static_cast<real>(e) / static_cast<real>(d));
  }
  return Ket({d}, std::move(v));
}

using Basis = std::vector<Ket>;

inline Basis mub_basis(std::size_t d, std::size_t l) {
  Basis out;
  out.reserve(d);
  for (std::size_t t = 0; t < d; ++t) out.push_back(mub_state(MubLabel(d, l, t)));
  return out;
}

inline Basis standard_basis(std::size_t d) {
  if (d < 2) throw DimensionError("d must be >= 2");
  Basis out;
  out.reserve(d);
  for (std::size_t j = 0; j < d; ++j) out.push_back(basis_ket(d, j));
  return out;
}

/// ||B^dagger B - I||_F for the basis vectors as columns of B.
inline real orthonormality_residual(const Basis& basis) {
  if (basis.empty()) throw DimensionError("empty basis");
  const auto n = static_cast<Eigen::Index>(basis.front().dim());
  Matrix b(n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].dim() != basis.front().dim()) throw DimensionError("basis vectors differ in dimension");
    b.col(static_cast<Eigen::Index>(k)) = basis[k].amps;
  }
  const auto m = static_cast<Eigen::Index>(basis.size());
  return (b.adjoint() * b - Matrix::Identity(m, m)).norm();
}

/// max over pairs of | |<a|b>|^2 - 1/d |
inline real unbiasedness_residual(const Basis& a, const Basis& b) {
  if (a.empty() || b.empty()) throw DimensionError("empty basis");
  const std::size_t d = a.front().dim();
  real worst = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) {
      if (x.dim() != d || y.dim() != d) throw DimensionError("basis dimension mismatch");
      worst = std::max(worst, std::abs(std::norm(x.amps.dot(y.amps)) - 1.0 / static_cast<real>(d)));
    }
  return worst;
}

inline bool is_unbiased(const Basis& a, const Basis& b, real tol) { return unbiasedness_residual(a, b) < tol; }

}  // namespace pcclone
