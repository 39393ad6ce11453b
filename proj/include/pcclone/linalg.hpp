#pragma once

// Dense complex linear algebra for small multi-qudit systems.
//
// Tensor convention: a composite index over factors with dimensions
// (n_0, n_1, ..., n_{k-1}) is row-major, i.e.
//
//   index = i_0 * (n_1 * ... * n_{k-1}) + i_1 * (n_2 * ... * n_{k-1}) + ... + i_{k-1}
//
// so the last factor varies fastest. kron(a, b) places a's factors before b's.
// Every other header relies on this ordering.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcclone/common.hpp"

namespace pcclone {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

inline std::size_t total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

namespace detail {

inline void check_dims(const Dims& dims) {
  if (dims.empty()) throw DimensionError("empty factor list");
  for (auto n : dims)
    if (n < 2) throw DimensionError("factor dimension must be >= 2, got " + std::to_string(n));
}

// Row-major strides for the factor list.
inline std::vector<std::size_t> strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

// For each composite index, its (kept, traced) pair of sub-indices.
struct Split {
  Dims kept_dims;
  std::size_t kept_total = 1;
  std::size_t traced_total = 1;
  std::vector<std::size_t> kept_of;
  std::vector<std::size_t> traced_of;
};

inline Split split_indices(const Dims& dims, std::span<const std::size_t> keep) {
  const std::size_t nf = dims.size();
  if (keep.empty() || keep.size() >= nf)
    throw DimensionError("keep must be a nonempty proper subset of the factors");
  std::vector<bool> is_kept(nf, false);
  for (auto k : keep) {
    if (k >= nf) throw DimensionError("keep index " + std::to_string(k) + " out of range");
    if (is_kept[k]) throw DimensionError("duplicate keep index " + std::to_string(k));
    is_kept[k] = true;
  }

  Split out;
  Dims traced_dims;
  for (std::size_t f = 0; f < nf; ++f) (is_kept[f] ? out.kept_dims : traced_dims).push_back(dims[f]);
  out.kept_total = total_dim(out.kept_dims);
  out.traced_total = total_dim(traced_dims);

  const std::size_t n = total_dim(dims);
  out.kept_of.resize(n);
  out.traced_of.resize(n);
  std::vector<std::size_t> digit(nf, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t kept = 0, traced = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      if (is_kept[f])
        kept = kept * dims[f] + digit[f];
      else
        traced = traced * dims[f] + digit[f];
    }
    out.kept_of[idx] = kept;
    out.traced_of[idx] = traced;
    for (std::size_t f = nf; f-- > 0;) {
      if (++digit[f] < dims[f]) break;
      digit[f] = 0;
    }
  }
  return out;
}

}  // namespace detail

/// Pure state of one or more qudits.
struct Ket {
  Dims dims;
  Vector amps;

  Ket() = default;
  Ket(Dims dims_, Vector amps_) : dims(std::move(dims_)), amps(std::move(amps_)) {
    detail::check_dims(dims);
    if (static_cast<std::size_t>(amps.size()) != total_dim(dims))
      throw DimensionError("amplitude vector length does not match the product of dims");
  }

  std::size_t dim() const { return static_cast<std::size_t>(amps.size()); }
  real norm() const { return amps.norm(); }
};

/// Operator on a (possibly composite) qudit space. Density-matrix invariants
/// are checked on demand via check_density(), not on construction, so that
/// intermediate and deliberately broken operators remain representable.
struct DensityMatrix {
  Dims dims;
  Matrix mat;

  DensityMatrix() = default;
  DensityMatrix(Dims dims_, Matrix mat_) : dims(std::move(dims_)), mat(std::move(mat_)) {
    detail::check_dims(dims);
    const auto n = static_cast<Eigen::Index>(total_dim(dims));
    if (mat.rows() != n || mat.cols() != n)
      throw DimensionError("matrix side does not match the product of dims");
  }

  std::size_t dim() const { return static_cast<std::size_t>(mat.rows()); }
};

inline Ket basis_ket(std::size_t d, std::size_t j) {
  if (j >= d) throw DimensionError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v[static_cast<Eigen::Index>(j)] = 1.0;
  return Ket({d}, std::move(v));
}

inline DensityMatrix maximally_mixed(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return DensityMatrix({d}, Matrix::Identity(n, n) / static_cast<real>(d));
}

// ---------------------------------------------------------------------------
// Tensor products

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Dims concat(const Dims& a, const Dims& b) {
  Dims out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Ket kron(const Ket& a, const Ket& b) { return Ket(concat(a.dims, b.dims), kron(a.amps, b.amps)); }

inline DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(concat(a.dims, b.dims), kron(a.mat, b.mat));
}

// ---------------------------------------------------------------------------
// Elementary operations

inline Matrix dagger(const Matrix& m) { return m.adjoint(); }

inline cplx trace(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("trace of a non-square matrix");
  return m.trace();
}

inline cplx trace(const DensityMatrix& rho) { return rho.mat.trace(); }

inline real frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
  return (a - b).norm();
}

inline real frobenius_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims != b.dims) throw DimensionError("factor dims differ");
  return frobenius_distance(a.mat, b.mat);
}

/// |psi><psi|
inline DensityMatrix outer(const Ket& psi) { return DensityMatrix(psi.dims, psi.amps * psi.amps.adjoint()); }

// ---------------------------------------------------------------------------
// Partial traces

/// Reduce a density operator to the factors listed in `keep` (returned in
/// their original order).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto split = detail::split_indices(rho.dims, keep);
  // full_index[kept * traced_total + traced]
  std::vector<Eigen::Index> full_index(split.kept_total * split.traced_total);
  for (std::size_t idx = 0; idx < split.kept_of.size(); ++idx)
    full_index[split.kept_of[idx] * split.traced_total + split.traced_of[idx]] = static_cast<Eigen::Index>(idx);

  const auto nk = static_cast<Eigen::Index>(split.kept_total);
  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index i = 0; i < nk; ++i)
    for (Eigen::Index j = 0; j < nk; ++j) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < split.traced_total; ++t)
        acc += rho.mat(full_index[i * split.traced_total + t], full_index[j * split.traced_total + t]);
      out(i, j) = acc;
    }
  return DensityMatrix(split.kept_dims, std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reduced state of a pure state, computed without forming |psi><psi| on the
/// full space: with psi reshaped as a (kept x traced) matrix M, the result
/// is M M^dagger.
inline DensityMatrix partial_trace(const Ket& psi, std::span<const std::size_t> keep) {
  const auto split = detail::split_indices(psi.dims, keep);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(split.kept_total), static_cast<Eigen::Index>(split.traced_total));
  for (std::size_t idx = 0; idx < split.kept_of.size(); ++idx)
    m(static_cast<Eigen::Index>(split.kept_of[idx]), static_cast<Eigen::Index>(split.traced_of[idx])) =
        psi.amps[static_cast<Eigen::Index>(idx)];
  return DensityMatrix(split.kept_dims, m * m.adjoint());
}

inline DensityMatrix partial_trace(const Ket& psi, std::initializer_list<std::size_t> keep) {
  return partial_trace(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reorder tensor factors: factor f of the result is factor perm[f] of rho.
inline DensityMatrix permute_factors(const DensityMatrix& rho, std::span<const std::size_t> perm) {
  const std::size_t nf = rho.dims.size();
  if (perm.size() != nf) throw DimensionError("permutation length does not match factor count");
  std::vector<bool> seen(nf, false);
  for (auto p : perm) {
    if (p >= nf || seen[p]) throw DimensionError("not a permutation of the factors");
    seen[p] = true;
  }
  Dims new_dims(nf);
  for (std::size_t f = 0; f < nf; ++f) new_dims[f] = rho.dims[perm[f]];

  const auto old_strides = detail::strides(rho.dims);
  const std::size_t n = rho.dim();
  // Map from new composite index to old composite index.
  std::vector<Eigen::Index> src(n);
  std::vector<std::size_t> digit(nf, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t old = 0;
    for (std::size_t f = 0; f < nf; ++f) old += digit[f] * old_strides[perm[f]];
    src[idx] = static_cast<Eigen::Index>(old);
    for (std::size_t f = nf; f-- > 0;) {
      if (++digit[f] < new_dims[f]) break;
      digit[f] = 0;
    }
  }
  Matrix out(rho.mat.rows(), rho.mat.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = rho.mat(src[i], src[j]);
  return DensityMatrix(std::move(new_dims), std::move(out));
}

inline DensityMatrix permute_factors(const DensityMatrix& rho, std::initializer_list<std::size_t> perm) {
  return permute_factors(rho, std::span<const std::size_t>(perm.begin(), perm.size()));
}

// ---------------------------------------------------------------------------
// Fidelity and validity

/// <psi| rho |psi> for a normalized pure state psi. Throws NumericError if the
/// expectation value has a non-negligible imaginary part (rho not Hermitian).
inline real fidelity_pure(const Ket& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw DimensionError("state and operator dimensions differ");
  const cplx f = psi.amps.dot(rho.mat * psi.amps);  // dot() conjugates the first argument
  if (std::abs(f.imag()) >= kEqTol) throw NumericError("fidelity has imaginary part " + std::to_string(f.imag()));
  return f.real();
}

struct DensityCheck {
  real hermiticity = 0.0;  // ||rho - rho^dagger||_F
  real trace_error = 0.0;  // |tr rho - 1|
  real min_eigenvalue = 0.0;

  bool ok(real eq_tol = kEqTol, real psd_tol = kPsdTol) const {
    return hermiticity < eq_tol && trace_error < eq_tol && min_eigenvalue >= -psd_tol;
  }
};

inline DensityCheck check_density(const DensityMatrix& rho) {
  DensityCheck c;
  c.hermiticity = (rho.mat - rho.mat.adjoint()).norm();
  c.trace_error = std::abs(rho.mat.trace() - cplx(1.0, 0.0));
  const Matrix herm = (rho.mat + rho.mat.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

inline bool is_density(const DensityMatrix& rho) { return check_density(rho).ok(); }

}  // namespace pcclone
