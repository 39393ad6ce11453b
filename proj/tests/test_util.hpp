#pragma once

#include <cstdint>
#include <random>

#include "pcclone/linalg.hpp"

namespace pcclone::testing {

// Haar-ish random normalized vector; only used to generate test inputs.
inline Ket random_ket(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(static_cast<Eigen::Index>(total_dim(dims)));
  for (auto& x : v) x = cplx(g(rng), g(rng));
  v.normalize();
  return Ket(dims, v);
}

// Random mixed state: W W^dagger / tr, W square Gaussian.
inline DensityMatrix random_density(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(total_dim(dims));
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) w(i, j) = cplx(g(rng), g(rng));
  Matrix rho = w * w.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(dims, rho);
}

}  // namespace pcclone::testing
