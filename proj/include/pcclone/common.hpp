#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pcclone {

using real = double;
using cplx = std::complex<double>;

// Equality tolerance for entrywise and Frobenius comparisons.
inline constexpr real kEqTol = 1e-12;
// Smallest eigenvalue accepted as "nonnegative" in PSD checks.
inline constexpr real kPsdTol = 1e-10;

inline constexpr real kPi = 3.14159265358979323846264338327950288;

class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  explicit UnsupportedDimension(const std::string& what) : std::invalid_argument(what) {}
};

class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pcclone
