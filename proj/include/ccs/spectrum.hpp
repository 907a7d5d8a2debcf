#pragma once

// Eigenvalue vector of a circulant correlation factor R = Q D_lambda Q*.
//
// Storage is zero-based: values()[k] is the eigenvalue attached to the k-th
// Fourier column. A valid spectrum is strictly positive, invariant under the
// index reflection k <-> p-k for k = 1..p-1 (which is exactly the condition
// for R to be real), and has unit product (which pins det R = 1 and makes the
// scale/correlation split of a covariance matrix unique).

#include <cmath>
#include <stdexcept>
#include <string>

#include "ccs/types.hpp"

namespace ccs {

class Spectrum {
 public:
  // Relative tolerance for the reflection symmetry check on ingest.
  static constexpr double kSymmetryTol = 1e-12;
  // Absolute tolerance on sum(log lambda).
  static constexpr double kUnitProductTol = 1e-10;

  static Spectrum from_values(Vector lam) {
    const int p = static_cast<int>(lam.size());
    if (p < 2) throw std::invalid_argument("Spectrum: dimension must be at least 2");
    for (int k = 0; k < p; ++k) {
      if (!(lam[k] > 0.0) || !std::isfinite(lam[k]))
        throw std::invalid_argument("Spectrum: eigenvalues must be positive and finite");
    }
    for (int k = 1; 2 * k < p; ++k) {
      const double a = lam[k];
      const double b = lam[p - k];
      if (std::abs(a - b) > kSymmetryTol * std::max(a, b))
        throw std::invalid_argument(
            "Spectrum: reflection symmetry violated at index " + std::to_string(k) +
            " (correlation factor would not be real)");
    }
    double log_sum = 0.0;
    for (int k = 0; k < p; ++k) log_sum += std::log(lam[k]);
    if (std::abs(log_sum) > kUnitProductTol)
      throw std::invalid_argument("Spectrum: eigenvalue product must be 1, got log-product " +
                                  std::to_string(log_sum));
    return Spectrum(std::move(lam));
  }

  static Spectrum identity(int p) {
    if (p < 2) throw std::invalid_argument("Spectrum: dimension must be at least 2");
    return Spectrum(Vector::Ones(p));
  }

  [[nodiscard]] int dim() const { return static_cast<int>(lam_.size()); }
  [[nodiscard]] const Vector& values() const { return lam_; }

  // lambda -> 1/lambda preserves positivity, symmetry and unit product.
  [[nodiscard]] Spectrum inverse() const { return Spectrum(lam_.cwiseInverse()); }

  // max log lambda - min log lambda; gauges how close ratio arithmetic on the
  // eigenvalues is to overflow.
  [[nodiscard]] double log_spread() const {
    return std::log(lam_.maxCoeff()) - std::log(lam_.minCoeff());
  }

 private:
  explicit Spectrum(Vector lam) : lam_(std::move(lam)) {}
  Vector lam_;
};

}  // namespace ccs
