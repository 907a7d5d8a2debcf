#pragma once

// Log-linear spectrum families: log lambda = C^T theta with a constant
// d x p gradient matrix C whose rows sum to zero, so the unit-product
// constraint on the spectrum holds identically in theta.
//
// Two families are provided.
//
//   full          d = floor(p/2). Free coordinate a = 1..d carries the tied
//                 eigenvalue pair log lambda_{a+1} = log lambda_{p-a+1} =
//                 theta_a (one untied middle eigenvalue when p is even), and
//                 log lambda_1 balances the sum. This is the largest family
//                 compatible with a real correlation factor.
//
//   exchangeable  d = 1. lambda = (e^{-(p-1) theta}, e^theta, ..., e^theta),
//                 i.e. equal correlation: every off-diagonal entry of R is
//                 the same function of theta.
//
// Eigenvalue tying is done index-wise (both members of a pair read the same
// theta entry), so the reflection symmetry of the spectrum holds bitwise and
// never trips the Spectrum ingest tolerance.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "ccs/spectrum.hpp"
#include "ccs/types.hpp"

namespace ccs {

enum class FamilyKind { kFull, kExchangeable };

class ModelFamily {
 public:
  static ModelFamily full(int p) {
    if (p < 2) throw std::invalid_argument("ModelFamily: p must be at least 2");
    const int d = p / 2;
    Matrix c = Matrix::Zero(d, p);
    for (int j = 1; j < p; ++j) {
      const int a = std::min(j, p - j);  // free index of storage slot j
      c(a - 1, j) += 1.0;
      c(a - 1, 0) -= 1.0;
    }
    return ModelFamily(FamilyKind::kFull, p, std::move(c));
  }

  static ModelFamily exchangeable(int p) {
    if (p < 2) throw std::invalid_argument("ModelFamily: p must be at least 2");
    Matrix c = Matrix::Zero(1, p);
    c(0, 0) = -static_cast<double>(p - 1);
    for (int j = 1; j < p; ++j) c(0, j) = 1.0;
    return ModelFamily(FamilyKind::kExchangeable, p, std::move(c));
  }

  static ModelFamily from_name(std::string_view name, int p) {
    if (name == "full") return full(p);
    if (name == "exchangeable") return exchangeable(p);
    throw std::invalid_argument("ModelFamily: unknown family '" + std::string(name) +
                                "' (expected 'full' or 'exchangeable')");
  }

  [[nodiscard]] FamilyKind kind() const { return kind_; }
  [[nodiscard]] const char* name() const {
    return kind_ == FamilyKind::kFull ? "full" : "exchangeable";
  }
  [[nodiscard]] int p() const { return p_; }
  [[nodiscard]] int dim() const { return static_cast<int>(c_.rows()); }

  // The d x p matrix C with log lambda(theta) = C^T theta.
  [[nodiscard]] const Matrix& log_gradient() const { return c_; }

  // Largest |theta_i| for which exp(C^T theta) stays comfortably inside
  // double range; spectrum() rejects anything beyond it.
  [[nodiscard]] double max_theta_norm() const { return 700.0 / static_cast<double>(p_); }

  [[nodiscard]] Spectrum spectrum(const Vector& theta) const {
    if (static_cast<int>(theta.size()) != dim())
      throw std::invalid_argument("ModelFamily::spectrum: theta has dimension " +
                                  std::to_string(theta.size()) + ", expected " +
                                  std::to_string(dim()));
    for (int i = 0; i < dim(); ++i)
      if (!std::isfinite(theta[i]) || std::abs(theta[i]) > max_theta_norm())
        throw std::invalid_argument(
            "ModelFamily::spectrum: |theta| exceeds the representable range " +
            std::to_string(max_theta_norm()));

    Vector log_lam(p_);
    if (kind_ == FamilyKind::kExchangeable) {
      log_lam.setConstant(theta[0]);
      log_lam[0] = -static_cast<double>(p_ - 1) * theta[0];
    } else {
      // Fill tied slots pairwise from the same theta entry, then balance
      // slot 0; bitwise symmetric by construction.
      for (int j = 1; j < p_; ++j) log_lam[j] = theta[std::min(j, p_ - j) - 1];
      double s = 0.0;
      for (int j = 1; j < p_; ++j) s += log_lam[j];
      log_lam[0] = -s;
    }
    return Spectrum::from_values(log_lam.array().exp().matrix());
  }

  // Recover theta from a spectrum in the family: least squares in the log
  // domain, exact when log lambda lies in the row space of C.
  [[nodiscard]] Vector theta_from(const Spectrum& spec) const {
    if (spec.dim() != p_)
      throw std::invalid_argument("ModelFamily::theta_from: dimension mismatch");
    const Vector log_lam = spec.values().array().log().matrix();
    return (c_ * c_.transpose()).llt().solve(c_ * log_lam);
  }

 private:
  ModelFamily(FamilyKind kind, int p, Matrix c) : kind_(kind), p_(p), c_(std::move(c)) {}

  FamilyKind kind_;
  int p_;
  Matrix c_;
};

}  // namespace ccs
