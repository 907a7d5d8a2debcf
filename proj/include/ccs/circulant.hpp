#pragma once

// Dense realizations of the circulant-correlation covariance model
//
//   Sigma = D_alpha R D_alpha,   R = Q D_lambda Q*,
//
// with D_alpha = diag(alpha), alpha_i = exp(beta_i) > 0, and lambda a valid
// Spectrum (see spectrum.hpp). Forward maps realize R and Sigma; inverse maps
// recover lambda from a circulant R and split a compatible Sigma into
// (alpha, lambda). The split is unique because det R = 1 forces the scale of
// the correlation factor.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ccs/dft.hpp"
#include "ccs/spectrum.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Elementwise tolerance (relative to the largest entry) within which a matrix
// is accepted as circulant, and the matching symmetry/PD ingest tolerance.
inline constexpr double kCirculantTol = 1e-8;
// Imaginary residue allowed when a mathematically real result is assembled
// through complex arithmetic; anything larger signals a logic error.
inline constexpr double kImagResidualTol = 1e-10;

// R = Q D_lambda Q*. The result is real by the spectrum's reflection
// symmetry; the imaginary residue is verified against kImagResidualTol and
// discarded.
inline Matrix realize_correlation(const Spectrum& spec) {
  const int p = spec.dim();
  const ComplexMatrix q = dft_matrix(p);
  const ComplexVector d = spec.values().cast<Complex>();
  const ComplexMatrix rc = q * d.asDiagonal() * q.adjoint();
  const double scale = std::max(1.0, rc.real().cwiseAbs().maxCoeff());
  if (rc.imag().cwiseAbs().maxCoeff() > kImagResidualTol * scale)
    throw std::runtime_error("realize_correlation: imaginary residue exceeds tolerance");
  return rc.real();
}

namespace detail {

inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 2)
    throw std::invalid_argument(std::string(who) + ": matrix must be square with order >= 2");
}

// Largest deviation of m from exact circulant structure: entries on each
// wrapped diagonal must agree.
inline double circulant_deviation(const Matrix& m) {
  const int p = static_cast<int>(m.rows());
  double dev = 0.0;
  for (int d = 0; d < p; ++d) {
    const double ref = m(0, d);
    for (int i = 1; i < p; ++i) {
      const int j = (i + d) % p;
      dev = std::max(dev, std::abs(m(i, j) - ref));
    }
  }
  return dev;
}

}  // namespace detail

// True when m is circulant up to kCirculantTol relative to its largest entry.
inline bool is_circulant(const Matrix& m) {
  detail::require_square(m, "is_circulant");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return detail::circulant_deviation(m) <= kCirculantTol * scale;
}

// Inverse of realize_correlation: lambda_k = (1/p) sum_ij r_ij w^{-(i-j)k}
// (indices 0-based). Input must be circulant; the recovered values must form
// a valid Spectrum (real, positive, unit product), otherwise the input was
// not a correlation factor of this family.
inline Spectrum spectrum_from_correlation(const Matrix& r) {
  detail::require_square(r, "spectrum_from_correlation");
  const int p = static_cast<int>(r.rows());
  if (!is_circulant(r))
    throw std::invalid_argument("spectrum_from_correlation: matrix is not circulant");
  const ComplexMatrix q = dft_matrix(p);
  Vector lam(p);
  for (int k = 0; k < p; ++k) {
    // q_k^* R q_k with the column's phases reduced exactly.
    const Complex v = (q.col(k).adjoint() * r * q.col(k))(0, 0);
    if (std::abs(v.imag()) > kImagResidualTol * std::max(1.0, std::abs(v.real())))
      throw std::invalid_argument(
          "spectrum_from_correlation: complex eigenvalue, matrix is not symmetric circulant");
    if (!(v.real() > 0.0))
      throw std::invalid_argument("spectrum_from_correlation: nonpositive eigenvalue " +
                                  std::to_string(v.real()) + " at index " + std::to_string(k));
    lam[k] = v.real();
  }
  return Spectrum::from_values(std::move(lam));
}

// Positive scale vector carried in log form; beta = log alpha.
class ScaleVector {
 public:
  static ScaleVector from_log(Vector beta) {
    const int p = static_cast<int>(beta.size());
    if (p < 2) throw std::invalid_argument("ScaleVector: dimension must be at least 2");
    for (int i = 0; i < p; ++i)
      if (!std::isfinite(beta[i]))
        throw std::invalid_argument("ScaleVector: log scales must be finite");
    return ScaleVector(std::move(beta));
  }

  static ScaleVector from_values(const Vector& alpha) {
    const int p = static_cast<int>(alpha.size());
    Vector beta(p);
    for (int i = 0; i < p; ++i) {
      if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i]))
        throw std::invalid_argument("ScaleVector: scales must be positive and finite");
      beta[i] = std::log(alpha[i]);
    }
    return from_log(std::move(beta));
  }

  [[nodiscard]] int dim() const { return static_cast<int>(beta_.size()); }
  [[nodiscard]] const Vector& log_values() const { return beta_; }
  [[nodiscard]] Vector values() const { return beta_.array().exp().matrix(); }
  [[nodiscard]] double log_sum() const { return beta_.sum(); }

 private:
  explicit ScaleVector(Vector beta) : beta_(std::move(beta)) {}
  Vector beta_;
};

struct CovarianceFactorization {
  ScaleVector scale;
  Spectrum spectrum;

  CovarianceFactorization(ScaleVector s, Spectrum sp)
      : scale(std::move(s)), spectrum(std::move(sp)) {
    if (scale.dim() != spectrum.dim())
      throw std::invalid_argument("CovarianceFactorization: dimension mismatch");
  }

  [[nodiscard]] int dim() const { return spectrum.dim(); }
  [[nodiscard]] Matrix correlation() const { return realize_correlation(spectrum); }
  [[nodiscard]] Matrix covariance() const {
    const Vector a = scale.values();
    return a.asDiagonal() * correlation() * a.asDiagonal();
  }
  // log det Sigma = 2 sum beta since det R = 1.
  [[nodiscard]] double log_det() const { return 2.0 * scale.log_sum(); }
};

// Split a symmetric positive definite Sigma with circulant correlation
// structure into (alpha, lambda). The unit-determinant normalization of R
// makes the split unique: with C the unit-diagonal correlation matrix,
// R = det(C)^{-1/p} C and alpha_i = sqrt(Sigma_ii / r_11).
inline CovarianceFactorization identify(const Matrix& sigma) {
  detail::require_square(sigma, "identify");
  const int p = static_cast<int>(sigma.rows());
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kCirculantTol * scale)
    throw std::invalid_argument("identify: matrix is not symmetric");
  for (int i = 0; i < p; ++i)
    if (!(sigma(i, i) > 0.0))
      throw std::invalid_argument("identify: diagonal must be positive");

  const Vector dinv = sigma.diagonal().cwiseSqrt().cwiseInverse();
  const Matrix corr = dinv.asDiagonal() * sigma * dinv.asDiagonal();
  if (!is_circulant(corr))
    throw std::invalid_argument("identify: correlation part is not circulant");

  Eigen::LLT<Matrix> llt(corr);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("identify: matrix is not positive definite");
  double log_det_corr = 0.0;
  for (int i = 0; i < p; ++i) log_det_corr += 2.0 * std::log(llt.matrixL()(i, i));

  // r_11 = det(C)^{-1/p}; alpha_i^2 = Sigma_ii / r_11.
  const double r11 = std::exp(-log_det_corr / p);
  const Matrix r = r11 * corr;
  Spectrum spec = spectrum_from_correlation(r);
  Vector beta(p);
  for (int i = 0; i < p; ++i) beta[i] = 0.5 * (std::log(sigma(i, i)) - std::log(r11));
  return {ScaleVector::from_log(std::move(beta)), std::move(spec)};
}

// log N_p(x; 0, Sigma) evaluated through the factorization:
//   -p/2 log 2pi - sum(beta) - 1/2 sum_k |(Q* D_alpha^-1 x)_k|^2 / lambda_k.
inline double log_density(const Vector& x, const CovarianceFactorization& f) {
  const int p = f.dim();
  if (static_cast<int>(x.size()) != p)
    throw std::invalid_argument("log_density: dimension mismatch");
  const ComplexMatrix q = dft_matrix(p);
  const Vector u = x.array() * (-f.scale.log_values()).array().exp();
  const ComplexVector w = q.adjoint() * u.cast<Complex>();
  double quad = 0.0;
  for (int k = 0; k < p; ++k) quad += std::norm(w[k]) / f.spectrum.values()[k];
  constexpr double kLog2Pi = 1.8378770664093454836;
  return -0.5 * p * kLog2Pi - f.scale.log_sum() - 0.5 * quad;
}

}  // namespace ccs
