#pragma once

// Fisher information of the circulant-correlation Gaussian model in the
// (theta, beta) parametrization.
//
// For one observation the metric is block diagonal,
//
//   g_theta = (1/2) C C^T                     (constant in theta and beta),
//   g_beta  = I + R o R^{-1}                  (o = elementwise product),
//   g_{theta beta} = 0,
//
// and g_beta is itself circulant with Fourier eigenvalues 1 + mu_m, where
//
//   mu_m = (1/p) sum_{k} lambda_k / lambda_l,   l-1 = (m-k) mod p (1-based m,k,l),
//
// the spectrum of R o R^{-1}. Consequences used throughout:
// det g_beta = prod_m (1 + mu_m), and mu_1 = 1 identically (the reflection
// symmetry pairs each k in the m = 1 sum with an l carrying the same
// eigenvalue), so log det g_beta depends on theta only through the other
// p - 1 terms.
//
// fisher_numeric() is an independent oracle: the trace formula
// g_ij = (1/2) tr(Sigma^-1 dSigma_i Sigma^-1 dSigma_j) with central
// finite-difference dSigma. It shares no code path with the closed forms
// beyond the realization of Sigma itself.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccs/circulant.hpp"
#include "ccs/model.hpp"
#include "ccs/spectrum.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Guard for ratio arithmetic on eigenvalues: beyond this log spread the
// Hessian accumulations in log_det_fisher_beta_derivatives can overflow.
inline constexpr double kMaxSpectrumLogSpread = 600.0;

namespace detail {

inline void check_ratio_range(const Spectrum& spec, const char* who) {
  if (spec.log_spread() > kMaxSpectrumLogSpread)
    throw std::runtime_error(std::string(who) +
                             ": spectrum dynamic range too large for ratio arithmetic");
}

}  // namespace detail

// g_theta = (1/2) C C^T.
inline Matrix fisher_theta(const ModelFamily& fam) {
  const Matrix& c = fam.log_gradient();
  return 0.5 * c * c.transpose();
}

// The vector mu with mu[m] the m-th Fourier eigenvalue of R o R^{-1},
// by direct pair enumeration (never realizes a matrix).
inline Vector hadamard_spectrum(const Spectrum& spec) {
  detail::check_ratio_range(spec, "hadamard_spectrum");
  const int p = spec.dim();
  const Vector& lam = spec.values();
  Vector mu = Vector::Zero(p);
  for (int m = 0; m < p; ++m) {
    double s = 0.0;
    for (int k = 0; k < p; ++k) {
      const int l = (m - k + p) % p;
      s += lam[k] / lam[l];
    }
    mu[m] = s / p;
  }
  return mu;
}

// g_beta = I + R o R^{-1}, realized densely. R^{-1} is the circulant with
// the inverted spectrum, so no linear solve is involved.
inline Matrix fisher_beta(const Spectrum& spec) {
  const Matrix r = realize_correlation(spec);
  const Matrix rinv = realize_correlation(spec.inverse());
  const int p = spec.dim();
  return Matrix::Identity(p, p) + r.cwiseProduct(rinv);
}

// log det g_beta = sum_m log(1 + mu_m).
inline double log_det_fisher_beta(const Spectrum& spec) {
  const Vector mu = hadamard_spectrum(spec);
  double s = 0.0;
  for (int m = 0; m < spec.dim(); ++m) s += std::log1p(mu[m]);
  return s;
}

struct LogDetBetaDerivatives {
  double value = 0.0;  // log det g_beta
  Vector gradient;     // d/dtheta
  Matrix hessian;      // d^2/dtheta^2
};

// Analytic theta-derivatives of L(theta) = log det g_beta(theta) through the
// pair-sum representation. With r_kl = lambda_k / lambda_l and
// c_i(k,l) = C(i,k) - C(i,l),
//
//   d_i mu_m      = (1/p) sum_k c_i r_kl,
//   d_i d_j mu_m  = (1/p) sum_k c_i c_j r_kl,
//   d_i L         = sum_m d_i mu_m / (1 + mu_m),
//   d_i d_j L     = sum_m [ d_i d_j mu_m / (1 + mu_m)
//                           - d_i mu_m d_j mu_m / (1 + mu_m)^2 ].
//
// Divisions by 1 + mu_m happen per m before any cross products, keeping
// intermediates bounded for spectra within kMaxSpectrumLogSpread.
inline LogDetBetaDerivatives log_det_fisher_beta_derivatives(const ModelFamily& fam,
                                                             const Vector& theta) {
  const Spectrum spec = fam.spectrum(theta);
  detail::check_ratio_range(spec, "log_det_fisher_beta_derivatives");
  const int p = fam.p();
  const int d = fam.dim();
  const Matrix& c = fam.log_gradient();
  const Vector& lam = spec.values();

  LogDetBetaDerivatives out;
  out.gradient = Vector::Zero(d);
  out.hessian = Matrix::Zero(d, d);
  Vector dmu(d);
  Matrix ddmu(d, d);
  for (int m = 0; m < p; ++m) {
    double mu = 0.0;
    dmu.setZero();
    ddmu.setZero();
    for (int k = 0; k < p; ++k) {
      const int l = (m - k + p) % p;
      const double r = lam[k] / lam[l];
      mu += r;
      for (int i = 0; i < d; ++i) {
        const double ci = c(i, k) - c(i, l);
        dmu[i] += ci * r;
        for (int j = 0; j <= i; ++j) ddmu(i, j) += ci * (c(j, k) - c(j, l)) * r;
      }
    }
    mu /= p;
    dmu /= p;
    ddmu /= p;
    const double denom = 1.0 + mu;
    out.value += std::log1p(mu);
    const Vector rho = dmu / denom;
    out.gradient += rho;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j)
        out.hessian(i, j) += ddmu(i, j) / denom - rho[i] * rho[j];
  }
  out.hessian = out.hessian.selfadjointView<Eigen::Lower>();
  return out;
}

// Full (d + p) x (d + p) Fisher matrix from the trace formula with central
// finite differences, ordered (theta..., beta...). Step per coordinate is
// step_rel * max(1, |coordinate|).
inline Matrix fisher_numeric(const ModelFamily& fam, const Vector& theta, const Vector& beta,
                             double step_rel = 1e-5) {
  const int p = fam.p();
  const int d = fam.dim();
  if (static_cast<int>(theta.size()) != d)
    throw std::invalid_argument("fisher_numeric: theta dimension mismatch");
  if (static_cast<int>(beta.size()) != p)
    throw std::invalid_argument("fisher_numeric: beta dimension mismatch");
  if (!(step_rel > 0.0)) throw std::invalid_argument("fisher_numeric: step must be positive");

  const auto sigma_at = [&](const Vector& th, const Vector& be) {
    return CovarianceFactorization(ScaleVector::from_log(be), fam.spectrum(th)).covariance();
  };

  const int dim = d + p;
  const Matrix sigma = sigma_at(theta, beta);
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("fisher_numeric: realized covariance not positive definite");

  // a_i = Sigma^-1 dSigma_i
  std::vector<Matrix> a(dim);
  for (int i = 0; i < dim; ++i) {
    Vector th_p = theta, th_m = theta, be_p = beta, be_m = beta;
    const double x = i < d ? theta[i] : beta[i - d];
    const double h = step_rel * std::max(1.0, std::abs(x));
    if (i < d) {
      th_p[i] += h;
      th_m[i] -= h;
    } else {
      be_p[i - d] += h;
      be_m[i - d] -= h;
    }
    const Matrix dsigma = (sigma_at(th_p, be_p) - sigma_at(th_m, be_m)) / (2.0 * h);
    a[i] = llt.solve(dsigma);
  }

  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = 0.5 * a[i].cwiseProduct(a[j].transpose()).sum();
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

}  // namespace ccs
