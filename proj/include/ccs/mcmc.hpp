#pragma once

// Random-walk Metropolis over (theta, beta) and the posterior predictive
// density built from the retained draws.
//
// The likelihood of a dataset X (rows i.i.d. N_p(0, Sigma(theta, beta)))
// depends on X only through the scatter matrix S = X^T X:
//
//   log p(X | theta, beta) = -(n p / 2) log 2 pi - n sum(beta)
//       - (1/2) sum_k [Q* D_alpha^-1 S D_alpha^-1 Q]_kk / lambda_k,
//
// so one likelihood evaluation costs O(p^3) regardless of n. Proposals are
// independent Gaussian steps per coordinate with separate scales for theta
// and beta; scales adapt toward a [0.15, 0.5] acceptance window during
// burn-in only, then freeze, so the retained chain is a fixed Markov kernel.
//
// Convergence is screened per run with a split R-hat (each chain half
// treated as a chain); callers exclude runs whose worst R-hat exceeds their
// threshold.

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ccs/circulant.hpp"
#include "ccs/dft.hpp"
#include "ccs/model.hpp"
#include "ccs/prior.hpp"
#include "ccs/rng.hpp"
#include "ccs/types.hpp"

namespace ccs {

inline constexpr double kLog2Pi = 1.8378770664093454836;

// Dataset reduced to its sufficient statistic.
class DatasetLikelihood {
 public:
  DatasetLikelihood(ModelFamily fam, const Matrix& data)
      : fam_(std::move(fam)),
        q_(dft_matrix(fam_.p())),
        n_(static_cast<int>(data.rows())),
        scatter_(data.transpose() * data) {
    if (data.cols() != fam_.p())
      throw std::invalid_argument("DatasetLikelihood: data has wrong column count");
    if (n_ < 1) throw std::invalid_argument("DatasetLikelihood: empty dataset");
  }

  [[nodiscard]] const ModelFamily& family() const { return fam_; }
  [[nodiscard]] int n() const { return n_; }

  [[nodiscard]] double log_likelihood(const Vector& theta, const Vector& beta) const {
    const int p = fam_.p();
    const Spectrum spec = fam_.spectrum(theta);
    const Vector ainv = (-beta.array()).exp().matrix();
    const Matrix b = scatter_.cwiseProduct(ainv * ainv.transpose());
    double quad = 0.0;
    for (int k = 0; k < p; ++k) {
      const Complex v = (q_.col(k).adjoint() * b * q_.col(k))(0, 0);
      quad += v.real() / spec.values()[k];
    }
    return -0.5 * n_ * p * kLog2Pi - n_ * beta.sum() - 0.5 * quad;
  }

 private:
  ModelFamily fam_;
  ComplexMatrix q_;
  int n_;
  Matrix scatter_;
};

struct McmcConfig {
  int chain_length = 6000;  // total iterations, burn-in included
  int burn_in = 1000;
  int thinning = 5;
  double step_theta = 0.25;  // initial proposal scales, adapted in burn-in
  double step_beta = 0.25;
  bool adapt = true;

  void validate() const {
    if (burn_in < 0 || chain_length <= burn_in)
      throw std::invalid_argument("McmcConfig: need chain_length > burn_in >= 0");
    if (thinning < 1) throw std::invalid_argument("McmcConfig: thinning must be >= 1");
    if (chain_length - burn_in < 4 * thinning)
      throw std::invalid_argument("McmcConfig: fewer than 4 retained draws");
    if (!(step_theta > 0.0) || !(step_beta > 0.0))
      throw std::invalid_argument("McmcConfig: step sizes must be positive");
  }

  [[nodiscard]] int retained() const { return (chain_length - burn_in) / thinning; }
};

struct McmcDiagnostics {
  double acceptance_rate = 0.0;  // after burn-in
  double max_split_rhat = 0.0;   // worst coordinate
};

namespace detail {

// Split R-hat of one scalar trace: the two halves are treated as chains.
inline double split_rhat(const Vector& trace) {
  const int m = static_cast<int>(trace.size()) / 2;
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const Vector a = trace.head(m);
  const Vector b = trace.segment(m, m);
  const double ma = a.mean();
  const double mb = b.mean();
  const double va = (a.array() - ma).square().sum() / (m - 1);
  const double vb = (b.array() - mb).square().sum() / (m - 1);
  const double w = 0.5 * (va + vb);
  const double mean = 0.5 * (ma + mb);
  const double bvar =
      m * ((ma - mean) * (ma - mean) + (mb - mean) * (mb - mean));  // between, 1 dof
  if (w <= 0.0) return bvar > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double var_plus = (m - 1.0) / m * w + bvar / m;
  return std::sqrt(var_plus / w);
}

}  // namespace detail

struct PosteriorDraws {
  ModelFamily family;
  Matrix theta;  // retained x d
  Matrix beta;   // retained x p
  McmcDiagnostics diagnostics;

  [[nodiscard]] int count() const { return static_cast<int>(theta.rows()); }
};

inline PosteriorDraws run_posterior_mcmc(const PriorSpec& prior, const ModelFamily& fam,
                                         const Matrix& data, const McmcConfig& cfg,
                                         RngStream& rng) {
  cfg.validate();
  const int p = fam.p();
  const int d = fam.dim();
  const int n = static_cast<int>(data.rows());
  if (n < p + 1)
    std::fprintf(stderr,
                 "run_posterior_mcmc: n = %d < p + 1 = %d, posterior may be very diffuse\n", n,
                 p + 1);

  const DatasetLikelihood lik(fam, data);
  const double theta_box = fam.max_theta_norm();

  const auto log_target = [&](const Vector& theta, const Vector& beta) {
    for (int i = 0; i < d; ++i)
      if (std::abs(theta[i]) > theta_box) return -std::numeric_limits<double>::infinity();
    try {
      return lik.log_likelihood(theta, beta) + log_prior(prior, fam, theta);
    } catch (const std::runtime_error&) {
      // Ratio-arithmetic overflow guard in the prior; treat as zero density.
      return -std::numeric_limits<double>::infinity();
    }
  };

  // Start at theta = 0 and beta_j = log RMS of column j (finite for any
  // n >= 1; the theta = 0 maximum-likelihood scale up to centering).
  Vector theta = Vector::Zero(d);
  Vector beta(p);
  for (int j = 0; j < p; ++j) {
    const double ms = data.col(j).squaredNorm() / n;
    beta[j] = ms > 0.0 ? 0.5 * std::log(ms) : 0.0;
  }

  double step_theta = cfg.step_theta;
  double step_beta = cfg.step_beta;
  double lp = log_target(theta, beta);

  const int retained = cfg.retained();
  Matrix theta_out(retained, d);
  Matrix beta_out(retained, p);

  Vector prop_theta(d), prop_beta(p);
  int out = 0;
  long long accepted_post = 0, proposed_post = 0;
  int adapt_accepted = 0, adapt_window = 0;
  for (int iter = 0; iter < cfg.chain_length; ++iter) {
    for (int i = 0; i < d; ++i) prop_theta[i] = theta[i] + step_theta * rng.normal();
    for (int j = 0; j < p; ++j) prop_beta[j] = beta[j] + step_beta * rng.normal();
    const double lp_prop = log_target(prop_theta, prop_beta);
    const bool accept = std::log(rng.uniform()) < lp_prop - lp;
    if (accept) {
      theta = prop_theta;
      beta = prop_beta;
      lp = lp_prop;
    }

    const bool in_burn_in = iter < cfg.burn_in;
    if (in_burn_in && cfg.adapt) {
      adapt_accepted += accept ? 1 : 0;
      if (++adapt_window == 50) {
        const double rate = adapt_accepted / 50.0;
        // Multiplicative nudge toward the [0.15, 0.5] window; frozen once
        // burn-in ends so retained draws come from a fixed kernel.
        if (rate < 0.15) {
          step_theta *= 0.7;
          step_beta *= 0.7;
        } else if (rate > 0.5) {
          step_theta *= 1.4;
          step_beta *= 1.4;
        }
        adapt_accepted = 0;
        adapt_window = 0;
      }
    }
    if (!in_burn_in) {
      ++proposed_post;
      accepted_post += accept ? 1 : 0;
      const int k = iter - cfg.burn_in;
      if (k % cfg.thinning == 0 && out < retained) {
        theta_out.row(out) = theta.transpose();
        beta_out.row(out) = beta.transpose();
        ++out;
      }
    }
  }

  McmcDiagnostics diag;
  diag.acceptance_rate = proposed_post > 0
                             ? static_cast<double>(accepted_post) / proposed_post
                             : 0.0;
  double worst = 0.0;
  for (int i = 0; i < d; ++i) worst = std::max(worst, detail::split_rhat(theta_out.col(i)));
  for (int j = 0; j < p; ++j) worst = std::max(worst, detail::split_rhat(beta_out.col(j)));
  diag.max_split_rhat = worst;

  return {fam, std::move(theta_out), std::move(beta_out), diag};
}

// Posterior predictive density: the draw average of N_p(y; 0, Sigma(draw)).
// One precision matrix is cached per draw, so an evaluation is a p x p
// quadratic form per draw followed by a log-mean-exp.
class PredictiveDensity {
 public:
  explicit PredictiveDensity(const PosteriorDraws& draws) {
    const int m = draws.count();
    if (m < 1) throw std::invalid_argument("PredictiveDensity: no draws");
    const ModelFamily& fam = draws.family;
    const int p = fam.p();
    const ComplexMatrix q = dft_matrix(p);
    precision_.reserve(m);
    log_norm_.resize(m);
    for (int s = 0; s < m; ++s) {
      const Spectrum spec = fam.spectrum(draws.theta.row(s).transpose());
      const Vector beta = draws.beta.row(s).transpose();
      const Vector ainv = (-beta.array()).exp().matrix();
      const ComplexMatrix rinv_c =
          q * spec.inverse().values().cast<Complex>().asDiagonal() * q.adjoint();
      const Matrix prec = ainv.asDiagonal() * rinv_c.real() * ainv.asDiagonal();
      precision_.push_back(prec);
      log_norm_[s] = -0.5 * p * kLog2Pi - beta.sum();
    }
  }

  [[nodiscard]] double log_density(const Vector& y) const {
    const int m = static_cast<int>(precision_.size());
    const int p = static_cast<int>(precision_[0].rows());
    if (static_cast<int>(y.size()) != p)
      throw std::invalid_argument("PredictiveDensity: dimension mismatch");
    Vector lp(m);
    for (int s = 0; s < m; ++s)
      lp[s] = log_norm_[s] - 0.5 * y.dot(precision_[s] * y);
    const double top = lp.maxCoeff();
    return top + std::log((lp.array() - top).exp().sum()) -
           std::log(static_cast<double>(m));
  }

 private:
  std::vector<Matrix> precision_;
  Vector log_norm_;
};

inline double predictive_log_density(const Vector& y, const PosteriorDraws& draws) {
  return PredictiveDensity(draws).log_density(y);
}

}  // namespace ccs
