#pragma once

// Monte-Carlo estimation of predictive KL risk under competing priors.
//
// One replication r: draw a dataset X_r from the true model, fit the
// posterior under each prior with the identical proposal stream (common
// random numbers), then estimate
//
//   KL_r(prior) = (1/K) sum_k [ log p_true(y_k) - log p_pred(y_k | X_r) ]
//
// with the same K fresh draws y_k from the true density for every prior.
// Everything random is addressed as stream(seed, rep, purpose), purposes
// 0 = dataset, 1 = mcmc proposals, 2 = y draws, so results do not depend on
// thread scheduling and the per-prior estimates are paired by construction.
//
// Replications whose worst split R-hat under any prior exceeds
// rhat_threshold are excluded for every prior, keeping the pairing intact.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ccs/circulant.hpp"
#include "ccs/mcmc.hpp"
#include "ccs/model.hpp"
#include "ccs/prior.hpp"
#include "ccs/rng.hpp"
#include "ccs/sampling.hpp"
#include "ccs/types.hpp"

namespace ccs {

struct ExperimentConfig {
  ModelFamily family;
  Vector true_theta;
  Vector true_beta;
  int n = 100;           // observations per dataset
  int reps = 2000;       // replications
  int kl_eval_draws = 2000;  // K
  double rhat_threshold = 1.1;
  McmcConfig mcmc;
  std::uint64_t seed = 1;

  ExperimentConfig(ModelFamily fam, Vector theta, Vector beta)
      : family(std::move(fam)),
        true_theta(std::move(theta)),
        true_beta(std::move(beta)) {}

  void validate() const {
    if (static_cast<int>(true_theta.size()) != family.dim())
      throw std::invalid_argument("ExperimentConfig: true_theta dimension mismatch");
    if (static_cast<int>(true_beta.size()) != family.p())
      throw std::invalid_argument("ExperimentConfig: true_beta dimension mismatch");
    if (n < 1) throw std::invalid_argument("ExperimentConfig: n must be positive");
    if (reps < 2) throw std::invalid_argument("ExperimentConfig: need at least 2 reps");
    if (kl_eval_draws < 1)
      throw std::invalid_argument("ExperimentConfig: kl_eval_draws must be positive");
    if (!(rhat_threshold > 1.0))
      throw std::invalid_argument("ExperimentConfig: rhat_threshold must exceed 1");
    mcmc.validate();
  }

  [[nodiscard]] CovarianceFactorization truth() const {
    return {ScaleVector::from_log(true_beta), family.spectrum(true_theta)};
  }
};

struct RiskEstimate {
  PriorSpec prior = PriorSpec::jeffreys();
  double mean_kl = 0.0;
  double std_error = 0.0;
  double mean_acceptance = 0.0;
  double max_split_rhat = 0.0;
  int reps_used = 0;
  int excluded = 0;
};

struct PairedDifference {
  double mean = 0.0;
  double std_error = 0.0;
};

struct PairedRiskEstimates {
  std::vector<RiskEstimate> estimates;  // one per prior, input order
  Matrix per_rep_kl;                    // reps x priors, NaN on excluded reps
  std::vector<int> excluded_reps;

  // Paired mean difference KL(priors[i]) - KL(priors[j]) over included reps.
  [[nodiscard]] PairedDifference paired_difference(int i, int j) const {
    const int reps = static_cast<int>(per_rep_kl.rows());
    double sum = 0.0, sum_sq = 0.0;
    int m = 0;
    for (int r = 0; r < reps; ++r) {
      const double d = per_rep_kl(r, i) - per_rep_kl(r, j);
      if (std::isnan(d)) continue;
      sum += d;
      sum_sq += d * d;
      ++m;
    }
    if (m < 2) throw std::runtime_error("paired_difference: fewer than 2 usable reps");
    const double mean = sum / m;
    const double var = (sum_sq - m * mean * mean) / (m - 1);
    return {mean, std::sqrt(std::max(0.0, var) / m)};
  }
};

namespace detail {

inline int worker_count(int reps) {
  int w = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CIRC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) w = v;
  }
  if (w < 1) w = 1;
  return std::min(w, reps);
}

}  // namespace detail

// Run the paired design for a set of priors. Worker threads pick up
// replication indices dynamically; all randomness is keyed by (seed, rep,
// purpose) so the result is independent of the schedule.
inline PairedRiskEstimates estimate_kl_risk_paired(const ExperimentConfig& cfg,
                                                   const std::vector<PriorSpec>& priors) {
  cfg.validate();
  if (priors.empty()) throw std::invalid_argument("estimate_kl_risk_paired: no priors");
  const int reps = cfg.reps;
  const int np = static_cast<int>(priors.size());
  const CovarianceFactorization truth = cfg.truth();

  Matrix kl(reps, np);
  Matrix acc(reps, np);
  Matrix rhat(reps, np);

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      RngStream data_rng(cfg.seed, static_cast<std::uint64_t>(r), 0);
      const Matrix data = sample_dataset(truth, cfg.n, data_rng);

      RngStream y_rng(cfg.seed, static_cast<std::uint64_t>(r), 2);
      const Matrix y = sample_dataset(truth, cfg.kl_eval_draws, y_rng);
      Vector truth_logd(cfg.kl_eval_draws);
      for (int k = 0; k < cfg.kl_eval_draws; ++k)
        truth_logd[k] = log_density(y.row(k).transpose(), truth);

      for (int j = 0; j < np; ++j) {
        // Fresh stream with identical address for every prior: common
        // random numbers across arms.
        RngStream mcmc_rng(cfg.seed, static_cast<std::uint64_t>(r), 1);
        const PosteriorDraws draws =
            run_posterior_mcmc(priors[j], cfg.family, data, cfg.mcmc, mcmc_rng);
        const PredictiveDensity pred(draws);
        double s = 0.0;
        for (int k = 0; k < cfg.kl_eval_draws; ++k)
          s += truth_logd[k] - pred.log_density(y.row(k).transpose());
        kl(r, j) = s / cfg.kl_eval_draws;
        acc(r, j) = draws.diagnostics.acceptance_rate;
        rhat(r, j) = draws.diagnostics.max_split_rhat;
      }
    }
  };

  const int nw = detail::worker_count(reps);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  PairedRiskEstimates out;
  out.per_rep_kl = Matrix::Constant(reps, np, std::numeric_limits<double>::quiet_NaN());
  for (int r = 0; r < reps; ++r) {
    bool ok = true;
    for (int j = 0; j < np; ++j)
      if (!(rhat(r, j) <= cfg.rhat_threshold)) ok = false;
    if (ok) {
      out.per_rep_kl.row(r) = kl.row(r);
    } else {
      out.excluded_reps.push_back(r);
    }
  }

  const int used = reps - static_cast<int>(out.excluded_reps.size());
  if (used < 2) throw std::runtime_error("estimate_kl_risk_paired: fewer than 2 reps converged");
  out.estimates.reserve(np);
  for (int j = 0; j < np; ++j) {
    RiskEstimate e;
    e.prior = priors[j];
    double sum = 0.0, sum_sq = 0.0, acc_sum = 0.0, worst_rhat = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double v = out.per_rep_kl(r, j);
      if (std::isnan(v)) continue;
      sum += v;
      sum_sq += v * v;
      acc_sum += acc(r, j);
      worst_rhat = std::max(worst_rhat, rhat(r, j));
    }
    e.reps_used = used;
    e.excluded = static_cast<int>(out.excluded_reps.size());
    e.mean_kl = sum / used;
    const double var = (sum_sq - used * e.mean_kl * e.mean_kl) / (used - 1);
    e.std_error = std::sqrt(std::max(0.0, var) / used);
    e.mean_acceptance = acc_sum / used;
    e.max_split_rhat = worst_rhat;
    out.estimates.push_back(e);
  }
  return out;
}

inline RiskEstimate estimate_kl_risk(const ExperimentConfig& cfg, const PriorSpec& prior) {
  return estimate_kl_risk_paired(cfg, {prior}).estimates.front();
}

// Oracle mode: the predictive is the true density itself, so the estimated
// KL is exactly zero. Exercises the dataset / y-draw plumbing end to end and
// anchors the harness in tests.
inline RiskEstimate plugin_truth_risk(const ExperimentConfig& cfg) {
  cfg.validate();
  const CovarianceFactorization truth = cfg.truth();
  Vector per_rep(cfg.reps);
  for (int r = 0; r < cfg.reps; ++r) {
    RngStream y_rng(cfg.seed, static_cast<std::uint64_t>(r), 2);
    const Matrix y = sample_dataset(truth, cfg.kl_eval_draws, y_rng);
    double s = 0.0;
    for (int k = 0; k < cfg.kl_eval_draws; ++k) {
      const Vector yk = y.row(k).transpose();
      s += log_density(yk, truth) - log_density(yk, truth);
    }
    per_rep[r] = s / cfg.kl_eval_draws;
  }
  RiskEstimate e;
  e.mean_kl = per_rep.mean();
  const double var = (per_rep.array() - e.mean_kl).square().sum() / (cfg.reps - 1);
  e.std_error = std::sqrt(var / cfg.reps);
  e.reps_used = cfg.reps;
  return e;
}

}  // namespace ccs
