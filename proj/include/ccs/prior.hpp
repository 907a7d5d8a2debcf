#pragma once

// Improper priors on (theta, beta), all powers of the Jeffreys density.
//
// The Jeffreys prior of the model is pi_J = det(g_beta)^{1/2} (the constant
// theta-block contributes nothing and the cross block vanishes), and pi_J is
// a function of theta alone. The family handled here is pi_c = pi_J^c, which
// covers every convention used in the risk analysis:
//
//   exponent on pi_J        c  (canonical here, also called a)
//   exponent on pi_J^2      t = (c - 1) / 2   relative to Jeffreys
//   exponent on pi_J^4      gamma = (c - 1) / 4   relative to Jeffreys
//
// c = 1 is Jeffreys itself, c = 0 the uniform (constant) prior. Densities
// are unnormalized; only ratios ever enter the posterior or the risk.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ccs/fisher.hpp"
#include "ccs/model.hpp"
#include "ccs/types.hpp"

namespace ccs {

class PriorSpec {
 public:
  static PriorSpec jeffreys() { return PriorSpec(1.0); }
  static PriorSpec uniform() { return PriorSpec(0.0); }
  static PriorSpec power(double c) { return PriorSpec(c); }
  static PriorSpec from_t(double t) { return PriorSpec(2.0 * t + 1.0); }
  static PriorSpec from_gamma(double gamma) { return PriorSpec(4.0 * gamma + 1.0); }

  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double a() const { return c_; }
  [[nodiscard]] double t() const { return 0.5 * (c_ - 1.0); }
  [[nodiscard]] double gamma() const { return 0.25 * (c_ - 1.0); }

  [[nodiscard]] bool is_uniform() const { return c_ == 0.0; }
  [[nodiscard]] bool is_jeffreys() const { return c_ == 1.0; }

  [[nodiscard]] std::string label() const {
    if (is_uniform()) return "uniform";
    if (is_jeffreys()) return "jeffreys";
    std::ostringstream os;
    os << "power(c=" << c_ << ")";
    return os.str();
  }

 private:
  explicit PriorSpec(double c) : c_(c) {
    if (!std::isfinite(c)) throw std::invalid_argument("PriorSpec: exponent must be finite");
  }
  double c_;
};

// log pi(theta, beta) up to an additive constant. beta never appears:
// det g_beta is a function of theta only, and the beta marginal is flat.
inline double log_prior(const PriorSpec& prior, const ModelFamily& fam, const Vector& theta) {
  if (prior.is_uniform()) return 0.0;
  return 0.5 * prior.c() * log_det_fisher_beta(fam.spectrum(theta));
}

}  // namespace ccs
