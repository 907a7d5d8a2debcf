#pragma once

// Asymptotic KL-risk comparison of Bayesian predictive densities.
//
// For the prior pi_c = pi_J^c the leading term of the risk improvement over
// the Jeffreys predictive is
//
//   E[KL(p_true; p_J)] - E[KL(p_true; p_c)]
//     = -(2/n^2) f^{-1} Delta f + o(n^-2),   f = (pi_c / pi_J)^{1/2},
//
// so positive values mean pi_c beats Jeffreys at that theta. f is
// det(g_beta)^gamma with gamma = (c-1)/4, handled by the power route of the
// Laplacian.
//
// For the exchangeable family the whole curve is available in closed form.
// With u = p theta / 2 the derivatives of L = log det g_beta are classically
// written via sinh/cosh, which overflows for |u| > ~700. The implementation
// uses the algebraically identical tanh form: with T = tanh(u),
// s2 = sech^2(u) and E = (4/p) T^2 + 2 s2,
//
//   L'  = 4 (p-1) T / E,
//   L'' = 2 p (p-1) s2 (2 + (2 - 4/p) T^2) / E^2,
//
// finite for every theta, and
//
//   risk_diff = -(2/n^2) (2 / (p (p-1))) [ gamma L'' + (gamma^2 + gamma/2) L'^2 ].
//
// Limits used as anchors: risk_diff(0) = -4 gamma / n^2 and
// risk_diff(theta -> +-inf) = -(4/n^2) p (p-1) (gamma^2 + gamma/2).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccs/laplacian.hpp"
#include "ccs/model.hpp"
#include "ccs/prior.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Generic route, any family: -(2/n^2) f^{-1} Delta f with f = pi/pi_J
// to the 1/2. Exact zero for the Jeffreys prior itself.
inline double asymptotic_risk_diff(const ModelFamily& fam, const PriorSpec& prior,
                                   const Vector& theta, int n) {
  if (n < 1) throw std::invalid_argument("asymptotic_risk_diff: n must be positive");
  const double gamma = prior.gamma();
  if (gamma == 0.0) return 0.0;
  const double nn = static_cast<double>(n);
  return -(2.0 / (nn * nn)) * laplace_beltrami_power(fam, gamma, theta);
}

// Closed form for the exchangeable family; algebraically equal to the
// generic route, finite for all theta.
inline double exchangeable_risk_diff(int p, double gamma, double theta, int n) {
  if (p < 2) throw std::invalid_argument("exchangeable_risk_diff: p must be at least 2");
  if (n < 1) throw std::invalid_argument("exchangeable_risk_diff: n must be positive");
  if (!std::isfinite(theta) || !std::isfinite(gamma))
    throw std::invalid_argument("exchangeable_risk_diff: arguments must be finite");

  const double pd = static_cast<double>(p);
  const double u = 0.5 * pd * theta;
  const double t = std::tanh(u);
  const double ch = std::cosh(u);
  // sech^2 via cosh; if cosh^2 overflows the division collapses to exactly
  // 0, which is also the true value to double precision there.
  const double s2 = 1.0 / (ch * ch);
  const double e = (4.0 / pd) * t * t + 2.0 * s2;
  const double d1 = 4.0 * (pd - 1.0) * t / e;
  const double d2 = 2.0 * pd * (pd - 1.0) * s2 * (2.0 + (2.0 - 4.0 / pd) * t * t) / (e * e);

  const double nn = static_cast<double>(n);
  const double g_inv = 2.0 / (pd * (pd - 1.0));  // inverse of g_thetatheta = p(p-1)/2
  return -(2.0 / (nn * nn)) * g_inv * (gamma * d2 + (gamma * gamma + 0.5 * gamma) * d1 * d1);
}

// theta -> +-infinity limit of exchangeable_risk_diff.
inline double exchangeable_risk_diff_limit(int p, double gamma, int n) {
  if (p < 2) throw std::invalid_argument("exchangeable_risk_diff_limit: p must be at least 2");
  if (n < 1) throw std::invalid_argument("exchangeable_risk_diff_limit: n must be positive");
  const double pd = static_cast<double>(p);
  const double nn = static_cast<double>(n);
  return -(4.0 / (nn * nn)) * pd * (pd - 1.0) * (gamma * gamma + 0.5 * gamma);
}

struct RiskCurvePoint {
  int p = 0;
  int n = 0;
  double gamma = 0.0;
  double theta = 0.0;
  double risk_diff = 0.0;
};

// Exchangeable risk curves on a theta grid, one point per
// (p, gamma, theta) triple in that loop order.
inline std::vector<RiskCurvePoint> risk_curve_table(const std::vector<int>& ps,
                                                    const std::vector<double>& gammas,
                                                    const std::vector<double>& thetas, int n) {
  if (ps.empty() || gammas.empty() || thetas.empty())
    throw std::invalid_argument("risk_curve_table: empty axis");
  std::vector<RiskCurvePoint> table;
  table.reserve(ps.size() * gammas.size() * thetas.size());
  for (int p : ps)
    for (double gamma : gammas)
      for (double theta : thetas)
        table.push_back({p, n, gamma, theta, exchangeable_risk_diff(p, gamma, theta, n)});
  return table;
}

}  // namespace ccs
