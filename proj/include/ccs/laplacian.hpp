#pragma once

// Laplace-Beltrami operator of the Fisher metric, restricted to functions of
// theta alone.
//
// The metric is block diagonal, g_theta is constant and det g is proportional
// to det g_beta(theta), so for f = f(theta) the operator collapses to
//
//   f^{-1} Delta f = sum_ij g_theta^{ij} [ d_i d_j log f
//                                          + d_i log f d_j log f
//                                          + (1/2) d_i L d_j log f ],
//
// with L(theta) = log det g_beta(theta). Two evaluation routes:
//
//   laplace_beltrami_theta  generic log f supplied as a callable, its
//                           derivatives by central differences, L analytic;
//   laplace_beltrami_power  closed route for f = det(g_beta)^e, where
//                           log f = e L gives
//                           f^{-1} Delta f =
//                             sum g^{ij} [ e H_ij + (e^2 + e/2) L_i L_j ].
//
// The two agree to finite-difference accuracy and are kept separate so tests
// can cross-check them.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ccs/fisher.hpp"
#include "ccs/model.hpp"
#include "ccs/prior.hpp"
#include "ccs/types.hpp"

namespace ccs {

inline double laplace_beltrami_theta(const ModelFamily& fam,
                                     const std::function<double(const Vector&)>& log_f,
                                     const Vector& theta, double fd_step = 1e-4) {
  const int d = fam.dim();
  if (static_cast<int>(theta.size()) != d)
    throw std::invalid_argument("laplace_beltrami_theta: theta dimension mismatch");
  if (!(fd_step > 0.0))
    throw std::invalid_argument("laplace_beltrami_theta: step must be positive");

  const Matrix g_inv =
      fisher_theta(fam).llt().solve(Matrix::Identity(d, d));
  const Vector grad_l = log_det_fisher_beta_derivatives(fam, theta).gradient;

  std::vector<double> h(d);
  for (int i = 0; i < d; ++i) h[i] = fd_step * std::max(1.0, std::abs(theta[i]));

  const double f0 = log_f(theta);
  const auto at = [&](int i, double si, int j, double sj) {
    Vector th = theta;
    th[i] += si * h[i];
    th[j] += sj * h[j];
    return log_f(th);
  };

  Vector grad_f(d);
  Matrix hess_f(d, d);
  for (int i = 0; i < d; ++i) {
    const double fp = at(i, 1, i, 0);
    const double fm = at(i, -1, i, 0);
    grad_f[i] = (fp - fm) / (2.0 * h[i]);
    hess_f(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (int j = 0; j < i; ++j) {
      const double v = (at(i, 1, j, 1) - at(i, 1, j, -1) - at(i, -1, j, 1) + at(i, -1, j, -1)) /
                       (4.0 * h[i] * h[j]);
      hess_f(i, j) = v;
      hess_f(j, i) = v;
    }
  }

  double out = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out += g_inv(i, j) *
             (hess_f(i, j) + grad_f[i] * grad_f[j] + 0.5 * grad_l[i] * grad_f[j]);
  return out;
}

// f = det(g_beta)^exponent, fully analytic.
inline double laplace_beltrami_power(const ModelFamily& fam, double exponent,
                                     const Vector& theta) {
  const int d = fam.dim();
  if (static_cast<int>(theta.size()) != d)
    throw std::invalid_argument("laplace_beltrami_power: theta dimension mismatch");
  const Matrix g_inv = fisher_theta(fam).llt().solve(Matrix::Identity(d, d));
  const LogDetBetaDerivatives l = log_det_fisher_beta_derivatives(fam, theta);
  const double quad = l.gradient.dot(g_inv * l.gradient);
  const double trace = g_inv.cwiseProduct(l.hessian).sum();
  return exponent * trace + (exponent * exponent + 0.5 * exponent) * quad;
}

// Which ratio the superharmonicity check applies the operator to:
//   kSqrtRatio  f = (pi / pi_ref)^{1/2}, the object in the risk expansion;
//   kRatio      f = pi / pi_ref, the prior ratio itself.
// Exponents on det g_beta map linearly, so the sign conclusions agree.
enum class RatioConvention { kSqrtRatio, kRatio };

inline const char* to_string(RatioConvention c) {
  return c == RatioConvention::kSqrtRatio ? "sqrt" : "ratio";
}

struct SuperharmonicPoint {
  Vector theta;
  double value;  // f^{-1} Delta f at theta
};

struct SuperharmonicReport {
  RatioConvention convention = RatioConvention::kSqrtRatio;
  double exponent = 0.0;  // e with f = det(g_beta)^e
  std::vector<SuperharmonicPoint> points;
  double max_value = 0.0;
  int positive_count = 0;

  [[nodiscard]] bool superharmonic() const { return positive_count == 0; }
};

// Evaluate f^{-1} Delta f for f = (pi / pi_ref)^s over a grid of theta
// points, s = 1/2 or 1 per the convention. Superharmonicity of the ratio on
// the grid is max_value <= 0.
inline SuperharmonicReport check_superharmonic(const ModelFamily& fam, const PriorSpec& prior,
                                               const PriorSpec& reference,
                                               const std::vector<Vector>& grid,
                                               RatioConvention convention =
                                                   RatioConvention::kSqrtRatio) {
  if (grid.empty()) throw std::invalid_argument("check_superharmonic: empty grid");
  const double s = convention == RatioConvention::kRatio ? 1.0 : 0.5;
  // pi / pi_ref = det(g_beta)^{(c - c_ref)/2}, so f = det(g_beta)^e with:
  const double e = 0.5 * s * (prior.c() - reference.c());

  SuperharmonicReport report;
  report.convention = convention;
  report.exponent = e;
  report.points.reserve(grid.size());
  bool first = true;
  for (const Vector& theta : grid) {
    const double v = laplace_beltrami_power(fam, e, theta);
    report.points.push_back({theta, v});
    if (first || v > report.max_value) report.max_value = v;
    first = false;
    if (v > 0.0) ++report.positive_count;
  }
  return report;
}

}  // namespace ccs
