#pragma once

// Sampling n i.i.d. rows from N_p(0, Sigma), Sigma given in factored form,
// through the dense Cholesky factor.

#include <stdexcept>

#include "ccs/circulant.hpp"
#include "ccs/rng.hpp"
#include "ccs/types.hpp"

namespace ccs {

inline Matrix sample_dataset(const CovarianceFactorization& f, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be positive");
  const int p = f.dim();
  Eigen::LLT<Matrix> llt(f.covariance());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sample_dataset: covariance not positive definite");
  const Matrix l = llt.matrixL();

  Matrix x(n, p);
  Vector z(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    x.row(i) = (l * z).transpose();
  }
  return x;
}

}  // namespace ccs
