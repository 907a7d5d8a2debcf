#pragma once

// The unitary discrete Fourier matrix Q of order p,
//
//   q_jk = p^{-1/2} exp(2 pi i j k / p),   j, k = 0..p-1,
//
// which diagonalizes every p x p circulant matrix. Phases are reduced
// mod p before calling polar() so large p does not lose accuracy.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ccs/types.hpp"

namespace ccs {

inline ComplexMatrix dft_matrix(int p) {
  if (p < 2) throw std::invalid_argument("dft_matrix: order must be at least 2");
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  ComplexMatrix q(p, p);
  for (int j = 0; j < p; ++j) {
    for (int k = 0; k < p; ++k) {
      const int e = static_cast<int>(
          (static_cast<long long>(j) * static_cast<long long>(k)) % p);
      q(j, k) = std::polar(scale, step * static_cast<double>(e));
    }
  }
  return q;
}

}  // namespace ccs
