// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles, kept independent of the library's linear algebra:
// a cofactor determinant and a Durand-Kerner root finder that only needs
// point evaluations of det(xI - M).

#ifndef MPEA_TESTS_SUPPORT_ORACLES_HPP
#define MPEA_TESTS_SUPPORT_ORACLES_HPP

#include <complex>
#include <random>
#include <vector>

#include "mpea/complex_matrix.hpp"

namespace oracles {

using cplx = std::complex<double>;

inline cplx cofactor_det(std::vector<std::vector<cplx>> a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  cplx det{0.0, 0.0};
  double sign = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<cplx>> minor(n - 1, std::vector<cplx>(n - 1));
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == col) continue;
        minor[i - 1][jj++] = a[i][j];
      }
    }
    det += sign * a[0][col] * cofactor_det(minor);
    sign = -sign;
  }
  return det;
}

inline cplx char_poly_at(const mpea::ComplexMatrix& m, const cplx& x) {
  const std::size_t n = m.dim();
  std::vector<std::vector<cplx>> a(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? x : cplx{0.0, 0.0}) - m(i, j);
  return cofactor_det(a);
}

/// All eigenvalues of m by Durand-Kerner iteration on det(xI - M).
inline std::vector<cplx> eigenvalues(const mpea::ComplexMatrix& m, int iters = 600) {
  const std::size_t n = m.dim();
  std::vector<cplx> x(n);
  const cplx seed{0.4, 0.9};
  cplx p{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    p *= seed;
    x[k] = p * (1.0 + m.max_norm());
  }
  for (int it = 0; it < iters; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx denom{1.0, 0.0};
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= x[i] - x[j];
      if (std::abs(denom) < 1e-300) continue;
      const cplx delta = char_poly_at(m, x[i]) / denom;
      x[i] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-15 * (1.0 + m.max_norm())) break;
  }
  return x;
}

inline mpea::ComplexMatrix random_matrix(std::mt19937& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  mpea::ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx{d(rng), d(rng)};
  return m;
}

inline mpea::ComplexMatrix random_hermitian(std::mt19937& rng, std::size_t n, double scale = 1.0) {
  const mpea::ComplexMatrix m = random_matrix(rng, n, scale);
  return (m + m.adjoint()) * cplx{0.5, 0.0};
}

inline mpea::cvector random_state(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  mpea::cvector v(n);
  for (auto& z : v) z = cplx{d(rng), d(rng)};
  const double nn = mpea::norm2(v);
  for (auto& z : v) z /= nn;
  return v;
}

/// Random density matrix: normalized Gram matrix G G^dagger / tr.
inline mpea::ComplexMatrix random_density(std::mt19937& rng, std::size_t n) {
  const mpea::ComplexMatrix g = random_matrix(rng, n);
  mpea::ComplexMatrix rho = g * g.adjoint();
  return rho * cplx{1.0 / rho.trace().real(), 0.0};
}

}  // namespace oracles

#endif  // MPEA_TESTS_SUPPORT_ORACLES_HPP
