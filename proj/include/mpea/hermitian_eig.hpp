// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_HERMITIAN_EIG_HPP
#define MPEA_HERMITIAN_EIG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mpea/complex_matrix.hpp"
#include "mpea/errors.hpp"

namespace mpea {

/// H = V diag(E) V^dagger with real ascending eigenvalues and orthonormal
/// eigenvector columns.
struct HermitianEigenSystem {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  cvector eigenvector(std::size_t k) const {
    cvector v(eigenvectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
  }
};

/// Cyclic complex Jacobi diagonalization.
inline HermitianEigenSystem hermitian_eig(const ComplexMatrix& h, double herm_tol = 1e-9) {
  const std::size_t n = h.dim();
  if (!h.is_hermitian(herm_tol)) throw NotHermitian("hermitian_eig: input is not Hermitian");

  ComplexMatrix a = h;
  // symmetrize exactly so roundoff in the input cannot drift the iteration
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = cplx{a(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  const std::size_t max_sweeps = 60;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * std::norm(a(i, j));
    if (std::sqrt(off) <= 1e-14 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq <= 1e-300) continue;
        const cplx phase = a(p, q) / apq;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // columns: col_p' = c*col_p - conj(phase)*s*col_q ; col_q' = phase*s*col_p + c*col_q
        const cplx gp = std::conj(phase) * s;
        const cplx gq = phase * s;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - gp * aiq;
          a(i, q) = gq * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - std::conj(gp) * aqj;
          a(q, j) = std::conj(gq) * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - gp * viq;
          v(i, q) = gq * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigenSystem sys;
  sys.eigenvalues.resize(n);
  sys.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    sys.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) sys.eigenvectors(i, k) = v(i, order[k]);
  }
  return sys;
}

/// exp(-i H t) for Hermitian H, via eigendecomposition.
inline ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& h, double t,
                                          double herm_tol = 1e-9) {
  const HermitianEigenSystem es = hermitian_eig(h, herm_tol);
  const std::size_t n = h.dim();
  ComplexMatrix u(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx ph = std::exp(cplx{0.0, -es.eigenvalues[k] * t});
    for (std::size_t i = 0; i < n; ++i) {
      const cplx w = es.eigenvectors(i, k) * ph;
      for (std::size_t j = 0; j < n; ++j) u(i, j) += w * std::conj(es.eigenvectors(j, k));
    }
  }
  return u;
}

}  // namespace mpea

#endif  // MPEA_HERMITIAN_EIG_HPP
