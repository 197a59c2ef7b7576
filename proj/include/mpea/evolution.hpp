// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_EVOLUTION_HPP
#define MPEA_EVOLUTION_HPP

#include <cstddef>
#include <vector>

#include "mpea/bipartite_system.hpp"
#include "mpea/complex_matrix.hpp"
#include "mpea/errors.hpp"
#include "mpea/general_eig.hpp"
#include "mpea/hermitian_eig.hpp"

namespace mpea {

/// Effective (generally non-unitary) evolution on subsystem B induced by one
/// unitary interval followed by a successful projection of A onto |phi_A>:
/// V(tau) = <phi_A| exp(-i H tau) |phi_A>.
struct NonUnitaryEvolution {
  ComplexMatrix V;
  double tau = 0.0;
};

/// Direct path: exponentiate H, then take the partial inner product over A.
inline NonUnitaryEvolution construct_vb(const BipartiteSystem& sys, double tau) {
  sys.validate();
  const ComplexMatrix u = matrix_exp_hermitian(sys.H, tau);
  const std::size_t dA = sys.dim_A, dB = sys.dim_B;
  NonUnitaryEvolution ev;
  ev.tau = tau;
  ev.V = ComplexMatrix(dB);
  for (std::size_t r = 0; r < dB; ++r)
    for (std::size_t s = 0; s < dB; ++s) {
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < dA; ++k) {
        if (sys.phi_A[k] == cplx{0.0, 0.0}) continue;
        for (std::size_t l = 0; l < dA; ++l)
          acc += std::conj(sys.phi_A[k]) * sys.phi_A[l] * u(k * dB + r, l * dB + s);
      }
      ev.V(r, s) = acc;
    }
  return ev;
}

/// Spectral path: eigendecompose H and assemble
/// V_rs = sum_j e^{-i E_j tau} sum_{k,l} f_kr^j f_ls^j* c_k c_l*,
/// where f^j are the eigenvector components in the A (x) B product basis and
/// c_k = <phi_A | k>.
inline NonUnitaryEvolution construct_vb_spectral(const BipartiteSystem& sys, double tau) {
  sys.validate();
  const HermitianEigenSystem es = hermitian_eig(sys.H);
  const std::size_t dA = sys.dim_A, dB = sys.dim_B, d = dA * dB;

  NonUnitaryEvolution ev;
  ev.tau = tau;
  ev.V = ComplexMatrix(dB);
  for (std::size_t j = 0; j < d; ++j) {
    const cplx phase = std::exp(cplx{0.0, -es.eigenvalues[j] * tau});
    // g_r = sum_k f_kr^j c_k  with c_k = conj(phi_A[k])
    cvector g(dB, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < dA; ++k) {
      const cplx ck = std::conj(sys.phi_A[k]);
      if (ck == cplx{0.0, 0.0}) continue;
      for (std::size_t r = 0; r < dB; ++r) g[r] += es.eigenvectors(k * dB + r, j) * ck;
    }
    for (std::size_t r = 0; r < dB; ++r)
      for (std::size_t s = 0; s < dB; ++s) ev.V(r, s) += phase * g[r] * std::conj(g[s]);
  }
  return ev;
}

/// Sequential measurement intervals: first element acts first,
/// V(tau_1, ..., tau_n) = V(tau_n) ... V(tau_1).
inline NonUnitaryEvolution compose(const std::vector<NonUnitaryEvolution>& evolutions) {
  if (evolutions.empty()) throw DimensionMismatch("compose: empty evolution list");
  NonUnitaryEvolution out;
  out.V = ComplexMatrix::identity(evolutions.front().V.dim());
  for (const auto& ev : evolutions) {
    if (ev.V.dim() != out.V.dim())
      throw DimensionMismatch("compose: mismatched subsystem dimensions");
    out.V = ev.V * out.V;
    out.tau += ev.tau;
  }
  return out;
}

/// Report V in another orthonormal basis: B^dagger V B.
inline NonUnitaryEvolution change_basis(const NonUnitaryEvolution& ev,
                                        const ComplexMatrix& basis) {
  NonUnitaryEvolution out;
  out.tau = ev.tau;
  out.V = basis.adjoint() * ev.V * basis;
  return out;
}

/// Classical eigen-analysis of V; the oracle against which the quantum
/// estimates are judged.
inline BiorthogonalEigenSystem classical_spectrum(const NonUnitaryEvolution& ev,
                                                  double cond_threshold = 1e8) {
  return general_eig(ev.V, cond_threshold);
}

}  // namespace mpea

#endif  // MPEA_EVOLUTION_HPP
