// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_BIPARTITE_SYSTEM_HPP
#define MPEA_BIPARTITE_SYSTEM_HPP

#include <cmath>
#include <cstddef>

#include "mpea/complex_matrix.hpp"
#include "mpea/errors.hpp"

namespace mpea {

/// Bipartite system H = H_A + H_B + H_AB with the projective-measurement state
/// |phi_A>. Tensor ordering is A-index slow (A (x) B) throughout the library:
/// joint index = a * dim_B + b.
struct BipartiteSystem {
  std::size_t dim_A = 0;
  std::size_t dim_B = 0;
  ComplexMatrix H;  // dim_A * dim_B
  cvector phi_A;

  void validate() const {
    if (H.dim() != dim_A * dim_B)
      throw DimensionMismatch("BipartiteSystem: dim(H) != dim_A * dim_B");
    if (phi_A.size() != dim_A)
      throw DimensionMismatch("BipartiteSystem: |phi_A| length != dim_A");
    if (!H.is_hermitian(1e-9)) throw NotHermitian("BipartiteSystem: H not Hermitian");
    if (std::abs(norm2(phi_A) - 1.0) > 1e-12)
      throw InvalidDensityMatrix("BipartiteSystem: |phi_A> not normalized");
  }
};

/// Two-spin singlet/triplet basis: |s>, |t_+>, |t_0>, |t_->. Qubit-1 slow,
/// computational index = 2*q1 + q2.
struct SpinPhotonBasis {
  cvector singlet;    // (|01> - |10>)/sqrt(2)
  cvector triplet_p;  // |11>
  cvector triplet_0;  // (|01> + |10>)/sqrt(2)
  cvector triplet_m;  // |00>

  SpinPhotonBasis() {
    const double r = 1.0 / std::sqrt(2.0);
    singlet = {0.0, r, -r, 0.0};
    triplet_p = {0.0, 0.0, 0.0, 1.0};
    triplet_0 = {0.0, r, r, 0.0};
    triplet_m = {1.0, 0.0, 0.0, 0.0};
  }

  /// Change-of-basis matrix with columns (s, t_+, t_0, t_-).
  ComplexMatrix matrix() const {
    ComplexMatrix b(4);
    const cvector* cols[4] = {&singlet, &triplet_p, &triplet_0, &triplet_m};
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 0; i < 4; ++i) b(i, k) = (*cols[k])[i];
    return b;
  }
};

/// H = h_A (x) I_B + I_A (x) h_B + h_AB, with A-index slow.
inline BipartiteSystem build_generic(const ComplexMatrix& h_A, const ComplexMatrix& h_B,
                                     const ComplexMatrix& h_AB, const cvector& phi_A) {
  const std::size_t dA = h_A.dim(), dB = h_B.dim();
  if (h_AB.dim() != dA * dB)
    throw DimensionMismatch("build_generic: dim(h_AB) != dim_A * dim_B");
  if (phi_A.size() != dA) throw DimensionMismatch("build_generic: phi_A length != dim_A");
  if (!h_A.is_hermitian(1e-9)) throw NotHermitian("build_generic: h_A not Hermitian");
  if (!h_B.is_hermitian(1e-9)) throw NotHermitian("build_generic: h_B not Hermitian");
  if (!h_AB.is_hermitian(1e-9)) throw NotHermitian("build_generic: h_AB not Hermitian");

  BipartiteSystem sys;
  sys.dim_A = dA;
  sys.dim_B = dB;
  sys.H = tensor_product(h_A, ComplexMatrix::identity(dB)) +
          tensor_product(ComplexMatrix::identity(dA), h_B) + h_AB;
  sys.phi_A = phi_A;
  const double n = norm2(sys.phi_A);
  if (n == 0.0) throw InvalidDensityMatrix("build_generic: zero |phi_A>");
  for (auto& z : sys.phi_A) z /= n;
  sys.validate();
  return sys;
}

namespace detail {

inline ComplexMatrix annihilation_op(std::size_t dim) {
  ComplexMatrix b(dim);
  for (std::size_t n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(double(n));
  return b;
}

// spin-z with eigenvalues -1/2 on |0>, +1/2 on |1>
inline ComplexMatrix spin_z() {
  ComplexMatrix s(2);
  s(0, 0) = -0.5;
  s(1, 1) = 0.5;
  return s;
}

// sigma_+ = sigma_x + i sigma_y = 2|1><0|
inline ComplexMatrix sigma_plus() {
  ComplexMatrix s(2);
  s(1, 0) = 2.0;
  return s;
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix s(2);
  s(0, 1) = 1.0;
  s(1, 0) = 1.0;
  return s;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix s(2);
  s(0, 1) = cplx{0.0, -1.0};
  s(1, 0) = cplx{0.0, 1.0};
  return s;
}

}  // namespace detail

/// Two spins coupled to a photon mode truncated at n_max:
///   H = w0 b'b + w1 (S1z + S2z) + (J/2) [b (s1+ + s2+) + b' (s1- + s2-)]
/// with Sz = diag(-1/2, +1/2) and s+- the full raising/lowering operators
/// (sx +- i sy). This is the operator normalization under which the
/// one-photon evolution is diagonal in the singlet/triplet basis with the
/// cos(sqrt(10) tau J), cos(sqrt(6) tau J), cos(sqrt(2) tau J) structure.
/// Subsystem A is the photon (dim n_max+1), B the two spins (dim 4);
/// |phi_A> defaults to the single-photon state |1>.
inline BipartiteSystem build_jaynes_cummings(double w0, double w1, double J,
                                             std::size_t n_max = 4) {
  if (n_max < 2)
    throw CutoffTooSmall("build_jaynes_cummings: n_max must be >= 2, got " +
                         std::to_string(n_max));
  const std::size_t dA = n_max + 1;
  const ComplexMatrix b = detail::annihilation_op(dA);
  const ComplexMatrix bd = b.adjoint();
  const ComplexMatrix sz = detail::spin_z();
  const ComplexMatrix sp = detail::sigma_plus();
  const ComplexMatrix sm = sp.adjoint();
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  const ComplexMatrix iA = ComplexMatrix::identity(dA);

  const ComplexMatrix sz_sum = tensor_product(sz, i2) + tensor_product(i2, sz);
  const ComplexMatrix sp_sum = tensor_product(sp, i2) + tensor_product(i2, sp);
  const ComplexMatrix sm_sum = tensor_product(sm, i2) + tensor_product(i2, sm);

  BipartiteSystem sys;
  sys.dim_A = dA;
  sys.dim_B = 4;
  sys.H = w0 * tensor_product(bd * b, ComplexMatrix::identity(4)) +
          w1 * tensor_product(iA, sz_sum) +
          (J / 2.0) * (tensor_product(b, sp_sum) + tensor_product(bd, sm_sum));
  sys.phi_A.assign(dA, cplx{0.0, 0.0});
  sys.phi_A[1] = 1.0;
  sys.validate();
  return sys;
}

/// Total excitation number N = b'b + (S1z + S2z) + 1 of the two-spin/photon
/// model; commutes with its Hamiltonian.
inline ComplexMatrix jaynes_cummings_excitation_number(std::size_t n_max) {
  const std::size_t dA = n_max + 1;
  const ComplexMatrix b = detail::annihilation_op(dA);
  const ComplexMatrix sz = detail::spin_z();
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  const ComplexMatrix sz_sum = tensor_product(sz, i2) + tensor_product(i2, sz);
  return tensor_product(b.adjoint() * b, ComplexMatrix::identity(4)) +
         tensor_product(ComplexMatrix::identity(dA), sz_sum) +
         ComplexMatrix::identity(dA * 4);
}

/// Single spin A exchange-coupled to two spins B:
///   H = (J/2) [X (X1 + X2) + Y (Y1 + Y2)].
/// |phi_A> defaults to the sigma_z eigenvector |1>.
inline BipartiteSystem build_axial_symmetry(double J) {
  const ComplexMatrix x = detail::pauli_x();
  const ComplexMatrix y = detail::pauli_y();
  const ComplexMatrix i2 = ComplexMatrix::identity(2);

  const ComplexMatrix x_sum = tensor_product(x, i2) + tensor_product(i2, x);
  const ComplexMatrix y_sum = tensor_product(y, i2) + tensor_product(i2, y);

  BipartiteSystem sys;
  sys.dim_A = 2;
  sys.dim_B = 4;
  sys.H = (J / 2.0) * (tensor_product(x, x_sum) + tensor_product(y, y_sum));
  sys.phi_A = {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
  sys.validate();
  return sys;
}

}  // namespace mpea

#endif  // MPEA_BIPARTITE_SYSTEM_HPP
