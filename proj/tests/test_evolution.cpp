// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mpea/evolution.hpp"
#include "support/oracles.hpp"

using mpea::ComplexMatrix;
using mpea::cplx;
using mpea::cvector;

namespace {

// diagonal of V in the singlet/triplet basis, order (s, t_+, t_0, t_-)
ComplexMatrix jc_v_singlet_triplet(double tau) {
  const auto sys = mpea::build_jaynes_cummings(1.0, 1.0, 1.0, 4);
  const auto ev = mpea::construct_vb(sys, tau);
  return mpea::change_basis(ev, mpea::SpinPhotonBasis().matrix()).V;
}

}  // namespace

TEST_CASE("two-spin/photon V is diagonal in the singlet/triplet basis") {
  const ComplexMatrix v = jc_v_singlet_triplet(0.5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(v(i, j)) < 1e-12);

  // closed forms at w0 = w1 = J = 1, tau = 1/2
  const cplx e_half{std::cos(0.5), -std::sin(0.5)};
  const cplx t_plus = ((3.0 + 2.0 * std::cos(std::sqrt(10.0) / 2.0)) / 5.0) *
                      cplx{std::cos(1.0), -std::sin(1.0)};
  const cplx t_zero = std::cos(std::sqrt(6.0) / 2.0) * e_half;
  const cplx t_minus{std::cos(std::sqrt(2.0) / 2.0), 0.0};
  CHECK(std::abs(v(0, 0) - e_half) < 1e-10);  // singlet picks up the free photon phase
  CHECK(std::abs(v(1, 1) - t_plus) < 1e-10);
  CHECK(std::abs(v(2, 2) - t_zero) < 1e-10);
  CHECK(std::abs(v(3, 3) - t_minus) < 1e-10);

  SUBCASE("t_+ eigenvalue in exp(-b + ia) form") {
    const auto spec = mpea::classical_spectrum(
        mpea::construct_vb(mpea::build_jaynes_cummings(1.0, 1.0, 1.0, 4), 0.5));
    // the second-largest modulus is cos(sqrt(2)/2); t_+ comes third
    const cplx lam = spec.eigenvalues[2];
    CHECK(std::abs(-std::log(std::abs(lam)) - 0.5177) < 1e-4);
    CHECK(std::abs(std::arg(lam) - (-1.0)) < 1e-10);
  }
  SUBCASE("photon cutoff is converged") {
    const auto sys8 = mpea::build_jaynes_cummings(1.0, 1.0, 1.0, 8);
    const ComplexMatrix v8 =
        mpea::change_basis(mpea::construct_vb(sys8, 0.5), mpea::SpinPhotonBasis().matrix()).V;
    CHECK(max_abs_diff(v, v8) < 1e-12);
  }
}

TEST_CASE("axial V is diagonal with a doubly degenerate unit eigenvalue") {
  const auto sys = mpea::build_axial_symmetry(2.0);
  const auto ev = mpea::construct_vb(sys, 1.0);
  const ComplexMatrix v = mpea::change_basis(ev, mpea::SpinPhotonBasis().matrix()).V;
  const double c = std::cos(2.0 * std::sqrt(2.0));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(v(i, j)) < 1e-12);
  CHECK(std::abs(v(0, 0) - cplx{1.0, 0.0}) < 1e-12);  // singlet
  CHECK(std::abs(v(1, 1) - cplx{1.0, 0.0}) < 1e-12);  // t_+
  CHECK(std::abs(v(2, 2) - cplx{c, 0.0}) < 1e-12);    // t_0
  CHECK(std::abs(v(3, 3) - cplx{c, 0.0}) < 1e-12);    // t_-
  CHECK(std::abs(v(2, 2).real() - (-0.951363)) < 5e-7);

  const auto spec = mpea::classical_spectrum(ev);
  CHECK(spec.degenerate_dominant);
}

TEST_CASE("direct and spectral construction agree") {
  SUBCASE("two-spin/photon") {
    const auto sys = mpea::build_jaynes_cummings(1.3, 0.7, 0.9, 5);
    const auto d = mpea::construct_vb(sys, 0.8);
    const auto s = mpea::construct_vb_spectral(sys, 0.8);
    CHECK(max_abs_diff(d.V, s.V) < 1e-10);
  }
  SUBCASE("random systems") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
      const auto sys = mpea::build_generic(
          oracles::random_hermitian(rng, 3), oracles::random_hermitian(rng, 3),
          oracles::random_hermitian(rng, 9), oracles::random_state(rng, 3));
      const auto d = mpea::construct_vb(sys, 0.6);
      const auto s = mpea::construct_vb_spectral(sys, 0.6);
      CHECK(max_abs_diff(d.V, s.V) < 1e-10);
    }
  }
}

TEST_CASE("tau = 0 gives the identity evolution") {
  const auto sys = mpea::build_axial_symmetry(1.0);
  const auto ev = mpea::construct_vb(sys, 0.0);
  CHECK(max_abs_diff(ev.V, ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("compose") {
  const auto sys = mpea::build_jaynes_cummings(1.0, 1.0, 1.0, 4);
  const auto v1 = mpea::construct_vb(sys, 0.3);
  const auto v2 = mpea::construct_vb(sys, 0.9);

  SUBCASE("first element acts first") {
    const auto both = mpea::compose({v1, v2});
    CHECK(max_abs_diff(both.V, v2.V * v1.V) < 1e-14);
    CHECK(both.tau == doctest::Approx(1.2));
  }
  SUBCASE("two projections differ from one long interval") {
    // the intermediate projection makes the product non-unitary and
    // distinguishable from V(tau_1 + tau_2)
    const auto both = mpea::compose({v1, v2});
    const auto single = mpea::construct_vb(sys, 1.2);
    CHECK(max_abs_diff(both.V, single.V) > 1e-6);
  }
  SUBCASE("empty list rejected") {
    CHECK_THROWS_AS((void)mpea::compose({}), mpea::DimensionMismatch);
  }
}

TEST_CASE("decoupled interaction gives a unitary V") {
  // H_AB = 0 and |phi_A> an eigenvector of h_A: the projection never fails
  std::mt19937 rng(19);
  const ComplexMatrix h_b = oracles::random_hermitian(rng, 4);
  ComplexMatrix h_a(2);
  h_a(0, 0) = 0.4;
  h_a(1, 1) = -1.1;
  const auto sys =
      mpea::build_generic(h_a, h_b, ComplexMatrix(8), {cplx{1.0, 0.0}, cplx{0.0, 0.0}});
  const auto ev = mpea::construct_vb(sys, 0.7);
  CHECK(ev.V.is_unitary(1e-10));
  CHECK(std::abs(std::abs(mpea::determinant(ev.V)) - 1.0) < 1e-10);
}

TEST_CASE("V is a contraction") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t da = 2 + trial % 3, db = 2 + (trial / 3) % 3;
    const auto sys = mpea::build_generic(
        oracles::random_hermitian(rng, da), oracles::random_hermitian(rng, db),
        oracles::random_hermitian(rng, da * db), oracles::random_state(rng, da));
    const auto ev = mpea::construct_vb(sys, 0.5 + 0.1 * trial);
    CHECK(mpea::largest_singular_value(ev.V) <= 1.0 + 1e-9);
  }
}

TEST_CASE("change_basis round trip") {
  const auto sys = mpea::build_jaynes_cummings(1.0, 1.0, 1.0, 4);
  const auto ev = mpea::construct_vb(sys, 0.5);
  const ComplexMatrix b = mpea::SpinPhotonBasis().matrix();
  const auto there = mpea::change_basis(ev, b);
  const auto back = mpea::change_basis(there, b.adjoint());
  CHECK(max_abs_diff(back.V, ev.V) < 1e-13);
}
