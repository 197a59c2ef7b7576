// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_GENERAL_EIG_HPP
#define MPEA_GENERAL_EIG_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "mpea/complex_matrix.hpp"
#include "mpea/errors.hpp"

namespace mpea {

/// Spectral data of a general (non-normal) matrix: M = sum_k lambda_k |u_k><v_k|
/// with <v_j|u_k> = delta_jk. Eigenvalues sorted by descending modulus; ties by
/// descending real part, then descending imaginary part. Right vectors have unit
/// 2-norm with their largest component made real positive.
struct BiorthogonalEigenSystem {
  std::vector<cplx> eigenvalues;
  ComplexMatrix right_vectors;  // columns u_k
  ComplexMatrix left_vectors;   // columns v_k
  double condition = 0.0;       // cond_1 of the right-eigenvector matrix
  bool degenerate_dominant = false;  // |lambda_1| - |lambda_2| < 1e-9

  cvector right(std::size_t k) const {
    cvector v(right_vectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = right_vectors(i, k);
    return v;
  }
  cvector left(std::size_t k) const {
    cvector v(left_vectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = left_vectors(i, k);
    return v;
  }
};

namespace detail {

// Householder reduction to upper Hessenberg form, accumulating Q (A = Q H Q^dagger).
inline void hessenberg(ComplexMatrix& a, ComplexMatrix& q) {
  const std::size_t n = a.dim();
  q = ComplexMatrix::identity(n);
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm <= 1e-300) continue;
    cvector v(n, cplx{0.0, 0.0});
    const cplx x0 = a(k + 1, k);
    const cplx alpha = (std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx{1.0, 0.0}) * xnorm;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] += alpha;
    double vn2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vn2 += std::norm(v[i]);
    if (vn2 <= 1e-300) continue;
    const double beta = 2.0 / vn2;
    // A <- P A, P = I - beta v v^dagger
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{0.0, 0.0};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
    }
    // A <- A P
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{0.0, 0.0};
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
    }
    // Q <- Q P
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{0.0, 0.0};
      for (std::size_t j = k + 1; j < n; ++j) s += q(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= s * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = cplx{0.0, 0.0};
  }
}

struct Givens {
  double c;
  cplx s;
};

// Rotation with [c, s; -conj(s), c] [a; b] = [r; 0].
inline Givens make_givens(const cplx& a, const cplx& b) {
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) return {1.0, cplx{0.0, 0.0}};
  const double r = std::hypot(na, nb);
  const cplx ua = (na > 0 ? a / na : cplx{1.0, 0.0});
  return {na / r, ua * std::conj(b) / r};
}

// Schur triangularization of a Hessenberg matrix by explicitly shifted QR with
// Givens rotations; z accumulates the Schur vectors. Returns false if the
// iteration fails to converge.
inline bool schur_from_hessenberg(ComplexMatrix& h, ComplexMatrix& z) {
  const std::size_t n = h.dim();
  const double eps = 1e-15;
  std::size_t hi = n;  // active block is [0, hi)
  std::size_t total_iters = 0;
  const std::size_t max_total = 60 * std::max<std::size_t>(n, 1);
  std::size_t iters_since_deflate = 0;
  while (hi > 1) {
    if (++total_iters > max_total) return false;
    // deflate tiny subdiagonals
    for (std::size_t i = hi - 1; i > 0; --i) {
      const double tol = eps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
      if (std::abs(h(i, i - 1)) <= std::max(tol, 1e-300)) h(i, i - 1) = cplx{0.0, 0.0};
    }
    if (h(hi - 1, hi - 2) == cplx{0.0, 0.0}) {
      --hi;
      iters_since_deflate = 0;
      continue;
    }
    std::size_t lo = hi - 1;
    while (lo > 0 && h(lo, lo - 1) != cplx{0.0, 0.0}) --lo;

    // Wilkinson shift from the trailing 2x2 of the active block
    const cplx a = h(hi - 2, hi - 2), b = h(hi - 2, hi - 1);
    const cplx c = h(hi - 1, hi - 2), d = h(hi - 1, hi - 1);
    const cplx tr = a + d;
    const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
    const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    cplx mu = (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
    if (++iters_since_deflate % 12 == 0) {
      // exceptional shift to break symmetric stalls
      mu = d + cplx{1.5 * std::abs(h(hi - 1, hi - 2)), 0.0};
    }

    for (std::size_t i = lo; i < hi; ++i) h(i, i) -= mu;
    std::vector<Givens> rots(hi - lo - 1);
    for (std::size_t k = lo; k + 1 < hi; ++k) {
      const Givens g = make_givens(h(k, k), h(k + 1, k));
      rots[k - lo] = g;
      for (std::size_t j = k; j < n; ++j) {
        const cplx t1 = h(k, j), t2 = h(k + 1, j);
        h(k, j) = g.c * t1 + g.s * t2;
        h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
      h(k + 1, k) = cplx{0.0, 0.0};
    }
    for (std::size_t k = lo; k + 1 < hi; ++k) {
      const Givens g = rots[k - lo];
      const std::size_t imax = std::min(k + 2, hi - 1);
      for (std::size_t i = 0; i <= imax; ++i) {
        const cplx t1 = h(i, k), t2 = h(i, k + 1);
        h(i, k) = t1 * g.c + t2 * std::conj(g.s);
        h(i, k + 1) = -t1 * g.s + t2 * g.c;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const cplx t1 = z(i, k), t2 = z(i, k + 1);
        z(i, k) = t1 * g.c + t2 * std::conj(g.s);
        z(i, k + 1) = -t1 * g.s + t2 * g.c;
      }
    }
    for (std::size_t i = lo; i < hi; ++i) h(i, i) += mu;
  }
  return true;
}

// Right eigenvectors of an upper triangular matrix by back substitution.
inline ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
  const std::size_t n = t.dim();
  ComplexMatrix y(n);
  const double scale = std::max(t.max_norm(), 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    y(k, k) = 1.0;
    for (std::size_t j = k; j-- > 0;) {
      cplx num{0.0, 0.0};
      for (std::size_t i = j + 1; i <= k; ++i) num += t(j, i) * y(i, k);
      cplx den = t(j, j) - t(k, k);
      if (std::abs(den) < 1e-15 * scale) den = cplx{1e-15 * scale, 0.0};
      y(j, k) = -num / den;
    }
  }
  return y;
}

// Characteristic polynomial coefficients from power-sum traces (Newton's
// identities): p(x) = x^n + c[n-1] x^{n-1} + ... + c[0].
inline std::vector<cplx> char_poly(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<cplx> c(n);
  // Newton's identities: e_0 = 1; k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i
  std::vector<cplx> p(n + 1), e(n + 1);
  ComplexMatrix pw = ComplexMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    pw = m * pw;
    p[k] = pw.trace();
  }
  e[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    cplx s{0.0, 0.0};
    double sign = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
      s += sign * e[k - i] * p[i];
      sign = -sign;
    }
    e[k] = s / static_cast<double>(k);
  }
  // char poly = sum (-1)^k e_k x^{n-k}
  for (std::size_t k = 1; k <= n; ++k) c[n - k] = ((k % 2) ? -e[k] : e[k]);
  return c;
}

inline std::array<cplx, 2> roots_quadratic(const cplx& b, const cplx& c) {
  const cplx disc = std::sqrt(b * b - 4.0 * c);
  // avoid cancellation: pick the larger-magnitude branch first
  const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  if (std::abs(q) < 1e-300) return {cplx{0.0, 0.0}, -b};
  return {q, c / q};
}

inline std::array<cplx, 3> roots_cubic(const cplx& a2, const cplx& a1, const cplx& a0) {
  // depressed: x = y - a2/3, y^3 + p y + q = 0 (Cardano)
  const cplx shift = a2 / 3.0;
  const cplx p = a1 - a2 * a2 / 3.0;
  const cplx q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cplx u3 = -q / 2.0 + disc;
  if (std::abs(u3) < std::abs(-q / 2.0 - disc)) u3 = -q / 2.0 - disc;
  const cplx u = std::pow(u3, 1.0 / 3.0);
  const cplx omega{-0.5, std::sqrt(3.0) / 2.0};
  std::array<cplx, 3> r;
  for (int k = 0; k < 3; ++k) {
    cplx uk = u;
    if (k == 1) uk *= omega;
    if (k == 2) uk *= std::conj(omega);
    const cplx y = (std::abs(uk) > 1e-150) ? uk - p / (3.0 * uk) : cplx{0.0, 0.0};
    r[k] = y - shift;
  }
  return r;
}

inline std::array<cplx, 4> roots_quartic(const cplx& a3, const cplx& a2, const cplx& a1,
                                         const cplx& a0) {
  // Ferrari via the resolvent cubic of the depressed quartic y^4 + p y^2 + q y + r
  const cplx shift = a3 / 4.0;
  const cplx p = a2 - 3.0 * a3 * a3 / 8.0;
  const cplx q = a1 - a3 * a2 / 2.0 + a3 * a3 * a3 / 8.0;
  const cplx r = a0 - a3 * a1 / 4.0 + a3 * a3 * a2 / 16.0 - 3.0 * a3 * a3 * a3 * a3 / 256.0;
  std::array<cplx, 4> out;
  if (std::abs(q) < 1e-14 * (1.0 + std::abs(p) + std::abs(r))) {
    // biquadratic
    const auto z = roots_quadratic(p, r);
    const cplx s0 = std::sqrt(z[0]), s1 = std::sqrt(z[1]);
    out = {s0 - shift, -s0 - shift, s1 - shift, -s1 - shift};
    return out;
  }
  // resolvent: m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0  (m = t/2 form)
  const auto cu = roots_cubic(p, p * p / 4.0 - r, -q * q / 8.0);
  // pick the root with largest |m| for stability
  cplx m = cu[0];
  for (const auto& z : cu)
    if (std::abs(z) > std::abs(m)) m = z;
  const cplx s = std::sqrt(2.0 * m);
  const cplx t1 = -(p / 2.0 + m) - q / (2.0 * s);
  const cplx t2 = -(p / 2.0 + m) + q / (2.0 * s);
  const auto r1 = roots_quadratic(-s, -t1);
  const auto r2 = roots_quadratic(s, -t2);
  out = {r1[0] - shift, r1[1] - shift, r2[0] - shift, r2[1] - shift};
  return out;
}

/// Closed-form eigenvalues for dim <= 4 from the characteristic polynomial.
inline std::vector<cplx> eigenvalues_closed_form(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  const auto c = char_poly(m);
  switch (n) {
    case 1:
      return {-c[0]};
    case 2: {
      const auto r = roots_quadratic(c[1], c[0]);
      return {r[0], r[1]};
    }
    case 3: {
      const auto r = roots_cubic(c[2], c[1], c[0]);
      return {r[0], r[1], r[2]};
    }
    case 4: {
      const auto r = roots_quartic(c[3], c[2], c[1], c[0]);
      return {r[0], r[1], r[2], r[3]};
    }
    default:
      throw Defective("closed-form eigenvalues only available for dim <= 4");
  }
}

// One step of Newton polishing on the characteristic polynomial.
inline cplx polish_root(const std::vector<cplx>& c, cplx x, int steps = 3) {
  const std::size_t n = c.size();
  for (int s = 0; s < steps; ++s) {
    cplx f{1.0, 0.0}, df{0.0, 0.0};
    for (std::size_t k = n; k-- > 0;) {
      df = df * x + f;
      f = f * x + c[k];
    }
    if (std::abs(df) < 1e-300) break;
    x -= f / df;
  }
  return x;
}

// Eigenvector by inverse iteration around a known eigenvalue.
inline cvector inverse_iteration(const ComplexMatrix& m, const cplx& lambda) {
  const std::size_t n = m.dim();
  const double scale = std::max(m.max_norm(), 1.0);
  ComplexMatrix shifted = m;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda + cplx{1e-12 * scale, 1e-13 * scale};
  ComplexMatrix lu = shifted;
  std::vector<std::size_t> piv;
  if (lu_factor(lu, piv) == 0) {
    // exact singularity: fall back to a slightly larger perturbation
    lu = m;
    for (std::size_t i = 0; i < n; ++i) lu(i, i) -= lambda + cplx{1e-9 * scale, 0.0};
    if (lu_factor(lu, piv) == 0) throw Defective("inverse iteration: singular shift");
  }
  cvector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx{1.0, 0.3 * double(i + 1)};
  for (int it = 0; it < 4; ++it) {
    lu_solve(lu, piv, v);
    const double nn = norm2(v);
    if (nn == 0.0) throw Defective("inverse iteration failed");
    for (auto& z : v) z /= nn;
  }
  return v;
}

}  // namespace detail

/// General (non-normal) complex eigensolver: Hessenberg reduction + shifted QR,
/// with a closed-form characteristic-polynomial fallback at dim <= 4 when the
/// iteration stalls. Throws Defective when the right-eigenvector matrix is too
/// ill-conditioned to define a biorthogonal pair.
inline BiorthogonalEigenSystem general_eig(const ComplexMatrix& m,
                                           double cond_threshold = 1e8) {
  const std::size_t n = m.dim();
  if (n == 0) throw DimensionMismatch("general_eig: empty matrix");

  std::vector<cplx> lambdas(n);
  ComplexMatrix u(n);
  ComplexMatrix h = m, z;
  detail::hessenberg(h, z);
  if (detail::schur_from_hessenberg(h, z)) {
    const ComplexMatrix y = detail::triangular_eigenvectors(h);
    u = z * y;
    for (std::size_t k = 0; k < n; ++k) lambdas[k] = h(k, k);
  } else if (n <= 4) {
    auto roots = detail::eigenvalues_closed_form(m);
    const auto coeffs = detail::char_poly(m);
    for (std::size_t k = 0; k < n; ++k) {
      lambdas[k] = detail::polish_root(coeffs, roots[k]);
      const cvector v = detail::inverse_iteration(m, lambdas[k]);
      for (std::size_t i = 0; i < n; ++i) u(i, k) = v[i];
    }
  } else {
    throw Defective("general_eig: QR iteration did not converge");
  }

  // sort by descending |lambda|; ties by descending Re, then descending Im
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double mi = std::abs(lambdas[i]), mj = std::abs(lambdas[j]);
    if (std::abs(mi - mj) > 1e-14 * std::max({mi, mj, 1e-30})) return mi > mj;
    if (lambdas[i].real() != lambdas[j].real()) return lambdas[i].real() > lambdas[j].real();
    return lambdas[i].imag() > lambdas[j].imag();
  });

  BiorthogonalEigenSystem sys;
  sys.eigenvalues.resize(n);
  sys.right_vectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    sys.eigenvalues[k] = lambdas[order[k]];
    cvector col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = u(i, order[k]);
    // unit norm, largest component real positive
    const double nn = norm2(col);
    if (nn == 0.0) throw Defective("general_eig: zero eigenvector");
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(col[i]) > std::abs(col[imax])) imax = i;
    const cplx ph = (std::abs(col[imax]) > 0 ? col[imax] / std::abs(col[imax]) : cplx{1.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) col[i] /= nn * ph;
    for (std::size_t i = 0; i < n; ++i) sys.right_vectors(i, k) = col[i];
  }

  ComplexMatrix uinv;
  try {
    uinv = inverse(sys.right_vectors);
  } catch (const Defective&) {
    throw Defective("general_eig: eigenvector matrix is singular (defective matrix?)");
  }
  sys.condition = sys.right_vectors.one_norm() * uinv.one_norm();
  if (sys.condition > cond_threshold)
    throw Defective("general_eig: eigenvector matrix condition " +
                    std::to_string(sys.condition) + " exceeds threshold");

  // left vectors: v_k^dagger = row k of U^{-1}
  sys.left_vectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) sys.left_vectors(i, k) = std::conj(uinv(k, i));

  if (n >= 2)
    sys.degenerate_dominant =
        std::abs(sys.eigenvalues[0]) - std::abs(sys.eigenvalues[1]) < 1e-9;
  return sys;
}

}  // namespace mpea

#endif  // MPEA_GENERAL_EIG_HPP
