// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_COMPLEX_MATRIX_HPP
#define MPEA_COMPLEX_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "mpea/errors.hpp"

namespace mpea {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

/// Dense square complex matrix, row-major. The workhorse for Hamiltonians,
/// unitaries, post-selected evolutions and density matrices (dims <= ~64).
class ComplexMatrix {
public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx{0.0, 0.0}) {}

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  const cvector& entries() const { return a_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  ComplexMatrix operator+(const ComplexMatrix& o) const {
    check_same_dim(o);
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }

  ComplexMatrix operator-(const ComplexMatrix& o) const {
    check_same_dim(o);
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
  }

  ComplexMatrix operator*(const ComplexMatrix& o) const {
    check_same_dim(o);
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t k = 0; k < dim_; ++k) {
        const cplx aik = (*this)(i, k);
        if (aik == cplx{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  ComplexMatrix operator*(const cplx& s) const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
  }

  cvector apply(const cvector& v) const {
    if (v.size() != dim_) throw DimensionMismatch("matrix-vector dimension mismatch");
    cvector r(dim_, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_norm() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  /// Maximum column sum of absolute values.
  double one_norm() const {
    double m = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

  bool is_hermitian(double tol = 1e-9) const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

  bool is_unitary(double tol = 1e-9) const {
    const ComplexMatrix p = adjoint() * (*this);
    return (p - identity(dim_)).max_norm() <= tol;
  }

private:
  void check_same_dim(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch("matrix dimension mismatch");
  }

  std::size_t dim_;
  cvector a_;
};

inline ComplexMatrix operator*(const cplx& s, const ComplexMatrix& m) { return m * s; }

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).max_norm();
}

/// Kronecker product, left factor slow: entry ((i*dB+k),(j*dB+l)) = A(i,j)*B(k,l).
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix r(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) r(i * db + k, j * db + l) = aij * b(k, l);
    }
  return r;
}

inline cvector tensor_product(const cvector& a, const cvector& b) {
  cvector r(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) r[i * b.size() + k] = a[i] * b[k];
  return r;
}

/// <a|b>, conjugate-linear in the first argument.
inline cplx inner(const cvector& a, const cvector& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm2(const cvector& v) { return std::sqrt(std::abs(inner(v, v))); }

inline ComplexMatrix outer(const cvector& a, const cvector& b) {
  ComplexMatrix r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r(i, j) = a[i] * std::conj(b[j]);
  return r;
}

namespace detail {

/// LU factorization with partial pivoting, in place. Returns permutation sign,
/// 0 if singular to working precision.
inline int lu_factor(ComplexMatrix& a, std::vector<std::size_t>& piv) {
  const std::size_t n = a.dim();
  piv.resize(n);
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) { best = std::abs(a(i, k)); p = i; }
    piv[k] = p;
    if (best == 0.0) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const cplx lik = a(i, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  return sign;
}

inline void lu_solve(const ComplexMatrix& lu, const std::vector<std::size_t>& piv, cvector& b) {
  const std::size_t n = lu.dim();
  // all interchanges first: the stored multipliers live in final row order
  for (std::size_t k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu(i, k) * b[k];
  for (std::size_t k = n; k-- > 0;) {
    b[k] /= lu(k, k);
    for (std::size_t i = 0; i < k; ++i) b[i] -= lu(i, k) * b[k];
  }
}

}  // namespace detail

/// Inverse via LU with partial pivoting. Throws Defective when singular.
inline ComplexMatrix inverse(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix lu = m;
  std::vector<std::size_t> piv;
  if (detail::lu_factor(lu, piv) == 0) throw Defective("matrix is singular");
  ComplexMatrix inv(n);
  for (std::size_t j = 0; j < n; ++j) {
    cvector e(n, cplx{0.0, 0.0});
    e[j] = 1.0;
    detail::lu_solve(lu, piv, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = e[i];
  }
  return inv;
}

inline cplx determinant(const ComplexMatrix& m) {
  ComplexMatrix lu = m;
  std::vector<std::size_t> piv;
  const int sign = detail::lu_factor(lu, piv);
  if (sign == 0) return cplx{0.0, 0.0};
  cplx d{static_cast<double>(sign), 0.0};
  for (std::size_t i = 0; i < m.dim(); ++i) d *= lu(i, i);
  return d;
}

/// Largest singular value, by power iteration on M^dagger M.
inline double largest_singular_value(const ComplexMatrix& m, std::size_t iters = 200) {
  const ComplexMatrix g = m.adjoint() * m;
  cvector v(m.dim(), cplx{1.0, 0.0});
  // deterministic, mildly incommensurate start to avoid orthogonal initial vectors
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx{1.0 + 0.37 * double(i), 0.11 * double(i)};
  double lam = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    const double n = norm2(v);
    if (n == 0.0) return 0.0;
    for (auto& z : v) z /= n;
    v = g.apply(v);
    const double next = std::abs(inner(v, v)) > 0 ? norm2(v) : 0.0;
    if (it > 10 && std::abs(next - lam) <= 1e-15 * std::max(1.0, lam)) { lam = next; break; }
    lam = next;
  }
  return std::sqrt(lam);
}

}  // namespace mpea

#endif  // MPEA_COMPLEX_MATRIX_HPP
