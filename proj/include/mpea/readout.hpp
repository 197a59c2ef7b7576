// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_READOUT_HPP
#define MPEA_READOUT_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "mpea/bipartite_system.hpp"
#include "mpea/complex_matrix.hpp"
#include "mpea/engine.hpp"
#include "mpea/errors.hpp"
#include "mpea/evolution.hpp"

namespace mpea {

enum class Sampling { exact, sampled };

/// Collection of identically prepared index-qubit copies after an MPEA run.
/// `state` is the normalized 2x2 density matrix; the log fields carry the
/// coherence when its magnitude underflows the matrix entries.
struct IndexQubitEnsemble {
  ComplexMatrix state{2};
  std::size_t copies = 1;
  uint64_t seed = 0;
  double log_coherence_mag = -std::numeric_limits<double>::infinity();
  double coherence_phase = 0.0;

  static IndexQubitEnsemble from_run(const MpeaRun& run, std::size_t copies = 1,
                                     uint64_t seed = 0) {
    if (copies < 1) throw DimensionMismatch("IndexQubitEnsemble: copies must be >= 1");
    IndexQubitEnsemble e;
    e.state = run.index_qubit_state();
    e.copies = copies;
    e.seed = seed;
    e.log_coherence_mag = run.coherence_log_magnitude();
    e.coherence_phase = run.coherence_phase();
    return e;
  }
};

/// Recovered eigenvalue lambda = e^{-b} e^{ia}, with the phase reported also
/// as the binary fraction f = (-a / 2 pi) mod 1.
struct EigenEstimate {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double f = 0.0;
  std::size_t n_bits = 0;
  double uncertainty = 0.0;
  cplx lambda{1.0, 0.0};
};

inline EigenEstimate assemble_eigenvalue(double a_hat, double b_hat, std::size_t n_bits) {
  if (b_hat < 0.0) throw NonInvertible("assemble_eigenvalue: b_hat must be >= 0");
  EigenEstimate est;
  est.a_hat = a_hat;
  est.b_hat = b_hat;
  const double tau = 2.0 * std::numbers::pi;
  est.f = std::fmod(std::fmod(-a_hat / tau, 1.0) + 1.0, 1.0);
  est.n_bits = n_bits;
  est.uncertainty = n_bits >= 1 ? std::ldexp(1.0, 1 - int(n_bits)) : 0.0;
  est.lambda = std::exp(-b_hat) * cplx{std::cos(a_hat), std::sin(a_hat)};
  return est;
}

namespace detail {

inline double bernoulli_frequency(double p, std::size_t n, uint64_t seed, uint64_t stream) {
  StreamRng rng(seed, stream);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.uniform() < p) ++hits;
  return double(hits) / double(n);
}

}  // namespace detail

/// Decay rate from a projective |1><1| measurement of the index qubit:
/// P(1) = e^{-2mb} / (1 + e^{-2mb}) inverted for b. In sampled mode P(1) is
/// the frequency over the ensemble's copies (stream 0 of its seed).
inline double qst_estimate_b(const IndexQubitEnsemble& ensemble, std::size_t m,
                             Sampling sampling = Sampling::exact) {
  if (m < 1) throw DimensionMismatch("qst_estimate_b: m must be >= 1");
  double p1 = ensemble.state(1, 1).real();
  double tol = 1e-12;
  if (sampling == Sampling::sampled) {
    p1 = detail::bernoulli_frequency(p1, ensemble.copies, ensemble.seed, 0);
    tol = 3.0 * std::sqrt(std::max(p1 * (1.0 - p1), 0.25 / double(ensemble.copies)) /
                          double(ensemble.copies));
  }
  if (std::abs(p1 - 0.5) <= tol) return 0.0;  // unitary limit, b = 0
  if (p1 > 0.5)
    throw NonInvertible("qst_estimate_b: P(1) exceeds 1/2 beyond tolerance");
  return -std::log(p1 / (1.0 - p1)) / (2.0 * double(m));
}

/// Phase from two rotated index-qubit measurements. The sigma_x-rotated basis
/// gives <-Y> = -2 e^{-mb} sin(ma) / (1 + e^{-2mb}); the sigma_y-rotated
/// counterpart gives <X> with cos(ma) in place of -sin(ma). Their ratio feeds
/// atan2, resolving the quadrant of ma; the caller unwraps (m = 1 is safe for
/// |a| < pi). Each basis consumes fresh copies (streams 1 and 2).
inline double qst_estimate_a(const IndexQubitEnsemble& ensemble, double b_hat,
                             std::size_t m, Sampling sampling = Sampling::exact,
                             bool two_basis = true) {
  if (m < 1) throw DimensionMismatch("qst_estimate_a: m must be >= 1");
  if (b_hat < 0.0) throw NonInvertible("qst_estimate_a: b_hat must be >= 0");
  if (!two_basis)
    throw AmbiguousQuadrant(
        "qst_estimate_a: a single rotated basis determines only sin(ma)");
  const cplx c = ensemble.state(0, 1);
  double e_sin_basis = 2.0 * c.imag();   // <exp(-i pi/4 X) Z exp(i pi/4 X)> = <-Y>
  double e_cos_basis = 2.0 * c.real();   // <exp(-i pi/4 Y) Z exp(i pi/4 Y)> = <X>
  if (sampling == Sampling::sampled) {
    const double p1_sin = 0.5 * (1.0 - e_sin_basis);
    const double p1_cos = 0.5 * (1.0 - e_cos_basis);
    e_sin_basis =
        1.0 - 2.0 * detail::bernoulli_frequency(p1_sin, ensemble.copies, ensemble.seed, 1);
    e_cos_basis =
        1.0 - 2.0 * detail::bernoulli_frequency(p1_cos, ensemble.copies, ensemble.seed, 2);
  }
  const double ma = std::atan2(-e_sin_basis, e_cos_basis);
  return ma / double(m);
}

/// Rebalancing rotation for bit k: maps the normalized decayed state
/// (|0> + e^{(-b+ia) 2^k} |1>) / norm to (|0> + e^{i a 2^k} |1>) / sqrt(2).
/// Written in tanh form so it stays unitary for arbitrarily large b 2^k.
inline ComplexMatrix build_qk(double a, double b, std::size_t k) {
  const double u = b * std::ldexp(1.0, int(k));  // b 2^k
  const double t = std::tanh(0.5 * u);
  const double alpha = 1.0 / std::sqrt(1.0 + t * t);
  const double phi = a * std::ldexp(1.0, int(k));
  const cplx e_plus{std::cos(phi), std::sin(phi)};
  ComplexMatrix q(2);
  q(0, 0) = alpha;
  q(0, 1) = -std::conj(e_plus) * t * alpha;
  q(1, 0) = e_plus * t * alpha;
  q(1, 1) = alpha;
  return q;
}

enum class QkMode {
  validation,  // Q_k built from the true phase; verifies the balanced target state
  blind        // no Q_k; the decision statistic is rescaled by the known contrast
};

struct MqftTrace {
  std::vector<int> bits;               // most-significant first: bits[0] = b_1
  std::vector<double> block_fidelity;  // after each W(k) block, k = n-1 .. 0
  std::vector<double> block_stat;      // decision statistic per block
};

struct MqftOptions {
  std::size_t copies = 0;  // 0: exact expectation values; else copies per bit
  uint64_t seed = 0;
  QkMode qk_mode = QkMode::validation;
  std::optional<double> a_true;  // validation mode; defaults to the dominant phase
  MqftTrace* trace = nullptr;
};

/// Measured-QFT readout: for k = n-1 down to 0, run a W(k) block of 2^k
/// post-selected measurement intervals on a freshly prepared |+> index qubit,
/// rebalance, apply the accumulated-bit feedback rotation, and measure after a
/// Hadamard. Bits come out least-significant-first; the target register is
/// carried through the whole chain, so each block starts from the (already
/// purified) post-selected target state of the previous one.
inline EigenEstimate mqft_extract_bits(const BipartiteSystem& sys,
                                       const ComplexMatrix& rho_B, double tau,
                                       std::size_t n, double b_hat,
                                       const MqftOptions& opts = {}) {
  if (n < 1) throw DimensionMismatch("mqft_extract_bits: n must be >= 1");
  if (b_hat < 0.0) throw NonInvertible("mqft_extract_bits: b_hat must be >= 0");
  const double two_pi = 2.0 * std::numbers::pi;

  // the run converges onto the largest-|lambda| eigenvalue that has support
  // in rho_B; that eigenvalue is the one whose phase the bits encode
  const auto spectrum = classical_spectrum(construct_vb(sys, tau));
  std::size_t dominant = 0;
  for (std::size_t j = 0; j < spectrum.eigenvalues.size(); ++j) {
    const cvector v = spectrum.left(j);
    cplx support{0.0, 0.0};
    for (std::size_t r = 0; r < v.size(); ++r)
      for (std::size_t s = 0; s < v.size(); ++s)
        support += std::conj(v[r]) * rho_B(r, s) * v[s];
    if (support.real() > 1e-12) {
      dominant = j;  // eigenvalues are sorted by descending modulus
      break;
    }
  }
  const double a_true =
      opts.a_true ? *opts.a_true : std::arg(spectrum.eigenvalues[dominant]);
  const cvector u_max = spectrum.right(dominant);

  std::vector<int> bits(n, 0);  // bits[j-1] = b_j
  MqftTrace local_trace;
  MqftTrace& trace = opts.trace ? *opts.trace : local_trace;
  trace = MqftTrace{};
  trace.bits.assign(n, 0);

  ComplexMatrix rho_cur = rho_B;
  for (std::size_t kk = n; kk-- > 0;) {
    const std::size_t k = kk;
    MpeaRun run(sys, rho_cur, IndexMode::plus);
    run.set_reference(u_max);
    const std::size_t steps = std::size_t{1} << k;
    for (std::size_t s = 0; s < steps; ++s) run.step(tau);

    // feedback fraction 0.0 b_{k+2} ... b_n scaled to this block
    double fb = 0.0;
    for (std::size_t j = k + 2; j <= n; ++j)
      fb += double(bits[j - 1]) * std::ldexp(1.0, -int(j - k));

    double stat;
    if (opts.copies == 0) {
      // exact mode: only the coherence phase matters; both Q_k modes leave its
      // sign pattern untouched, so the bit decision is shared
      const double theta = run.coherence_phase();
      stat = std::cos(theta - two_pi * fb);
    } else {
      ComplexMatrix rho = run.index_qubit_state();
      if (opts.qk_mode == QkMode::validation) {
        const ComplexMatrix q = build_qk(a_true, b_hat, k);
        rho = q * rho * q.adjoint();
      }
      const double omega = two_pi * fb;  // cancels the already-known low bits
      const cplx r01 = rho(0, 1) * cplx{std::cos(omega), -std::sin(omega)};
      const double p1 = std::min(std::max(0.5 - r01.real(), 0.0), 1.0);
      const double freq =
          detail::bernoulli_frequency(p1, opts.copies, opts.seed, 16 + k);
      stat = 1.0 - 2.0 * freq;
      double contrast = 1.0;
      if (opts.qk_mode == QkMode::blind) {
        const double x = std::exp(-b_hat * std::ldexp(1.0, int(k)));
        contrast = 2.0 * x / (1.0 + x * x);
      }
      const double sigma = std::sqrt(0.25 / double(opts.copies));
      if (std::abs(stat) < 3.0 * sigma)
        throw InsufficientContrast("mqft_extract_bits: bit " + std::to_string(k + 1) +
                                       " decision inside the 3-sigma sampling margin",
                                   k + 1);
      stat /= contrast;
    }

    bits[k] = stat < 0.0 ? 1 : 0;
    trace.bits[k] = bits[k];
    trace.block_stat.push_back(stat);
    trace.block_fidelity.push_back(run.fidelity().back());
    // carry the post-selected branch: the unevolved index-|0> branch would
    // otherwise re-mix the target and undo the purification between blocks
    rho_cur = run.target_reduced();
  }

  double f = 0.0;
  for (std::size_t j = 1; j <= n; ++j) f += double(bits[j - 1]) * std::ldexp(1.0, -int(j));
  EigenEstimate est = assemble_eigenvalue(-two_pi * f, b_hat, n);
  est.f = f;  // keep the exact dyadic fraction (assemble re-derives it mod 1)
  return est;
}

}  // namespace mpea

#endif  // MPEA_READOUT_HPP
