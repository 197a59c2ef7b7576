// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_ENGINE_HPP
#define MPEA_ENGINE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <thread>
#include <vector>

#include "mpea/bipartite_system.hpp"
#include "mpea/complex_matrix.hpp"
#include "mpea/errors.hpp"
#include "mpea/evolution.hpp"
#include "mpea/hermitian_eig.hpp"

namespace mpea {

enum class IndexMode { zero, plus };

namespace detail {

inline double logsumexp2(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic per-stream uniform generator; identical output for a given
/// (seed, stream) pair regardless of how work is distributed over threads.
class StreamRng {
public:
  StreamRng(uint64_t seed, uint64_t stream) : state_(seed ^ (0x632be59bd9b4e019ULL * (stream + 1))) {
    // warm up so correlated (seed, stream) pairs decohere
    for (int i = 0; i < 4; ++i) splitmix64(state_);
  }
  double uniform() {
    return double(splitmix64(state_) >> 11) * 0x1.0p-53;
  }

private:
  uint64_t state_;
};

}  // namespace detail

inline void validate_density_matrix(const ComplexMatrix& rho) {
  if (!rho.is_hermitian(1e-9)) throw InvalidDensityMatrix("density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
    throw InvalidDensityMatrix("density matrix trace differs from 1");
  const HermitianEigenSystem es = hermitian_eig(rho);
  for (double e : es.eigenvalues)
    if (e < -1e-9) throw InvalidDensityMatrix("density matrix has a negative eigenvalue");
}

/// Joint post-selected state of the MPEA circuit (index qubit, target register
/// B, interacting register A) together with running survival and fidelity
/// records.
///
/// The three index-qubit blocks of the joint density matrix are stored with
/// separate log-magnitude scale factors, so coherences that decay like
/// |lambda|^m stay representable far below double underflow (needed for the
/// 2^k-step measured-QFT blocks). Externally visible quantities (normalized
/// joint state, P(m), F(m)) follow the usual conventions.
class MpeaRun {
public:
  MpeaRun(const BipartiteSystem& sys, const ComplexMatrix& rho_B, IndexMode mode)
      : sys_(sys), mode_(mode) {
    sys_.validate();
    if (rho_B.dim() != sys_.dim_B)
      throw InvalidDensityMatrix("rho_B dimension differs from dim_B");
    validate_density_matrix(rho_B);

    const std::size_t d = sys_.dim_A * sys_.dim_B;
    // rho_AB = |phi_A><phi_A| (x) rho_B, A-index slow
    ComplexMatrix rho_ab(d);
    for (std::size_t k = 0; k < sys_.dim_A; ++k)
      for (std::size_t l = 0; l < sys_.dim_A; ++l) {
        const cplx w = sys_.phi_A[k] * std::conj(sys_.phi_A[l]);
        if (w == cplx{0.0, 0.0}) continue;
        for (std::size_t r = 0; r < sys_.dim_B; ++r)
          for (std::size_t s = 0; s < sys_.dim_B; ++s)
            rho_ab(k * sys_.dim_B + r, l * sys_.dim_B + s) = w * rho_B(r, s);
      }

    if (mode_ == IndexMode::plus) {
      b00_ = b01_ = b11_ = rho_ab * cplx{0.5, 0.0};
    } else {
      b00_ = rho_ab;
      b01_ = b11_ = ComplexMatrix(d);
    }
    g00_ = g01_ = g11_ = 0.0;
    log_cond_base_ = block_log_trace(b11_, g11_);
    survival_ = {1.0};
    log_cond_survival_ = {0.0};
    log_uncond_survival_ = {0.0};
  }

  std::size_t measurements() const { return m_; }
  IndexMode index_mode() const { return mode_; }
  const BipartiteSystem& system() const { return sys_; }

  void set_reference(const cvector& u_max) {
    reference_ = u_max;
    fidelity_ = {fidelity_now()};
  }

  /// One controlled-evolution interval followed by a successful projection of
  /// A onto |phi_A>. Returns the physical probability of that projection.
  double step(double tau) {
    ensure_propagator(tau);
    const double z_before = log_physical_trace();

    // C-U: |0> branch idle, |1> branch evolves under U = exp(-i H tau)
    if (mode_ == IndexMode::plus) {
      b01_ = b01_ * udag_;
      b11_ = u_ * b11_ * udag_;
    }
    project_interacting(b00_);
    project_interacting(b01_);
    project_interacting(b11_);
    renorm_block(b00_, g00_);
    renorm_block(b01_, g01_);
    renorm_block(b11_, g11_);

    const double z_after = log_physical_trace();
    const double p_step = std::exp(z_after - z_before);
    if (!(p_step >= 1e-300))
      throw ZeroProbability("projection probability below 1e-300 at m=" +
                            std::to_string(m_ + 1));

    ++m_;
    log_uncond_survival_.push_back(log_uncond_survival_.back() + std::log(p_step));
    const double lc = (mode_ == IndexMode::plus)
                          ? block_log_trace(b11_, g11_) - log_cond_base_
                          : log_uncond_survival_.back();
    log_cond_survival_.push_back(lc);
    survival_.push_back(std::exp(lc));
    if (!reference_.empty()) fidelity_.push_back(fidelity_now());
    return p_step;
  }

  /// Cumulative survival P(m), conditional on the evolving branch in plus
  /// mode; entry m of the list.
  const std::vector<double>& survival() const { return survival_; }
  const std::vector<double>& log_survival() const { return log_cond_survival_; }
  const std::vector<double>& log_unconditional_survival() const {
    return log_uncond_survival_;
  }
  const std::vector<double>& fidelity() const { return fidelity_; }

  /// Normalized reduced state of the target register, conditioned on the
  /// index qubit being |1> (the post-selected branch) when in plus mode.
  ComplexMatrix target_reduced() const {
    const ComplexMatrix& blk = (mode_ == IndexMode::plus) ? b11_ : b00_;
    ComplexMatrix rho = partial_trace_A(blk);
    const double t = rho.trace().real();
    if (t <= 0.0) throw ZeroProbability("conditional target state has zero weight");
    return rho * cplx{1.0 / t, 0.0};
  }

  /// Normalized target-register marginal with the index qubit traced out.
  ComplexMatrix target_marginal() const {
    const double l00 = block_log_trace(b00_, g00_);
    const double l11 = block_log_trace(b11_, g11_);
    const double lz = detail::logsumexp2(l00, l11);
    ComplexMatrix rho = partial_trace_A(b00_) * cplx{std::exp(g00_ - lz), 0.0};
    if (l11 > -std::numeric_limits<double>::infinity())
      rho = rho + partial_trace_A(b11_) * cplx{std::exp(g11_ - lz), 0.0};
    return rho;
  }

  /// Normalized 2x2 index-qubit density matrix. The off-diagonal underflows
  /// for very long runs; use the log accessors for the stable path.
  ComplexMatrix index_qubit_state() const {
    const double l00 = block_log_trace(b00_, g00_);
    const double l11 = block_log_trace(b11_, g11_);
    const double lz = detail::logsumexp2(l00, l11);
    ComplexMatrix rho(2);
    rho(0, 0) = std::exp(l00 - lz);
    rho(1, 1) = std::exp(l11 - lz);
    const cplx t01 = b01_.trace();
    rho(0, 1) = std::exp(std::log(std::max(std::abs(t01), 1e-300)) + g01_ - lz) *
                (std::abs(t01) > 0 ? t01 / std::abs(t01) : cplx{0.0, 0.0});
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
  }

  /// ln |<0|rho_ind|1>| of the normalized index state.
  double coherence_log_magnitude() const {
    const cplx t01 = b01_.trace();
    if (t01 == cplx{0.0, 0.0}) return -std::numeric_limits<double>::infinity();
    const double lz = detail::logsumexp2(block_log_trace(b00_, g00_),
                                         block_log_trace(b11_, g11_));
    return std::log(std::abs(t01)) + g01_ - lz;
  }

  /// arg <0|rho_ind|1>.
  double coherence_phase() const {
    const cplx t01 = b01_.trace();
    return std::arg(t01);
  }

  /// Full normalized joint density matrix on index (x) A (x) B (index slow).
  ComplexMatrix joint_state() const {
    const std::size_t d = sys_.dim_A * sys_.dim_B;
    const double lz = detail::logsumexp2(block_log_trace(b00_, g00_),
                                         block_log_trace(b11_, g11_));
    ComplexMatrix rho(2 * d);
    const double w00 = std::exp(g00_ - lz), w01 = std::exp(g01_ - lz),
                 w11 = std::exp(g11_ - lz);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        rho(i, j) = b00_(i, j) * w00;
        rho(i, d + j) = b01_(i, j) * w01;
        rho(d + i, j) = std::conj(b01_(j, i)) * w01;
        rho(d + i, d + j) = b11_(i, j) * w11;
      }
    return rho;
  }

private:
  void ensure_propagator(double tau) {
    if (!have_u_ || tau != u_tau_) {
      u_ = matrix_exp_hermitian(sys_.H, tau);
      udag_ = u_.adjoint();
      u_tau_ = tau;
      have_u_ = true;
    }
  }

  // X <- (|phi><phi| (x) I_B) X (|phi><phi| (x) I_B)
  void project_interacting(ComplexMatrix& x) const {
    const std::size_t dA = sys_.dim_A, dB = sys_.dim_B;
    ComplexMatrix y(dB);
    for (std::size_t r = 0; r < dB; ++r)
      for (std::size_t s = 0; s < dB; ++s) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < dA; ++k) {
          if (sys_.phi_A[k] == cplx{0.0, 0.0}) continue;
          for (std::size_t l = 0; l < dA; ++l)
            acc += std::conj(sys_.phi_A[k]) * x(k * dB + r, l * dB + s) * sys_.phi_A[l];
        }
        y(r, s) = acc;
      }
    ComplexMatrix out(dA * dB);
    for (std::size_t k = 0; k < dA; ++k)
      for (std::size_t l = 0; l < dA; ++l) {
        const cplx w = sys_.phi_A[k] * std::conj(sys_.phi_A[l]);
        if (w == cplx{0.0, 0.0}) continue;
        for (std::size_t r = 0; r < dB; ++r)
          for (std::size_t s = 0; s < dB; ++s)
            out(k * dB + r, l * dB + s) = w * y(r, s);
      }
    x = out;
  }

  ComplexMatrix partial_trace_A(const ComplexMatrix& x) const {
    const std::size_t dA = sys_.dim_A, dB = sys_.dim_B;
    ComplexMatrix y(dB);
    for (std::size_t k = 0; k < dA; ++k)
      for (std::size_t r = 0; r < dB; ++r)
        for (std::size_t s = 0; s < dB; ++s) y(r, s) += x(k * dB + r, k * dB + s);
    return y;
  }

  static void renorm_block(ComplexMatrix& b, double& g) {
    const double f = b.max_norm();
    if (f > 0.0) {
      b = b * cplx{1.0 / f, 0.0};
      g += std::log(f);
    }
  }

  static double block_log_trace(const ComplexMatrix& b, double g) {
    const double t = b.trace().real();
    if (t <= 0.0) return -std::numeric_limits<double>::infinity();
    return g + std::log(t);
  }

  double log_physical_trace() const {
    return detail::logsumexp2(block_log_trace(b00_, g00_), block_log_trace(b11_, g11_));
  }

  double fidelity_now() const {
    const ComplexMatrix rho = target_reduced();
    const cvector& u = reference_;
    cplx num{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j) num += std::conj(u[i]) * rho(i, j) * u[j];
    const double den = std::abs(inner(u, u));
    return num.real() / den;
  }

  BipartiteSystem sys_;
  IndexMode mode_;
  std::size_t m_ = 0;
  ComplexMatrix b00_, b01_, b11_;
  double g00_ = 0.0, g01_ = 0.0, g11_ = 0.0;
  double log_cond_base_ = 0.0;
  ComplexMatrix u_, udag_;
  double u_tau_ = 0.0;
  bool have_u_ = false;
  cvector reference_;
  std::vector<double> survival_, log_cond_survival_, log_uncond_survival_, fidelity_;
};

inline MpeaRun init_run(const BipartiteSystem& sys, const ComplexMatrix& rho_B,
                        IndexMode mode) {
  return MpeaRun(sys, rho_B, mode);
}

/// m successful measurement intervals of length tau in plus mode, with the
/// fidelity reference defaulting to the dominant right eigenvector of V(tau).
inline MpeaRun run_post_selected(const BipartiteSystem& sys, const ComplexMatrix& rho_B,
                                 double tau, std::size_t m,
                                 std::optional<cvector> reference = std::nullopt,
                                 IndexMode mode = IndexMode::plus) {
  MpeaRun run(sys, rho_B, mode);
  cvector ref;
  if (reference) {
    ref = *reference;
  } else {
    const auto spec = classical_spectrum(construct_vb(sys, tau));
    ref = spec.right(0);
  }
  run.set_reference(ref);
  for (std::size_t i = 0; i < m; ++i) run.step(tau);
  return run;
}

/// Matrix-level shortcut P(m) = Tr[V^m rho V^dagger^m] for m = 0..m_max.
inline std::vector<double> survival_curve(const NonUnitaryEvolution& ev,
                                          const ComplexMatrix& rho_B, std::size_t m_max) {
  std::vector<double> p;
  p.reserve(m_max + 1);
  ComplexMatrix rho = rho_B;
  p.push_back(rho.trace().real());
  const ComplexMatrix vdag = ev.V.adjoint();
  for (std::size_t m = 1; m <= m_max; ++m) {
    rho = ev.V * rho * vdag;
    p.push_back(rho.trace().real());
  }
  return p;
}

/// One stochastic realization of the post-selection protocol.
struct TrajectoryRecord {
  uint64_t seed = 0;
  std::size_t attempted = 0;
  std::size_t succeeded_chain_length = 0;
  bool success = false;
};

struct TrajectorySummary {
  std::vector<TrajectoryRecord> records;
  double empirical_success_rate = 0.0;
};

/// Monte-Carlo sampling of the measurement record. Any failed projection
/// fails the whole trajectory. Each trajectory owns a generator derived from
/// (seed, index), so results do not depend on the worker count.
inline TrajectorySummary sample_trajectories(const BipartiteSystem& sys,
                                             const ComplexMatrix& rho_B, double tau,
                                             std::size_t m, std::size_t n_traj,
                                             uint64_t seed, std::size_t n_workers = 0) {
  if (n_traj < 1) throw DimensionMismatch("sample_trajectories: n_traj must be >= 1");
  sys.validate();
  validate_density_matrix(rho_B);
  const ComplexMatrix u = matrix_exp_hermitian(sys.H, tau);
  const HermitianEigenSystem mix = hermitian_eig(rho_B);
  const std::size_t dA = sys.dim_A, dB = sys.dim_B;

  auto run_one = [&](std::size_t idx) {
    detail::StreamRng rng(seed, idx);
    // draw a pure component of rho_B
    double x = rng.uniform();
    std::size_t comp = mix.eigenvalues.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < mix.eigenvalues.size(); ++k) {
      acc += std::max(mix.eigenvalues[k], 0.0);
      if (x < acc) {
        comp = k;
        break;
      }
    }
    cvector psi = tensor_product(sys.phi_A, mix.eigenvector(comp));
    TrajectoryRecord rec;
    rec.seed = seed;
    for (std::size_t step = 0; step < m; ++step) {
      ++rec.attempted;
      psi = u.apply(psi);
      // project A onto |phi_A>: amplitude vector on B
      cvector chi(dB, cplx{0.0, 0.0});
      for (std::size_t k = 0; k < dA; ++k) {
        const cplx ck = std::conj(sys.phi_A[k]);
        if (ck == cplx{0.0, 0.0}) continue;
        for (std::size_t r = 0; r < dB; ++r) chi[r] += ck * psi[k * dB + r];
      }
      const double p = std::abs(inner(chi, chi));
      if (rng.uniform() >= p) return rec;  // failed projection
      ++rec.succeeded_chain_length;
      const double nrm = std::sqrt(p);
      psi = tensor_product(sys.phi_A, chi);
      for (auto& z : psi) z /= nrm;
    }
    rec.success = true;
    return rec;
  };

  TrajectorySummary out;
  out.records.resize(n_traj);
  if (n_workers == 0) n_workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, n_traj);
  const std::size_t chunk = (n_traj + n_workers - 1) / n_workers;
  std::vector<std::future<void>> futs;
  for (std::size_t w = 0; w < n_workers; ++w) {
    const std::size_t lo = w * chunk, hi = std::min(n_traj, lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, [&, lo, hi]() {
      for (std::size_t i = lo; i < hi; ++i) out.records[i] = run_one(i);
    }));
  }
  for (auto& f : futs) f.get();

  std::size_t ok = 0;
  for (const auto& r : out.records) ok += r.success ? 1 : 0;
  out.empirical_success_rate = double(ok) / double(n_traj);
  return out;
}

}  // namespace mpea

#endif  // MPEA_ENGINE_HPP
