// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_IO_HPP
#define MPEA_IO_HPP

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpea/complex_matrix.hpp"
#include "mpea/errors.hpp"
#include "mpea/general_eig.hpp"
#include "mpea/readout.hpp"

namespace mpea {

/// 17 significant digits: enough to round-trip an IEEE double exactly, and a
/// stable byte-level format for diffing outputs across implementations.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace detail {

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot open for writing: " + path);
  out << body;
  if (!out) throw ScenarioError("write failed: " + path);
}

}  // namespace detail

/// Matrix as JSON: {"dim": d, "entries": [[re, im], ...]} row-major.
inline std::string matrix_to_json(const ComplexMatrix& m) {
  std::ostringstream os;
  os << "{\n  \"dim\": " << m.dim() << ",\n  \"entries\": [";
  const std::size_t d = m.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i + j > 0) os << ",";
      os << "\n    [" << fmt17(m(i, j).real()) << ", " << fmt17(m(i, j).imag()) << "]";
    }
  os << "\n  ]\n}\n";
  return os.str();
}

inline void write_matrix_json(const std::string& path, const ComplexMatrix& m) {
  detail::write_text_file(path, matrix_to_json(m));
}

inline ComplexMatrix read_matrix_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open matrix file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("matrix file " + path + ": " + e.what());
  }
  if (!j.contains("dim") || !j.contains("entries"))
    throw ScenarioError("matrix file " + path + ": missing dim/entries");
  const std::size_t d = j["dim"].get<std::size_t>();
  const auto& e = j["entries"];
  if (e.size() != d * d)
    throw ScenarioError("matrix file " + path + ": entry count != dim^2");
  ComplexMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t jj = 0; jj < d; ++jj) {
      const auto& z = e[i * d + jj];
      m(i, jj) = cplx{z.at(0).get<double>(), z.at(1).get<double>()};
    }
  return m;
}

inline cvector read_vector_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open vector file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("vector file " + path + ": " + e.what());
  }
  if (!j.contains("entries")) throw ScenarioError("vector file " + path + ": missing entries");
  cvector v;
  for (const auto& z : j["entries"]) v.push_back(cplx{z.at(0).get<double>(), z.at(1).get<double>()});
  return v;
}

/// Spectrum table: one record per eigenvalue with modulus, phase, the binary
/// fraction f = (-phase / 2 pi) mod 1, and the dominant-degeneracy flag.
inline std::string spectrum_to_json(const BiorthogonalEigenSystem& es) {
  std::ostringstream os;
  os << "{\n  \"degenerate_dominant\": " << (es.degenerate_dominant ? "true" : "false")
     << ",\n  \"condition\": " << fmt17(es.condition) << ",\n  \"eigenvalues\": [";
  for (std::size_t k = 0; k < es.eigenvalues.size(); ++k) {
    const cplx lam = es.eigenvalues[k];
    const double phase = std::arg(lam);
    double f = std::fmod(-phase / (2.0 * std::numbers::pi), 1.0);
    if (f < 0.0) f += 1.0;
    os << (k ? "," : "") << "\n    {\"re\": " << fmt17(lam.real())
       << ", \"im\": " << fmt17(lam.imag()) << ", \"modulus\": " << fmt17(std::abs(lam))
       << ", \"phase\": " << fmt17(phase) << ", \"fraction\": " << fmt17(f) << "}";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

inline void write_spectrum_json(const std::string& path, const BiorthogonalEigenSystem& es) {
  detail::write_text_file(path, spectrum_to_json(es));
}

/// Survival/fidelity table, one row per measurement count.
inline std::string survival_to_csv(const std::vector<double>& p_uncond,
                                   const std::vector<double>& fidelity,
                                   const std::vector<double>& p_cond) {
  std::ostringstream os;
  os << "m,P,F,conditional_P\n";
  for (std::size_t m = 0; m < p_uncond.size(); ++m)
    os << m << "," << fmt17(p_uncond[m]) << "," << fmt17(fidelity[m]) << ","
       << fmt17(p_cond[m]) << "\n";
  return os.str();
}

inline void write_survival_csv(const std::string& path, const std::vector<double>& p_uncond,
                               const std::vector<double>& fidelity,
                               const std::vector<double>& p_cond) {
  detail::write_text_file(path, survival_to_csv(p_uncond, fidelity, p_cond));
}

inline std::string estimate_to_json(const EigenEstimate& est, const std::string& mode) {
  std::ostringstream os;
  os << "{\n  \"a\": " << fmt17(est.a_hat) << ",\n  \"b\": " << fmt17(est.b_hat)
     << ",\n  \"f\": " << fmt17(est.f) << ",\n  \"n_bits\": " << est.n_bits
     << ",\n  \"uncertainty\": " << fmt17(est.uncertainty)
     << ",\n  \"lambda_re\": " << fmt17(est.lambda.real())
     << ",\n  \"lambda_im\": " << fmt17(est.lambda.imag()) << ",\n  \"mode\": \"" << mode
     << "\"\n}\n";
  return os.str();
}

inline void write_estimate_json(const std::string& path, const EigenEstimate& est,
                                const std::string& mode) {
  detail::write_text_file(path, estimate_to_json(est, mode));
}

}  // namespace mpea

#endif  // MPEA_IO_HPP
