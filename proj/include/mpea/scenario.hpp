// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_SCENARIO_HPP
#define MPEA_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "mpea/bipartite_system.hpp"
#include "mpea/complex_matrix.hpp"
#include "mpea/errors.hpp"
#include "mpea/io.hpp"

namespace mpea {

/// Declarative simulation description parsed from a flat key = value file
/// with [section] headers. All validation errors name the offending key.
struct Scenario {
  // [model]
  std::string model;  // jaynes_cummings | axial | generic
  double w0 = 1.0, w1 = 1.0, J = 1.0;
  std::size_t n_max = 4;
  std::string h_A_file, h_B_file, h_AB_file, phi_A_file;  // generic model inputs
  // [evolution]
  double tau = 0.0;
  // [initial]
  std::string rho_B = "maximally_mixed";  // named basis state or matrix file
  // [run]
  std::size_t m_max = 0;
  bool has_m_max = false;
  std::string reference;  // optional named fidelity reference state
  // [readout]
  std::string readout = "none";  // qst | mqft | none
  std::size_t n_bits = 8;
  std::size_t copies = 0;  // 0 = exact expectation values
  std::size_t qst_m = 1;
  std::string qk_mode = "validation";
  // [trajectories]
  std::size_t n_traj = 0;
  std::size_t traj_m = 0;
  // [rng]
  std::optional<uint64_t> seed;
  // [output]
  std::string prefix = "scenario";
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& val) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(val, &pos);
  } catch (const std::exception&) {
    throw ScenarioError("key '" + key + "': not a number: '" + val + "'");
  }
  if (pos != val.size()) throw ScenarioError("key '" + key + "': trailing junk: '" + val + "'");
  if (!std::isfinite(x)) throw ScenarioError("key '" + key + "': not finite");
  return x;
}

inline uint64_t parse_count(const std::string& key, const std::string& val) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(val, &pos);
  } catch (const std::exception&) {
    throw ScenarioError("key '" + key + "': not a non-negative integer: '" + val + "'");
  }
  if (pos != val.size())
    throw ScenarioError("key '" + key + "': trailing junk: '" + val + "'");
  return x;
}

}  // namespace detail

inline Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ScenarioError("line " + std::to_string(line_no) + ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = section + "." + detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (val.empty()) throw ScenarioError("key '" + key + "': empty value");

    if (key == "model.type") sc.model = val;
    else if (key == "model.w0") sc.w0 = detail::parse_real(key, val);
    else if (key == "model.w1") sc.w1 = detail::parse_real(key, val);
    else if (key == "model.J") sc.J = detail::parse_real(key, val);
    else if (key == "model.n_max") sc.n_max = detail::parse_count(key, val);
    else if (key == "model.h_A") sc.h_A_file = val;
    else if (key == "model.h_B") sc.h_B_file = val;
    else if (key == "model.h_AB") sc.h_AB_file = val;
    else if (key == "model.phi_A") sc.phi_A_file = val;
    else if (key == "evolution.tau") sc.tau = detail::parse_real(key, val);
    else if (key == "initial.rho_B") sc.rho_B = val;
    else if (key == "run.m_max") { sc.m_max = detail::parse_count(key, val); sc.has_m_max = true; }
    else if (key == "run.reference") sc.reference = val;
    else if (key == "readout.type") sc.readout = val;
    else if (key == "readout.n_bits") sc.n_bits = detail::parse_count(key, val);
    else if (key == "readout.copies") sc.copies = detail::parse_count(key, val);
    else if (key == "readout.m") sc.qst_m = detail::parse_count(key, val);
    else if (key == "readout.qk_mode") sc.qk_mode = val;
    else if (key == "trajectories.n_traj") sc.n_traj = detail::parse_count(key, val);
    else if (key == "trajectories.m") sc.traj_m = detail::parse_count(key, val);
    else if (key == "rng.seed") sc.seed = detail::parse_count(key, val);
    else if (key == "output.prefix") sc.prefix = val;
    else throw ScenarioError("unknown key '" + key + "'");
  }

  if (sc.model != "jaynes_cummings" && sc.model != "axial" && sc.model != "generic")
    throw ScenarioError("key 'model.type': must be jaynes_cummings, axial or generic, got '" +
                        sc.model + "'");
  if (sc.readout != "none" && sc.readout != "qst" && sc.readout != "mqft")
    throw ScenarioError("key 'readout.type': must be qst, mqft or none, got '" + sc.readout + "'");
  if (sc.qk_mode != "validation" && sc.qk_mode != "blind")
    throw ScenarioError("key 'readout.qk_mode': must be validation or blind, got '" +
                        sc.qk_mode + "'");
  if (sc.readout == "mqft" && sc.n_bits < 1)
    throw ScenarioError("key 'readout.n_bits': must be >= 1 for mqft");
  return sc;
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return parse_scenario_text(body.str());
}

/// Stochastic scenarios (finite sampling copies or trajectory counts) must
/// carry a seed so every output is reproducible.
inline void require_seed_if_stochastic(const Scenario& sc, bool trajectories_command = false) {
  const bool stochastic = sc.copies > 0 || (trajectories_command && sc.n_traj > 0);
  if (stochastic && !sc.seed)
    throw ScenarioError("key 'rng.seed': required for stochastic sampling");
}

inline BipartiteSystem build_system(const Scenario& sc) {
  if (sc.model == "jaynes_cummings") return build_jaynes_cummings(sc.w0, sc.w1, sc.J, sc.n_max);
  if (sc.model == "axial") return build_axial_symmetry(sc.J);
  // generic: all four parts come from matrix files
  if (sc.h_A_file.empty() || sc.h_B_file.empty() || sc.h_AB_file.empty() || sc.phi_A_file.empty())
    throw ScenarioError("key 'model.h_A/h_B/h_AB/phi_A': all required for generic model");
  return build_generic(read_matrix_json(sc.h_A_file), read_matrix_json(sc.h_B_file),
                       read_matrix_json(sc.h_AB_file), read_vector_json(sc.phi_A_file));
}

inline cvector named_two_spin_state(const std::string& name) {
  const SpinPhotonBasis basis;
  if (name == "singlet") return basis.singlet;
  if (name == "t_plus") return basis.triplet_p;
  if (name == "t_0") return basis.triplet_0;
  if (name == "t_minus") return basis.triplet_m;
  return {};
}

inline ComplexMatrix build_initial_rho(const Scenario& sc, const BipartiteSystem& sys) {
  if (sc.rho_B == "maximally_mixed") {
    ComplexMatrix rho(sys.dim_B);
    for (std::size_t i = 0; i < sys.dim_B; ++i) rho(i, i) = 1.0 / double(sys.dim_B);
    return rho;
  }
  const cvector named = named_two_spin_state(sc.rho_B);
  if (!named.empty()) {
    if (sys.dim_B != 4)
      throw ScenarioError("key 'initial.rho_B': named two-spin state needs dim_B = 4");
    return outer(named, named);
  }
  const ComplexMatrix rho = read_matrix_json(sc.rho_B);
  if (rho.dim() != sys.dim_B)
    throw ScenarioError("key 'initial.rho_B': matrix dimension != dim_B");
  return rho;
}

inline std::optional<cvector> build_reference(const Scenario& sc) {
  if (sc.reference.empty()) return std::nullopt;
  const cvector named = named_two_spin_state(sc.reference);
  if (named.empty())
    throw ScenarioError("key 'run.reference': unknown state '" + sc.reference + "'");
  return named;
}

}  // namespace mpea

#endif  // MPEA_SCENARIO_HPP
