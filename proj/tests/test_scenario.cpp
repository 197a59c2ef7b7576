// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "mpea/mpea.hpp"

namespace fs = std::filesystem;

namespace {

const char* kScenarioDir = MPEA_SCENARIO_DIR;
const char* kCliPath = MPEA_CLI_PATH;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("mpea_test_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(kCliPath) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

}  // namespace

TEST_CASE("scenario parsing") {
  SUBCASE("bundled scenarios parse and validate") {
    for (const char* name : {"jc_fig3.scn", "jc_tplus_digits.scn", "axial_fig4.scn"}) {
      const auto sc = mpea::parse_scenario_file((fs::path(kScenarioDir) / name).string());
      const auto sys = mpea::build_system(sc);
      const auto rho = mpea::build_initial_rho(sc, sys);
      CHECK(rho.dim() == sys.dim_B);
      CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    }
  }
  SUBCASE("values land in the right fields") {
    const auto sc = mpea::parse_scenario_text(
        "[model]\ntype = jaynes_cummings\nw0 = 1.5\nn_max = 6\n"
        "[evolution]\ntau = 0.25\n[run]\nm_max = 7\n"
        "[readout]\ntype = mqft\nn_bits = 12\ncopies = 100\n[rng]\nseed = 9\n");
    CHECK(sc.w0 == 1.5);
    CHECK(sc.n_max == 6);
    CHECK(sc.tau == 0.25);
    CHECK(sc.m_max == 7);
    CHECK(sc.n_bits == 12);
    CHECK(sc.copies == 100);
    REQUIRE(sc.seed.has_value());
    CHECK(*sc.seed == 9);
  }
  SUBCASE("comments and blank lines are ignored") {
    const auto sc = mpea::parse_scenario_text(
        "# header comment\n\n[model]\ntype = axial  # trailing\nJ = 2\n[evolution]\ntau = 1\n");
    CHECK(sc.model == "axial");
    CHECK(sc.J == 2.0);
  }
  SUBCASE("unknown key is named in the diagnostic") {
    try {
      (void)mpea::parse_scenario_text("[model]\ntype = axial\nbogus = 1\n[evolution]\ntau = 1\n");
      FAIL("expected ScenarioError");
    } catch (const mpea::ScenarioError& e) {
      CHECK(std::string(e.what()).find("model.bogus") != std::string::npos);
    }
  }
  SUBCASE("malformed numeric value is rejected") {
    CHECK_THROWS_AS((void)mpea::parse_scenario_text("[model]\ntype = axial\nJ = two\n"),
                    mpea::ScenarioError);
    CHECK_THROWS_AS((void)mpea::parse_scenario_text("[model]\ntype = axial\nJ = nan\n"),
                    mpea::ScenarioError);
  }
  SUBCASE("unknown model or readout is rejected") {
    CHECK_THROWS_AS((void)mpea::parse_scenario_text("[model]\ntype = bosonic\n"),
                    mpea::ScenarioError);
    CHECK_THROWS_AS(
        (void)mpea::parse_scenario_text("[model]\ntype = axial\n[readout]\ntype = ramsey\n"),
        mpea::ScenarioError);
  }
  SUBCASE("stochastic scenarios need a seed") {
    auto sc = mpea::parse_scenario_text(
        "[model]\ntype = axial\n[readout]\ntype = qst\ncopies = 100\n");
    CHECK_THROWS_AS(mpea::require_seed_if_stochastic(sc), mpea::ScenarioError);
    sc.seed = 1;
    CHECK_NOTHROW(mpea::require_seed_if_stochastic(sc));
  }
}

TEST_CASE("matrix JSON round trip") {
  const auto dir = fresh_dir("matrix_roundtrip");
  const auto sys = mpea::build_jaynes_cummings(1.0, 1.0, 1.0, 4);
  const auto ev = mpea::construct_vb(sys, 0.5);
  const auto path = (dir / "v.json").string();
  mpea::write_matrix_json(path, ev.V);
  const auto back = mpea::read_matrix_json(path);
  CHECK(max_abs_diff(back, ev.V) == 0.0);  // 17 digits round-trip doubles exactly
}

TEST_CASE("CLI construct") {
  const auto dir = fresh_dir("construct");
  const std::string scn = (fs::path(kScenarioDir) / "jc_fig3.scn").string();
  REQUIRE(run_cli("construct --scenario " + scn + " --out " + dir.string()) == 0);

  const auto v = mpea::read_matrix_json((dir / "jc_fig3.v.json").string());
  CHECK(v.dim() == 4);
  const auto spectrum = nlohmann::json::parse(slurp(dir / "jc_fig3.spectrum.json"));
  // modulus [3 + 2 cos(sqrt(10)/2)]/5 with phase -1 rad must appear
  const double mod = (3.0 + 2.0 * std::cos(std::sqrt(10.0) / 2.0)) / 5.0;
  bool found = false;
  for (const auto& row : spectrum["eigenvalues"])
    if (std::abs(row["modulus"].get<double>() - mod) < 1e-12 &&
        std::abs(row["phase"].get<double>() + 1.0) < 1e-10)
      found = true;
  CHECK(found);
  CHECK_FALSE(spectrum["degenerate_dominant"].get<bool>());

  SUBCASE("axial spectrum flags the degenerate unit eigenvalue") {
    const auto dir2 = fresh_dir("construct_axial");
    const std::string axial = (fs::path(kScenarioDir) / "axial_fig4.scn").string();
    REQUIRE(run_cli("construct --scenario " + axial + " --out " + dir2.string()) == 0);
    const auto sp = nlohmann::json::parse(slurp(dir2 / "axial_fig4.spectrum.json"));
    CHECK(sp["degenerate_dominant"].get<bool>());
    bool third = false;
    for (const auto& row : sp["eigenvalues"])
      if (std::abs(row["re"].get<double>() - (-0.951363)) < 5e-7) third = true;
    CHECK(third);
  }
}

TEST_CASE("CLI run") {
  const auto dir = fresh_dir("run");
  const std::string scn = (fs::path(kScenarioDir) / "axial_fig4.scn").string();
  REQUIRE(run_cli("run --scenario " + scn + " --out " + dir.string()) == 0);
  const std::string csv = slurp(dir / "axial_fig4.curve.csv");
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "m,P,F,conditional_P");
  std::vector<std::array<double, 4>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::array<double, 4> r{};
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    ls >> r[0] >> r[1] >> r[2] >> r[3];
    rows.push_back(r);
  }
  REQUIRE(rows.size() == 11);
  CHECK(rows[0][1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rows[10][1] - 0.36891) < 5e-5);  // rounds to the published 0.37
  for (const auto& r : rows) CHECK(r[2] == doctest::Approx(1.0).epsilon(1e-9));

  SUBCASE("byte-identical reruns") {
    const auto dir2 = fresh_dir("run_again");
    REQUIRE(run_cli("run --scenario " + scn + " --out " + dir2.string()) == 0);
    CHECK(slurp(dir2 / "axial_fig4.curve.csv") == csv);
  }
}

TEST_CASE("CLI estimate") {
  const auto dir = fresh_dir("estimate");
  const std::string scn = (fs::path(kScenarioDir) / "jc_tplus_digits.scn").string();
  REQUIRE(run_cli("estimate --scenario " + scn + " --out " + dir.string()) == 0);
  const auto est = nlohmann::json::parse(slurp(dir / "jc_tplus_digits.estimate.json"));
  // the 16-bit dyadic estimate; its +-2^{-15} bracket contains 1/(2 pi)
  CHECK(est["f"].get<double>() == doctest::Approx(0.159149169921875).epsilon(1e-12));
  CHECK(std::abs(est["f"].get<double>() - 0.159155) < 3e-5);
  CHECK(std::abs(est["b"].get<double>() - 0.5177) < 1e-3);
  CHECK(est["n_bits"].get<int>() == 16);
  CHECK(est["mode"].get<std::string>() == "mqft-exact");
  const double lam_re = est["lambda_re"].get<double>();
  const double lam_im = est["lambda_im"].get<double>();
  const std::complex<double> expect = std::exp(std::complex<double>(-0.5177, -1.0));
  CHECK(std::abs(std::complex<double>(lam_re, lam_im) - expect) < 1e-3);
}

TEST_CASE("CLI validation failures leave no outputs") {
  const auto dir = fresh_dir("bad");
  SUBCASE("malformed key") {
    const auto bad = dir / "bad.scn";
    write_file(bad, "[model]\ntype = axial\nwibble = 3\n[evolution]\ntau = 1\n");
    CHECK(run_cli("construct --scenario " + bad.string() + " --out " + dir.string()) == 2);
    CHECK_FALSE(fs::exists(dir / "scenario.v.json"));
  }
  SUBCASE("unseeded stochastic estimate") {
    const auto bad = dir / "unseeded.scn";
    write_file(bad,
               "[model]\ntype = jaynes_cummings\n[evolution]\ntau = 0.5\n"
               "[initial]\nrho_B = t_plus\n[readout]\ntype = qst\ncopies = 1000\n"
               "[output]\nprefix = unseeded\n");
    CHECK(run_cli("estimate --scenario " + bad.string() + " --out " + dir.string()) == 2);
    CHECK_FALSE(fs::exists(dir / "unseeded.estimate.json"));
  }
  SUBCASE("missing scenario file") {
    CHECK(run_cli("run --scenario /nonexistent.scn --out " + dir.string()) == 2);
  }
  SUBCASE("bad flag value") {
    const std::string scn = (fs::path(kScenarioDir) / "jc_fig3.scn").string();
    CHECK(run_cli("run --scenario " + scn + " --mode sometimes") == 2);
  }
}

TEST_CASE("CLI seeded sampling is reproducible") {
  const auto dir = fresh_dir("sampled");
  const auto scn = dir / "sampled.scn";
  write_file(scn,
             "[model]\ntype = jaynes_cummings\n[evolution]\ntau = 0.5\n"
             "[initial]\nrho_B = t_plus\n[readout]\ntype = qst\ncopies = 100000\nm = 1\n"
             "[rng]\nseed = 11\n[output]\nprefix = sampled\n");
  REQUIRE(run_cli("estimate --scenario " + scn.string() + " --out " + dir.string()) == 0);
  const std::string first = slurp(dir / "sampled.estimate.json");
  REQUIRE(run_cli("estimate --scenario " + scn.string() + " --out " + dir.string()) == 0);
  CHECK(slurp(dir / "sampled.estimate.json") == first);

  // a different seed through --seed changes the sampled estimate
  REQUIRE(run_cli("estimate --scenario " + scn.string() + " --out " + dir.string() +
                  " --seed 12") == 0);
  CHECK(slurp(dir / "sampled.estimate.json") != first);

  const auto est = nlohmann::json::parse(first);
  CHECK(est["mode"].get<std::string>() == "qst-sampled");
  CHECK(std::abs(est["b"].get<double>() - 0.5177) < 0.05);
  CHECK(std::abs(est["a"].get<double>() - (-1.0)) < 0.05);
}

TEST_CASE("CLI trajectories") {
  const auto dir = fresh_dir("traj");
  const auto scn = dir / "traj.scn";
  write_file(scn,
             "[model]\ntype = axial\nJ = 2\n[evolution]\ntau = 1\n"
             "[initial]\nrho_B = t_0\n[trajectories]\nn_traj = 500\nm = 5\n"
             "[rng]\nseed = 21\n[output]\nprefix = traj\n");
  REQUIRE(run_cli("trajectories --scenario " + scn.string() + " --out " + dir.string()) == 0);
  const auto js = nlohmann::json::parse(slurp(dir / "traj.trajectories.json"));
  const double rate = js["empirical_success_rate"].get<double>();
  const double p_true = std::pow(std::cos(2.0 * std::sqrt(2.0)), 10.0);
  CHECK(std::abs(rate - p_true) < 4.0 * std::sqrt(p_true * (1.0 - p_true) / 500.0));
  const std::string csv = slurp(dir / "traj.trajectories.csv");
  CHECK(csv.rfind("index,attempted,succeeded_chain_length,success\n", 0) == 0);
}
