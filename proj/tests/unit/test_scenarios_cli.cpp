#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qfcs/commands.hpp"
#include "qfcs/config.hpp"
#include "qfcs/error.hpp"
#include "qfcs/presets.hpp"
#include "qfcs/sweep.hpp"
#include "qfcs/table.hpp"

using namespace qfcs;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal = R"({
  "beta": 1.0,
  "system": {"dim": 2, "hamiltonian": {"diagonal": [0, 1]}, "initial_state": {"preset": "maximally_mixed"}},
  "reservoir": {"preset": "qubit", "field": 0.5},
  "coupling": {"lambda": 0.1, "system_operator": "sigma_x"}
})";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qfcs_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string config_path(const std::string& name) { return std::string(QFCS_SOURCE_DIR) + "/configs/" + name; }

ConfigError config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError("", "");
}

}  // namespace

TEST_CASE("single-site chain is a field term") {
  const ChainReservoir c = build_chain_reservoir(1, 0.7, 0.5, 3);
  CHECK((c.hamiltonian - 0.5 * pauli_z()).norm() == 0.0);
  CHECK((c.edge - pauli_x()).norm() == 0.0);
}

TEST_CASE("two-site chain without hopping") {
  const ChainReservoir c = build_chain_reservoir(2, 0.0, 0.5, 3);
  const Eigensystem es = eigensystem(c.hamiltonian);
  CHECK(es.values(0) == doctest::Approx(-1.0));
  CHECK(std::abs(es.values(1)) < 1e-14);
  CHECK(std::abs(es.values(2)) < 1e-14);
  CHECK(es.values(3) == doctest::Approx(1.0));
  CHECK((c.edge - tensor(pauli_x(), identity(2))).norm() == 0.0);
}

TEST_CASE("chain hopping term and edge operator") {
  const ChainReservoir c = build_chain_reservoir(3, 0.3, 0.0, 1);
  const Operator want = 0.3 * (site_operator(pauli_x(), 0, 3) * site_operator(pauli_x(), 1, 3) +
                               site_operator(pauli_x(), 1, 3) * site_operator(pauli_x(), 2, 3));
  CHECK((c.hamiltonian - want).norm() < 1e-15);
  CHECK(hermiticity_defect(build_chain_reservoir(4, 0.3, 0.5, 9, 0.4).hamiltonian) == 0.0);
}

TEST_CASE("chain disorder is reproducible from the seed") {
  const auto a = build_chain_reservoir(4, 0.3, 0.5, 11, 0.5);
  const auto b = build_chain_reservoir(4, 0.3, 0.5, 11, 0.5);
  const auto c = build_chain_reservoir(4, 0.3, 0.5, 12, 0.5);
  CHECK(a.hamiltonian == b.hamiltonian);
  CHECK_FALSE(a.hamiltonian == c.hamiltonian);
}

TEST_CASE("chain size limits") {
  try {
    build_chain_reservoir(kMaxChainSites + 1, 0.3, 0.5, 1);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.estimated_bytes() == doctest::Approx(chain_matrix_bytes(13)));
  }
  CHECK_THROWS_AS(build_chain_reservoir(0, 0.3, 0.5, 1), ResourceError);
  CHECK(chain_matrix_bytes(3) == 64.0 * 16.0);
}

TEST_CASE("minimal config") {
  const ParsedConfig c = parse_config_text(kMinimal);
  CHECK(c.warnings.empty());
  CHECK(c.scenario.dim() == 4);
  CHECK(c.scenario.lambda() == 0.1);
  CHECK((c.scenario.rho_system().op() - identity(2) / 2.0).norm() == 0.0);
  CHECK((c.scenario.coupling() - tensor(pauli_x(), pauli_x())).norm() == 0.0);
}

TEST_CASE("missing lambda falls back to zero with a warning") {
  nlohmann::json j = nlohmann::json::parse(kMinimal);
  j["coupling"].erase("lambda");
  const ParsedConfig c = parse_config_text(j.dump());
  CHECK(c.scenario.lambda() == 0.0);
  REQUIRE(c.warnings.size() == 1);
  CHECK(c.warnings[0].find("lambda") != std::string::npos);
}

TEST_CASE("config errors name the field") {
  nlohmann::json j = nlohmann::json::parse(kMinimal);
  j["coupling"].erase("system_operator");
  j["coupling"]["V"] = nlohmann::json::array({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(config_error(j.dump()).field() == "coupling.V");

  j = nlohmann::json::parse(kMinimal);
  j["system"]["initial_state"] = nlohmann::json::array({{0.6, 0}, {0, 0.5}});
  CHECK(config_error(j.dump()).field() == "system.initial_state");

  j = nlohmann::json::parse(kMinimal);
  j["beta"] = -1;
  CHECK(config_error(j.dump()).field() == "beta");

  j = nlohmann::json::parse(kMinimal);
  j["system"]["hamiltonian"] = nlohmann::json::array({{0, 1}, {0, 0}});
  CHECK(config_error(j.dump()).field() == "system.hamiltonian");

  j = nlohmann::json::parse(kMinimal);
  j["reservoir"] = {{"preset", "chain"}, {"n", 13}};
  CHECK(config_error(j.dump()).field() == "reservoir.n");

  CHECK(config_error("{not json").field() == "<document>");
  CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("serialized scenario parses back bit for bit") {
  for (const char* name : {"qubit_qubit.json", "chain3.json"}) {
    const Scenario a = parse_config(config_path(name)).scenario;
    const Scenario b = parse_config_text(serialize_scenario(a)).scenario;
    CHECK(a.h_system() == b.h_system());
    CHECK(a.h_reservoir() == b.h_reservoir());
    CHECK(a.coupling() == b.coupling());
    CHECK(a.rho_system().op() == b.rho_system().op());
    CHECK(a.lambda() == b.lambda());
    CHECK(a.beta() == b.beta());
  }
}

TEST_CASE("seed override changes the chain") {
  const Scenario a = parse_config(config_path("chain3.json")).scenario;
  const Scenario b = parse_config(config_path("chain3.json"), 99).scenario;
  CHECK_FALSE(a.h_reservoir() == b.h_reservoir());
}

TEST_CASE("grid parsing") {
  CHECK(parse_grid("1,2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
  CHECK(parse_grid("0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_grid("2:7:1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_grid("0:1:0"), Error);
  CHECK_THROWS_AS(parse_grid("a,b"), Error);
  CHECK_THROWS_AS(parse_grid(""), Error);
}

TEST_CASE("table formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(-0.0) == "0");
  CHECK(std::stod(format_real(M_PI)) == M_PI);
  Table t({"a", "b"});
  t.add_row({"1", "2"});
  CHECK_THROWS_AS(t.add_row({"1"}), Error);
  std::ostringstream out;
  t.write_csv(out);
  CHECK(out.str() == "a,b\n1,2\n");
}

TEST_CASE("validate command exit codes") {
  std::ostringstream out, err;
  CommandOptions opt;
  opt.config = config_path("qubit_qubit.json");
  CHECK(cmd_validate(opt, out, err) == kExitPass);
  CHECK(out.str().find("d=4") != std::string::npos);
  const fs::path dir = scratch("validate");
  std::ofstream(dir / "bad.json") << "{\"beta\": 1}";
  opt.config = (dir / "bad.json").string();
  CHECK(cmd_validate(opt, out, err) == kExitUsage);
  CHECK(err.str().find("system") != std::string::npos);
}

TEST_CASE("fcs command writes its tables") {
  const fs::path dir = scratch("fcs");
  CommandOptions opt;
  opt.config = config_path("qubit_qubit.json");
  opt.out_dir = dir.string();
  opt.t = 2.0;
  std::ostringstream out, err;
  REQUIRE(cmd_fcs(opt, out, err) == kExitPass);
  CHECK(first_line(dir / "fcs_measures.csv") == "location,weight,which");
  CHECK(first_line(dir / "fcs_characteristic.csv") == "gamma,re,im,source");
  std::ifstream in(dir / "fcs_summary.json");
  const nlohmann::json summary = nlohmann::json::parse(in);
  CHECK(summary.is_object());
}

TEST_CASE("verify command on the qubit config") {
  const fs::path dir = scratch("verify");
  CommandOptions opt;
  opt.config = config_path("qubit_qubit.json");
  opt.out_dir = dir.string();
  opt.suite = "operator";
  std::ostringstream out, err;
  CHECK(cmd_verify(opt, out, err) == kExitPass);
  CHECK(fs::exists(dir / "verify_report.json"));
  CHECK(out.str().find("FAIL") == std::string::npos);
  opt.suite = "bogus";
  CHECK(cmd_verify(opt, out, err) == kExitUsage);
}

TEST_CASE("sweep does not depend on the worker count") {
  const Scenario s = parse_config(config_path("chain3.json")).scenario;
  const std::vector<double> ts{0.0, 1.0, 2.0, 3.0}, lambdas{0.1, 0.2};
  const std::vector<double> gammas{-1.0, 0.5, 2.0};
  SweepOptions one;
  SweepOptions three;
  three.workers = 3;
  const SweepResult a = limit_sweep(s, ts, lambdas, gammas, one);
  const SweepResult b = limit_sweep(s, ts, lambdas, gammas, three);
  REQUIRE(a.rows.size() == 8);
  REQUIRE(b.rows.size() == 8);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].lambda == b.rows[i].lambda);
    CHECK(a.rows[i].t == b.rows[i].t);
    CHECK(a.rows[i].distance == b.rows[i].distance);
    CHECK(a.rows[i].moments == b.rows[i].moments);
  }
  CHECK(a.rows[0].distance == doctest::Approx(sweep_baseline(s, gammas)));
  CHECK(a.rows[0].moment_residual <= 1e-6);
  REQUIRE(a.verdicts.size() == 2);
  // No t falls in [10, 30], so the second half of the grid forms the plateau.
  CHECK(a.verdicts[0].plateau_rows == 2);
}

TEST_CASE("sweep command writes its tables") {
  const fs::path dir = scratch("sweep");
  CommandOptions opt;
  opt.config = config_path("qubit_qubit.json");
  opt.out_dir = dir.string();
  opt.t_grid = "0:2:3";
  opt.workers = 2;
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(opt, out, err) == kExitPass);
  CHECK(first_line(dir / "sweep.csv") == "lambda,t,distance,mean_R,mean_S,m2,m3,m4");
  CHECK(fs::exists(dir / "sweep_summary.json"));
  opt.t_grid = "x";
  CHECK(cmd_sweep(opt, out, err) == kExitUsage);
}
