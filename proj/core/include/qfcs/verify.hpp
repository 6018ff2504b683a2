#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfcs/modular.hpp"
#include "qfcs/scenario.hpp"

namespace qfcs {

struct CheckResult {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

struct VerifyOptions {
  double t = 1.0;
  std::uint64_t seed = 20240917;
  int random_samples = 100;
  std::pair<double, double> koopman_window{10.0, 30.0};
  int koopman_grid = 41;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::optional<KoopmanReport> koopman;  // modular suite only
  std::string half_line_variant;         // fcs suite only: statement, proof, both or none

  bool all_pass() const;
};

/// Suite names accepted by run_verification: all, operator, states,
/// dynamics, modular, fcs.
const std::vector<std::string>& verification_suites();

/// Runs the selected invariant checks on `scn`. Unknown suite names raise Error.
VerifyReport run_verification(const Scenario& scn, const std::string& suite, const VerifyOptions& options = {});

}  // namespace qfcs
