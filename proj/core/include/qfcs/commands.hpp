#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qfcs {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2 };

struct CommandOptions {
  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string suite = "all";
  double t = 1.0;
  std::string t_grid;       // empty: 0:30:31
  std::string lambda_grid;  // empty: the config's λ
  std::string gamma_grid;   // empty: 41 points on [−π/δE, π/δE]
  std::pair<double, double> plateau{10.0, 30.0};
};

/// "a,b,c" or "start:stop:count" (count ≥ 1, endpoints included).
std::vector<double> parse_grid(const std::string& text);

int cmd_validate(const CommandOptions& opt, std::ostream& out, std::ostream& err);
/// Writes <out_dir>/verify_report.json.
int cmd_verify(const CommandOptions& opt, std::ostream& out, std::ostream& err);
/// Writes fcs_measures.csv, fcs_characteristic.csv and fcs_summary.json.
int cmd_fcs(const CommandOptions& opt, std::ostream& out, std::ostream& err);
/// Writes sweep.csv and sweep_summary.json.
int cmd_sweep(const CommandOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace qfcs
