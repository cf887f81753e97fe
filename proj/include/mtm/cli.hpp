#pragma once

#include <string>
#include <vector>

namespace mtm::cli {

enum class Format { csv, json };

// Parsed command configuration; the front end fills this from flags and the
// library validates it against the target module's preconditions.
struct RunConfig {
  std::string command;  // "heat-check" | "sharpness" | "certify"
  double a = 0.25;
  double lambda = 1.0;
  double eps = 0.0;  // 0 means "derive the default from (a, lambda)"
  double beta = 4.0 * 3.14159265358979323846;
  std::vector<double> p_list;      // sharpness: 8 pi e scan
  std::vector<double> delta_list;  // sharpness: threshold scan
  std::vector<double> t_list;      // heat-check: times
  double tol = 1e-12;              // heat-check pass tolerance
  std::string out;                 // output path; empty = stdout
  Format format = Format::csv;
  unsigned seed = 1;
};

// Exit codes: 0 success, 1 contract violation, 2 usage error.
constexpr int kExitOk = 0;
constexpr int kExitContractViolation = 1;
constexpr int kExitUsage = 2;

int run(const RunConfig& cfg);  // dispatch on cfg.command

int run_heat_check(const RunConfig& cfg);
int run_sharpness(const RunConfig& cfg);
int run_certify(const RunConfig& cfg);

}  // namespace mtm::cli
