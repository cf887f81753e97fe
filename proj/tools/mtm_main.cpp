#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtm/cli.hpp"

namespace {

// Attaches the flags shared by every subcommand to `sub`.
void add_common_flags(CLI::App* sub, mtm::cli::RunConfig& cfg, std::string& format) {
  sub->add_option("--a", cfg.a, "flux parameter in [0, 1/2]");
  sub->add_option("--lambda", cfg.lambda, "spectral shift");
  sub->add_option("--eps", cfg.eps,
                  "angular regularization (0 derives the default from a, lambda)");
  sub->add_option("--beta", cfg.beta, "exponential-functional exponent");
  sub->add_option("--tol", cfg.tol, "pass tolerance for heat-check");
  sub->add_option("--out", cfg.out, "output path (default: stdout)");
  sub->add_option("--format", format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", cfg.seed, "seed for held-out grid jitter");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for cylinder heat and Green kernels"};
  app.require_subcommand(1);

  mtm::cli::RunConfig cfg;
  std::string format = "csv";

  CLI::App* heat = app.add_subcommand(
      "heat-check", "compare the dual heat-kernel representations");
  add_common_flags(heat, cfg, format);
  heat->add_option("--t-list", cfg.t_list, "times to check (required)");

  CLI::App* sharp = app.add_subcommand(
      "sharpness", "threshold, limit, and equality diagnostics");
  add_common_flags(sharp, cfg, format);
  sharp->add_option("--delta-list", cfg.delta_list, "bump widths to scan");
  sharp->add_option("--p-list", cfg.p_list, "exponents for the limit scan");

  CLI::App* certify = app.add_subcommand(
      "certify", "fit and verify kernel bound certificates");
  add_common_flags(certify, cfg, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help or the parse diagnostic
    return e.get_exit_code() == 0 ? mtm::cli::kExitOk : mtm::cli::kExitUsage;
  }

  cfg.format = format == "json" ? mtm::cli::Format::json : mtm::cli::Format::csv;
  if (heat->parsed()) cfg.command = "heat-check";
  if (sharp->parsed()) cfg.command = "sharpness";
  if (certify->parsed()) cfg.command = "certify";
  return mtm::cli::run(cfg);
}
