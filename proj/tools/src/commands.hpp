#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace dfire::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitBadInput = 1,
  kExitIo = 2,
  kExitDiverged = 3,
  kExitValidation = 4,
};

/// Landscape input failed validation; exit status 4.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int simulate_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int calibrate_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int metrics_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int bench_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs one subcommand and maps exceptions to exit codes, printing one
/// diagnostic line per failure.
int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dfire::cli
