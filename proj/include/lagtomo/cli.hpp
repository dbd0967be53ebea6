// Command-line front end, kept in the library so tests can drive it in-process.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "lagtomo/config.hpp"
#include "lagtomo/report.hpp"

namespace lagtomo {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitDegenerate = 3 };

/// Runs the named experiment ("crofton", "homogenize", "volume-bound",
/// "semicontinuity", "proof-trace", "barcode"). Throws std::invalid_argument
/// for an unknown name.
Report run_experiment(const std::string& name, const ExperimentConfig& cfg);

/// Names accepted by run_experiment, in CLI order.
const std::vector<std::string>& experiment_names();

/// Exit code for a finished report.
int exit_code(const Report& r);

/// Full CLI: parses args, runs, writes <out>/<name>.csv, <out>/<name>_summary.json
/// and attachments, prints the summary on `out`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lagtomo
