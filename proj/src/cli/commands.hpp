#pragma once

#include "cli/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rgbm::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kIngestion = 2,
    kEstimation = 3,
    kCalibration = 4,
    kAnalysis = 5,
};

int cmd_estimate(const RunConfig &config, std::ostream &out);
int cmd_calibrate(const RunConfig &config, std::ostream &out);
int cmd_regimes(const RunConfig &config, std::ostream &out);
int cmd_analyze(const RunConfig &config, std::ostream &out);
int cmd_sensitivity(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses arguments (argv[0] excluded), runs the subcommand and maps library
/// errors onto exit codes. Never throws.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace rgbm::cli
