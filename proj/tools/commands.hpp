#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tridecomp/driver.hpp"

namespace tridecomp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kDivergence = 3 };

/// Quantities reported after a decomposition run. Absent PSNR values are
/// written as null.
struct MetricsReport {
  std::optional<double> psnrNoisyInput;
  std::optional<double> psnrU;
  double stdN = 0.0;
  int iterations = 0;
  double elapsedSeconds = 0.0;
  double residualFinal = 0.0;
  bool converged = false;
  DecompParams params;
  double offset = 0.5;  // added to w and n in the unscaled files
};

nlohmann::json paramsToJson(const DecompParams& p);
nlohmann::json metricsToJson(const MetricsReport& m);

/// Parses argv and dispatches to decompose, synth or bench. Output goes to
/// out/err so tests can capture it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tridecomp::cli
