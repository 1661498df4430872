#pragma once

#include <vector>

#include "tridecomp/driver.hpp"

namespace tridecomp {

struct BenchConfig {
  std::vector<int> sizes{128, 256, 512};
  int repeats = 5;       // timed iterations per size
  DecompParams params{}; // padWidth is ignored; timings are on the bare grid
};

struct BenchRow {
  int size = 0;
  double medianSeconds = 0.0;  // per iteration
  std::vector<double> samples;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double exponent = 0.0;  // least-squares slope of log(time) against log(MN)
};

/// Times single iterations of the solver on the cross-light scene. One
/// warm-up iteration per size is discarded.
BenchReport runBench(const BenchConfig& cfg);

/// Slope of the log-log fit of median time against pixel count.
double fitExponent(const std::vector<BenchRow>& rows);

}  // namespace tridecomp
