#include "tridecomp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tridecomp/errors.hpp"
#include "tridecomp/scenes.hpp"

namespace tridecomp {

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace

double fitExponent(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const BenchRow& r : rows) {
    const double x = std::log(static_cast<double>(r.size) * r.size);
    const double y = std::log(r.medianSeconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

BenchReport runBench(const BenchConfig& cfg) {
  if (cfg.repeats < 1) throw ParameterError("repeats must be positive");
  if (cfg.sizes.empty()) throw ParameterError("at least one size is required");
  DecompParams params = cfg.params;
  params.padWidth = 0;

  BenchReport report;
  for (int size : cfg.sizes) {
    if (size < 64 || (size & (size - 1)) != 0)
      throw ParameterError("bench sizes must be powers of two >= 64");
    Decomposer solver(synthesizeScene(SceneKind::CrossLight, size), params);
    solver.step();

    BenchRow row;
    row.size = size;
    for (int r = 0; r < cfg.repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      solver.step();
      row.samples.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    row.medianSeconds = median(row.samples);
    report.rows.push_back(std::move(row));
  }
  report.exponent = fitExponent(report.rows);
  return report;
}

}  // namespace tridecomp
