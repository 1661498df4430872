#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tridecomp/grid.hpp"
#include "tridecomp/spectral.hpp"
#include "tridecomp/splitting.hpp"

namespace tridecomp {

/// Proposed: structure + smooth + oscillatory with L0 and curvature on v.
/// ModelI: cartoon + oscillatory, L0 only. ModelII: three parts, no
/// curvature. ModelIII: cartoon + oscillatory with L0 and curvature.
enum class ModelVariant { Proposed, ModelI, ModelII, ModelIII };

std::string_view toString(ModelVariant variant);
std::optional<ModelVariant> parseVariant(std::string_view name);

/// Initial normal field. Zero leaves (p0, lambda0) outside the constraint set,
/// and the projection then zeroes every |p| < sqrt(gamma1); Aligned starts from
/// lambda0 = p0/|p0| (0 where p0 = 0).
enum class LambdaInit { Aligned, Zero };

/// Initial smooth part. The objective does not see constants in w and the
/// coupled solve keeps mean(r) fixed, so r0 sets where the mean intensity
/// ends up. ZeroMean starts from f - v0 minus its mean, which keeps the mean
/// in v; Residual starts from f - v0 as is.
enum class SmoothInit { ZeroMean, Residual };

struct DecompParams {
  double alpha0 = 2e-3;
  double alphaCurv = 0.1;
  double alphaW = 50.0;
  double alphaN = 1e-2;
  double tau = 0.1;
  double gamma1 = 1.0;
  double gamma2 = 0.01;
  double gamma3 = 20.0;
  double c = 1e-9;
  double kappa = 1e-9;
  double rho = 1e-6;
  int iterMax = 1000;
  int padWidth = 30;
  ModelVariant variant = ModelVariant::Proposed;

  double gaussianSigma = 1.0;  // kernel for the initial guess
  LambdaInit lambdaInit = LambdaInit::Aligned;
  SmoothInit smoothInit = SmoothInit::ZeroMean;
  ProjectionConfig projection{};
  bool traceEnergy = false;    // sample the objective every 10 iterations

  void validate() const;
  StepFourParams stepFourParams() const;
};

/// Which fractional steps a variant runs. Skipped steps copy their inputs.
struct StepSchedule {
  bool l0Threshold = true;
  bool curvature = true;     // shrink of p and the normal update
  bool projection = true;    // projection onto q.mu = |q|, |mu| <= 1
  bool smoothUnknown = true; // r is part of the coupled solve
};

StepSchedule applyVariant(const DecompParams& params);

struct ResidualEntry {
  double relChangeR = 0.0;
  double relChangeV = 0.0;
};

struct DecompositionResult {
  Image2D v, w, n, u;
  int iterations = 0;
  std::vector<ResidualEntry> residualHistory;
  double elapsedSeconds = 0.0;
  std::vector<std::pair<int, double>> energyTrace;  // (iteration, energy)
  bool converged = false;  // stopped by the rho criterion
};

/// v0 = 0.001 G*f + 0.999*0.5, p0 = grad+ v0, r0 from f - v0 per
/// params.smoothInit (0 without the smooth unknown), s0 = 0, lambda0 per
/// params.lambdaInit.
SplitState initState(const Image2D& f, const DecompParams& params = {});

/// Runs the split scheme on an already padded image, one iteration per step().
class Decomposer {
 public:
  Decomposer(Image2D paddedInput, const DecompParams& params);

  /// Advances one full iteration and returns the relative changes of r and v.
  ResidualEntry step();

  const SplitState& state() const noexcept { return state_; }
  const Image2D& input() const noexcept { return f_; }
  int iterations() const noexcept { return iterations_; }
  const StepSchedule& schedule() const noexcept { return schedule_; }

 private:
  Image2D f_;
  DecompParams params_;
  StepSchedule schedule_;
  LambdaSymbols lambdaSymbols_;
  StepFourSymbols stepFourSymbols_;
  SplitState state_;
  int iterations_ = 0;
};

/// Pads f, iterates until the rho criterion or iterMax, crops every component.
DecompositionResult decompose(const Image2D& f, const DecompParams& params);

/// alpha_n by noise regime, sigma on the 0..255 scale: 10 below 20, 1e-2 below
/// 60, 1e-4 below 100. Sigma >= 100 is outside the calibrated range and sets
/// outOfCalibration; the high-noise value is returned.
double presetAlphaN(double sigma, bool* outOfCalibration = nullptr);

/// H^-1 seminorm squared of n: |grad+ phi|^2 summed, with div- grad+ phi = n - mean(n).
double hMinusOneNormSq(const Image2D& n);

/// Discrete objective: L0 count, curvature, squared Laplacian of w, H^-1 of n
/// and the quadratic fidelity term, each weighted by h^2. Terms a variant does
/// not use are omitted.
double energyEval(const Image2D& v, const Image2D& w, const Image2D& n, const Image2D& f,
                  const DecompParams& params);

}  // namespace tridecomp
