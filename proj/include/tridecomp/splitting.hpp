#pragma once

#include <array>

#include "tridecomp/grid.hpp"
#include "tridecomp/spectral.hpp"

namespace tridecomp {

/// Iterate of the split scheme. p is the gradient surrogate, lambda the unit
/// normal surrogate, r the smooth part, s the potential of the oscillatory
/// part and v the structure image.
struct SplitState {
  VectorField2D p;
  VectorField2D lambda;
  Image2D r;
  VectorField2D s;
  Image2D v;

  const GridSpec& spec() const noexcept { return v.spec(); }
  bool allFinite() const noexcept {
    return p.allFinite() && lambda.allFinite() && r.allFinite() && s.allFinite() && v.allFinite();
  }
  bool operator==(const SplitState&) const = default;
};

/// Hard threshold of the L0 step: zero where |p|^2 <= tau*alpha0/2.
VectorField2D thresholdL0(const VectorField2D& p, double tau, double alpha0);

/// Soft shrink of |p| by tau*alphaCurv*|div- lambda|^2, keeping direction.
VectorField2D curvatureShrink(const VectorField2D& p, const VectorField2D& lambda, double tau,
                              double alphaCurv);

/// Right-hand side of the frozen-coefficient normal update:
/// gamma1 lambda - c grad+(div- lambda) + 2 tau alphaCurv grad+(|p| div- lambda).
VectorField2D lambdaRhs(const VectorField2D& p, const VectorField2D& lambda, double tau,
                        double alphaCurv, double gamma1, double c);

VectorField2D lambdaUpdate(const VectorField2D& p, const VectorField2D& lambda, double tau,
                           double alphaCurv, const LambdaSymbols& sym);
VectorField2D lambdaUpdate(const VectorField2D& p, const VectorField2D& lambda, double tau,
                           double alphaCurv, double gamma1, double c);

struct ProjectionConfig {
  double epsilon = 1e-6;
  int maxFixedPointIters = 50;
  double gamma1 = 1.0;

  void validate() const;
};

/// |q - y|^2 + gamma1 |mu - w|^2 at one pixel.
double projectionObjective(std::array<double, 2> q, std::array<double, 2> mu,
                           std::array<double, 2> y, std::array<double, 2> w, double gamma1);

struct PixelProjection {
  std::array<double, 2> p{};
  std::array<double, 2> lambda{};
  double objective = 0.0;
  bool fromUnitBranch = false;  // true when the |mu| = 1, q != 0 candidate won
  int fixedPointIters = 0;
};

/// Nearest point of {(q, mu) : q.mu = |q|, |mu| <= 1} to (y, w) in the
/// gamma1-weighted metric.
PixelProjection projectPixel(std::array<double, 2> y, std::array<double, 2> w,
                             const ProjectionConfig& cfg);

struct ProjectedPair {
  VectorField2D p;
  VectorField2D lambda;
};

ProjectedPair projectS(const VectorField2D& p, const VectorField2D& lambda, const ProjectionConfig& cfg);

struct StepFourRhs {
  Image2D b1, b2, b3, b4;
};

/// b1 = -div- p + tau f, b2 = gamma2 r + tau f, b3,4 = gamma3 s - tau grad+ f.
StepFourRhs stepFourRhs(const SplitState& state, const Image2D& f, const StepFourParams& params);

/// Coupled (v, r, s) solve; returns p = grad+ v and carries lambda over.
SplitState stepFour(const SplitState& state, const Image2D& f, const StepFourSymbols& sym);

}  // namespace tridecomp
