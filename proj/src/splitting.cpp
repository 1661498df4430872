#include "tridecomp/splitting.hpp"

#include <algorithm>
#include <cmath>

#include "tridecomp/errors.hpp"

namespace tridecomp {

namespace {

// Values here are O(1); the overflow guard of hypot is not needed.
inline double norm2(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

VectorField2D thresholdL0(const VectorField2D& p, double tau, double alpha0) {
  if (!(tau > 0.0) || !(alpha0 > 0.0)) throw ParameterError("tau and alpha0 must be positive");
  const double threshold = 0.5 * tau * alpha0;
  VectorField2D out = p;
  for (std::size_t k = 0; k < out.x1.size(); ++k) {
    if (p.x1[k] * p.x1[k] + p.x2[k] * p.x2[k] <= threshold) {
      out.x1[k] = 0.0;
      out.x2[k] = 0.0;
    }
  }
  return out;
}

VectorField2D curvatureShrink(const VectorField2D& p, const VectorField2D& lambda, double tau,
                              double alphaCurv) {
  if (!(tau > 0.0) || !(alphaCurv > 0.0)) throw ParameterError("tau and alphaCurv must be positive");
  const Image2D curvature = divBackward(lambda);
  VectorField2D out(p.spec());
  for (std::size_t k = 0; k < out.x1.size(); ++k) {
    const double mag = norm2(p.x1[k], p.x2[k]);
    if (mag == 0.0) continue;
    const double factor = std::max(0.0, 1.0 - tau * alphaCurv * curvature[k] * curvature[k] / mag);
    out.x1[k] = factor * p.x1[k];
    out.x2[k] = factor * p.x2[k];
  }
  return out;
}

VectorField2D lambdaRhs(const VectorField2D& p, const VectorField2D& lambda, double tau,
                        double alphaCurv, double gamma1, double c) {
  const Image2D div = divBackward(lambda);
  Image2D weighted = p.magnitude();
  for (std::size_t k = 0; k < weighted.size(); ++k) weighted[k] *= div[k];
  const VectorField2D grad_div = gradForward(div);
  const VectorField2D grad_weighted = gradForward(weighted);
  const double curv = 2.0 * tau * alphaCurv;
  VectorField2D b(p.spec());
  for (std::size_t k = 0; k < b.x1.size(); ++k) {
    b.x1[k] = gamma1 * lambda.x1[k] - c * grad_div.x1[k] + curv * grad_weighted.x1[k];
    b.x2[k] = gamma1 * lambda.x2[k] - c * grad_div.x2[k] + curv * grad_weighted.x2[k];
  }
  return b;
}

VectorField2D lambdaUpdate(const VectorField2D& p, const VectorField2D& lambda, double tau,
                           double alphaCurv, const LambdaSymbols& sym) {
  if (!(tau > 0.0) || !(alphaCurv > 0.0)) throw ParameterError("tau and alphaCurv must be positive");
  return solveLambdaSystem(lambdaRhs(p, lambda, tau, alphaCurv, sym.gamma1, sym.c), sym);
}

VectorField2D lambdaUpdate(const VectorField2D& p, const VectorField2D& lambda, double tau,
                           double alphaCurv, double gamma1, double c) {
  return lambdaUpdate(p, lambda, tau, alphaCurv, buildLambdaSymbols(gamma1, c, p.spec()));
}

void ProjectionConfig::validate() const {
  if (!(epsilon > 0.0)) throw ParameterError("projection epsilon must be positive");
  if (maxFixedPointIters < 1) throw ParameterError("maxFixedPointIters must be positive");
  if (!(gamma1 > 0.0)) throw ParameterError("gamma1 must be positive");
}

double projectionObjective(std::array<double, 2> q, std::array<double, 2> mu,
                           std::array<double, 2> y, std::array<double, 2> w, double gamma1) {
  const double dq1 = q[0] - y[0];
  const double dq2 = q[1] - y[1];
  const double dm1 = mu[0] - w[0];
  const double dm2 = mu[1] - w[1];
  return dq1 * dq1 + dq2 * dq2 + gamma1 * (dm1 * dm1 + dm2 * dm2);
}

namespace {

constexpr double kDegenerate = 1e-12;

}  // namespace

PixelProjection projectPixel(std::array<double, 2> y, std::array<double, 2> w,
                             const ProjectionConfig& cfg) {
  const double g1 = cfg.gamma1;

  // q = 0 branch: project w onto the unit disc.
  PixelProjection zero;
  const double w_norm = norm2(w[0], w[1]);
  const double shrink = std::max(1.0, w_norm);
  zero.lambda = {w[0] / shrink, w[1] / shrink};
  zero.objective = projectionObjective(zero.p, zero.lambda, y, w, g1);

  // |mu| = 1 branch: fixed point on theta = |q|, started at |y|.
  double theta = norm2(y[0], y[1]);
  int iters = 0;
  bool degenerate = false;
  for (; iters < cfg.maxFixedPointIters; ++iters) {
    const double z1 = theta * y[0] + g1 * w[0];
    const double z2 = theta * y[1] + g1 * w[1];
    const double z_norm = norm2(z1, z2);
    if (z_norm < kDegenerate) {
      degenerate = true;
      break;
    }
    const double next = std::max(0.0, (y[0] * z1 + y[1] * z2) / z_norm);
    const double step = std::abs(next - theta);
    theta = next;
    if (step < cfg.epsilon) {
      ++iters;
      break;
    }
  }
  if (degenerate) return zero;

  const double z1 = theta * y[0] + g1 * w[0];
  const double z2 = theta * y[1] + g1 * w[1];
  const double z_norm = norm2(z1, z2);
  if (z_norm < kDegenerate) return zero;

  PixelProjection unit;
  unit.lambda = {z1 / z_norm, z2 / z_norm};
  unit.p = {theta * unit.lambda[0], theta * unit.lambda[1]};
  unit.objective = projectionObjective(unit.p, unit.lambda, y, w, g1);
  unit.fromUnitBranch = true;
  unit.fixedPointIters = iters;

  zero.fixedPointIters = iters;
  return zero.objective <= unit.objective ? zero : unit;
}

ProjectedPair projectS(const VectorField2D& p, const VectorField2D& lambda, const ProjectionConfig& cfg) {
  cfg.validate();
  ProjectedPair out{VectorField2D(p.spec()), VectorField2D(p.spec())};
  for (std::size_t k = 0; k < p.x1.size(); ++k) {
    const PixelProjection px = projectPixel({p.x1[k], p.x2[k]}, {lambda.x1[k], lambda.x2[k]}, cfg);
    out.p.x1[k] = px.p[0];
    out.p.x2[k] = px.p[1];
    out.lambda.x1[k] = px.lambda[0];
    out.lambda.x2[k] = px.lambda[1];
  }
  return out;
}

StepFourRhs stepFourRhs(const SplitState& state, const Image2D& f, const StepFourParams& params) {
  const double tau = params.tau;
  StepFourRhs rhs;
  rhs.b1 = divBackward(state.p);
  rhs.b1 *= -1.0;
  rhs.b1 += tau * f;
  if (params.dropSmooth) {
    rhs.b2 = Image2D(f.spec());
  } else {
    rhs.b2 = params.gamma2 * state.r;
    rhs.b2 += tau * f;
  }
  const VectorField2D grad_f = gradForward(f);
  rhs.b3 = params.gamma3 * state.s.x1;
  rhs.b3 -= tau * grad_f.x1;
  rhs.b4 = params.gamma3 * state.s.x2;
  rhs.b4 -= tau * grad_f.x2;
  return rhs;
}

SplitState stepFour(const SplitState& state, const Image2D& f, const StepFourSymbols& sym) {
  if (!(f.spec() == state.spec())) throw DimensionError("image and state grids differ");
  const StepFourRhs rhs = stepFourRhs(state, f, sym.params);
  StepFourSolution sol = solveStepFour(rhs.b1, rhs.b2, rhs.b3, rhs.b4, sym);
  SplitState next;
  next.p = gradForward(sol.v);
  next.lambda = state.lambda;
  next.r = std::move(sol.r);
  next.s = VectorField2D(std::move(sol.s1), std::move(sol.s2));
  next.v = std::move(sol.v);
  return next;
}

}  // namespace tridecomp
