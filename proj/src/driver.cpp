#include "tridecomp/driver.hpp"

#include <chrono>
#include <cmath>

#include "tridecomp/errors.hpp"

namespace tridecomp {

std::string_view toString(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::Proposed:
      return "proposed";
    case ModelVariant::ModelI:
      return "model1";
    case ModelVariant::ModelII:
      return "model2";
    case ModelVariant::ModelIII:
      return "model3";
  }
  return "proposed";
}

std::optional<ModelVariant> parseVariant(std::string_view name) {
  for (ModelVariant v : {ModelVariant::Proposed, ModelVariant::ModelI, ModelVariant::ModelII,
                         ModelVariant::ModelIII}) {
    if (toString(v) == name) return v;
  }
  return std::nullopt;
}

void DecompParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError(std::string(name) + " must be positive");
  };
  positive(alpha0, "alpha0");
  positive(alphaCurv, "alphaCurv");
  positive(alphaW, "alphaW");
  positive(alphaN, "alphaN");
  positive(tau, "tau");
  positive(gamma1, "gamma1");
  positive(gamma2, "gamma2");
  positive(gamma3, "gamma3");
  positive(rho, "rho");
  positive(gaussianSigma, "gaussianSigma");
  if (!(c >= 0.0)) throw ParameterError("c must be non-negative");
  if (!(kappa >= 0.0)) throw ParameterError("kappa must be non-negative");
  if (iterMax < 0) throw ParameterError("iterMax must be non-negative");
  if (padWidth < 0) throw ParameterError("padWidth must be non-negative");
  projection.validate();
}

StepFourParams DecompParams::stepFourParams() const {
  StepFourParams p;
  p.tau = tau;
  p.gamma2 = gamma2;
  p.gamma3 = gamma3;
  p.alphaW = alphaW;
  p.alphaN = alphaN;
  p.kappa = kappa;
  p.dropSmooth = !applyVariant(*this).smoothUnknown;
  return p;
}

StepSchedule applyVariant(const DecompParams& params) {
  StepSchedule s;
  switch (params.variant) {
    case ModelVariant::Proposed:
      break;
    case ModelVariant::ModelI:
      s.curvature = false;
      s.projection = false;
      s.smoothUnknown = false;
      break;
    case ModelVariant::ModelII:
      s.curvature = false;
      s.projection = false;
      break;
    case ModelVariant::ModelIII:
      s.smoothUnknown = false;
      break;
  }
  return s;
}

SplitState initState(const Image2D& f, const DecompParams& params) {
  SplitState st;
  st.v = gaussianSmooth(f, params.gaussianSigma);
  for (std::size_t k = 0; k < st.v.size(); ++k) st.v[k] = 0.001 * st.v[k] + 0.999 * 0.5;
  st.p = gradForward(st.v);
  st.lambda = VectorField2D(f.spec());
  if (params.lambdaInit == LambdaInit::Aligned) {
    const Image2D mag = st.p.magnitude();
    for (std::size_t k = 0; k < mag.size(); ++k) {
      if (mag[k] > 0.0) {
        st.lambda.x1[k] = st.p.x1[k] / mag[k];
        st.lambda.x2[k] = st.p.x2[k] / mag[k];
      }
    }
  }
  st.s = VectorField2D(f.spec());
  st.r = Image2D(f.spec());
  if (applyVariant(params).smoothUnknown) {
    st.r = f - st.v;
    if (params.smoothInit == SmoothInit::ZeroMean) {
      const double mean = st.r.mean();
      for (double& x : st.r.values()) x -= mean;
    }
  }
  return st;
}

Decomposer::Decomposer(Image2D paddedInput, const DecompParams& params)
    : f_(std::move(paddedInput)), params_(params), schedule_(applyVariant(params)) {
  params_.validate();
  if (!f_.allFinite()) throw ParameterError("input image contains non-finite values");
  if (schedule_.curvature) lambdaSymbols_ = buildLambdaSymbols(params_.gamma1, params_.c, f_.spec());
  stepFourSymbols_ = buildStepFourSymbols(params_.stepFourParams(), f_.spec());
  state_ = initState(f_, params_);
}

namespace {

double relativeChange(const Image2D& next, const Image2D& prev) {
  return (next - prev).norm() / (prev.norm() + 1e-12);
}

}  // namespace

ResidualEntry Decomposer::step() {
  const double tau = params_.tau;
  const int k = iterations_ + 1;
  SplitState st = state_;

  // Step 1: L0 threshold on p.
  st.p = thresholdL0(st.p, tau, params_.alpha0);

  // Step 2: curvature shrink of p, then the frozen-coefficient normal update.
  if (schedule_.curvature) {
    st.p = curvatureShrink(st.p, st.lambda, tau, params_.alphaCurv);
    st.lambda = lambdaUpdate(st.p, st.lambda, tau, params_.alphaCurv, lambdaSymbols_);
  }

  // Step 3: projection of (p, lambda).
  if (schedule_.projection) {
    ProjectionConfig cfg = params_.projection;
    cfg.gamma1 = params_.gamma1;
    ProjectedPair proj = projectS(st.p, st.lambda, cfg);
    st.p = std::move(proj.p);
    st.lambda = std::move(proj.lambda);
  }

  // Step 4: coupled solve for (v, r, s), then p = grad+ v.
  st = stepFour(st, f_, stepFourSymbols_);

  if (!st.allFinite()) throw DivergenceError(k, "non-finite value in the iterate");

  ResidualEntry entry{relativeChange(st.r, state_.r), relativeChange(st.v, state_.v)};
  state_ = std::move(st);
  iterations_ = k;
  return entry;
}

DecompositionResult decompose(const Image2D& f, const DecompParams& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  Decomposer solver(padSymmetric(f, params.padWidth), params);

  DecompositionResult result;
  auto sampleEnergy = [&](int iteration) {
    const SplitState& st = solver.state();
    result.energyTrace.emplace_back(
        iteration, energyEval(st.v, st.r, divBackward(st.s), solver.input(), params));
  };
  if (params.traceEnergy) sampleEnergy(0);

  for (int k = 1; k <= params.iterMax; ++k) {
    const ResidualEntry entry = solver.step();
    result.residualHistory.push_back(entry);
    if (params.traceEnergy && k % 10 == 0) sampleEnergy(k);
    if (std::max(entry.relChangeR, entry.relChangeV) < params.rho) {
      result.converged = true;
      break;
    }
  }

  const SplitState& st = solver.state();
  result.iterations = solver.iterations();
  result.v = cropPad(st.v, params.padWidth);
  result.w = cropPad(st.r, params.padWidth);
  result.n = cropPad(divBackward(st.s), params.padWidth);
  result.u = result.v + result.w;
  result.elapsedSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double presetAlphaN(double sigma, bool* outOfCalibration) {
  if (!(sigma >= 0.0)) throw ParameterError("noise sigma must be non-negative");
  if (outOfCalibration) *outOfCalibration = sigma >= 100.0;
  if (sigma < 20.0) return 10.0;
  if (sigma < 60.0) return 1e-2;
  return 1e-4;
}

double hMinusOneNormSq(const Image2D& n) {
  const GridSpec& spec = n.spec();
  ComplexGrid spectrum = dft2(n);
  const double h2 = spec.h * spec.h;
  // phi_hat = n_hat / symbol(laplacian); |grad+ phi|^2 = -<phi, n>.
  double total = 0.0;
  for (int i = 0; i < spec.rows; ++i) {
    const double cz = std::cos(frequencyAngle(i, spec.rows)) - 1.0;
    for (int j = 0; j < spec.cols; ++j) {
      if (i == 0 && j == 0) continue;
      const double ce = std::cos(frequencyAngle(j, spec.cols)) - 1.0;
      const double symbol = 2.0 * (cz + ce) / h2;
      total += std::norm(spectrum(i, j)) / -symbol;
    }
  }
  // Parseval for the unnormalized transform.
  return total / static_cast<double>(n.size());
}

double energyEval(const Image2D& v, const Image2D& w, const Image2D& n, const Image2D& f,
                  const DecompParams& params) {
  const StepSchedule schedule = applyVariant(params);
  const double area = v.spec().h * v.spec().h;
  const VectorField2D q = gradForward(v);
  const Image2D mag = q.magnitude();

  double nonzero = 0.0;
  for (double m : mag.values()) nonzero += m > 0.0 ? 1.0 : 0.0;
  double energy = params.alpha0 * nonzero * area;

  if (schedule.curvature) {
    VectorField2D normal(v.spec());
    for (std::size_t k = 0; k < mag.size(); ++k) {
      if (mag[k] > 0.0) {
        normal.x1[k] = q.x1[k] / mag[k];
        normal.x2[k] = q.x2[k] / mag[k];
      }
    }
    const Image2D curv = divBackward(normal);
    double acc = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) acc += curv[k] * curv[k] * mag[k];
    energy += params.alphaCurv * acc * area;
  }
  if (schedule.smoothUnknown) {
    const Image2D lap = laplacian(w);
    energy += params.alphaW * dot(lap, lap) * area;
  }
  energy += params.alphaN * hMinusOneNormSq(n) * area;

  Image2D residual = f - v;
  residual -= w;
  residual -= n;
  energy += 0.5 * dot(residual, residual) * area;
  return energy;
}

}  // namespace tridecomp
