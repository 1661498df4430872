#include "tridecomp/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>

#include "tridecomp/errors.hpp"

namespace tridecomp {

namespace {

enum class PlanKind { Forward, Backward, RealForward, RealBackward };

// FFTW planning is not thread-safe; executing a plan on fresh buffers is.
// FFTW_ESTIMATE keeps the chosen algorithm, and therefore the rounding,
// identical across processes.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rows, int cols, PlanKind kind) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, kind);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    double* real = fftw_alloc_real(n);
    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::Forward:
        plan = fftw_plan_dft_2d(rows, cols, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
        break;
      case PlanKind::Backward:
        plan = fftw_plan_dft_2d(rows, cols, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
        break;
      case PlanKind::RealForward:
        plan = fftw_plan_dft_r2c_2d(rows, cols, real, a, FFTW_ESTIMATE);
        break;
      case PlanKind::RealBackward:
        plan = fftw_plan_dft_c2r_2d(rows, cols, a, real, FFTW_ESTIMATE);
        break;
    }
    fftw_free(a);
    fftw_free(b);
    fftw_free(real);
    return plans_[key] = plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, PlanKind>, fftw_plan> plans_;
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

void requireGrid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw DimensionError("right-hand side grid does not match symbol grid");
}

}  // namespace

ComplexGrid dft2(const Image2D& img) {
  const std::size_t n = img.size();
  ComplexBuffer in(fftw_alloc_complex(n));
  ComplexBuffer out(fftw_alloc_complex(n));
  for (std::size_t k = 0; k < n; ++k) {
    in[k][0] = img[k];
    in[k][1] = 0.0;
  }
  fftw_execute_dft(PlanCache::instance().get(img.rows(), img.cols(), PlanKind::Forward), in.get(),
                   out.get());
  ComplexGrid result(img.spec());
  for (std::size_t k = 0; k < n; ++k) result[k] = Complex(out[k][0], out[k][1]);
  return result;
}

Image2D idft2Real(const ComplexGrid& spectrum, double* maxImag) {
  const std::size_t n = spectrum.size();
  ComplexBuffer in(fftw_alloc_complex(n));
  ComplexBuffer out(fftw_alloc_complex(n));
  for (std::size_t k = 0; k < n; ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  const GridSpec& spec = spectrum.spec();
  fftw_execute_dft(PlanCache::instance().get(spec.rows, spec.cols, PlanKind::Backward), in.get(),
                   out.get());
  const double scale = 1.0 / static_cast<double>(n);
  Image2D result(spec);
  double imag = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    result[k] = out[k][0] * scale;
    imag = std::max(imag, std::abs(out[k][1]) * scale);
  }
  if (maxImag) *maxImag = imag;
  return result;
}

HalfSpectrum rdft2(const Image2D& img) {
  const GridSpec& spec = img.spec();
  HalfSpectrum result(spec);
  RealBuffer in(fftw_alloc_real(img.size()));
  ComplexBuffer out(fftw_alloc_complex(result.size()));
  std::copy(img.values().begin(), img.values().end(), in.get());
  fftw_execute_dft_r2c(PlanCache::instance().get(spec.rows, spec.cols, PlanKind::RealForward),
                       in.get(), out.get());
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = Complex(out[k][0], out[k][1]);
  return result;
}

Image2D irdft2(const HalfSpectrum& spectrum) {
  const GridSpec& spec = spectrum.spec();
  ComplexBuffer in(fftw_alloc_complex(spectrum.size()));
  RealBuffer out(fftw_alloc_real(spec.size()));
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  // c2r overwrites its input, which is a private copy here.
  fftw_execute_dft_c2r(PlanCache::instance().get(spec.rows, spec.cols, PlanKind::RealBackward),
                       in.get(), out.get());
  const double scale = 1.0 / static_cast<double>(spec.size());
  Image2D result(spec);
  for (std::size_t k = 0; k < result.size(); ++k) result[k] = out[k] * scale;
  return result;
}

double frequencyAngle(int index, int length) {
  return 2.0 * std::numbers::pi * static_cast<double>(index) / static_cast<double>(length);
}

LambdaSymbols buildLambdaSymbols(double gamma1, double c, const GridSpec& spec) {
  if (!(gamma1 > 0.0)) throw ParameterError("gamma1 must be positive");
  if (!(c >= 0.0)) throw ParameterError("frozen coefficient c must be non-negative");
  LambdaSymbols sym{spec, gamma1, c, {}, {}, {}, {}, {}};
  const int half = spec.cols / 2 + 1;
  const std::size_t n = static_cast<std::size_t>(spec.rows) * half;
  sym.a11.resize(n);
  sym.a12.resize(n);
  sym.a21.resize(n);
  sym.a22.resize(n);
  sym.det.resize(n);
  const double h2 = spec.h * spec.h;
  const Complex I(0.0, 1.0);
  for (int i = 0; i < spec.rows; ++i) {
    const double zeta = frequencyAngle(i, spec.rows);
    const Complex e1p = std::exp(I * zeta);  // symbol of S1+
    for (int j = 0; j < half; ++j) {
      const double eta = frequencyAngle(j, spec.cols);
      const Complex e2p = std::exp(I * eta);
      const std::size_t k = static_cast<std::size_t>(i) * half + j;
      sym.a11[k] = gamma1 - 2.0 * c * (std::cos(zeta) - 1.0) / h2;
      sym.a22[k] = gamma1 - 2.0 * c * (std::cos(eta) - 1.0) / h2;
      sym.a12[k] = c * (e1p - 1.0) * (std::conj(e2p) - 1.0) / h2;
      sym.a21[k] = c * (e2p - 1.0) * (std::conj(e1p) - 1.0) / h2;
      sym.det[k] = sym.a11[k] * sym.a22[k] - sym.a12[k] * sym.a21[k];
      if (!(std::abs(sym.det[k]) > 0.0)) throw ParameterError("singular lambda symbol");
    }
  }
  return sym;
}

VectorField2D solveLambdaSystem(const VectorField2D& b, const LambdaSymbols& sym) {
  requireGrid(b.spec(), sym.spec);
  const HalfSpectrum f1 = rdft2(b.x1);
  const HalfSpectrum f2 = rdft2(b.x2);
  HalfSpectrum l1(sym.spec);
  HalfSpectrum l2(sym.spec);
  for (std::size_t k = 0; k < l1.size(); ++k) {
    l1[k] = (sym.a22[k] * f1[k] - sym.a12[k] * f2[k]) / sym.det[k];
    l2[k] = (-sym.a21[k] * f1[k] + sym.a11[k] * f2[k]) / sym.det[k];
  }
  return {irdft2(l1), irdft2(l2)};
}

void StepFourParams::validate() const {
  if (!(tau > 0.0)) throw ParameterError("tau must be positive");
  if (!(gamma3 > 0.0)) throw ParameterError("gamma3 must be positive");
  if (!(alphaN > 0.0)) throw ParameterError("alphaN must be positive");
  if (!(kappa >= 0.0)) throw ParameterError("kappa must be non-negative");
  if (!dropSmooth) {
    if (!(gamma2 > 0.0)) throw ParameterError("gamma2 must be positive");
    if (!(alphaW > 0.0)) throw ParameterError("alphaW must be positive");
  }
}

Matrix4c stepFourMatrix(const StepFourParams& p, const GridSpec& spec, int i, int j) {
  const double h = spec.h;
  const double h2 = h * h;
  const double zeta = frequencyAngle(i, spec.rows);
  const double eta = frequencyAngle(j, spec.cols);
  const double cz = std::cos(zeta) - 1.0;
  const double ce = std::cos(eta) - 1.0;
  const Complex I(0.0, 1.0);
  const Complex e1p = std::exp(I * zeta);
  const Complex e2p = std::exp(I * eta);
  const Complex e1m = std::conj(e1p);
  const Complex e2m = std::conj(e2p);
  const double tau = p.tau;

  Matrix4c d{};
  auto at = [&d](int l, int m) -> Complex& { return d[4 * l + m]; };
  at(0, 0) = tau - 2.0 * cz / h2 - 2.0 * ce / h2;
  at(0, 1) = tau;
  at(0, 2) = tau * (1.0 - e1m) / h;
  at(0, 3) = tau * (1.0 - e2m) / h;
  at(1, 0) = tau;
  at(1, 1) = p.gamma2 + tau + 2.0 * tau * p.alphaW * 4.0 / (h2 * h2) * (cz * cz + 2.0 * cz * ce + ce * ce);
  at(1, 2) = at(0, 2);
  at(1, 3) = at(0, 3);
  at(2, 0) = -tau * (e1p - 1.0) / h;
  at(2, 1) = at(2, 0);
  at(2, 2) = p.gamma3 + 2.0 * tau * p.alphaN - 2.0 * tau * cz / h2;
  at(2, 3) = tau * (e1p - 1.0) * (e2m - 1.0) / h2;
  at(3, 0) = -tau * (e2p - 1.0) / h;
  at(3, 1) = at(3, 0);
  at(3, 2) = tau * (e2p - 1.0) * (e1m - 1.0) / h2;
  at(3, 3) = p.gamma3 + 2.0 * tau * p.alphaN - 2.0 * tau * ce / h2;
  for (int l = 0; l < 4; ++l) at(l, l) += p.kappa;

  if (p.dropSmooth) {
    for (int l = 0; l < 4; ++l) {
      at(1, l) = 0.0;
      at(l, 1) = 0.0;
    }
    at(1, 1) = 1.0;
  }
  return d;
}

namespace {

// Determinant of the k x k submatrix of m (stride 4) picked by rows/cols.
Complex minorDet(const Matrix4c& m, const int* rows, const int* cols, int k) {
  if (k == 1) return m[4 * rows[0] + cols[0]];
  if (k == 2) {
    return m[4 * rows[0] + cols[0]] * m[4 * rows[1] + cols[1]] -
           m[4 * rows[0] + cols[1]] * m[4 * rows[1] + cols[0]];
  }
  Complex det = 0.0;
  int sub_cols[4];
  for (int c = 0; c < k; ++c) {
    for (int t = 0, u = 0; t < k; ++t) {
      if (t != c) sub_cols[u++] = cols[t];
    }
    const Complex term = m[4 * rows[0] + cols[c]] * minorDet(m, rows + 1, sub_cols, k - 1);
    det += (c % 2 == 0) ? term : -term;
  }
  return det;
}

}  // namespace

Matrix4c invertCofactor(const Matrix4c& m, int n, Complex& det) {
  assert(n == 3 || n == 4);
  int all[4] = {0, 1, 2, 3};
  det = minorDet(m, all, all, n);
  Matrix4c inv{};
  int sub_rows[4];
  int sub_cols[4];
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (int t = 0, u = 0; t < n; ++t) {
        if (t != r) sub_rows[u++] = t;
      }
      for (int t = 0, u = 0; t < n; ++t) {
        if (t != c) sub_cols[u++] = t;
      }
      const Complex cof = minorDet(m, sub_rows, sub_cols, n - 1);
      // adjugate is the transposed cofactor matrix
      inv[4 * c + r] = ((r + c) % 2 == 0 ? cof : -cof) / det;
    }
  }
  return inv;
}

StepFourSymbols buildStepFourSymbols(const StepFourParams& params, const GridSpec& spec) {
  params.validate();
  const int half = spec.cols / 2 + 1;
  StepFourSymbols sym{spec, params, std::vector<Matrix4c>(static_cast<std::size_t>(spec.rows) * half)};
  // Unknown ordering (v, r, s1, s2); the reduced system keeps (v, s1, s2).
  static constexpr int kReduced[3] = {0, 2, 3};
  for (int i = 0; i < spec.rows; ++i) {
    for (int j = 0; j < half; ++j) {
      const Matrix4c d = stepFourMatrix(params, spec, i, j);
      Complex det;
      Matrix4c inv;
      if (params.dropSmooth) {
        Matrix4c packed{};
        for (int l = 0; l < 3; ++l) {
          for (int m = 0; m < 3; ++m) packed[4 * l + m] = d[4 * kReduced[l] + kReduced[m]];
        }
        const Matrix4c packed_inv = invertCofactor(packed, 3, det);
        inv = Matrix4c{};
        for (int l = 0; l < 3; ++l) {
          for (int m = 0; m < 3; ++m) inv[4 * kReduced[l] + kReduced[m]] = packed_inv[4 * l + m];
        }
      } else {
        inv = invertCofactor(d, 4, det);
      }
      if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det))) {
        throw ParameterError("singular step-four symbol at frequency (" + std::to_string(i) + ", " +
                             std::to_string(j) + ")");
      }
      sym.inverse[static_cast<std::size_t>(i) * half + j] = inv;
    }
  }
  return sym;
}

StepFourSolution solveStepFour(const Image2D& b1, const Image2D& b2, const Image2D& b3,
                               const Image2D& b4, const StepFourSymbols& sym) {
  requireGrid(b1.spec(), sym.spec);
  requireGrid(b3.spec(), sym.spec);
  requireGrid(b4.spec(), sym.spec);
  const bool reduced = sym.params.dropSmooth;
  if (!reduced) requireGrid(b2.spec(), sym.spec);
  const HalfSpectrum f1 = rdft2(b1);
  const HalfSpectrum f2 = reduced ? HalfSpectrum(sym.spec) : rdft2(b2);
  const HalfSpectrum f3 = rdft2(b3);
  const HalfSpectrum f4 = rdft2(b4);

  HalfSpectrum out[4] = {HalfSpectrum(sym.spec), HalfSpectrum(sym.spec), HalfSpectrum(sym.spec),
                         HalfSpectrum(sym.spec)};
  for (std::size_t k = 0; k < f1.size(); ++k) {
    const Matrix4c& inv = sym.inverse[k];
    const Complex rhs[4] = {f1[k], f2[k], f3[k], f4[k]};
    for (int l = 0; l < 4; ++l) {
      out[l][k] = inv[4 * l] * rhs[0] + inv[4 * l + 1] * rhs[1] + inv[4 * l + 2] * rhs[2] +
                  inv[4 * l + 3] * rhs[3];
    }
  }

  StepFourSolution sol;
  sol.v = irdft2(out[0]);
  sol.r = reduced ? Image2D(sym.spec) : irdft2(out[1]);
  sol.s1 = irdft2(out[2]);
  sol.s2 = irdft2(out[3]);
  return sol;
}

}  // namespace tridecomp
