#pragma once

#include <array>
#include <complex>
#include <vector>

#include "tridecomp/grid.hpp"

namespace tridecomp {

using Complex = std::complex<double>;

/// Complex value per frequency (i, j), laid out like Image2D.
class ComplexGrid {
 public:
  ComplexGrid() = default;
  explicit ComplexGrid(const GridSpec& spec) : spec_(spec), values_(spec.size()) {}

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return values_.size(); }
  Complex& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * spec_.cols + j]; }
  Complex operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * spec_.cols + j]; }
  Complex& operator[](std::size_t k) { return values_[k]; }
  Complex operator[](std::size_t k) const { return values_[k]; }
  Complex* data() noexcept { return values_.data(); }
  const Complex* data() const noexcept { return values_.data(); }

 private:
  GridSpec spec_;
  std::vector<Complex> values_;
};

/// Non-redundant half of the spectrum of a real M x N image: frequencies
/// (i, j) with 0 <= j <= N/2. The rest follows from conjugate symmetry.
class HalfSpectrum {
 public:
  HalfSpectrum() = default;
  explicit HalfSpectrum(const GridSpec& spec)
      : spec_(spec), cols_(spec.cols / 2 + 1), values_(static_cast<std::size_t>(spec.rows) * cols_) {}

  const GridSpec& spec() const noexcept { return spec_; }  // of the real image
  int rows() const noexcept { return spec_.rows; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  Complex& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * cols_ + j]; }
  Complex operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * cols_ + j]; }
  Complex& operator[](std::size_t k) { return values_[k]; }
  Complex operator[](std::size_t k) const { return values_[k]; }
  Complex* data() noexcept { return values_.data(); }
  const Complex* data() const noexcept { return values_.data(); }

 private:
  GridSpec spec_;
  int cols_ = 0;
  std::vector<Complex> values_;
};

/// Same transform as dft2, restricted to the half spectrum.
HalfSpectrum rdft2(const Image2D& img);
/// Inverse of rdft2, scaled by 1/(MN).
Image2D irdft2(const HalfSpectrum& spectrum);

/// Unnormalized forward DFT: F(f)(k,l) = sum f(i,j) exp(-2 pi sqrt(-1) (ik/M + jl/N)).
/// With this sign, F(S1+ f) = exp(+2 pi sqrt(-1) k/M) F(f).
ComplexGrid dft2(const Image2D& img);
/// Inverse DFT scaled by 1/(MN), keeping the real part. If maxImag is given,
/// it receives the largest dropped imaginary magnitude.
Image2D idft2Real(const ComplexGrid& spectrum, double* maxImag = nullptr);

/// Per-frequency angles zeta_i = 2 pi i / M and eta_j = 2 pi j / N (zero-based).
double frequencyAngle(int index, int length);

/// Symbol of (gamma1 - c grad+ div-) on vector fields, stored on the half
/// spectrum.
struct LambdaSymbols {
  GridSpec spec;
  double gamma1 = 1.0;
  double c = 0.0;
  std::vector<Complex> a11, a12, a21, a22, det;
};

LambdaSymbols buildLambdaSymbols(double gamma1, double c, const GridSpec& spec);

/// Solves (gamma1 - c grad+ div-) lambda = b.
VectorField2D solveLambdaSystem(const VectorField2D& b, const LambdaSymbols& sym);

/// Coefficients of the coupled (v, r, s1, s2) system. With dropSmooth the r
/// unknown is removed and the system reduces to (v, s1, s2); gamma2 and
/// alphaW are then unused.
struct StepFourParams {
  double tau = 0.1;
  double gamma2 = 0.01;
  double gamma3 = 20.0;
  double alphaW = 1.0;
  double alphaN = 1.0;
  double kappa = 1e-9;
  bool dropSmooth = false;

  void validate() const;
};

using Matrix4c = std::array<Complex, 16>;  // row-major

/// The 4x4 Fourier block D at frequency (i, j), kappa already on the diagonal.
/// For dropSmooth, row/column 2 is replaced by identity.
Matrix4c stepFourMatrix(const StepFourParams& params, const GridSpec& spec, int i, int j);

/// Inverse of an n x n (n = 3 or 4) block by cofactor expansion; returns the
/// determinant through det.
Matrix4c invertCofactor(const Matrix4c& m, int n, Complex& det);

/// Per-frequency inverses of D on the half spectrum, built once and reused
/// every iteration.
struct StepFourSymbols {
  GridSpec spec;
  StepFourParams params;
  std::vector<Matrix4c> inverse;
};

StepFourSymbols buildStepFourSymbols(const StepFourParams& params, const GridSpec& spec);

struct StepFourSolution {
  Image2D v, r, s1, s2;
};

/// Solves A [v r s1 s2]^T = [b1 b2 b3 b4]^T in frequency space. b2 is ignored
/// (and r returned as zero) when the symbols were built with dropSmooth.
StepFourSolution solveStepFour(const Image2D& b1, const Image2D& b2, const Image2D& b3,
                               const Image2D& b4, const StepFourSymbols& sym);

}  // namespace tridecomp
