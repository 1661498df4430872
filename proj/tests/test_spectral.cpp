#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "support.hpp"
#include "tridecomp/errors.hpp"
#include "tridecomp/spectral.hpp"

using namespace tridecomp;
using testutil::randomField;
using testutil::randomImage;
using testutil::relErr;

namespace {

double maxAbsDiff(const ComplexGrid& a, const ComplexGrid& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double fieldRelErr(const VectorField2D& a, const VectorField2D& b) {
  const double num = std::sqrt(std::pow((a.x1 - b.x1).norm(), 2) + std::pow((a.x2 - b.x2).norm(), 2));
  const double den = std::sqrt(std::pow(b.x1.norm(), 2) + std::pow(b.x2.norm(), 2));
  return num / std::max(den, 1e-300);
}

StepFourParams randomParams(std::uint64_t seed, bool dropSmooth) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StepFourParams p;
  p.tau = 0.05 + 0.2 * u(rng);
  p.gamma2 = 0.005 + 0.05 * u(rng);
  p.gamma3 = 1.0 + 30.0 * u(rng);
  p.alphaW = 0.5 + 100.0 * u(rng);
  p.alphaN = 1e-4 + 10.0 * u(rng);
  p.kappa = 1e-9;
  p.dropSmooth = dropSmooth;
  return p;
}

}  // namespace

TEST_CASE("DFT round trip and DC of a constant") {
  const Image2D c(GridSpec(6, 10), 0.7);
  const ComplexGrid spec = dft2(c);
  CHECK(std::abs(spec(0, 0) - Complex(42.0, 0.0)) < 1e-12);
  for (std::size_t k = 1; k < spec.size(); ++k) CHECK(std::abs(spec[k]) < 1e-12);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Image2D f = randomImage(GridSpec(8, 6 + seed), seed);
    double imag = 1.0;
    CHECK(relErr(idft2Real(dft2(f), &imag), f) < 1e-12);
    CHECK(imag < 1e-12);
    CHECK(relErr(irdft2(rdft2(f)), f) < 1e-12);
  }
}

TEST_CASE("impulse has a flat magnitude spectrum") {
  Image2D f(GridSpec(8, 8));
  f(3, 5) = 1.0;
  const ComplexGrid spec = dft2(f);
  for (std::size_t k = 0; k < spec.size(); ++k) CHECK(std::abs(spec[k]) == doctest::Approx(1.0));
}

TEST_CASE("half spectrum agrees with the full transform") {
  const Image2D f = randomImage(GridSpec(7, 9), 11);
  const ComplexGrid full = dft2(f);
  const HalfSpectrum half = rdft2(f);
  REQUIRE(half.cols() == 5);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < half.cols(); ++j) CHECK(std::abs(half(i, j) - full(i, j)) < 1e-12);
}

TEST_CASE("shift symbol: F(S1+ f) = exp(+i zeta) F(f)") {
  const GridSpec g(8, 8);
  const Image2D f = randomImage(g, 5);
  Image2D shifted(g), shifted2(g);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      shifted(i, j) = f((i + 1) % 8, j);
      shifted2(i, j) = f(i, (j + 1) % 8);
    }
  const ComplexGrid a = dft2(f);
  ComplexGrid expect1(g), expect2(g);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      expect1(i, j) = std::polar(1.0, frequencyAngle(i, 8)) * a(i, j);
      expect2(i, j) = std::polar(1.0, frequencyAngle(j, 8)) * a(i, j);
    }
  CHECK(maxAbsDiff(dft2(shifted), expect1) < 1e-12);
  CHECK(maxAbsDiff(dft2(shifted2), expect2) < 1e-12);
  CHECK(frequencyAngle(2, 8) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("lambda symbols reduce to gamma1 at DC and for c = 0") {
  const GridSpec g(6, 8);
  const LambdaSymbols s0 = buildLambdaSymbols(2.5, 0.0, g);
  for (std::size_t k = 0; k < s0.a11.size(); ++k) {
    CHECK(std::abs(s0.a11[k] - 2.5) < 1e-15);
    CHECK(std::abs(s0.a22[k] - 2.5) < 1e-15);
    CHECK(std::abs(s0.a12[k]) < 1e-15);
    CHECK(std::abs(s0.a21[k]) < 1e-15);
  }
  const LambdaSymbols s1 = buildLambdaSymbols(1.0, 0.3, g);
  CHECK(std::abs(s1.a11[0] - 1.0) < 1e-15);
  CHECK(std::abs(s1.a12[0]) < 1e-15);
  CHECK_THROWS_AS(buildLambdaSymbols(0.0, 0.1, g), ParameterError);
  CHECK_THROWS_AS(buildLambdaSymbols(1.0, -0.1, g), ParameterError);
}

TEST_CASE("lambda symbols are eigenvalues of the dense operator") {
  const GridSpec g(8, 8);
  const double gamma1 = 1.3, c = 0.7;
  const LambdaSymbols sym = buildLambdaSymbols(gamma1, c, g);
  const oracle::DenseOperator op = oracle::lambdaOperator(g, gamma1, c);
  const int half = g.cols / 2 + 1;
  for (auto [i, j] : {std::pair{1, 2}, std::pair{3, 0}, std::pair{5, 4}, std::pair{7, 3}}) {
    // Apply the dense operator to the Fourier mode e_k(x) = exp(i(zeta x1 + eta x2)) in channel m.
    Eigen::VectorXcd mode(g.size());
    for (int x = 0; x < 8; ++x)
      for (int y = 0; y < 8; ++y)
        mode(x * 8 + y) = std::polar(1.0, frequencyAngle(i, 8) * x + frequencyAngle(j, 8) * y);
    const Complex* entries[2][2] = {{&sym.a11[i * half + j], &sym.a12[i * half + j]},
                                    {&sym.a21[i * half + j], &sym.a22[i * half + j]}};
    for (int m = 0; m < 2; ++m) {
      Eigen::VectorXcd in = Eigen::VectorXcd::Zero(2 * g.size());
      in.segment(m * g.size(), g.size()) = mode;
      const Eigen::VectorXcd out = op.matrix.cast<Complex>() * in;
      for (int l = 0; l < 2; ++l) {
        const Eigen::VectorXcd expect = *entries[l][m] * mode;
        CHECK((out.segment(l * g.size(), g.size()) - expect).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("lambda solve: trivial right-hand sides") {
  const GridSpec g(8, 8);
  const LambdaSymbols sym = buildLambdaSymbols(2.0, 0.5, g);
  const VectorField2D zero(g);
  CHECK(solveLambdaSystem(zero, sym).x1.maxAbs() == 0.0);
  const VectorField2D b(Image2D(g, 0.4), Image2D(g, -1.0));
  const VectorField2D x = solveLambdaSystem(b, sym);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(x.x1[k] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(x.x2[k] == doctest::Approx(-0.5).epsilon(1e-12));
  }
}

TEST_CASE("property: lambda solve matches the dense solve") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GridSpec g(4 + seed % 5, 4 + (seed * 3) % 5);
    const double gamma1 = 0.5 + 0.1 * (seed % 7);
    const double c = (seed % 3 == 0) ? 0.0 : 0.2 * (seed % 5);
    const VectorField2D b = randomField(g, seed);
    const VectorField2D spectral = solveLambdaSystem(b, buildLambdaSymbols(gamma1, c, g));
    const VectorField2D dense = oracle::denseLambdaSolve(b, gamma1, c);
    CHECK(fieldRelErr(spectral, dense) < 1e-10);
  }
}

TEST_CASE("property: lambda solve is linear") {
  const GridSpec g(8, 8);
  const LambdaSymbols sym = buildLambdaSymbols(1.0, 0.4, g);
  const VectorField2D a = randomField(g, 1), b = randomField(g, 2);
  const VectorField2D combo(2.0 * a.x1 - 3.0 * b.x1 + Image2D(g), 2.0 * a.x2 - 3.0 * b.x2 + Image2D(g));
  const VectorField2D sa = solveLambdaSystem(a, sym), sb = solveLambdaSystem(b, sym);
  const VectorField2D expect(2.0 * sa.x1 - 3.0 * sb.x1 + Image2D(g), 2.0 * sa.x2 - 3.0 * sb.x2 + Image2D(g));
  CHECK(fieldRelErr(solveLambdaSystem(combo, sym), expect) < 1e-10);
}

TEST_CASE("step-four symbol at DC") {
  StepFourParams p;
  p.tau = 0.1;
  p.gamma2 = 0.01;
  p.gamma3 = 20.0;
  p.alphaW = 80.0;
  p.alphaN = 0.5;
  p.kappa = 1e-9;
  const Matrix4c d = stepFourMatrix(p, GridSpec(8, 8), 0, 0);
  auto at = [&d](int l, int m) { return d[4 * l + m]; };
  CHECK(std::abs(at(0, 0) - (p.tau + p.kappa)) < 1e-15);
  CHECK(std::abs(at(1, 1) - (p.gamma2 + p.tau + p.kappa)) < 1e-15);
  CHECK(std::abs(at(2, 2) - (p.gamma3 + 2 * p.tau * p.alphaN + p.kappa)) < 1e-13);
  CHECK(std::abs(at(3, 3) - (p.gamma3 + 2 * p.tau * p.alphaN + p.kappa)) < 1e-13);
  CHECK(std::abs(at(0, 1) - p.tau) < 1e-15);
  CHECK(std::abs(at(1, 0) - p.tau) < 1e-15);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      if (l != m && !(l + m == 1)) CHECK(std::abs(at(l, m)) < 1e-15);
}

TEST_CASE("property: step-four symbol is Hermitian") {
  const GridSpec g(8, 8);
  const StepFourParams p = randomParams(3, false);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const Matrix4c d = stepFourMatrix(p, g, i, j);
      // d13 pairs the backward divergence with the forward gradient in row 3.
      CHECK(std::abs(d[2] - std::conj(d[8])) < 1e-14);
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) CHECK(std::abs(d[4 * l + m] - std::conj(d[4 * m + l])) < 1e-13);
    }
}

TEST_CASE("step-four symbol is the Fourier block of the dense operator") {
  const GridSpec g(8, 8);
  const StepFourParams p = randomParams(9, false);
  const oracle::DenseOperator op = oracle::stepFourOperator(g, p);
  for (auto [i, j] : {std::pair{0, 0}, std::pair{1, 3}, std::pair{6, 2}, std::pair{4, 7}}) {
    Eigen::VectorXcd mode(g.size());
    for (int x = 0; x < 8; ++x)
      for (int y = 0; y < 8; ++y)
        mode(x * 8 + y) = std::polar(1.0, frequencyAngle(i, 8) * x + frequencyAngle(j, 8) * y);
    const Matrix4c d = stepFourMatrix(p, g, i, j);
    for (int m = 0; m < 4; ++m) {
      Eigen::VectorXcd in = Eigen::VectorXcd::Zero(4 * g.size());
      in.segment(m * g.size(), g.size()) = mode;
      const Eigen::VectorXcd out = op.matrix.cast<Complex>() * in;
      for (int l = 0; l < 4; ++l) {
        const Eigen::VectorXcd expect = d[4 * l + m] * mode;
        CHECK((out.segment(l * g.size(), g.size()) - expect).norm() < 1e-9 * (1.0 + std::abs(d[4 * l + m])));
      }
    }
  }
}

TEST_CASE("cofactor inverse on a random 4x4 and 3x3") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int size : {3, 4}) {
    Matrix4c m{};
    for (int l = 0; l < size; ++l)
      for (int k = 0; k < size; ++k) m[4 * l + k] = Complex(n(rng), n(rng));
    Complex det;
    const Matrix4c inv = invertCofactor(m, size, det);
    CHECK(std::abs(det) > 0.0);
    for (int l = 0; l < size; ++l)
      for (int k = 0; k < size; ++k) {
        Complex acc = 0.0;
        for (int t = 0; t < size; ++t) acc += m[4 * l + t] * inv[4 * t + k];
        CHECK(std::abs(acc - Complex(l == k ? 1.0 : 0.0)) < 1e-12);
      }
  }
}

TEST_CASE("step-four solve of a constant image") {
  const GridSpec g(8, 8);
  StepFourParams p;
  p.alphaW = 80.0;
  p.alphaN = 1e-2;
  const double C = 0.6;
  const StepFourSymbols sym = buildStepFourSymbols(p, g);
  const Image2D b(g, p.tau * C);
  const StepFourSolution sol = solveStepFour(b, b, Image2D(g), Image2D(g), sym);
  const double t = p.tau, k = p.kappa, g2 = p.gamma2;
  const double vExpect = C * t * (g2 + k) / ((t + k) * (g2 + t + k) - t * t);
  for (std::size_t q = 0; q < g.size(); ++q) {
    CHECK(sol.v[q] == doctest::Approx(vExpect).epsilon(1e-8));
    CHECK(std::abs(sol.v[q] - C) < 1e-5);
    CHECK(std::abs(sol.r[q]) < 1e-5);
    CHECK(std::abs(sol.s1[q]) < 1e-14);
  }
  const StepFourSolution zero = solveStepFour(Image2D(g), Image2D(g), Image2D(g), Image2D(g), sym);
  CHECK(zero.v.maxAbs() == 0.0);
  CHECK(zero.s2.maxAbs() == 0.0);
}

TEST_CASE("property: step-four solve matches the dense solve") {
  for (bool drop : {false, true}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const GridSpec g(4 + seed % 5, 5 + (seed * 2) % 5);
      const StepFourParams p = randomParams(seed + (drop ? 100 : 0), drop);
      const StepFourSymbols sym = buildStepFourSymbols(p, g);
      const Image2D b1 = randomImage(g, seed), b2 = randomImage(g, seed + 1);
      const Image2D b3 = randomImage(g, seed + 2), b4 = randomImage(g, seed + 3);
      const StepFourSolution s = solveStepFour(b1, b2, b3, b4, sym);
      const StepFourSolution d = oracle::denseStepFourSolve(b1, b2, b3, b4, p);
      CHECK(relErr(s.v, d.v) < 1e-8);
      CHECK(relErr(s.s1, d.s1) < 1e-8);
      CHECK(relErr(s.s2, d.s2) < 1e-8);
      if (drop) {
        CHECK(s.r.maxAbs() == 0.0);
      } else {
        CHECK(relErr(s.r, d.r) < 1e-8);
      }
    }
  }
}

TEST_CASE("step-four parameters are validated") {
  StepFourParams p;
  p.tau = 0.0;
  CHECK_THROWS_AS(buildStepFourSymbols(p, GridSpec(4, 4)), ParameterError);
  p = StepFourParams{};
  p.kappa = -1.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
}
