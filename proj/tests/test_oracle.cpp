#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "support.hpp"

using namespace tridecomp;
using testutil::randomField;
using testutil::randomImage;
using testutil::relErr;

TEST_CASE("dense lambda solve: trivial cases") {
  const GridSpec g(6, 6);
  const VectorField2D b = randomField(g, 1);
  const VectorField2D x = oracle::denseLambdaSolve(b, 2.0, 0.0);
  CHECK(relErr(x.x1, 0.5 * b.x1) < 1e-14);
  const VectorField2D cb(Image2D(g, 1.0), Image2D(g, -2.0));
  const VectorField2D cx = oracle::denseLambdaSolve(cb, 4.0, 0.7);
  CHECK(relErr(cx.x2, Image2D(g, -0.5)) < 1e-12);
  CHECK_THROWS(oracle::denseLambdaSolve(VectorField2D(GridSpec(17, 4)), 1.0, 0.1));
}

TEST_CASE("dense step-four solve: zero and DC right-hand sides") {
  const GridSpec g(6, 6);
  StepFourParams p;
  p.alphaW = 10.0;
  p.alphaN = 0.5;
  const StepFourSolution z = oracle::denseStepFourSolve(Image2D(g), Image2D(g), Image2D(g), Image2D(g), p);
  CHECK(z.v.maxAbs() == 0.0);
  CHECK(z.r.maxAbs() == 0.0);

  // Constant data only see the DC block: [[t+k, t], [t, g2+t+k]] on (v, r).
  const double b1 = 0.3, b2 = -0.2, t = p.tau, k = p.kappa, g2 = p.gamma2;
  const StepFourSolution c = oracle::denseStepFourSolve(Image2D(g, b1), Image2D(g, b2), Image2D(g), Image2D(g), p);
  const double det = (t + k) * (g2 + t + k) - t * t;
  CHECK(c.v[0] == doctest::Approx(((g2 + t + k) * b1 - t * b2) / det).epsilon(1e-9));
  CHECK(c.r[7] == doctest::Approx(((t + k) * b2 - t * b1) / det).epsilon(1e-9));
  CHECK(c.s1.maxAbs() < 1e-12);
}

TEST_CASE("difference matrices agree with the grid operators") {
  const GridSpec g(5, 7);
  const Image2D f = randomImage(g, 3);
  const Eigen::Map<const Eigen::VectorXd> fv(f.values().data(), f.size());
  for (Axis a : {Axis::Rows, Axis::Cols}) {
    const Eigen::VectorXd fw = oracle::forwardDiffMatrix(g, a) * fv;
    const Eigen::VectorXd bw = oracle::backwardDiffMatrix(g, a) * fv;
    const Image2D dfw = diff(f, a, Direction::Forward), dbw = diff(f, a, Direction::Backward);
    for (std::size_t k = 0; k < f.size(); ++k) {
      CHECK(fw(k) == doctest::Approx(dfw[k]).epsilon(1e-14));
      CHECK(bw(k) == doctest::Approx(dbw[k]).epsilon(1e-14));
    }
  }
  // Forward then backward along rows is the circulant second difference per column.
  const Image2D dd = diff(diff(f, Axis::Rows, Direction::Forward), Axis::Rows, Direction::Backward);
  const Eigen::MatrixXd second = oracle::shiftMatrix(g, 1, 0) + oracle::shiftMatrix(g, -1, 0) -
                                 2.0 * Eigen::MatrixXd::Identity(g.size(), g.size());
  const Eigen::VectorXd expect = second * fv;
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(dd[k] == doctest::Approx(expect(k)).epsilon(1e-13));
}

TEST_CASE("brute-force projection: feasible inputs cost nothing") {
  CHECK(oracle::bruteForceProjectS({0.0, 0.0}, {0.0, 0.0}, 1.0, 10000) == 0.0);
  CHECK(oracle::bruteForceProjectS({1.2, -0.5}, {12.0 / 13.0, -5.0 / 13.0}, 1.0, 10000) < 1e-20);
  const double best = oracle::bruteForceProjectS({0.3, 0.9}, {-0.7, 0.2}, 1.0, 10000);
  CHECK(best >= 0.0);
}

TEST_CASE("Hessian and Laplacian energies agree on periodic fields") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Image2D w = randomImage(GridSpec(12, 12), seed);
    const double eh = oracle::energyHessian(w), el = oracle::energyLaplacian(w);
    CHECK(std::abs(eh - el) <= 1e-10 * el);
  }
  const Image2D c(GridSpec(8, 8), 3.0);
  auto [gh, gl] = oracle::energyGradientCheck(c);
  CHECK(gh.maxAbs() < 1e-9);
  CHECK(gl.maxAbs() < 1e-9);
}

TEST_CASE("gradient of a Fourier mode follows the biharmonic symbol") {
  const GridSpec g(12, 12);
  const int ki = 2, kj = 3;
  Image2D w(g);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      w(i, j) = std::cos(2 * std::numbers::pi * (ki * i / 12.0 + kj * j / 12.0));
  const double sym = 2 * (std::cos(2 * std::numbers::pi * ki / 12.0) - 1) +
                     2 * (std::cos(2 * std::numbers::pi * kj / 12.0) - 1);
  auto [gh, gl] = oracle::energyGradientCheck(w);
  for (std::size_t k = 0; k < w.size(); ++k) {
    CHECK(gl[k] == doctest::Approx(sym * sym * w[k]).epsilon(1e-6).scale(1.0));
    CHECK(gh[k] == doctest::Approx(sym * sym * w[k]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("finite-difference step sweep") {
  const Image2D w = randomImage(GridSpec(8, 8), 9);
  double prev = 1.0;
  for (double eps : {1e-1, 5e-2, 2.5e-2}) {
    auto [gh, gl] = oracle::energyGradientCheck(w, eps);
    const double gap = relErr(gh, gl);
    // Both energies are quadratic, so central differences are exact up to round-off.
    CHECK(gap < 1e-10);
    CHECK(gap <= prev);
    prev = std::max(gap, 1e-13);
  }
}
