#include "tridecomp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "tridecomp/errors.hpp"

namespace tridecomp {

GridSpec::GridSpec(int rows, int cols, double h) : rows(rows), cols(cols), h(h) {
  if (rows < 2 || cols < 2) {
    throw DimensionError("grid must be at least 2x2, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("grid spacing must be positive");
}

Image2D::Image2D(const GridSpec& spec, double fill) : spec_(spec), values_(spec.size(), fill) {}

Image2D::Image2D(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size()) {
    throw DimensionError("value count " + std::to_string(values_.size()) + " does not match grid " +
                         std::to_string(spec_.rows) + "x" + std::to_string(spec_.cols));
  }
}

bool Image2D::allFinite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double Image2D::sum() const noexcept {
  double s = 0.0;
  for (double x : values_) s += x;
  return s;
}

double Image2D::mean() const noexcept { return values_.empty() ? 0.0 : sum() / values_.size(); }

double Image2D::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double Image2D::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double Image2D::norm() const noexcept {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return std::sqrt(s);
}

double Image2D::maxAbs() const noexcept {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

namespace {

void requireSameGrid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw DimensionError("grid mismatch");
}

}  // namespace

Image2D& Image2D::operator+=(const Image2D& other) {
  requireSameGrid(spec_, other.spec_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Image2D& Image2D::operator-=(const Image2D& other) {
  requireSameGrid(spec_, other.spec_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Image2D& Image2D::operator*=(double s) noexcept {
  for (double& x : values_) x *= s;
  return *this;
}

Image2D operator+(Image2D a, const Image2D& b) { return a += b; }
Image2D operator-(Image2D a, const Image2D& b) { return a -= b; }
Image2D operator*(double s, Image2D a) { return a *= s; }

VectorField2D::VectorField2D(Image2D a, Image2D b) : x1(std::move(a)), x2(std::move(b)) {
  requireSameGrid(x1.spec(), x2.spec());
}

Image2D VectorField2D::magnitude() const {
  Image2D out(spec());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::sqrt(x1[k] * x1[k] + x2[k] * x2[k]);
  return out;
}

double dot(const Image2D& a, const Image2D& b) {
  requireSameGrid(a.spec(), b.spec());
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double dot(const VectorField2D& a, const VectorField2D& b) { return dot(a.x1, b.x1) + dot(a.x2, b.x2); }

Image2D diff(const Image2D& img, Axis axis, Direction dir) {
  const int m = img.rows();
  const int n = img.cols();
  const double inv_h = 1.0 / img.spec().h;
  Image2D out(img.spec());
  if (axis == Axis::Rows) {
    for (int i = 0; i < m; ++i) {
      const int nb = dir == Direction::Forward ? (i + 1) % m : (i + m - 1) % m;
      for (int j = 0; j < n; ++j) {
        out(i, j) = dir == Direction::Forward ? (img(nb, j) - img(i, j)) * inv_h
                                              : (img(i, j) - img(nb, j)) * inv_h;
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const int nb = dir == Direction::Forward ? (j + 1) % n : (j + n - 1) % n;
        out(i, j) = dir == Direction::Forward ? (img(i, nb) - img(i, j)) * inv_h
                                              : (img(i, j) - img(i, nb)) * inv_h;
      }
    }
  }
  return out;
}

VectorField2D gradForward(const Image2D& img) {
  return {diff(img, Axis::Rows, Direction::Forward), diff(img, Axis::Cols, Direction::Forward)};
}

Image2D divBackward(const VectorField2D& vf) {
  Image2D out = diff(vf.x1, Axis::Rows, Direction::Backward);
  out += diff(vf.x2, Axis::Cols, Direction::Backward);
  return out;
}

Image2D laplacian(const Image2D& img) { return divBackward(gradForward(img)); }

namespace {

// Folds k in (-inf, inf) onto [0, n) by edge-including reflection.
int reflectIndex(int k, int n) {
  const int period = 2 * n;
  int m = k % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

}  // namespace

Image2D padSymmetric(const Image2D& img, int width) {
  if (width < 0) throw ParameterError("pad width must be non-negative");
  if (width == 0) return img;
  const GridSpec out_spec(img.rows() + 2 * width, img.cols() + 2 * width, img.spec().h);
  Image2D out(out_spec);
  for (int i = 0; i < out_spec.rows; ++i) {
    const int si = reflectIndex(i - width, img.rows());
    for (int j = 0; j < out_spec.cols; ++j) {
      out(i, j) = img(si, reflectIndex(j - width, img.cols()));
    }
  }
  return out;
}

Image2D cropPad(const Image2D& img, int width) {
  if (width < 0) throw ParameterError("crop width must be non-negative");
  if (width == 0) return img;
  if (img.rows() <= 2 * width || img.cols() <= 2 * width) {
    throw DimensionError("image too small to crop " + std::to_string(width) + " pixels per side");
  }
  const GridSpec out_spec(img.rows() - 2 * width, img.cols() - 2 * width, img.spec().h);
  Image2D out(out_spec);
  for (int i = 0; i < out_spec.rows; ++i) {
    for (int j = 0; j < out_spec.cols; ++j) out(i, j) = img(i + width, j + width);
  }
  return out;
}

Image2D gaussianSmooth(const Image2D& img, double sigmaKernel) {
  if (!(sigmaKernel > 0.0)) throw ParameterError("Gaussian kernel sigma must be positive");
  const int radius = static_cast<int>(std::ceil(4.0 * sigmaKernel));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    kernel[t + radius] = std::exp(-0.5 * t * t / (sigmaKernel * sigmaKernel));
    total += kernel[t + radius];
  }
  for (double& k : kernel) k /= total;

  const int m = img.rows();
  const int n = img.cols();
  auto wrap = [](int k, int len) { return ((k % len) + len) % len; };

  Image2D tmp(img.spec());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) acc += kernel[t + radius] * img(wrap(i + t, m), j);
      tmp(i, j) = acc;
    }
  }
  Image2D out(img.spec());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) acc += kernel[t + radius] * tmp(i, wrap(j + t, n));
      out(i, j) = acc;
    }
  }
  return out;
}

Image2D addGaussianNoise(const Image2D& img, const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0)) throw ParameterError("noise sigma must be non-negative");
  Image2D out = img;
  if (noise.sigma == 0.0) return out;

  std::mt19937_64 rng(noise.seed);
  // 53-bit uniform on (0, 1].
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  const std::size_t count = out.size();
  for (std::size_t k = 0; k < count; k += 2) {
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    out[k] += noise.sigma * radius * std::cos(angle);
    if (k + 1 < count) out[k + 1] += noise.sigma * radius * std::sin(angle);
  }
  return out;
}

double psnr(const Image2D& ref, const Image2D& est) {
  requireSameGrid(ref.spec(), est.spec());
  double sq = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const double d = est[k] - ref[k];
    sq += d * d;
  }
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(ref.size()) / sq);
}

double stddev(const Image2D& img) {
  const double mu = img.mean();
  double sq = 0.0;
  for (double x : img.values()) sq += (x - mu) * (x - mu);
  return std::sqrt(sq / img.size());
}

Image2D linearScale01(const Image2D& img) {
  const double lo = img.min();
  const double hi = img.max();
  if (!(hi > lo)) return Image2D(img.spec(), 0.5);
  Image2D out(img.spec());
  const double range = hi - lo;
  for (std::size_t k = 0; k < img.size(); ++k) out[k] = (img[k] - lo) / range;
  return out;
}

}  // namespace tridecomp
