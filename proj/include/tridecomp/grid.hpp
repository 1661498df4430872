#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tridecomp {

/// Rectangular M x N pixel grid with uniform spacing h. Axis 1 runs over
/// rows (index i), axis 2 over columns (index j). All difference operators
/// wrap periodically.
struct GridSpec {
  int rows = 0;
  int cols = 0;
  double h = 1.0;

  GridSpec() = default;
  GridSpec(int rows, int cols, double h = 1.0);

  std::size_t size() const noexcept { return static_cast<std::size_t>(rows) * cols; }
  bool operator==(const GridSpec&) const = default;
};

/// Real scalar field on a grid, stored row-major.
class Image2D {
 public:
  Image2D() = default;
  explicit Image2D(const GridSpec& spec, double fill = 0.0);
  Image2D(const GridSpec& spec, std::vector<double> values);

  const GridSpec& spec() const noexcept { return spec_; }
  int rows() const noexcept { return spec_.rows; }
  int cols() const noexcept { return spec_.cols; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * spec_.cols + j]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * spec_.cols + j]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool allFinite() const noexcept;
  double sum() const noexcept;
  double mean() const noexcept;
  double min() const noexcept;
  double max() const noexcept;
  /// Euclidean (root-sum-square) norm over all pixels.
  double norm() const noexcept;
  double maxAbs() const noexcept;

  Image2D& operator+=(const Image2D& other);
  Image2D& operator-=(const Image2D& other);
  Image2D& operator*=(double s) noexcept;

  bool operator==(const Image2D&) const = default;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

Image2D operator+(Image2D a, const Image2D& b);
Image2D operator-(Image2D a, const Image2D& b);
Image2D operator*(double s, Image2D a);

/// Two scalar channels sharing one grid; one 2-vector per pixel.
struct VectorField2D {
  Image2D x1;
  Image2D x2;

  VectorField2D() = default;
  explicit VectorField2D(const GridSpec& spec) : x1(spec), x2(spec) {}
  VectorField2D(Image2D a, Image2D b);

  const GridSpec& spec() const noexcept { return x1.spec(); }
  bool allFinite() const noexcept { return x1.allFinite() && x2.allFinite(); }
  /// Pointwise Euclidean magnitude.
  Image2D magnitude() const;

  bool operator==(const VectorField2D&) const = default;
};

/// Sum over pixels of a.x1*b.x1 + a.x2*b.x2.
double dot(const VectorField2D& a, const VectorField2D& b);
/// Sum over pixels of a*b.
double dot(const Image2D& a, const Image2D& b);

enum class Axis { Rows = 1, Cols = 2 };
enum class Direction { Forward, Backward };

/// One-sided periodic difference along an axis, divided by h.
Image2D diff(const Image2D& img, Axis axis, Direction dir);

VectorField2D gradForward(const Image2D& img);
Image2D divBackward(const VectorField2D& vf);
/// div^-(grad^+ img): the 5-point Laplacian.
Image2D laplacian(const Image2D& img);

/// Mirror padding that repeats the border pixel: (a,b,c) -> (a,a,b,c,c).
Image2D padSymmetric(const Image2D& img, int width);
Image2D cropPad(const Image2D& img, int width);

/// Periodic convolution with a separable Gaussian truncated at 4 sigma and
/// renormalized to unit mass.
Image2D gaussianSmooth(const Image2D& img, double sigmaKernel = 1.0);

struct NoiseSpec {
  double sigma = 0.0;  // on the [0,1] intensity scale
  std::uint64_t seed = 0;
};

/// Adds i.i.d. N(0, sigma^2) noise from mt19937_64 via Box-Muller.
Image2D addGaussianNoise(const Image2D& img, const NoiseSpec& noise);

/// 10 log10(1 / MSE) for intensities on [0,1]. Identical images give +inf.
double psnr(const Image2D& ref, const Image2D& est);
/// Population standard deviation.
double stddev(const Image2D& img);
/// Affine map onto [0,1]; a constant image maps to all 0.5.
Image2D linearScale01(const Image2D& img);

}  // namespace tridecomp
