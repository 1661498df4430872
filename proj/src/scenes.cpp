#include "tridecomp/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tridecomp/errors.hpp"

namespace tridecomp {

std::string_view toString(SceneKind kind) {
  switch (kind) {
    case SceneKind::CrossLight:
      return "cross-light";
    case SceneKind::EllipseWave:
      return "ellipse-wave";
    case SceneKind::Globe:
      return "globe";
    case SceneKind::SquareRing:
      return "square-ring";
  }
  return "cross-light";
}

std::optional<SceneKind> parseScene(std::string_view name) {
  for (SceneKind k : {SceneKind::CrossLight, SceneKind::EllipseWave, SceneKind::Globe,
                      SceneKind::SquareRing}) {
    if (toString(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

// Pixel centres on the unit square.
double coord(int index, int size) { return (index + 0.5) / size; }

double gauss(double dx, double dy, double width) {
  return std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
}

void crossLight(SceneParts& s, int size) {
  const int c = size / 2;
  const int arm = static_cast<int>(std::lround(0.09 * size));
  const int reach = static_cast<int>(std::lround(0.32 * size));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const bool vertical = i >= c - reach && i < c + reach && j >= c - arm && j < c + arm;
      const bool horizontal = j >= c - reach && j < c + reach && i >= c - arm && i < c + arm;
      s.structure(i, j) = 0.08 + (vertical || horizontal ? 0.55 : 0.0);
      s.smooth(i, j) = 0.3 * gauss(coord(j, size) - 0.35, coord(i, size) - 0.3, 0.3);
    }
  }
}

void ellipseWave(SceneParts& s, int size) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double period = 6.0 / size;
  for (int i = 0; i < size; ++i) {
    const double y = coord(i, size);
    for (int j = 0; j < size; ++j) {
      const double x = coord(j, size);
      const double e1 = std::pow((x - 0.3) / 0.2, 2) + std::pow((y - 0.35) / 0.12, 2);
      const double e2 = std::pow((x - 0.62) / 0.14, 2) + std::pow((y - 0.68) / 0.22, 2);
      double value = 0.15;
      if (e1 <= 1.0) value = 0.75;
      else if (e2 <= 1.0) value = 0.45;
      s.structure(i, j) = value;
      s.smooth(i, j) = 0.08 * (x + y);
      const double r = std::hypot(x - 0.72, y - 0.28);
      s.oscillatory(i, j) = 0.06 * std::cos(two_pi * r / period) * gauss(x - 0.72, y - 0.28, 0.08);
    }
  }
}

void globe(SceneParts& s, int size) {
  const double radius = 0.33;
  const double lx = -std::sqrt(0.5), ly = -std::sqrt(0.5);
  for (int i = 0; i < size; ++i) {
    const double y = coord(i, size);
    for (int j = 0; j < size; ++j) {
      const double x = coord(j, size);
      const bool disc = std::hypot(x - 0.5, y - 0.5) <= radius;
      s.structure(i, j) = disc ? 0.4 : 0.1;
      // Directional shade brightest towards the upper-left light.
      const double t = ((x - 0.5) * lx + (y - 0.5) * ly) / 0.75;
      s.smooth(i, j) = 0.22 * (0.5 + 0.5 * std::tanh(2.0 * t));
    }
  }
}

void squareRing(SceneParts& s, int size) {
  const int c = size / 2;
  const int outer = static_cast<int>(std::lround(0.3 * size));
  const int inner = static_cast<int>(std::lround(0.15 * size));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      // Chebyshev ring index around the centre, symmetric for even sizes.
      const int d = std::max(std::max(i - c + 1, c - i), std::max(j - c + 1, c - j));
      s.structure(i, j) = d <= outer && d > inner ? 0.7 : 0.2;
      s.smooth(i, j) = 0.1 * coord(j, size);
    }
  }
}

}  // namespace

SceneParts synthesizeSceneParts(SceneKind kind, int size) {
  if (size < 64) throw ParameterError("scene size must be at least 64");
  const GridSpec spec(size, size);
  SceneParts s{Image2D(spec), Image2D(spec), Image2D(spec), Image2D(spec)};
  switch (kind) {
    case SceneKind::CrossLight:
      crossLight(s, size);
      break;
    case SceneKind::EllipseWave:
      ellipseWave(s, size);
      break;
    case SceneKind::Globe:
      globe(s, size);
      break;
    case SceneKind::SquareRing:
      squareRing(s, size);
      break;
  }
  s.image = s.structure + s.smooth;
  s.image += s.oscillatory;
  return s;
}

Image2D synthesizeScene(SceneKind kind, int size) { return synthesizeSceneParts(kind, size).image; }

}  // namespace tridecomp
