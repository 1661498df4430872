#pragma once

#include <cstdint>
#include <random>

#include "tridecomp/grid.hpp"

namespace testutil {

inline tridecomp::Image2D randomImage(const tridecomp::GridSpec& spec, std::uint64_t seed,
                                      double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  tridecomp::Image2D img(spec);
  for (std::size_t k = 0; k < img.size(); ++k) img[k] = dist(rng);
  return img;
}

inline tridecomp::VectorField2D randomField(const tridecomp::GridSpec& spec, std::uint64_t seed,
                                            double lo = -1.0, double hi = 1.0) {
  return {randomImage(spec, seed, lo, hi), randomImage(spec, seed + 0x9e3779b97f4a7c15ull, lo, hi)};
}

inline double relErr(const tridecomp::Image2D& a, const tridecomp::Image2D& b) {
  return (a - b).norm() / std::max(1e-300, b.norm());
}

}  // namespace testutil
