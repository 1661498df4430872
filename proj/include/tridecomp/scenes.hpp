#pragma once

#include <optional>
#include <string_view>

#include "tridecomp/grid.hpp"

namespace tridecomp {

enum class SceneKind { CrossLight, EllipseWave, Globe, SquareRing };

std::string_view toString(SceneKind kind);
std::optional<SceneKind> parseScene(std::string_view name);

/// A synthetic test image and the additive parts it was built from:
/// piecewise-constant masks, a smooth shading field and an oscillatory
/// pattern. image == structure + smooth + oscillatory exactly.
struct SceneParts {
  Image2D structure;
  Image2D smooth;
  Image2D oscillatory;
  Image2D image;
};

/// Deterministic square scene of the given size (>= 64) with values in [0,1].
SceneParts synthesizeSceneParts(SceneKind kind, int size);
Image2D synthesizeScene(SceneKind kind, int size);

}  // namespace tridecomp
