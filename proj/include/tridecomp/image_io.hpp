#pragma once

#include <filesystem>

#include "tridecomp/grid.hpp"

namespace tridecomp {

/// Reads an 8- or 16-bit grayscale PNG or a binary PGM (P5) and maps the
/// samples onto [0,1]. Throws IoError on anything else.
Image2D readImage(const std::filesystem::path& path);

/// Writes a grayscale PNG after clamping to [0,1]. bitDepth is 8 or 16.
void writePng(const std::filesystem::path& path, const Image2D& img, int bitDepth = 16);

}  // namespace tridecomp
