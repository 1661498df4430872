#include "tridecomp/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "tridecomp/errors.hpp"

namespace tridecomp {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr openFile(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

void pngError(png_structp, png_const_charp msg) { throw IoError(std::string("png: ") + msg); }
void pngWarning(png_structp, png_const_charp) {}

Image2D readPng(std::FILE* fp, const std::filesystem::path& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, pngError, pngWarning);
  if (!png) throw IoError("png: out of memory");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp& png;
    png_infop& info;
    ~Guard() { png_destroy_read_struct(&png, &info, nullptr); }
  } guard{png, info};
  if (!info) throw IoError("png: out of memory");

  png_init_io(png, fp);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);

  if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_GRAY_ALPHA)
    throw IoError(path.string() + ": only grayscale PNG is supported");
  if (color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_strip_alpha(png);
  if (depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    depth = 8;
  }
  png_read_update_info(png, info);

  const std::size_t rowBytes = png_get_rowbytes(png, info);
  std::vector<png_byte> buffer(rowBytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = buffer.data() + r * rowBytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);

  Image2D img(GridSpec(static_cast<int>(height), static_cast<int>(width)));
  const double scale = depth == 16 ? 65535.0 : 255.0;
  for (png_uint_32 r = 0; r < height; ++r) {
    for (png_uint_32 c = 0; c < width; ++c) {
      const double sample = depth == 16 ? (rows[r][2 * c] << 8) | rows[r][2 * c + 1] : rows[r][c];
      img(static_cast<int>(r), static_cast<int>(c)) = sample / scale;
    }
  }
  return img;
}

Image2D readPgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  in >> magic;
  auto next = [&]() {
    while (in >> std::ws && in.peek() == '#') in.ignore(1 << 20, '\n');
    long v = -1;
    in >> v;
    return v;
  };
  const long width = next();
  const long height = next();
  const long maxval = next();
  if (magic != "P5" || !in || width < 1 || height < 1 || maxval < 1 || maxval > 65535)
    throw IoError(path.string() + ": malformed PGM header");
  in.get();

  const int bytes = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> data(static_cast<std::size_t>(width) * height * bytes);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size()))
    throw IoError(path.string() + ": truncated PGM data");

  Image2D img(GridSpec(static_cast<int>(height), static_cast<int>(width)));
  for (std::size_t k = 0; k < img.size(); ++k) {
    const unsigned v = bytes == 2 ? (data[2 * k] << 8) | data[2 * k + 1] : data[k];
    img[k] = static_cast<double>(v) / static_cast<double>(maxval);
  }
  return img;
}

}  // namespace

Image2D readImage(const std::filesystem::path& path) {
  FilePtr fp = openFile(path, "rb");
  unsigned char header[8] = {};
  const std::size_t got = std::fread(header, 1, sizeof header, fp.get());
  if (got == 8 && png_sig_cmp(header, 0, 8) == 0) {
    std::rewind(fp.get());
    return readPng(fp.get(), path);
  }
  if (got >= 2 && header[0] == 'P' && header[1] == '5') {
    fp.reset();
    return readPgm(path);
  }
  throw IoError(path.string() + ": not a PNG or binary PGM file");
}

void writePng(const std::filesystem::path& path, const Image2D& img, int bitDepth) {
  if (bitDepth != 8 && bitDepth != 16) throw ParameterError("bit depth must be 8 or 16");
  FilePtr fp = openFile(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, pngError, pngWarning);
  if (!png) throw IoError("png: out of memory");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp& png;
    png_infop& info;
    ~Guard() { png_destroy_write_struct(&png, &info); }
  } guard{png, info};
  if (!info) throw IoError("png: out of memory");

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols()), static_cast<png_uint_32>(img.rows()),
               bitDepth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const int bytes = bitDepth / 8;
  const double scale = bitDepth == 16 ? 65535.0 : 255.0;
  std::vector<png_byte> row(static_cast<std::size_t>(img.cols()) * bytes);
  for (int i = 0; i < img.rows(); ++i) {
    for (int j = 0; j < img.cols(); ++j) {
      const double x = std::clamp(img(i, j), 0.0, 1.0);
      const unsigned v = static_cast<unsigned>(std::lround(x * scale));
      if (bytes == 2) {
        row[2 * j] = static_cast<png_byte>(v >> 8);
        row[2 * j + 1] = static_cast<png_byte>(v & 0xff);
      } else {
        row[j] = static_cast<png_byte>(v);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  if (std::fflush(fp.get()) != 0) throw IoError("write failed: " + path.string());
}

}  // namespace tridecomp
