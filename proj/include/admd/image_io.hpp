#pragma once

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "admd/image.hpp"

namespace admd {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

static_assert(std::numeric_limits<float>::is_iec559, "IEEE-754 float required");

inline std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure: " + path);
  return bytes;
}

inline void write_file(const std::string& path,
                       const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failure: " + path);
}

inline void put_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

// Netpbm header token reader: skips whitespace and '#' comment lines.
inline long pgm_token(const std::vector<unsigned char>& b, std::size_t& pos,
                      const std::string& path) {
  while (pos < b.size()) {
    unsigned char c = b[pos];
    if (c == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(c)) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= b.size() || !std::isdigit(b[pos]))
    throw IoError("malformed PGM header: " + path);
  long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > 1000000000L) throw IoError("malformed PGM header: " + path);
    ++pos;
  }
  return v;
}

inline GrayImage load_pgm(const std::vector<unsigned char>& bytes,
                          const std::string& path) {
  std::size_t pos = 2;  // past "P5"
  long w = pgm_token(bytes, pos, path);
  long h = pgm_token(bytes, pos, path);
  long maxval = pgm_token(bytes, pos, path);
  if (w < 1 || h < 1) throw IoError("zero-dimension PGM: " + path);
  if (maxval < 1 || maxval > 65535) throw IoError("bad PGM maxval: " + path);
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    throw IoError("malformed PGM header: " + path);
  ++pos;  // exactly one whitespace byte before the raster
  const int bpp = maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(w) * h * bpp;
  if (bytes.size() - pos < need) throw IoError("truncated PGM raster: " + path);
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  const unsigned char* p = bytes.data() + pos;
  for (std::size_t i = 0; i < img.size(); ++i) {
    unsigned v = bpp == 1 ? p[i]
                          : (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1];
    img.data[i] = static_cast<float>(v);
  }
  return img;
}

struct PngReadCtx {
  const unsigned char* data;
  std::size_t size;
  std::size_t pos;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
  auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
  if (ctx->pos + n > ctx->size) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, ctx->data + ctx->pos, n);
  ctx->pos += n;
}

inline GrayImage load_png(const std::vector<unsigned char>& bytes,
                          const std::string& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           nullptr, nullptr);
  if (!png) throw IoError("libpng init failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failure");
  }
  std::vector<png_bytep> rows;
  std::vector<unsigned char> raster;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("PNG decode failure: " + path);
  }
  PngReadCtx ctx{bytes.data(), bytes.size(), 0};
  png_set_read_fn(png, &ctx, png_mem_read);
  png_read_info(png, info);

  png_byte color = png_get_color_type(png, info);
  png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if ((color & PNG_COLOR_MASK_ALPHA) || png_get_valid(png, info, PNG_INFO_tRNS))
    png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int channels = png_get_channels(png, info);
  depth = png_get_bit_depth(png, info);
  if (w == 0 || h == 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("zero-dimension PNG: " + path);
  }
  if ((channels != 1 && channels != 3) || (depth != 8 && depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported PNG layout: " + path);
  }
  const std::size_t stride = png_get_rowbytes(png, info);
  raster.resize(stride * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = raster.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  const int bpc = depth / 8;
  for (png_uint_32 y = 0; y < h; ++y) {
    const unsigned char* row = raster.data() + y * stride;
    for (png_uint_32 x = 0; x < w; ++x) {
      const unsigned char* px = row + (x * channels) * bpc;
      auto sample = [&](int c) -> double {
        const unsigned char* s = px + c * bpc;
        return bpc == 1 ? s[0] : (static_cast<unsigned>(s[0]) << 8) | s[1];
      };
      double v = channels == 1 ? sample(0)
                               : 0.299 * sample(0) + 0.587 * sample(1) +
                                     0.114 * sample(2);
      img.at(static_cast<int>(y), static_cast<int>(x)) = static_cast<float>(v);
    }
  }
  return img;
}

inline void png_mem_write(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

inline void png_mem_flush(png_structp) {}

inline void save_png8(const std::vector<unsigned char>& pixels, int w, int h,
                      const std::string& path) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            nullptr, nullptr);
  if (!png) throw IoError("libpng init failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failure");
  }
  std::vector<unsigned char> encoded;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failure: " + path);
  }
  png_set_write_fn(png, &encoded, png_mem_write, png_mem_flush);
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y)
    png_write_row(png, const_cast<png_bytep>(pixels.data() +
                                             static_cast<std::size_t>(y) * w));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  write_file(path, encoded);
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

/// Loads a binary PGM (P5, 8/16-bit) or PNG (grayscale/RGB, 8/16-bit) image.
/// Values are kept at their native range; RGB collapses to luma
/// 0.299/0.587/0.114.
inline GrayImage load_image(const std::string& path) {
  auto bytes = detail::read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
    return detail::load_pgm(bytes, path);
  static const unsigned char png_sig[4] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), png_sig, 4) == 0)
    return detail::load_png(bytes, path);
  throw IoError("unsupported image format: " + path);
}

/// Writes an 8- or 16-bit binary PGM; values are rounded and clamped to
/// [0, maxval]. 16-bit samples are big-endian per the Netpbm convention.
inline void save_pgm(const GrayImage& img, const std::string& path,
                     int maxval = 255) {
  if (img.empty()) throw std::invalid_argument("save_pgm: empty image");
  if (maxval < 1 || maxval > 65535)
    throw std::invalid_argument("save_pgm: maxval out of range");
  std::string header = "P5\n" + std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n" +
                       std::to_string(maxval) + "\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  for (float v : img.data) {
    long q = std::lround(static_cast<double>(v));
    q = std::clamp(q, 0L, static_cast<long>(maxval));
    if (maxval > 255) {
      out.push_back(static_cast<unsigned char>((q >> 8) & 0xff));
      out.push_back(static_cast<unsigned char>(q & 0xff));
    } else {
      out.push_back(static_cast<unsigned char>(q));
    }
  }
  detail::write_file(path, out);
}

/// Min-max normalizes to [0, 255] and writes an 8-bit image; a constant
/// input maps to all zeros. PNG when the path ends in .png, PGM otherwise.
inline void save_normalized(const GrayImage& img, const std::string& path) {
  if (img.empty()) throw std::invalid_argument("save_normalized: empty image");
  auto [lo, hi] = minmax(img);
  const double range = static_cast<double>(hi) - static_cast<double>(lo);
  std::vector<unsigned char> bytes(img.size(), 0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < img.size(); ++i) {
      double v = 255.0 * (static_cast<double>(img.data[i]) - lo) / range;
      bytes[i] = static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  if (detail::ends_with(path, ".png")) {
    detail::save_png8(bytes, img.width, img.height, path);
  } else {
    std::string header = "P5\n" + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.insert(out.end(), bytes.begin(), bytes.end());
    detail::write_file(path, out);
  }
}

/// Writes an 8-bit grayscale PNG; values are rounded and clamped to [0, 255].
inline void save_png8(const GrayImage& img, const std::string& path) {
  if (img.empty()) throw std::invalid_argument("save_png8: empty image");
  std::vector<unsigned char> bytes(img.size());
  for (std::size_t i = 0; i < img.size(); ++i)
    bytes[i] = static_cast<unsigned char>(
        std::clamp(std::lround(static_cast<double>(img.data[i])), 0L, 255L));
  detail::save_png8(bytes, img.width, img.height, path);
}

inline constexpr char kRawMagic[8] = {'A', 'D', 'M', 'D', 'R', 'A', 'W', '1'};

/// Lossless saliency-map dump: 16-byte header (magic "ADMDRAW1",
/// u32 width, u32 height, little-endian) then float32 LE pixels, row-major.
inline void save_raw(const GrayImage& img, const std::string& path) {
  if (img.empty()) throw std::invalid_argument("save_raw: empty image");
  std::vector<unsigned char> out;
  out.reserve(16 + img.size() * 4);
  out.insert(out.end(), kRawMagic, kRawMagic + 8);
  detail::put_u32le(out, static_cast<std::uint32_t>(img.width));
  detail::put_u32le(out, static_cast<std::uint32_t>(img.height));
  for (float v : img.data) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    detail::put_u32le(out, u);
  }
  detail::write_file(path, out);
}

inline GrayImage load_raw(const std::string& path) {
  auto bytes = detail::read_file(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kRawMagic, 8) != 0)
    throw IoError("not a raw dump: " + path);
  std::uint32_t w = detail::get_u32le(bytes.data() + 8);
  std::uint32_t h = detail::get_u32le(bytes.data() + 12);
  if (w == 0 || h == 0) throw IoError("zero-dimension raw dump: " + path);
  const std::size_t need = 16 + static_cast<std::size_t>(w) * h * 4;
  if (bytes.size() < need) throw IoError("truncated raw dump: " + path);
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < img.size(); ++i) {
    std::uint32_t u = detail::get_u32le(bytes.data() + 16 + 4 * i);
    std::memcpy(&img.data[i], &u, 4);
  }
  return img;
}

/// Loads any format this library writes (PGM/PNG or a raw dump).
inline GrayImage load_auto(const std::string& path) {
  auto bytes = detail::read_file(path);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kRawMagic, 8) == 0)
    return load_raw(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
    return detail::load_pgm(bytes, path);
  static const unsigned char png_sig[4] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), png_sig, 4) == 0)
    return detail::load_png(bytes, path);
  throw IoError("unsupported image format: " + path);
}

}  // namespace admd
