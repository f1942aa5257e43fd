// Copyright (c) 2026, The RRC Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rrc/harness/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace rrc::harness {
namespace {

[[noreturn]] void io_error(const std::filesystem::path& path,
                           const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_positive(const std::string& tok, const std::filesystem::path& path,
                   const char* field) {
  try {
    size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  io_error(path, std::string("bad PGM ") + field + " '" + tok + "'");
}

}  // namespace

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h),
      pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
  if (w <= 0 || h <= 0) {
    throw std::invalid_argument("GrayImage: dimensions must be positive");
  }
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open");
  const std::string magic = pgm_token(in);
  if (magic != "P5" && magic != "P2") io_error(path, "not a P5/P2 PGM");
  const int w = parse_positive(pgm_token(in), path, "width");
  const int h = parse_positive(pgm_token(in), path, "height");
  const int maxval = parse_positive(pgm_token(in), path, "maxval");
  if (maxval > 255) io_error(path, "16-bit PGM not supported");

  GrayImage img(w, h);
  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
      io_error(path, "truncated pixel data");
    }
  } else {
    for (auto& p : img.pixels) {
      int v;
      if (!(in >> v) || v < 0 || v > maxval) io_error(path, "bad ASCII pixel");
      p = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) {
      p = static_cast<std::uint8_t>(std::lround(p * 255.0 / maxval));
    }
  }
  return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) io_error(path, "write failed");
}

GrayImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    io_error(path, std::string("png: ") + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    io_error(path, "png: " + msg);
  }
  return img;
}

void write_png(const GrayImage& img, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0,
                               nullptr)) {
    io_error(path, std::string("png: ") + image.message);
  }
}

GrayImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open");
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  in.close();
  if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '2')) return read_pgm(path);
  if (png_sig_cmp(sig, 0, 8) == 0) return read_png(path);
  io_error(path, "unrecognized image format (expected PGM or PNG)");
}

GrayImage resize_bilinear(const GrayImage& img, int width, int height) {
  if (img.width == width && img.height == height) return img;
  GrayImage out(width, height);
  const double sx = static_cast<double>(img.width) / width;
  const double sy = static_cast<double>(img.height) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double tx = fx - x0;
      const double top = (1 - tx) * img.at(x0, y0) + tx * img.at(x1, y0);
      const double bot = (1 - tx) * img.at(x0, y1) + tx * img.at(x1, y1);
      out.at(x, y) = static_cast<std::uint8_t>(
          std::clamp(std::lround((1 - ty) * top + ty * bot), 0L, 255L));
    }
  }
  return out;
}

Eigen::VectorXd to_vector(const GrayImage& img) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(img.size()));
  for (std::size_t i = 0; i < img.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = img.pixels[i];
  }
  return v;
}

}  // namespace rrc::harness
