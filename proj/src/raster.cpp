/*
   Copyright 2026 The layoutsearch Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

#include "layoutsearch/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>

#include <png.h>

#include "layoutsearch/errors.hpp"

namespace layoutsearch {

Palette::Palette(std::array<Rgb, kNumClasses> classes, Rgb background)
    : classes_(classes), background_(background) {}

// Large and frequent classes get colours with channels in {0,1}, which keeps
// the Dice term of the reconstruction loss well behaved.
const Palette& Palette::standard() {
  static const Palette palette(
      {{
          {0.0, 0.0, 1.0},  // background_image
          {0.0, 0.5, 0.5},  // checked_view
          {1.0, 0.5, 0.0},  // icon
          {0.0, 1.0, 0.0},  // input_field
          {0.0, 1.0, 1.0},  // image
          {1.0, 1.0, 1.0},  // text
          {1.0, 0.0, 0.0},  // text_button
          {0.5, 0.0, 1.0},  // page_indicator
          {0.5, 0.5, 0.5},  // pop_up_window
          {1.0, 0.0, 1.0},  // sliding_menu
          {0.5, 1.0, 0.5},  // switch
          {1.0, 1.0, 0.0},  // upper_task_bar
      }},
      {0.0, 0.0, 0.0});
  return palette;
}

namespace {

void require_resolution(Resolution r) {
  if (r.height <= 0 || r.width <= 0) {
    throw Error(ErrorKind::EmptyResolution,
                "resolution " + std::to_string(r.height) + "x" + std::to_string(r.width));
  }
}

std::vector<std::size_t> paint_order(const AnnotatedLayout& layout) {
  std::vector<std::size_t> order(layout.elements.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return layout.elements[a].box.area() > layout.elements[b].box.area();
  });
  return order;
}

struct PixelRect {
  PixelSpan x;
  PixelSpan y;
};

PixelRect pixel_rect(const AnnotatedLayout& layout, const BoundingBox& box, Resolution r) {
  const double sx = static_cast<double>(r.width) / layout.width;
  const double sy = static_cast<double>(r.height) / layout.height;
  return {pixel_span(box.x_min, box.x_max, sx, r.width), pixel_span(box.y_min, box.y_max, sy, r.height)};
}

void require_canvas(const AnnotatedLayout& layout) {
  if (layout.width <= 0 || layout.height <= 0) {
    throw Error(ErrorKind::EmptyCanvas, "layout '" + layout.id + "' has an empty canvas");
  }
}

}  // namespace

PixelSpan pixel_span(double lo, double hi, double scale, int extent) {
  const auto clip = [extent](double v) {
    return static_cast<int>(std::clamp(std::round(v), 0.0, static_cast<double>(extent)));
  };
  return {clip(lo * scale), clip(hi * scale)};
}

SemanticImage rasterize(const AnnotatedLayout& layout, Resolution resolution, const Palette& palette) {
  require_resolution(resolution);
  require_canvas(layout);
  const auto H = static_cast<std::size_t>(resolution.height);
  const auto W = static_cast<std::size_t>(resolution.width);
  SemanticImage image{Tensor({3, H, W})};
  Tensor& px = image.pixels;

  const auto paint = [&](int y0, int y1, int x0, int x1, const Rgb& c) {
    const double rgb[3] = {c.r, c.g, c.b};
    for (std::size_t ch = 0; ch < 3; ++ch) {
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) px.at(ch, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = rgb[ch];
      }
    }
  };
  paint(0, resolution.height, 0, resolution.width, palette.background());
  for (std::size_t i : paint_order(layout)) {
    const auto& e = layout.elements[i];
    const auto rect = pixel_rect(layout, e.box, resolution);
    paint(rect.y.begin, rect.y.end, rect.x.begin, rect.x.end, palette.color(e.cls));
  }
  return image;
}

AttentionMap attention_map(const AnnotatedLayout& layout, Resolution resolution) {
  require_resolution(resolution);
  require_canvas(layout);
  const auto H = static_cast<std::size_t>(resolution.height);
  const auto W = static_cast<std::size_t>(resolution.width);
  AttentionMap map{Tensor({3, H, W})};
  for (const auto& e : layout.elements) {
    const auto rect = pixel_rect(layout, e.box, resolution);
    for (int y = rect.y.begin; y < rect.y.end; ++y) {
      for (int x = rect.x.begin; x < rect.x.end; ++x) {
        map.mask.at(0, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = 1.0;
      }
    }
  }
  std::fill(map.mask.data().begin() + static_cast<std::ptrdiff_t>(2 * H * W), map.mask.data().end(), 1.0);
  return map;
}

AttentionMap downsample_binary(const AttentionMap& map, int height, int width) {
  const Tensor& src = map.mask;
  if (src.rank() != 3 || src.dim(0) != 3) {
    throw Error(ErrorKind::ShapeMismatch, "attention map must be [3,H,W], got " + shape_string(src.shape()));
  }
  const std::size_t H = src.dim(1), W = src.dim(2);
  if (height <= 0 || width <= 0 || H % static_cast<std::size_t>(height) != 0 ||
      W % static_cast<std::size_t>(width) != 0) {
    throw Error(ErrorKind::NonDivisibleResolution, std::to_string(height) + "x" + std::to_string(width) +
                                                       " does not divide " + shape_string(src.shape()));
  }
  const auto h = static_cast<std::size_t>(height);
  const auto w = static_cast<std::size_t>(width);
  const std::size_t fy = H / h, fx = W / w;
  AttentionMap out{Tensor({3, h, w})};
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) out.mask.at(c, y, x) = src.at(c, y * fy, x * fx);
    }
  }
  return out;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

void write_png_rows(const std::filesystem::path& path, std::size_t height, std::size_t width, int color_type,
                    const std::vector<unsigned char>& buffer, std::size_t channels) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorKind::Io, "cannot write " + path.string(), path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::Io, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::Io, "libpng failed writing " + path.string(), path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < height; ++y) {
    png_write_row(png, buffer.data() + y * width * channels);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

void write_png(const SemanticImage& image, const std::filesystem::path& path) {
  const Tensor& px = image.pixels;
  const std::size_t H = px.dim(1), W = px.dim(2);
  std::vector<unsigned char> buffer(H * W * 3);
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) {
      for (std::size_t c = 0; c < 3; ++c) buffer[(y * W + x) * 3 + c] = to_byte(px.at(c, y, x));
    }
  }
  write_png_rows(path, H, W, PNG_COLOR_TYPE_RGB, buffer, 3);
}

void write_png(const AttentionMap& map, std::size_t channel, const std::filesystem::path& path) {
  const Tensor& m = map.mask;
  const std::size_t H = m.dim(1), W = m.dim(2);
  std::vector<unsigned char> buffer(H * W);
  for (std::size_t y = 0; y < H; ++y) {
    for (std::size_t x = 0; x < W; ++x) buffer[y * W + x] = to_byte(m.at(channel, y, x));
  }
  write_png_rows(path, H, W, PNG_COLOR_TYPE_GRAY, buffer, 1);
}

}  // namespace layoutsearch
