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

#pragma once

#include <array>
#include <filesystem>

#include "layoutsearch/layout.hpp"
#include "layoutsearch/tensor.hpp"

namespace layoutsearch {

struct Resolution {
  int height = 0;
  int width = 0;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct Rgb {
  double r = 0;
  double g = 0;
  double b = 0;
};

// Class -> fill colour table. The standard palette is fixed so semantic
// images are identical across runs and builds.
class Palette {
 public:
  Palette(std::array<Rgb, kNumClasses> classes, Rgb background);

  static const Palette& standard();

  const Rgb& color(ComponentClass cls) const { return classes_[static_cast<std::size_t>(cls)]; }
  const Rgb& background() const { return background_; }

 private:
  std::array<Rgb, kNumClasses> classes_;
  Rgb background_;
};

// [3,H,W] image in [0,1]: background fill, then boxes painted largest area
// first (ties by element index) so nested components stay visible.
struct SemanticImage {
  Tensor pixels;
};

// [3,H,W]: channel 0 is the union of boxes (binary), channel 1 all zeros,
// channel 2 all ones.
struct AttentionMap {
  Tensor mask;
};

// Half-open pixel span [round(lo*scale), round(hi*scale)) clipped to [0,extent].
struct PixelSpan {
  int begin;
  int end;
};
PixelSpan pixel_span(double lo, double hi, double scale, int extent);

SemanticImage rasterize(const AnnotatedLayout& layout, Resolution resolution,
                        const Palette& palette = Palette::standard());

AttentionMap attention_map(const AnnotatedLayout& layout, Resolution resolution);

// Nearest-neighbour subsampling keeping the top-left sample of each cell.
// Throws NonDivisibleResolution unless h and w divide the source size.
AttentionMap downsample_binary(const AttentionMap& map, int height, int width);

// 8-bit PNG export for debugging: the RGB image, or one channel as grayscale.
void write_png(const SemanticImage& image, const std::filesystem::path& path);
void write_png(const AttentionMap& map, std::size_t channel, const std::filesystem::path& path);

}  // namespace layoutsearch
