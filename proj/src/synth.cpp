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

#include "layoutsearch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "layoutsearch/errors.hpp"
#include "layoutsearch/random.hpp"
#include "layoutsearch/voc.hpp"

namespace layoutsearch {

namespace {

using C = ComponentClass;
using A = Arrangement;

SlotSpec slot(C cls, FractionRange cx, FractionRange cy, FractionRange w, FractionRange h, double presence = 1.0,
              int min_count = 1, int max_count = 1, A arrangement = A::Free) {
  return {cls, cx, cy, w, h, presence, min_count, max_count, arrangement};
}

std::vector<TemplateSpec> make_templates() {
  const SlotSpec task_bar = slot(C::UpperTaskBar, {0.5, 0.5}, {0.02, 0.02}, {1.0, 1.0}, {0.03, 0.04});
  std::vector<TemplateSpec> t;
  t.push_back({"login",
               {
                   slot(C::UpperTaskBar, {0.5, 0.5}, {0.02, 0.02}, {1.0, 1.0}, {0.03, 0.04}, 0.8),
                   slot(C::Image, {0.45, 0.55}, {0.15, 0.25}, {0.25, 0.4}, {0.1, 0.15}, 0.9),
                   slot(C::InputField, {0.5, 0.5}, {0.38, 0.6}, {0.7, 0.85}, {0.05, 0.07}, 1.0, 2, 3, A::Vertical),
                   slot(C::CheckedView, {0.14, 0.18}, {0.63, 0.65}, {0.04, 0.06}, {0.025, 0.03}, 0.4),
                   slot(C::TextButton, {0.5, 0.5}, {0.7, 0.76}, {0.6, 0.8}, {0.06, 0.08}),
                   slot(C::Text, {0.3, 0.7}, {0.84, 0.9}, {0.25, 0.4}, {0.025, 0.035}, 0.8, 1, 2, A::Horizontal),
               }});
  t.push_back({"login_with_background",
               {
                   slot(C::BackgroundImage, {0.5, 0.5}, {0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0}),
                   slot(C::Text, {0.45, 0.55}, {0.22, 0.34}, {0.5, 0.7}, {0.04, 0.06}),
                   slot(C::InputField, {0.5, 0.5}, {0.5, 0.64}, {0.7, 0.85}, {0.05, 0.07}, 0.7, 1, 2, A::Vertical),
                   slot(C::TextButton, {0.5, 0.5}, {0.74, 0.92}, {0.6, 0.8}, {0.06, 0.08}, 1.0, 1, 2, A::Vertical),
               }});
  t.push_back({"onboarding",
               {
                   slot(C::Image, {0.48, 0.52}, {0.3, 0.4}, {0.6, 0.8}, {0.28, 0.38}),
                   slot(C::Text, {0.5, 0.5}, {0.62, 0.74}, {0.6, 0.8}, {0.03, 0.05}, 1.0, 1, 2, A::Vertical),
                   slot(C::PageIndicator, {0.5, 0.5}, {0.8, 0.83}, {0.15, 0.25}, {0.015, 0.02}),
                   slot(C::TextButton, {0.2, 0.8}, {0.9, 0.93}, {0.25, 0.35}, {0.05, 0.06}, 1.0, 1, 2,
                        A::Horizontal),
               }});
  t.push_back({"grid",
               {
                   task_bar,
                   slot(C::Text, {0.25, 0.45}, {0.08, 0.1}, {0.3, 0.5}, {0.025, 0.035}),
                   slot(C::Icon, {0.88, 0.92}, {0.08, 0.1}, {0.05, 0.07}, {0.03, 0.04}, 0.6),
                   slot(C::Image, {0.25, 0.25}, {0.2, 0.92}, {0.4, 0.44}, {0.12, 0.16}, 1.0, 2, 4, A::Vertical),
                   slot(C::Image, {0.75, 0.75}, {0.2, 0.92}, {0.4, 0.44}, {0.12, 0.16}, 1.0, 2, 4, A::Vertical),
               }});
  t.push_back({"list",
               {
                   task_bar,
                   slot(C::Icon, {0.08, 0.12}, {0.14, 0.95}, {0.07, 0.09}, {0.035, 0.045}, 1.0, 5, 8, A::Vertical),
                   slot(C::Text, {0.45, 0.55}, {0.14, 0.95}, {0.5, 0.6}, {0.025, 0.035}, 1.0, 5, 8, A::Vertical),
                   slot(C::Switch, {0.88, 0.9}, {0.14, 0.95}, {0.1, 0.12}, {0.025, 0.03}, 0.4, 2, 4, A::Vertical),
               }});
  t.push_back({"sliding_menu",
               {
                   slot(C::UpperTaskBar, {0.5, 0.5}, {0.02, 0.02}, {1.0, 1.0}, {0.03, 0.04}, 0.5),
                   slot(C::SlidingMenu, {0.36, 0.4}, {0.5, 0.5}, {0.72, 0.8}, {1.0, 1.0}),
                   slot(C::Image, {0.15, 0.25}, {0.12, 0.18}, {0.15, 0.22}, {0.08, 0.11}, 0.8),
                   slot(C::Icon, {0.08, 0.12}, {0.3, 0.9}, {0.06, 0.08}, {0.03, 0.04}, 1.0, 4, 7, A::Vertical),
                   slot(C::Text, {0.32, 0.4}, {0.3, 0.9}, {0.3, 0.4}, {0.025, 0.035}, 1.0, 4, 7, A::Vertical),
               }});
  for (const auto& spec : t) spec.validate();
  return t;
}

bool in_unit(FractionRange r) { return r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi; }

// Integer span of length ~size centred near `center`, inside [0, extent].
std::pair<double, double> place(double center, double size, int extent) {
  const double len = std::clamp(std::round(size), 1.0, static_cast<double>(extent));
  double lo = std::round(center - len / 2.0);
  lo = std::clamp(lo, 0.0, extent - len);
  return {lo, lo + len};
}

AnnotatedLayout generate_one(const TemplateSpec& spec, const GeneratorConfig& config, std::size_t template_index,
                             int index) {
  Rng rng(derive_seed(config.seed, template_index, static_cast<std::uint64_t>(index)));
  AnnotatedLayout layout;
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "_%04d", index);
  layout.id = spec.category + suffix;
  layout.width = config.width;
  layout.height = config.height;
  layout.category = spec.category;
  const double W = config.width;
  const double H = config.height;

  for (const auto& s : spec.slots) {
    // Both draws happen unconditionally so one slot's presence never shifts
    // another slot's samples.
    const bool present = rng.uniform() < s.presence;
    const int count = rng.between(s.min_count, s.max_count);
    if (!present) continue;
    for (int i = 0; i < count; ++i) {
      FractionRange cx = s.center_x, cy = s.center_y;
      const double share = 1.0 / count;
      if (s.arrangement == Arrangement::Vertical) {
        const double span = cy.hi - cy.lo;
        cy = {cy.lo + span * share * i, cy.lo + span * share * (i + 1)};
      } else if (s.arrangement == Arrangement::Horizontal) {
        const double span = cx.hi - cx.lo;
        cx = {cx.lo + span * share * i, cx.lo + span * share * (i + 1)};
      }
      const double center_x = rng.uniform(cx.lo, cx.hi) * W;
      const double center_y = rng.uniform(cy.lo, cy.hi) * H;
      const double w = rng.uniform(s.width.lo, s.width.hi) * W;
      const double h = rng.uniform(s.height.lo, s.height.hi) * H;
      const auto [x0, x1] = place(center_x, w, config.width);
      const auto [y0, y1] = place(center_y, h, config.height);
      layout.elements.push_back({s.cls, {x0, y0, x1, y1}, std::nullopt});
    }
  }
  return validate_layout(std::move(layout));
}

}  // namespace

void TemplateSpec::validate() const {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& s = slots[i];
    const bool ok = in_unit(s.center_x) && in_unit(s.center_y) && in_unit(s.width) && in_unit(s.height) &&
                    s.width.lo > 0 && s.height.lo > 0 && s.presence >= 0.0 && s.presence <= 1.0 &&
                    s.min_count >= 1 && s.min_count <= s.max_count;
    if (!ok) throw Error(ErrorKind::InvalidConfig, "template '" + category + "' slot " + std::to_string(i) + " is invalid");
  }
}

const std::vector<TemplateSpec>& builtin_templates() {
  static const std::vector<TemplateSpec> templates = make_templates();
  return templates;
}

Corpus generate(const GeneratorConfig& config) { return generate(config, builtin_templates()); }

Corpus generate(const GeneratorConfig& config, std::span<const TemplateSpec> templates) {
  if (config.per_category < 1) throw Error(ErrorKind::InvalidConfig, "per_category must be >= 1");
  if (config.width <= 0 || config.height <= 0) throw Error(ErrorKind::EmptyCanvas, "generator canvas is empty");
  for (const auto& t : templates) t.validate();

  const std::size_t per = static_cast<std::size_t>(config.per_category);
  Corpus corpus;
  corpus.provenance = "synthetic:seed=" + std::to_string(config.seed);
  corpus.layouts.resize(templates.size() * per);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < static_cast<long>(corpus.layouts.size()); ++k) {
    const auto t = static_cast<std::size_t>(k) / per;
    const auto i = static_cast<int>(static_cast<std::size_t>(k) % per);
    corpus.layouts[static_cast<std::size_t>(k)] = generate_one(templates[t], config, t, i);
  }
  std::sort(corpus.layouts.begin(), corpus.layouts.end(),
            [](const AnnotatedLayout& a, const AnnotatedLayout& b) { return a.id < b.id; });
  return corpus;
}

void export_corpus(const Corpus& corpus, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec || !std::filesystem::is_directory(directory)) {
    throw Error(ErrorKind::Io, "cannot create directory " + directory.string(), directory.string());
  }
  for (const auto& layout : corpus.layouts) write_file(directory / (layout.id + ".xml"), write_voc(layout));
  write_categories(corpus, directory / "categories.csv");
}

}  // namespace layoutsearch
