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

#include <gtest/gtest.h>

#include <set>

#include "layoutsearch/layout.hpp"
#include "test_util.hpp"

using namespace layoutsearch;
using namespace layoutsearch::testing;

TEST(ComponentClass, CodesAndNamesAreStable) {
  ASSERT_EQ(all_classes().size(), 12u);
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < all_classes().size(); ++i) {
    const ComponentClass cls = all_classes()[i];
    EXPECT_EQ(class_code(cls), static_cast<int>(i));
    EXPECT_EQ(class_from_code(static_cast<int>(i)), cls);
    EXPECT_EQ(class_from_name(class_name(cls)), cls);
    names.insert(class_name(cls));
  }
  EXPECT_EQ(names.size(), 12u);
  EXPECT_EQ(class_name(ComponentClass::TextButton), "text_button");
  EXPECT_EQ(class_name(ComponentClass::UpperTaskBar), "upper_task_bar");
  EXPECT_FALSE(class_from_code(12).has_value());
  EXPECT_FALSE(class_from_code(-1).has_value());
}

TEST(ComponentClass, NameLookupAcceptsSpellingVariants) {
  EXPECT_EQ(class_from_name("TextButton"), ComponentClass::TextButton);
  EXPECT_EQ(class_from_name("Text Button"), ComponentClass::TextButton);
  EXPECT_EQ(class_from_name("PopUpWindow"), ComponentClass::PopUpWindow);
  EXPECT_FALSE(class_from_name("carousel").has_value());
  EXPECT_FALSE(class_from_name("").has_value());
}

TEST(ComponentClass, LabelSetExcludesOnlyTheTaskBar) {
  int labelled = 0;
  for (ComponentClass cls : all_classes()) labelled += in_label_set(cls);
  EXPECT_EQ(labelled, 11);
  EXPECT_FALSE(in_label_set(ComponentClass::UpperTaskBar));
}

TEST(ValidateLayout, ValidBoxIsUnchanged) {
  const auto layout = make_layout("a", 100, 100, {element(ComponentClass::Text, 10, 10, 50, 50)});
  EXPECT_EQ(validate_layout(layout), layout);
}

TEST(ValidateLayout, ClampsToCanvas) {
  const auto layout = make_layout("a", 100, 100, {element(ComponentClass::Text, -5, 0, 50, 50)});
  const auto v = validate_layout(layout);
  EXPECT_EQ(v.elements[0].box, (BoundingBox{0, 0, 50, 50}));

  const auto over = validate_layout(make_layout("b", 100, 80, {element(ComponentClass::Icon, 90, 70, 101, 81)}));
  EXPECT_EQ(over.elements[0].box, (BoundingBox{90, 70, 100, 80}));
}

TEST(ValidateLayout, ZeroWidthIsDegenerate) {
  const auto layout = make_layout("a", 100, 100,
                                  {element(ComponentClass::Text, 0, 0, 5, 5), element(ComponentClass::Text, 30, 30, 30, 80)});
  try {
    validate_layout(layout);
    FAIL() << "expected DegenerateBox";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateBox);
    EXPECT_EQ(e.subject(), "1");
  }
}

TEST(ValidateLayout, BoxOutsideCanvasBecomesDegenerate) {
  const auto layout = make_layout("a", 100, 100, {element(ComponentClass::Text, 120, 10, 150, 50)});
  EXPECT_EQ(error_kind([&] { validate_layout(layout); }), ErrorKind::DegenerateBox);
}

TEST(ValidateLayout, RejectsEmptyCanvasAndNonFiniteBoxes) {
  EXPECT_EQ(error_kind([] { validate_layout(make_layout("a", 0, 10, {})); }), ErrorKind::EmptyCanvas);
  EXPECT_EQ(error_kind([] { validate_layout(make_layout("a", 10, -1, {})); }), ErrorKind::EmptyCanvas);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_kind([&] { validate_layout(make_layout("a", 10, 10, {element(ComponentClass::Text, 0, 0, nan, 5)})); }),
            ErrorKind::DegenerateBox);
}

TEST(ValidateLayout, ResultBoxesArePositiveAndInsideCanvas) {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> coord(-50, 250);
  for (int trial = 0; trial < 200; ++trial) {
    AnnotatedLayout layout{"r", 200, 150, {}, std::nullopt};
    for (int i = 0; i < 5; ++i) {
      double a = coord(gen), b = coord(gen), c = coord(gen), d = coord(gen);
      layout.elements.push_back(element(ComponentClass::Icon, std::min(a, b), std::min(c, d), std::max(a, b) + 1,
                                        std::max(c, d) + 1));
    }
    try {
      for (const auto& e : validate_layout(layout).elements) {
        EXPECT_GT(e.box.area(), 0);
        EXPECT_GE(e.box.x_min, 0);
        EXPECT_GE(e.box.y_min, 0);
        EXPECT_LE(e.box.x_max, 200);
        EXPECT_LE(e.box.y_max, 150);
      }
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DegenerateBox);
    }
  }
}

TEST(MultiHot, MarksPresentClasses) {
  const auto layout = make_layout("a", 10, 10,
                                  {element(ComponentClass::Text, 0, 0, 1, 1), element(ComponentClass::Text, 1, 1, 2, 2),
                                   element(ComponentClass::Icon, 2, 2, 3, 3)});
  const LabelVector v = multi_hot(layout);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool expected = i == class_code(ComponentClass::Text) || i == class_code(ComponentClass::Icon);
    EXPECT_EQ(v[i], expected ? 1.0 : 0.0) << i;
  }
}

TEST(MultiHot, EmptyLayoutIsAllZero) {
  for (double x : multi_hot(make_layout("a", 10, 10, {}))) EXPECT_EQ(x, 0.0);
}

TEST(MultiHot, EveryClassGivesElevenOnes) {
  AnnotatedLayout layout{"a", 10, 10, {}, std::nullopt};
  for (ComponentClass cls : all_classes()) layout.elements.push_back(element(cls, 0, 0, 5, 5));
  const LabelVector v = multi_hot(layout);
  EXPECT_EQ(std::count(v.begin(), v.end(), 1.0), 11);
}

TEST(MultiHot, InvariantUnderDuplication) {
  auto layout = make_layout("a", 10, 10, {element(ComponentClass::Switch, 0, 0, 1, 1),
                                          element(ComponentClass::UpperTaskBar, 0, 0, 10, 1)});
  const LabelVector before = multi_hot(layout);
  layout.elements.push_back(layout.elements[0]);
  layout.elements.push_back(layout.elements[1]);
  EXPECT_EQ(multi_hot(layout), before);
}

TEST(ScaleLayout, FullCanvasBox) {
  const auto s = scale_layout(make_layout("a", 200, 400, {element(ComponentClass::Image, 0, 0, 200, 400)}), 256, 256);
  EXPECT_EQ(s.width, 256);
  EXPECT_EQ(s.height, 256);
  EXPECT_EQ(s.elements[0].box, (BoundingBox{0, 0, 256, 256}));
}

TEST(ScaleLayout, MultipliesByRatio) {
  const auto s = scale_layout(make_layout("a", 100, 100, {element(ComponentClass::Image, 25, 25, 75, 75)}), 256, 256);
  EXPECT_NEAR(s.elements[0].box.x_min, 64, 1e-9);
  EXPECT_NEAR(s.elements[0].box.y_min, 64, 1e-9);
  EXPECT_NEAR(s.elements[0].box.x_max, 192, 1e-9);
  EXPECT_NEAR(s.elements[0].box.y_max, 192, 1e-9);
}

TEST(ScaleLayout, IdentityAndComposition) {
  const auto layout = make_layout("a", 360, 640,
                                  {element(ComponentClass::Text, 13.5, 20, 100.25, 61), element(ComponentClass::Icon, 1, 2, 3, 4)});
  EXPECT_EQ(scale_layout(layout, 360, 640), layout);
  const auto twice = scale_layout(scale_layout(layout, 97, 211), 256, 128);
  const auto once = scale_layout(layout, 256, 128);
  ASSERT_EQ(twice.elements.size(), once.elements.size());
  const double tol = 1e-6 * 256;
  for (std::size_t i = 0; i < once.elements.size(); ++i) {
    EXPECT_NEAR(twice.elements[i].box.x_min, once.elements[i].box.x_min, tol);
    EXPECT_NEAR(twice.elements[i].box.y_min, once.elements[i].box.y_min, tol);
    EXPECT_NEAR(twice.elements[i].box.x_max, once.elements[i].box.x_max, tol);
    EXPECT_NEAR(twice.elements[i].box.y_max, once.elements[i].box.y_max, tol);
  }
}

TEST(ScaleLayout, RejectsNonPositiveTarget) {
  const auto layout = make_layout("a", 10, 10, {});
  EXPECT_EQ(error_kind([&] { scale_layout(layout, 0, 10); }), ErrorKind::EmptyCanvas);
}
