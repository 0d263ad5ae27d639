// Copyright 2025 The spcover Authors.
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

#include <gtest/gtest.h>

#include "spcover/field.hpp"

using namespace spcover;

TEST(Field, PrimeFields) {
  auto f2 = Field::make(2);
  auto f3 = Field::make(3);
  EXPECT_EQ(f2->order(), 2);
  EXPECT_EQ(f3->order(), 3);
  EXPECT_EQ(f3->header(), "GF 3 1");
}

TEST(Field, ExtensionWithGivenModulus) {
  auto f4 = Field::make(2, 2, std::vector<int>{1, 1, 1});
  EXPECT_EQ(f4->order(), 4);
  // t * t = t + 1
  EXPECT_EQ(f4->mul(2, 2), 3);
  for (int a = 1; a < 4; ++a) EXPECT_EQ(f4->mul(a, f4->inv(a)), 1);
}

TEST(Field, DefaultModulusIsLeastIrreducible) {
  auto f4 = Field::make(2, 2);
  EXPECT_EQ(f4->modulus(), (std::vector<int>{1, 1, 1}));
  auto f9 = Field::make(3, 2);
  // x^2 + 1 is the first monic irreducible quadratic over GF(3)
  EXPECT_EQ(f9->modulus(), (std::vector<int>{1, 0, 1}));
}

TEST(Field, Errors) {
  EXPECT_THROW(Field::make(4), precondition_error);
  EXPECT_THROW(Field::make(2, 2, std::vector<int>{1, 0, 1}), precondition_error);
  EXPECT_THROW(Field::make(3, 3), precondition_error);
  EXPECT_NO_THROW(Field::make(3, 3, std::nullopt, 27));
}

TEST(Field, Inverses) {
  auto f3 = Field::make(3);
  auto f5 = Field::make(5);
  EXPECT_EQ(f3->inv(2), 2);
  EXPECT_EQ(f5->inv(2), 3);
  EXPECT_THROW(f3->inv(0), precondition_error);
}

TEST(Field, AxiomsExhaustive) {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}, {2, 3}}) {
    auto f = Field::make(p, k);
    const int q = f->order();
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        EXPECT_EQ(f->add(a, b), f->add(b, a));
        EXPECT_EQ(f->mul(a, b), f->mul(b, a));
        EXPECT_EQ(f->sub(f->add(a, b), b), a);
        for (int c = 0; c < q; ++c)
          EXPECT_EQ(f->mul(a, f->add(b, c)), f->add(f->mul(a, b), f->mul(a, c)));
      }
    // primitive element generates the multiplicative group
    int ord = 1;
    for (Elem x = f->primitive(); x != 1; x = f->mul(x, f->primitive())) ++ord;
    EXPECT_EQ(ord, q - 1);
  }
}

TEST(Field, FormatParseRoundTrip) {
  auto f9 = Field::make(3, 2);
  for (int a = 0; a < 9; ++a) EXPECT_EQ(f9->parse(f9->format(a)), a);
  EXPECT_EQ(f9->format(5), "2:1");
  EXPECT_THROW(f9->parse("1"), precondition_error);
}
