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

#include <random>

#include "spcover/matrix.hpp"

using namespace spcover;

TEST(Matrix, InvTranspose) {
  auto f5 = Field::make(5);
  EXPECT_EQ(invtranspose(Mat::identity(f5, 3)), Mat::identity(f5, 3));
  EXPECT_EQ(invtranspose(Mat::from_ints(f5, {{0, 1}, {3, 0}})), Mat::from_ints(f5, {{0, 1}, {2, 0}}));
  auto f3 = Field::make(3);
  EXPECT_EQ(det(Mat::from_ints(f3, {{1, -1}, {1, 1}})), 2);
  EXPECT_THROW(inverse(Mat::from_ints(f3, {{1, 1}, {1, 1}})), precondition_error);
  EXPECT_THROW(Mat::identity(f3, 2) * Mat::identity(f3, 3), precondition_error);
}

TEST(Matrix, Companion) {
  auto f5 = Field::make(5);
  EXPECT_EQ(companion(Poly::from_ints(f5, {2, 0, 1})), Mat::from_ints(f5, {{0, 1}, {3, 0}}));
  EXPECT_EQ(companion(Poly::linear(f5, 1)), Mat::identity(f5, 1));
  EXPECT_TRUE(poly_eval(Poly::from_ints(f5, {1, 2, 3, 1}), companion(Poly::from_ints(f5, {1, 2, 3, 1}))).is_zero());
}

TEST(Matrix, RandomInverseAndKernel) {
  std::mt19937 rng(11);
  for (int p : {2, 3, 5}) {
    auto f = Field::make(p);
    for (int t = 0; t < 100; ++t) {
      const int n = 1 + rng() % 4;
      Mat A(f, n, n + 1);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j) A(i, j) = static_cast<Elem>(rng() % p);
      Mat K = left_kernel(A);
      EXPECT_TRUE((K * A).is_zero());
      EXPECT_EQ(K.rows() + rank(A), n);
      Mat S = A.block(0, 0, n, n);
      if (auto inv = try_inverse(S)) {
        EXPECT_TRUE((S * *inv).is_identity());
        EXPECT_NE(det(S), 0);
      } else {
        EXPECT_EQ(det(S), 0);
      }
    }
  }
}

TEST(Subspace, Operations) {
  auto f3 = Field::make(3);
  Subspace a = Subspace::span(Mat::from_ints(f3, {{1, 0, 0}, {0, 1, 0}}));
  Subspace b = Subspace::span(Mat::from_ints(f3, {{0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ((a + b).dim(), 3);
  EXPECT_EQ(a.intersect(b), Subspace::span(Mat::from_ints(f3, {{0, 2, 0}})));
  EXPECT_TRUE(a.contains(std::vector<Elem>{2, 1, 0}));
  EXPECT_FALSE(a.contains(std::vector<Elem>{0, 0, 1}));
}
