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

#include "spcover/group.hpp"

using namespace spcover;

TEST(Packing, RoundTrip) {
  std::mt19937 rng(1);
  for (auto [p, d] : {std::pair{2, 6}, {3, 4}, {5, 4}, {3, 6}}) {
    auto f = Field::make(p, 1);
    Packer pk(f, d);
    for (int it = 0; it < 200; ++it) {
      Mat m(f, d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = static_cast<Elem>(rng() % p);
      EXPECT_EQ(pk.decode(pk.encode(m)), m);
    }
  }
  EXPECT_THROW(Packer(Field::make(5, 1), 8), precondition_error);
}

TEST(Enumeration, OrdersMatchFormula) {
  EXPECT_EQ(sp_order(2, 1), 6);
  EXPECT_EQ(sp_order(2, 2), 720);
  EXPECT_EQ(sp_order(3, 2), 51840);
  EXPECT_EQ(sp_order(2, 3), 1451520);
  EXPECT_EQ(sp_order(5, 2), 9360000);
  for (auto [p, n] : {std::pair{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
    GroupStore st(Field::make(p, 1), n);
    group_enumerate(st);
    EXPECT_EQ(static_cast<long long>(st.elements->size()), sp_order(p, n));
  }
  GroupStore big(Field::make(5, 1), 2);
  EXPECT_THROW(group_enumerate(big, 1'000'000), budget_exceeded);
}

TEST(Enumeration, ClassPartition) {
  // Sp(4,2) = S6 has 11 classes; Sp(4,3) has 34
  GroupStore s2(Field::make(2, 1), 2);
  class_partition(s2);
  EXPECT_EQ(s2.classes->size(), 11u);
  GroupStore s3(Field::make(3, 1), 2);
  class_partition(s3);
  EXPECT_EQ(s3.classes->size(), 34u);
  for (const auto& c : *s3.classes) {
    EXPECT_EQ(s3.order() % c.size, 0);
    EXPECT_EQ(static_cast<long long>(class_orbit(c.rep, s3).size()), c.size);
  }
}

TEST(Enumeration, CentralizerCountsInSp42) {
  // orbit size times centralizer order is the group order
  GroupStore st(Field::make(2, 1), 2);
  class_partition(st);
  std::vector<Mat> els;
  for (Code c : *st.elements) els.push_back(st.packer.decode(c));
  for (const auto& c : *st.classes) {
    long long cent = 0;
    for (const auto& g : els)
      if (g * c.rep == c.rep * g) ++cent;
    EXPECT_EQ(cent * c.size, st.order());
  }
}

TEST(Orbits, SmallCases) {
  auto f3 = Field::make(3, 1);
  GroupStore st(f3, 2);
  EXPECT_EQ(class_orbit(Mat::identity(f3, 4), st).size(), 1u);
  EXPECT_EQ(class_orbit(Mat::identity(f3, 4).scaled(2), st).size(), 1u);
  Mat t = Mat::identity(f3, 4);
  t(0, 2) = 1;
  bool found = orbit_search(t, st, [&](const Mat& Y, const Mat& X) {
    EXPECT_EQ(conj(t, X), Y);
    EXPECT_TRUE(is_symplectic(X));
    return Y(1, 3) == 1 && Y(0, 2) == 0;
  });
  EXPECT_TRUE(found);
}

TEST(Orbits, CornerSets) {
  auto f2 = Field::make(2, 1);
  GroupStore st(f2, 2);
  auto id = pc_enumerate(Mat::identity(f2, 4), st);
  ASSERT_EQ(id.size(), 1u);
  EXPECT_TRUE(id[0].is_identity());
  class_partition(st);
  for (const auto& c : *st.classes) {
    if (c.rep.is_scalar()) continue;
    auto pcs = pc_enumerate(c.rep, st);
    EXPECT_NE(std::find(pcs.begin(), pcs.end(), Mat::identity(f2, 2)), pcs.end());
  }
}

TEST(Orbits, SimilarityClassSplitting) {
  // strictly hyperbolic cyclic classes: one Sp-class per similarity class
  auto f3 = Field::make(3, 1);
  GroupStore st(f3, 2);
  class_partition(st);
  for (const auto& c : *st.classes) {
    if (!is_cyclic(c.rep)) continue;
    auto reps = sp_classes_in_similarity_class(c.rep);
    long long within = 0;
    auto inv = invariant_factors(c.rep);
    for (const auto& d : *st.classes)
      if (invariant_factors(d.rep) == inv) ++within;
    EXPECT_EQ(static_cast<long long>(reps.size()), within) << inv.str();
  }
}
