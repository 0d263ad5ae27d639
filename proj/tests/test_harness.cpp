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

#include "spcover/harness.hpp"

using namespace spcover;

TEST(ClassLabels, ConsistentWithPartition) {
  GroupStore st(Field::make(2, 1), 2);
  auto labels = class_labels(st);
  std::vector<long long> counts(st.classes->size(), 0);
  for (int l : labels) ++counts[static_cast<size_t>(l)];
  for (size_t c = 0; c < counts.size(); ++c) EXPECT_EQ(counts[c], (*st.classes)[c].size);
}

TEST(Cover, Admissibility) {
  EXPECT_THROW(covering_check(Field::make(2, 1), 2), precondition_error);
  EXPECT_THROW(covering_check(Field::make(3, 1), 1), precondition_error);
}

TEST(Cover, Sp43WithFactorizationCounts) {
  auto f3 = Field::make(3, 1);
  auto r = covering_check(f3, 2, true);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.rows.size(), 34u);
  EXPECT_EQ(r.q, Poly::from_ints(f3, {-1, -1, 1}));
  EXPECT_EQ(r.omega_size, 6480);  // centralizer GF(9)^* of order 8
  EXPECT_EQ(r.omega_sp_classes, 1);
  // every ordered pair of class members lands in exactly one class
  long long pairs = 0;
  for (const auto& row : r.rows) pairs += row.size * row.factorizations;
  EXPECT_EQ(pairs, r.omega_size * r.omega_size);
  // q(-x) = q* over GF(3), so -P stays in the class and -I = P (-P^{-1}) is a product too
  EXPECT_TRUE(r.minus_identity_in_square);
  for (const auto& row : r.rows) {
    if (row.excluded) continue;
    ASSERT_TRUE(row.cert.has_value());
    EXPECT_TRUE(row.cert->all_pass());
    EXPECT_TRUE(row.cert_in_orbit);
  }
}

TEST(Sp45, ScanFindsPlantedInvolution) {
  auto f5 = Field::make(5, 1);
  auto S = SympSpace::make(f5, 2);
  Mat R = strictly_hyperbolic_rep(Poly::from_ints(f5, {2, 0, 1}), S).rep;
  Mat I2 = Mat::identity(f5, 2);
  Mat s = boxplus(I2, I2.scaled(4));
  // Q = R^{-1} s makes RQ = s, a nonscalar involution
  Mat Q = sp_inverse(R) * s;
  GroupStore st(f5, 2);
  std::vector<Mat> members;
  for (Code c : class_orbit(Q, st)) members.push_back(st.packer.decode(c));
  auto [inv, scalar] = involutions_in_products(R, members);
  EXPECT_GE(inv, 1);
  // the inverse class gives RQ = I exactly once per element of the centralizer of R
  members.clear();
  for (Code c : class_orbit(sp_inverse(R), st)) members.push_back(st.packer.decode(c));
  auto [inv2, scalar2] = involutions_in_products(R, members);
  EXPECT_GE(scalar2, 1);
  (void)inv2;
  (void)scalar;
}

TEST(Sp45, NoInvolutionInProduct) {
  auto r = sp45_counterexample();
  EXPECT_TRUE(r.omega_mu_ok);
  EXPECT_TRUE(r.psi_mu_ok);
  EXPECT_EQ(r.involutions, 0);
  EXPECT_TRUE(r.pass);
  for (auto o : r.omega_orbits) EXPECT_EQ(sp_order(5, 2) % o, 0);
  for (auto o : r.psi_orbits) EXPECT_EQ(sp_order(5, 2) % o, 0);
}

TEST(Sp45, FactorizationBoundary) {
  auto r = sp45_boundary(20, 99);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.replayed, 20);
  EXPECT_EQ(r.involutions_refused, r.involutions_tested);
}

TEST(ZeroCornerOracle, MatchesClassSearch) {
  for (int p : {2, 3}) {
    auto r = zero_corner_oracle(Field::make(p, 1), 2, 50, 11);
    EXPECT_TRUE(r.pass) << p;
    int with = 0;
    for (const auto& row : r.rows) with += row.form_in_class;
    EXPECT_GT(with, 0);
    EXPECT_LT(with, static_cast<int>(r.rows.size()));
  }
}

TEST(GlProducts, ClassRules) {
  for (auto [p, n] : {std::pair{2, 2}, {3, 2}}) {
    auto r = gl_product_check(Field::make(p, 1), n);
    EXPECT_TRUE(r.pass);
    int excluded = 0;
    for (const auto& row : r.rows) excluded += row.excluded;
    // only (x+1)^2 against itself over GF(2)
    EXPECT_EQ(excluded, p == 2 ? 1 : 0);
  }
}

TEST(GlProducts, TraceSets) {
  auto [total, agree] = trace_set_check(Field::make(3, 1));
  EXPECT_GT(total, 0);
  EXPECT_EQ(agree, total);
}

TEST(ShiftSolve, ExhaustiveOverGF2) {
  auto r = shift_solve_check(Field::make(2, 1));
  EXPECT_GT(r.instances, 0);
  EXPECT_EQ(r.solved, r.instances);
  EXPECT_EQ(r.exhaustive_agree, r.instances);
}

namespace {

// mu = (x - 1) p with p(1) != 0 and P^2 != I
bool simple_unit_eigenvalue(const Mat& P) {
  if ((P * P).is_identity()) return false;
  const Poly lin = Poly::linear(P.field(), 1);
  Poly mu = invariant_factors(P).minimal();
  if (!(mu % lin).is_zero()) return false;
  return !((mu / lin) % lin).is_zero();
}

int missing_triangular(const Mat& rep, const GroupStore& st) {
  const auto& f = rep.field();
  auto pcs = pc_enumerate(rep, st);
  int missing = 0;
  for (int a = 1; a < f->order(); ++a)
    for (int d = 1; d < f->order(); ++d)
      for (int b = 0; b < f->order(); ++b) {
        Mat T = Mat::diag(f, {static_cast<Elem>(a), static_cast<Elem>(d)});
        T(0, 1) = static_cast<Elem>(b);
        if (!T.is_scalar() && !std::binary_search(pcs.begin(), pcs.end(), T)) ++missing;
      }
  return missing;
}

}  // namespace

TEST(CornerSets, TriangularCornersForSimpleUnitEigenvalue) {
  auto f3 = Field::make(3, 1);
  GroupStore s3(f3, 2);
  class_partition(s3);
  int seen = 0;
  for (const auto& c : *s3.classes)
    if (simple_unit_eigenvalue(c.rep)) {
      ++seen;
      EXPECT_EQ(missing_triangular(c.rep, s3), 0) << invariant_factors(c.rep).str();
    }
  EXPECT_EQ(seen, 3);
  // in Sp(4,5) these classes are I_2 (+) R with R in SL(2,5), trace R != 2, R != -I
  auto f5 = Field::make(5, 1);
  GroupStore s5(f5, 2);
  const Mat I2 = Mat::identity(f5, 2);
  std::vector<Mat> Rs{Mat::from_ints(f5, {{-1, 1}, {0, -1}}), Mat::from_ints(f5, {{-1, 2}, {0, -1}})};
  for (int t : {0, 1, 3, 4}) Rs.push_back(Mat::from_ints(f5, {{0, -1}, {1, t}}));
  for (const auto& R : Rs) {
    Mat P = boxplus(I2, R);
    ASSERT_TRUE(simple_unit_eigenvalue(P));
    EXPECT_EQ(missing_triangular(P, s5), 0) << R.str();
  }
}
