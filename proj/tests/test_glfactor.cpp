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

#include "spcover/gl_oracle.hpp"
#include "spcover/glfactor.hpp"

using namespace spcover;

namespace {
Poly P(const FieldPtr& f, std::vector<long long> c) { return Poly::from_ints(f, c); }

Mat random_invertible(const FieldPtr& f, int n, std::mt19937& rng) {
  while (true) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = static_cast<Elem>(rng() % f->order());
    if (det(m)) return m;
  }
}

std::vector<Poly> monic_polys(const FieldPtr& f, int d, bool nonzero_constant) {
  std::vector<Poly> out;
  long long total = 1;
  for (int i = 0; i < d; ++i) total *= f->order();
  for (long long code = 0; code < total; ++code) {
    std::vector<Elem> c(d + 1);
    long long x = code;
    for (int i = 0; i < d; ++i) {
      c[i] = static_cast<Elem>(x % f->order());
      x /= f->order();
    }
    c[d] = 1;
    if (nonzero_constant && c[0] == 0) continue;
    out.emplace_back(f, c);
  }
  return out;
}
}  // namespace

TEST(ShiftCompletion, Examples) {
  auto f3 = Field::make(3);
  Mat one = Mat::identity(f3, 1);
  Mat Z = complete_shift_product(one, one, P(f3, {2, 1, 1}));
  EXPECT_EQ(Z, Mat::from_ints(f3, {{2}}));
  EXPECT_EQ(shift_product(one, one, Z), Mat::from_ints(f3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(complete_shift_product(one, one, P(f3, {-1, 0, 1})), Mat::from_ints(f3, {{0}}));
  EXPECT_THROW(complete_shift_product(one, one, P(f3, {1, 0, 1})), precondition_error);
}

TEST(ShiftCompletion, RandomTriangularBlocks) {
  std::mt19937 rng(21);
  for (int p : {2, 3, 5}) {
    auto f = Field::make(p);
    for (int t = 0; t < 60; ++t) {
      const int n = 2 + rng() % 4, m = 1 + rng() % (n - 1);
      auto tri = [&](int s) {
        Mat u(f, s, s);
        for (int i = 0; i < s; ++i)
          for (int j = i; j < s; ++j) u(i, j) = static_cast<Elem>(i == j ? 1 + rng() % (p - 1) : rng() % p);
        return u;
      };
      Mat U1 = tri(m), U2 = tri(n - m);
      std::vector<Elem> c(n + 1);
      for (auto& x : c) x = static_cast<Elem>(rng() % p);
      c[n] = 1;
      c[0] = f->neg(f->mul(det(U1), det(U2)));
      Poly target(f, c);
      Mat Z = complete_shift_product(U1, U2, target);
      Mat PZ = shift_product(U1, U2, Z);
      EXPECT_EQ(charpoly(PZ), target);
      EXPECT_TRUE(is_cyclic(PZ));
    }
  }
}

TEST(BlockTriangularProduct, ExampleAndDeterminantError) {
  auto f3 = Field::make(3);
  auto Phi = GlClass::of_poly(P(f3, {2, 1, 1}));
  auto r = block_triangular_product(Phi, Phi, Mat::scalar(f3, 1, 2), Mat::scalar(f3, 1, 2));
  Mat block = Mat::blocks2(Mat::scalar(f3, 1, 2), r.C, Mat(f3, 1, 1), Mat::scalar(f3, 1, 2));
  EXPECT_EQ(r.F_Phi * r.F_Delta, block);
  GlOracle gl(f3, 2);
  EXPECT_TRUE(gl.product_set(Phi, Phi).count(gl.encode(block)));
  EXPECT_THROW(block_triangular_product(Phi, Phi, Mat::scalar(f3, 1, 1), Mat::scalar(f3, 1, 2)), precondition_error);
}

TEST(BlockTriangularProduct, RandomBlocks) {
  std::mt19937 rng(8);
  for (int p : {2, 3, 5}) {
    auto f = Field::make(p);
    for (int t = 0; t < 40; ++t) {
      const int n = 2 + rng() % 4, m = 1 + rng() % (n - 1);
      Mat P1 = random_invertible(f, m, rng), P2 = random_invertible(f, n - m, rng);
      Poly chi1 = Poly::one(f);
      // random cyclic classes with matching determinants
      std::vector<Elem> c(n + 1);
      for (auto& x : c) x = static_cast<Elem>(rng() % p);
      c[n] = 1;
      c[0] = static_cast<Elem>(1 + rng() % (p - 1));
      Poly phi(f, c);
      auto Phi = GlClass::of_poly(phi);
      const Elem want = f->div(f->mul(det(P1), det(P2)), Phi.det);
      for (auto& x : c) x = static_cast<Elem>(rng() % p);
      c[n] = 1;
      c[0] = (n % 2 == 0) ? want : f->neg(want);
      auto Delta = GlClass::of_poly(Poly(f, c));
      ASSERT_EQ(f->mul(Phi.det, Delta.det), f->mul(det(P1), det(P2)));
      auto r = block_triangular_product(Phi, Delta, P1, P2);
      EXPECT_EQ(r.F_Phi * r.F_Delta, Mat::blocks2(P1, r.C, Mat(f, n - m, m), P2));
    }
  }
}

TEST(NonprimaryProduct, ProductExamples) {
  auto f3 = Field::make(3);
  // det Phi * det Delta = 2 = det diag(1, 2)
  auto Phi = GlClass::of_poly(P(f3, {2, 1, 1}));
  auto Delta = GlClass::of_poly(P(f3, {1, 0, 1}));
  Mat M = Mat::diag(f3, {1, 2});
  auto [F1, F2] = nonprimary_product(Phi, Delta, M);
  EXPECT_EQ(F1 * F2, M);
  GlOracle gl(f3, 2);
  EXPECT_TRUE(gl.product_set(Phi, Delta).count(gl.encode(M)));
  EXPECT_THROW(nonprimary_product(Phi, Delta, Mat::from_ints(f3, {{1, 1}, {0, 1}})), precondition_error);
}

TEST(NonprimaryProduct, AgreesWithBlockRouteOnDiagonal) {
  auto f3 = Field::make(3);
  auto Phi = GlClass::of_poly(P(f3, {2, 1, 1}));
  auto Delta = GlClass::of_poly(P(f3, {1, 0, 1}));
  GlOracle gl(f3, 2);
  auto prod = gl.product_set(Phi, Delta);
  auto r = block_triangular_product(Phi, Delta, Mat::scalar(f3, 1, 1), Mat::scalar(f3, 1, 2));
  EXPECT_TRUE(prod.count(gl.encode(r.F_Phi * r.F_Delta)));
  auto [F1, F2] = nonprimary_product(Phi, Delta, Mat::diag(f3, {1, 2}));
  EXPECT_TRUE(Phi.contains(F1) && Delta.contains(F2));
}

TEST(NonprimaryProduct, RandomNonprimary) {
  std::mt19937 rng(12);
  for (int p : {2, 3, 5}) {
    auto f = Field::make(p);
    int done = 0;
    while (done < 30) {
      const int n = 2 + rng() % 4;
      Mat M = random_invertible(f, n, rng);
      if (!is_nonprimary(M)) continue;
      auto polys = monic_polys(f, n, true);
      Poly a = polys[rng() % polys.size()];
      auto Phi = GlClass::of_poly(a);
      const Elem want = f->div(det(M), Phi.det);
      Poly b = polys[rng() % polys.size()];
      std::vector<Elem> c = b.coeffs();
      c[0] = (n % 2 == 0) ? want : f->neg(want);
      auto Delta = GlClass::of_poly(Poly(f, c));
      auto [F1, F2] = nonprimary_product(Phi, Delta, M);
      EXPECT_EQ(F1 * F2, M);
      ++done;
    }
  }
}

TEST(InverseClassProducts, DilatationSplit) {
  auto f3 = Field::make(3);
  // X = [2], delta = 1: det = 2
  auto Phi = GlClass::of_poly(P(f3, {2, 1, 1}));
  auto Delta = GlClass::of_poly(P(f3, {1, 0, 1}));
  auto [F1, F2] = dilatation_split(Phi, Delta, Mat::scalar(f3, 1, 2), 1);
  EXPECT_EQ(F1 * F2, Mat::diag(f3, {2, 1}));
  EXPECT_TRUE(Phi.contains(F1) && Delta.contains(F2));
  EXPECT_THROW(dilatation_split(Phi, Delta, Mat::scalar(f3, 1, 1), 1), precondition_error);
  std::mt19937 rng(4);
  for (int p : {2, 3, 5}) {
    auto f = Field::make(p);
    for (int t = 0; t < 30; ++t) {
      const int n = (p == 2 ? 3 : 2) + rng() % 3;
      Mat X = random_invertible(f, n - 1, rng);
      const Elem d = static_cast<Elem>(1 + rng() % (p - 1));
      if (det(X - Mat::scalar(f, n - 1, d)) == 0) continue;
      auto polys = monic_polys(f, n, true);
      auto Ph = GlClass::of_poly(polys[rng() % polys.size()]);
      const Elem want = f->div(f->mul(det(X), d), Ph.det);
      std::vector<Elem> c = polys[rng() % polys.size()].coeffs();
      c[0] = (n % 2 == 0) ? want : f->neg(want);
      auto De = GlClass::of_poly(Poly(f, c));
      auto [A, B] = dilatation_split(Ph, De, X, d);
      EXPECT_EQ(A * B, Mat::direct_sum(X, Mat::scalar(f, 1, d)));
    }
  }
}

TEST(InverseClassProducts, TransvectionPair) {
  auto f3 = Field::make(3);
  auto Phi = GlClass::of_poly(Poly::linear(f3, 1) * Poly::linear(f3, 2));
  auto [X, Y] = transvection_pair(Phi);
  Mat t = X * inverse(Y);
  EXPECT_EQ(t(0, 0), 1);
  EXPECT_EQ(t(1, 1), 1);
  EXPECT_EQ(t(1, 0), 0);
  EXPECT_NE(t(0, 1), 0);
  EXPECT_THROW(transvection_pair(GlClass::of_poly(P(f3, {1, 0, 1}))), precondition_error);
  auto f2 = Field::make(2);
  EXPECT_THROW(transvection_pair(GlClass::of_poly(P(f2, {1, 0, 1}))), precondition_error);
  for (int p : {2, 3}) {
    auto f = Field::make(p);
    for (int n = (p == 2 ? 3 : 2); n <= 4; ++n)
      for (const auto& chi : monic_polys(f, n, true)) {
        if (is_irreducible(chi)) continue;
        auto C = GlClass::of_poly(chi);
        auto [A, B] = transvection_pair(C);
        EXPECT_TRUE(C.contains(A) && C.contains(B));
        Mat q = A * inverse(B);
        EXPECT_EQ(rank(q - Mat::identity(f, n)), 1);
        EXPECT_EQ(det(q), 1);
      }
  }
}

TEST(TraceSet, Examples) {
  auto f3 = Field::make(3);
  auto unip = GlClass::of_poly(Poly::linear(f3, 1).pow(2));
  auto irr = GlClass::of_poly(P(f3, {1, 0, 1}));
  EXPECT_EQ(trace_set_2x2(unip, irr).traces, (std::set<Elem>{1, 2}));
  auto split = GlClass::of_poly(Poly::linear(f3, 1) * Poly::linear(f3, 2));
  EXPECT_EQ(trace_set_2x2(split, irr).traces, (std::set<Elem>{0, 1, 2}));
  EXPECT_EQ(trace_set_2x2(unip, split).traces, (std::set<Elem>{0, 1, 2}));
  EXPECT_THROW(trace_set_2x2(irr, unip), precondition_error);
  auto scal = GlClass::of_matrix(Mat::identity(f3, 2));
  EXPECT_THROW(trace_set_2x2(scal, unip), precondition_error);
}

TEST(TraceSet, MatchesBruteForceGF3) {
  auto f3 = Field::make(3);
  GlOracle gl(f3, 2);
  for (const auto& Phi : gl.classes()) {
    if (Phi.is_scalar() || is_irreducible(Phi.chi())) continue;
    for (const auto& Delta : gl.classes()) {
      if (Delta.is_scalar()) continue;
      std::set<Elem> brute;
      for (const auto& a : gl.members(Phi))
        for (const auto& b : gl.members(Delta)) brute.insert((a * b).trace());
      EXPECT_EQ(trace_set_2x2(Phi, Delta).traces, brute) << Phi.chi().str() << " / " << Delta.chi().str();
    }
  }
}
