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

#include "spcover/poly.hpp"

using namespace spcover;

namespace {
Poly P(const FieldPtr& f, std::vector<long long> c) { return Poly::from_ints(f, c); }
}  // namespace

TEST(Poly, GcdExamples) {
  auto f3 = Field::make(3);
  EXPECT_TRUE(gcd(P(f3, {2, 2, 1}), P(f3, {2, 1, 1})).is_one());
  Poly g = P(f3, {1, 0, 2});
  EXPECT_EQ(gcd(g, Poly(f3)), g.monic());
  auto f5 = Field::make(5);
  EXPECT_EQ(P(f5, {2, 0, 1}).eval(1), 3);
}

TEST(Poly, DivmodAndErrors) {
  auto f5 = Field::make(5);
  Poly a = P(f5, {1, 2, 3, 4}), b = P(f5, {3, 1});
  auto [q, r] = a.divmod(b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.degree(), b.degree());
  EXPECT_THROW(a.divmod(Poly(f5)), precondition_error);
}

TEST(Poly, Reciprocal) {
  auto f3 = Field::make(3);
  auto f5 = Field::make(5);
  EXPECT_EQ(reciprocal(Poly::linear(f5, 2)), Poly::linear(f5, 3));
  EXPECT_EQ(reciprocal(P(f3, {-1, -1, 1})), P(f3, {2, 1, 1}));
  EXPECT_EQ(reciprocal(P(f3, {1, 1})), P(f3, {1, 1}));
  EXPECT_THROW(reciprocal(P(f3, {0, 1})), precondition_error);
}

TEST(Poly, SeedTest) {
  auto f5 = Field::make(5);
  auto f2 = Field::make(2);
  EXPECT_TRUE(strictly_hyperbolic_seed(P(f5, {2, 0, 1})));
  EXPECT_EQ(reciprocal(P(f5, {2, 0, 1})), P(f5, {-2, 0, 1}));
  EXPECT_FALSE(strictly_hyperbolic_seed(P(f2, {1, 1, 1})));
  EXPECT_FALSE(strictly_hyperbolic_seed(P(f5, {-1, 1})));
}

TEST(Poly, Dickson) {
  auto f5 = Field::make(5);
  EXPECT_EQ(dickson_transform(Poly::linear(f5, 2)), P(f5, {1, -2, 1}));
  EXPECT_EQ(dickson_transform(Poly::x(f5)), P(f5, {1, 0, 1}));
  EXPECT_EQ(dickson_transform(P(f5, {0, 0, 1})), P(f5, {1, 0, 2, 0, 1}));
}

TEST(Poly, CoveringFamilies) {
  auto f2 = Field::make(2);
  auto f3 = Field::make(3);
  auto f5 = Field::make(5);
  EXPECT_EQ(covering_poly(f3, 2), P(f3, {-1, -1, 1}));
  EXPECT_EQ(covering_poly(f2, 3), P(f2, {1, 0, 1, 1}));
  EXPECT_EQ(covering_poly(f5, 2), Poly::linear(f5, 2).pow(2));
  EXPECT_EQ(covering_poly(f3, 5), P(f3, {-1, -1, 1}) * P(f3, {-1, -1, 0, 1}));
  EXPECT_THROW(covering_poly(f2, 2), precondition_error);
}

TEST(Poly, ReciprocalProperties) {
  std::mt19937 rng(7);
  for (int p : {2, 3, 5}) {
    auto f = Field::make(p);
    for (int trial = 0; trial < 200; ++trial) {
      auto rnd = [&](int d) {
        std::vector<Elem> c(d + 1);
        for (auto& x : c) x = static_cast<Elem>(rng() % p);
        c[0] = static_cast<Elem>(1 + rng() % (p - 1));
        c[d] = 1;
        return Poly(f, c);
      };
      Poly a = rnd(1 + rng() % 4), b = rnd(1 + rng() % 4);
      EXPECT_EQ(reciprocal(a).degree(), a.degree());
      EXPECT_EQ(reciprocal(reciprocal(a)), a);
      EXPECT_EQ(reciprocal(a * b), reciprocal(a) * reciprocal(b));
      EXPECT_EQ(reciprocal(dickson_transform(a)), dickson_transform(a));
      Poly g = gcd(a, b);
      EXPECT_TRUE(g.divides(a) && g.divides(b));
      EXPECT_EQ(g, gcd(b, a));
      Poly c = rnd(2);
      EXPECT_EQ(gcd(gcd(a, b), c), gcd(a, gcd(b, c)));
    }
  }
}

TEST(Poly, FactorRoundTrip) {
  auto f3 = Field::make(3);
  Poly g = P(f3, {-1, -1, 1}).pow(2) * Poly::linear(f3, 1) * P(f3, {1, 0, 1});
  Poly r = Poly::one(f3);
  for (auto& [p, e] : factor(g)) {
    EXPECT_TRUE(is_irreducible(p));
    r = r * p.pow(e);
  }
  EXPECT_EQ(r, g);
}
