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

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "spcover/errors.hpp"
#include "spcover/field.hpp"

namespace spcover {

inline void require_same_field(const FieldPtr& a, const FieldPtr& b) {
  if (a != b && !(*a == *b)) throw precondition_error("operands live in different fields");
}

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
class Poly {
 public:
  explicit Poly(FieldPtr f) : f_(std::move(f)) {}
  Poly(FieldPtr f, std::vector<Elem> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) { trim(); }

  static Poly constant(FieldPtr f, Elem a) { return Poly(std::move(f), {a}); }
  static Poly one(FieldPtr f) { return constant(std::move(f), 1); }
  static Poly x(FieldPtr f) { return Poly(std::move(f), {0, 1}); }
  static Poly monomial(FieldPtr f, int deg, Elem a = 1) {
    SPCOVER_REQUIRE(deg >= 0, "negative monomial degree");
    std::vector<Elem> c(deg + 1, 0);
    c[deg] = a;
    return Poly(std::move(f), std::move(c));
  }
  /// x - a
  static Poly linear(const FieldPtr& f, Elem a) { return Poly(f, {f->neg(a), 1}); }
  /// From integer coefficients (prime-subfield images), ascending.
  static Poly from_ints(const FieldPtr& f, const std::vector<long long>& ints) {
    std::vector<Elem> c;
    for (auto v : ints) c.push_back(f->from_int(v));
    return Poly(f, std::move(c));
  }

  const FieldPtr& field() const { return f_; }
  const Field& F() const { return *f_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  Elem coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Elem{0}; }
  Elem lead() const { return c_.empty() ? Elem{0} : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  bool operator==(const Poly& o) const { return c_ == o.c_ && (f_ == o.f_ || *f_ == *o.f_); }
  bool operator!=(const Poly& o) const { return !(*this == o); }
  /// Deterministic total order: degree first, then coefficients from the top.
  bool operator<(const Poly& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    for (int i = degree(); i >= 0; --i)
      if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
  }

  Poly operator+(const Poly& o) const {
    require_same_field(f_, o.f_);
    std::vector<Elem> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = f_->add(coeff(static_cast<int>(i)), o.coeff(static_cast<int>(i)));
    return Poly(f_, std::move(r));
  }
  Poly operator-() const {
    std::vector<Elem> r(c_.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = f_->neg(c_[i]);
    return Poly(f_, std::move(r));
  }
  Poly operator-(const Poly& o) const { return *this + (-o); }
  Poly operator*(const Poly& o) const {
    require_same_field(f_, o.f_);
    if (is_zero() || o.is_zero()) return Poly(f_);
    std::vector<Elem> r(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
    }
    return Poly(f_, std::move(r));
  }
  Poly scaled(Elem a) const {
    std::vector<Elem> r(c_.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = f_->mul(c_[i], a);
    return Poly(f_, std::move(r));
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// (quotient, remainder) with deg r < deg g.
  std::pair<Poly, Poly> divmod(const Poly& g) const {
    require_same_field(f_, g.f_);
    if (g.is_zero()) throw precondition_error("polynomial division by zero");
    std::vector<Elem> r = c_;
    const int dg = g.degree();
    if (degree() < dg) return {Poly(f_), *this};
    std::vector<Elem> q(degree() - dg + 1, 0);
    const Elem li = f_->inv(g.lead());
    for (int i = degree(); i >= dg; --i) {
      if (r[i] == 0) continue;
      const Elem t = f_->mul(r[i], li);
      q[i - dg] = t;
      for (int j = 0; j <= dg; ++j) r[i - dg + j] = f_->sub(r[i - dg + j], f_->mul(t, g.c_[j]));
    }
    return {Poly(f_, std::move(q)), Poly(f_, std::move(r))};
  }
  Poly operator/(const Poly& g) const { return divmod(g).first; }
  Poly operator%(const Poly& g) const { return divmod(g).second; }
  bool divides(const Poly& g) const { return (g % *this).is_zero(); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(f_->inv(lead()));
  }

  Elem eval(Elem a) const {
    Elem r = 0;
    for (int i = degree(); i >= 0; --i) r = f_->add(f_->mul(r, a), c_[i]);
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(f_);
    std::vector<Elem> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = f_->mul(f_->from_int(static_cast<long long>(i)), c_[i]);
    return Poly(f_, std::move(r));
  }

  Poly pow(int e) const {
    Poly r = one(f_), b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  /// "x^2 + 2x + 1" style, highest degree first; coefficients via Field::format.
  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i] == 0) continue;
      std::string coef = f_->format(c_[i]);
      if (f_->k() > 1) coef = "(" + coef + ")";
      std::string term;
      if (i == 0) term = coef;
      else {
        term = (c_[i] == 1 ? "" : coef) + "x";
        if (i > 1) term += "^" + std::to_string(i);
      }
      s += (s.empty() ? "" : " + ") + term;
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  FieldPtr f_;
  std::vector<Elem> c_;
};

/// Monic gcd; gcd(f, 0) = monic(f).
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.field());
  return ((a * b) / gcd(a, b)).monic();
}

/// Monic reciprocal q(0)^{-1} x^{deg q} q(1/x).
inline Poly reciprocal(const Poly& q) {
  if (q.is_zero() || q.coeff(0) == 0) throw precondition_error("reciprocal needs q(0) != 0");
  std::vector<Elem> r(q.coeffs().rbegin(), q.coeffs().rend());
  return Poly(q.field(), std::move(r)).monic();
}

/// gcd(q, q*) = 1.
inline bool strictly_hyperbolic_seed(const Poly& q) {
  if (q.is_zero() || q.coeff(0) == 0) throw precondition_error("seed test needs q(0) != 0");
  return gcd(q, reciprocal(q)).is_one();
}

/// x^m p(x + 1/x) for monic p of degree m.
inline Poly dickson_transform(const Poly& p) {
  SPCOVER_REQUIRE(p.is_monic(), "Dickson transform needs a monic polynomial");
  const auto& f = p.field();
  const int m = p.degree();
  const Poly x2p1(f, {1, 0, 1});
  Poly r(f), power = Poly::one(f);
  for (int i = 0; i <= m; ++i) {
    r += (power * Poly::monomial(f, m - i)).scaled(p.coeff(i));
    power = power * x2p1;
  }
  return r;
}

/// Monic irreducible factors with multiplicities, sorted by the Poly order.
/// Trial division by monic polynomials of increasing degree, so each divisor
/// found is irreducible. Adequate for desk-scale degrees.
inline std::vector<std::pair<Poly, int>> factor(const Poly& g) {
  SPCOVER_REQUIRE(!g.is_zero(), "cannot factor the zero polynomial");
  const auto& f = g.field();
  const int q = f->order();
  std::vector<std::pair<Poly, int>> out;
  Poly rest = g.monic();
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= q;
    for (long long code = 0; code < count && 2 * d <= rest.degree(); ++code) {
      std::vector<Elem> c(d + 1);
      long long v = code;
      for (int i = 0; i < d; ++i) {
        c[i] = static_cast<Elem>(v % q);
        v /= q;
      }
      c[d] = 1;
      Poly cand(f, c);
      int mult = 0;
      while (true) {
        auto [quo, rem] = rest.divmod(cand);
        if (!rem.is_zero()) break;
        rest = quo;
        ++mult;
      }
      if (mult) out.emplace_back(cand, mult);
    }
  }
  if (rest.degree() >= 1) {
    bool merged = false;
    for (auto& [p, e] : out)
      if (p == rest) {
        ++e;
        merged = true;
      }
    if (!merged) out.emplace_back(rest, 1);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline bool is_irreducible(const Poly& g) {
  if (g.degree() < 1) return false;
  auto fs = factor(g);
  return fs.size() == 1 && fs[0].second == 1;
}

/// True iff g is a power of a single irreducible.
inline bool is_primary_poly(const Poly& g) { return g.degree() >= 1 && factor(g).size() == 1; }

/// Strictly hyperbolic seed families used for covering Sp(2n, K):
///   |K| >= 4: (x - l)^n with l the first element outside {0, 1, -1};
///   GF(3), n = 2m: (x^2 - x - 1)^m;  GF(3), n = 2m + 3: (x^2 - x - 1)^m (x^3 - x - 1);
///   GF(2): x^n + x^{m+1} + 1, m = floor(n / 2).
inline Poly covering_poly(const FieldPtr& f, int n) {
  SPCOVER_REQUIRE(n >= 2, "covering_poly needs n >= 2");
  const int q = f->order();
  Poly r(f);
  if (q >= 4) {
    Elem lambda = 0;
    for (int a = 0; a < q; ++a) {
      const Elem e = static_cast<Elem>(a);
      if (e != 0 && e != f->one() && e != f->neg(f->one())) {
        lambda = e;
        break;
      }
    }
    r = Poly::linear(f, lambda).pow(n);
  } else if (q == 3) {
    const Poly quad = Poly::from_ints(f, {-1, -1, 1});
    if (n % 2 == 0) r = quad.pow(n / 2);
    else r = quad.pow((n - 3) / 2) * Poly::from_ints(f, {-1, -1, 0, 1});
  } else {
    SPCOVER_REQUIRE(n >= 3, "GF(2) needs n >= 3 (x^2 + x^2 + 1 degenerates)");
    const int m = n / 2;
    r = Poly::monomial(f, n) + Poly::monomial(f, m + 1) + Poly::one(f);
  }
  SPCOVER_VERIFY(strictly_hyperbolic_seed(r), "covering_poly produced a polynomial sharing a factor with its reciprocal");
  return r;
}

}  // namespace spcover
