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

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spcover/errors.hpp"

namespace spcover {

/// Field element: index into the canonical enumeration of GF(p^k).
/// For k = 1 this is the residue itself; for k > 1 it is sum c_i p^i where
/// c_0 + c_1 t + ... is the element in the polynomial basis mod the modulus.
using Elem = std::uint8_t;

inline constexpr int kDefaultMaxOrder = 25;

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace detail {

// Tiny GF(p)[t] helpers used only while building extension tables.
inline std::vector<int> prime_poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
  const int dm = static_cast<int>(m.size()) - 1;
  // m is monic
  for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
    const int c = ((a[i] % p) + p) % p;
    if (c == 0) continue;
    for (int j = 0; j <= dm; ++j) a[i - dm + j] = ((a[i - dm + j] - c * m[j]) % p + p) % p;
  }
  a.resize(std::max(dm, 0));
  for (auto& c : a) c = ((c % p) + p) % p;
  return a;
}

// True iff the monic polynomial f over GF(p) has no monic factor of degree
// 1..deg/2 (exhaustive trial division).
inline bool prime_poly_irreducible(const std::vector<int>& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  if (deg < 1) return false;
  for (int d = 1; 2 * d <= deg; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      std::vector<int> g(d + 1, 0);
      long long c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<int>(c % p);
        c /= p;
      }
      g[d] = 1;
      auto r = prime_poly_mod(f, g, p);
      bool zero = true;
      for (int x : r) zero = zero && x == 0;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace detail

/// A finite field GF(p^k) with precomputed operation tables.
/// Instances are immutable and shared through FieldPtr.
class Field {
 public:
  int p() const { return p_; }
  int k() const { return k_; }
  int order() const { return q_; }
  int characteristic() const { return p_; }
  /// Monic modulus over GF(p), ascending; empty for prime fields.
  const std::vector<int>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem add(Elem a, Elem b) const { return add_[a * q_ + b]; }
  Elem sub(Elem a, Elem b) const { return add_[a * q_ + neg_[b]]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem mul(Elem a, Elem b) const { return mul_[a * q_ + b]; }
  Elem inv(Elem a) const {
    if (a == 0) throw precondition_error("inverse of zero field element");
    return inv_[a];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, long long e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Elem r = 1;
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  /// Image of an integer in the prime subfield.
  Elem from_int(long long v) const { return static_cast<Elem>(((v % p_) + p_) % p_); }
  /// Least generator of the multiplicative group in canonical order.
  Elem primitive() const { return primitive_; }
  bool is_square(Elem a) const {
    if (a == 0) return true;
    return pow(a, (q_ - 1) / 2) == 1 || p_ == 2;
  }

  /// Coefficient vector (length k) of an element in the polynomial basis.
  std::vector<int> coords(Elem a) const {
    std::vector<int> c(k_);
    int v = a;
    for (int i = 0; i < k_; ++i) {
      c[i] = v % p_;
      v /= p_;
    }
    return c;
  }

  /// "3" for prime fields, colon-joined ascending coordinates "1:0" otherwise.
  std::string format(Elem a) const {
    if (k_ == 1) return std::to_string(a);
    std::string s;
    auto c = coords(a);
    for (int i = 0; i < k_; ++i) {
      if (i) s += ':';
      s += std::to_string(c[i]);
    }
    return s;
  }

  Elem parse(const std::string& text) const {
    std::vector<long long> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
      try {
        size_t used = 0;
        parts.push_back(std::stoll(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw precondition_error("bad field element '" + text + "'");
      }
    }
    if (k_ == 1 && parts.size() == 1) return from_int(parts[0]);
    if (static_cast<int>(parts.size()) != k_)
      throw precondition_error("field element '" + text + "' needs " + std::to_string(k_) + " coordinates");
    int v = 0;
    for (int i = k_ - 1; i >= 0; --i) v = v * p_ + static_cast<int>(((parts[i] % p_) + p_) % p_);
    return static_cast<Elem>(v);
  }

  /// "GF p k" or "GF p k ; m0,m1,...".
  std::string header() const {
    std::string s = "GF " + std::to_string(p_) + " " + std::to_string(k_);
    if (k_ > 1) {
      s += " ;";
      for (size_t i = 0; i < modulus_.size(); ++i) s += (i ? "," : " ") + std::to_string(modulus_[i]);
    }
    return s;
  }

  bool operator==(const Field& o) const { return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_; }

  static std::shared_ptr<const Field> make(int p, int k = 1, std::optional<std::vector<int>> modulus = std::nullopt,
                                           int max_order = kDefaultMaxOrder);

 private:
  Field() = default;

  int p_ = 2, k_ = 1, q_ = 2;
  std::vector<int> modulus_;
  std::vector<Elem> add_, mul_, neg_, inv_;
  Elem primitive_ = 1;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr Field::make(int p, int k, std::optional<std::vector<int>> modulus, int max_order) {
  if (!is_prime(p)) throw precondition_error("field characteristic " + std::to_string(p) + " is not prime");
  if (k < 1) throw precondition_error("extension degree must be >= 1");
  long long q = 1;
  for (int i = 0; i < k; ++i) {
    q *= p;
    if (q > max_order) throw precondition_error("field order above configured bound " + std::to_string(max_order));
  }
  if (q > 255) throw precondition_error("field order does not fit the element encoding");

  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  f->k_ = k;
  f->q_ = static_cast<int>(q);

  if (k > 1) {
    if (modulus) {
      auto m = *modulus;
      for (auto& c : m) c = ((c % p) + p) % p;
      if (static_cast<int>(m.size()) != k + 1 || m.back() != 1)
        throw precondition_error("modulus must be monic of degree k");
      if (!detail::prime_poly_irreducible(m, p)) throw precondition_error("modulus is reducible");
      f->modulus_ = m;
    } else {
      // lexicographically least monic irreducible, ordered by sum c_i p^i
      for (long long code = 0; code < q; ++code) {
        std::vector<int> m(k + 1, 0);
        long long c = code;
        for (int i = 0; i < k; ++i) {
          m[i] = static_cast<int>(c % p);
          c /= p;
        }
        m[k] = 1;
        if (detail::prime_poly_irreducible(m, p)) {
          f->modulus_ = m;
          break;
        }
      }
    }
  } else if (modulus && !modulus->empty()) {
    throw precondition_error("prime fields take no modulus");
  }

  const int Q = f->q_;
  f->add_.resize(Q * Q);
  f->mul_.resize(Q * Q);
  f->neg_.resize(Q);
  f->inv_.resize(Q, 0);
  auto to_code = [&](const std::vector<int>& c) {
    int v = 0;
    for (int i = k - 1; i >= 0; --i) v = v * p + c[i];
    return static_cast<Elem>(v);
  };
  for (int a = 0; a < Q; ++a) {
    auto ca = f->coords(static_cast<Elem>(a));
    std::vector<int> na(k);
    for (int i = 0; i < k; ++i) na[i] = (p - ca[i]) % p;
    f->neg_[a] = to_code(na);
    for (int b = 0; b < Q; ++b) {
      auto cb = f->coords(static_cast<Elem>(b));
      std::vector<int> s(k);
      for (int i = 0; i < k; ++i) s[i] = (ca[i] + cb[i]) % p;
      f->add_[a * Q + b] = to_code(s);
      if (k == 1) {
        f->mul_[a * Q + b] = static_cast<Elem>((a * b) % p);
      } else {
        std::vector<int> prod(2 * k - 1, 0);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
        auto r = detail::prime_poly_mod(prod, f->modulus_, p);
        r.resize(k, 0);
        f->mul_[a * Q + b] = to_code(r);
      }
    }
  }
  for (int a = 1; a < Q; ++a)
    for (int b = 1; b < Q; ++b)
      if (f->mul_[a * Q + b] == 1) f->inv_[a] = static_cast<Elem>(b);
  for (int g = 1; g < Q; ++g) {
    int ord = 1;
    Elem x = static_cast<Elem>(g);
    while (x != 1) {
      x = f->mul_[x * Q + g];
      ++ord;
    }
    if (ord == Q - 1) {
      f->primitive_ = static_cast<Elem>(g);
      break;
    }
  }
  return f;
}

}  // namespace spcover
