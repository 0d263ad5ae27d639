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
#include <map>
#include <set>
#include <unordered_set>
#include <vector>

#include "spcover/errors.hpp"
#include "spcover/glfactor.hpp"

namespace spcover {

/// Brute-force views of GL(n, q) for n <= 3, small q.
class GlOracle {
 public:
  GlOracle(FieldPtr f, int n, long long budget = 2'000'000) : f_(std::move(f)), n_(n) {
    long long total = 1;
    for (int i = 0; i < n * n; ++i) {
      total *= f_->order();
      if (total > budget) throw budget_exceeded("GL enumeration exceeds budget");
    }
    for (long long code = 0; code < total; ++code) {
      Mat m = decode(static_cast<std::uint64_t>(code));
      if (det(m)) elements_.push_back(m);
    }
    for (size_t i = 0; i < elements_.size(); ++i) {
      auto inv = invariant_factors(elements_[i]);
      class_index_[inv.str()].push_back(static_cast<int>(i));
    }
  }

  const FieldPtr& field() const { return f_; }
  int n() const { return n_; }
  const std::vector<Mat>& elements() const { return elements_; }

  std::uint64_t encode(const Mat& m) const {
    std::uint64_t c = 0;
    for (int i = n_ * n_ - 1; i >= 0; --i) c = c * f_->order() + m(i / n_, i % n_);
    return c;
  }
  Mat decode(std::uint64_t c) const {
    Mat m(f_, n_, n_);
    for (int i = 0; i < n_ * n_; ++i) {
      m(i / n_, i % n_) = static_cast<Elem>(c % f_->order());
      c /= f_->order();
    }
    return m;
  }

  std::vector<Mat> members(const GlClass& c) const {
    std::vector<Mat> out;
    auto it = class_index_.find(c.inv.str());
    if (it == class_index_.end()) return out;
    for (int i : it->second) out.push_back(elements_[i]);
    return out;
  }

  /// Distinct similarity classes, ordered by fingerprint text.
  std::vector<GlClass> classes() const {
    std::vector<GlClass> out;
    for (const auto& [key, idx] : class_index_) out.push_back(GlClass::of_matrix(elements_[idx.front()]));
    return out;
  }

  /// Exact product set {F1 F2 : F1 in Phi, F2 in Delta} as packed codes.
  std::unordered_set<std::uint64_t> product_set(const GlClass& Phi, const GlClass& Delta) const {
    std::unordered_set<std::uint64_t> out;
    auto a = members(Phi), b = members(Delta);
    for (const auto& x : a)
      for (const auto& y : b) out.insert(encode(x * y));
    return out;
  }

 private:
  FieldPtr f_;
  int n_;
  std::vector<Mat> elements_;
  std::map<std::string, std::vector<int>> class_index_;
};

}  // namespace spcover
