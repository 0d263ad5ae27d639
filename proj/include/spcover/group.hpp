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
#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spcover/symplectic.hpp"

namespace spcover {

using Code = unsigned __int128;

struct CodeHash {
  size_t operator()(Code c) const noexcept {
    auto lo = static_cast<std::uint64_t>(c), hi = static_cast<std::uint64_t>(c >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ull ^ (hi + 0x7F4A7C159E3779B9ull + (lo << 6) + (lo >> 2));
    return static_cast<size_t>(h ^ (h >> 31));
  }
};

using CodeSet = std::unordered_set<Code, CodeHash>;

/// Bit-packs square matrices of a fixed size over a fixed field into 128 bits.
class Packer {
 public:
  Packer(FieldPtr f, int size) : f_(std::move(f)), size_(size) {
    while ((1 << bits_) < f_->order()) ++bits_;
    SPCOVER_REQUIRE(size_ * size_ * bits_ <= 128, "matrix too large for 128-bit packing");
  }
  Code encode(const Mat& m) const {
    Code c = 0;
    const auto& e = m.entries();
    for (int i = static_cast<int>(e.size()) - 1; i >= 0; --i) c = (c << bits_) | e[i];
    return c;
  }
  Mat decode(Code c) const {
    Mat m(f_, size_, size_);
    const Code mask = (Code{1} << bits_) - 1;
    for (int i = 0; i < size_ * size_; ++i) {
      m(i / size_, i % size_) = static_cast<Elem>(c & mask);
      c >>= bits_;
    }
    return m;
  }
  const FieldPtr& field() const { return f_; }
  int size() const { return size_; }

 private:
  FieldPtr f_;
  int size_;
  int bits_ = 1;
};

/// |Sp(2n, q)| = q^{n^2} prod_{i=1..n} (q^{2i} - 1).
inline long long sp_order(int q, int n) {
  long long o = 1;
  for (int i = 0; i < n * n; ++i) o *= q;
  long long qq = 1;
  for (int i = 1; i <= n; ++i) {
    qq *= static_cast<long long>(q) * q;
    o *= qq - 1;
  }
  return o;
}

/// Generators, optional element set and class list for Sp(2n, K).
struct GroupStore {
  FieldPtr field;
  int n = 0;
  std::vector<Mat> generators;
  std::vector<Mat> gen_inverses;
  Packer packer;
  std::optional<std::vector<Code>> elements;  // sorted
  struct ClassInfo {
    Mat rep;
    long long size;
  };
  std::optional<std::vector<ClassInfo>> classes;

  GroupStore(const FieldPtr& f, int n_)
      : field(f), n(n_), generators(sp_generators(f, n_)), packer(f, 2 * n_) {
    for (const auto& g : generators) gen_inverses.push_back(sp_inverse(g));
  }
  long long order() const { return sp_order(field->order(), n); }
};

/// All elements of the group, by BFS over right multiplication; the count
/// must equal the order formula.
inline void group_enumerate(GroupStore& store, long long budget = 16'000'000) {
  const long long ord = store.order();
  if (ord > budget) throw budget_exceeded("group order " + std::to_string(ord) + " exceeds budget");
  CodeSet seen;
  seen.reserve(static_cast<size_t>(ord));
  std::vector<Code> out;
  out.reserve(static_cast<size_t>(ord));
  const Code id = store.packer.encode(Mat::identity(store.field, 2 * store.n));
  seen.insert(id);
  out.push_back(id);
  for (size_t head = 0; head < out.size(); ++head) {
    Mat x = store.packer.decode(out[head]);
    for (const auto& g : store.generators) {
      Code c = store.packer.encode(x * g);
      if (seen.insert(c).second) out.push_back(c);
    }
  }
  SPCOVER_VERIFY(static_cast<long long>(out.size()) == ord, "enumerated order " + std::to_string(out.size()) +
                                                                 " differs from the formula " + std::to_string(ord));
  std::sort(out.begin(), out.end());
  store.elements = std::move(out);
}

/// Conjugacy class of P as packed codes, in BFS order from P.
inline std::vector<Code> class_orbit(const Mat& P, const GroupStore& store, long long budget = 16'000'000) {
  SPCOVER_REQUIRE(is_symplectic(P), "class_orbit needs a symplectic matrix");
  CodeSet seen;
  std::vector<Code> out{store.packer.encode(P)};
  seen.insert(out[0]);
  for (size_t head = 0; head < out.size(); ++head) {
    Mat x = store.packer.decode(out[head]);
    for (size_t i = 0; i < store.generators.size(); ++i) {
      Code c = store.packer.encode(store.gen_inverses[i] * x * store.generators[i]);
      if (seen.insert(c).second) {
        out.push_back(c);
        if (static_cast<long long>(out.size()) > budget) throw budget_exceeded("class orbit exceeds budget");
      }
    }
  }
  return out;
}

/// Orbit BFS that records a conjugator for each element: visit(Y, X) gets
/// Y = X^{-1} P X and stops the search by returning true.
template <class Visit>
bool orbit_search(const Mat& P, const GroupStore& store, Visit&& visit, long long budget = 4'000'000) {
  struct Node {
    Code parent;
    int gen;
  };
  std::unordered_map<Code, Node, CodeHash> tree;
  std::deque<Code> queue;
  const Code root = store.packer.encode(P);
  tree.emplace(root, Node{root, -1});
  queue.push_back(root);
  auto conjugator = [&](Code c) {
    std::vector<int> path;
    while (true) {
      const Node& nd = tree.at(c);
      if (nd.gen < 0) break;
      path.push_back(nd.gen);
      c = nd.parent;
    }
    Mat X = Mat::identity(store.field, 2 * store.n);
    for (auto it = path.rbegin(); it != path.rend(); ++it) X = X * store.generators[*it];
    return X;
  };
  while (!queue.empty()) {
    Code c = queue.front();
    queue.pop_front();
    Mat Y = store.packer.decode(c);
    if (visit(Y, conjugator(c))) return true;
    for (size_t i = 0; i < store.generators.size(); ++i) {
      Code d = store.packer.encode(store.gen_inverses[i] * Y * store.generators[i]);
      if (tree.emplace(d, Node{c, static_cast<int>(i)}).second) {
        if (static_cast<long long>(tree.size()) > budget) throw budget_exceeded("orbit search exceeds budget");
        queue.push_back(d);
      }
    }
  }
  return false;
}

/// Splits the enumerated group into conjugacy classes; representatives are
/// the least code of each class, classes ordered by that code.
inline void class_partition(GroupStore& store) {
  if (!store.elements) group_enumerate(store);
  const auto& els = *store.elements;
  std::vector<bool> done(els.size(), false);
  auto index = [&](Code c) { return static_cast<size_t>(std::lower_bound(els.begin(), els.end(), c) - els.begin()); };
  std::vector<GroupStore::ClassInfo> out;
  long long total = 0;
  for (size_t i = 0; i < els.size(); ++i) {
    if (done[i]) continue;
    std::vector<Code> stack{els[i]};
    done[i] = true;
    long long size = 1;
    while (!stack.empty()) {
      Mat x = store.packer.decode(stack.back());
      stack.pop_back();
      for (size_t g = 0; g < store.generators.size(); ++g) {
        Code c = store.packer.encode(store.gen_inverses[g] * x * store.generators[g]);
        size_t j = index(c);
        SPCOVER_VERIFY(j < els.size() && els[j] == c, "class_partition: conjugate outside the group");
        if (!done[j]) {
          done[j] = true;
          ++size;
          stack.push_back(c);
        }
      }
    }
    out.push_back({store.packer.decode(els[i]), size});
    total += size;
  }
  SPCOVER_VERIFY(total == store.order(), "class_partition: class sizes do not sum to the group order");
  store.classes = std::move(out);
}

/// Upper-left n x n corners of every member of P's class.
inline std::vector<Mat> pc_enumerate(const Mat& P, const GroupStore& store) {
  std::set<Mat> corners;
  for (Code c : class_orbit(P, store)) corners.insert(store.packer.decode(c).block(0, 0, store.n, store.n));
  return {corners.begin(), corners.end()};
}

namespace detail {

// Symplectic basis (rows) for a nondegenerate alternating Gram matrix J:
// returns Y with Y J Y^T = G.
inline Mat symplectic_basis_for_form(const Mat& J) {
  const auto& f = J.field();
  const int d = J.rows();
  auto form = [&](const Mat& u, const Mat& v) { return (u * J * v.transpose())(0, 0); };
  std::vector<Mat> pool;
  for (int i = 0; i < d; ++i) {
    Mat e(f, 1, d);
    e(0, i) = 1;
    pool.push_back(e);
  }
  Mat E(f, 0, d), Fb(f, 0, d);
  while (!pool.empty()) {
    // drop vectors that became zero
    std::vector<Mat> nz;
    for (auto& v : pool)
      if (!v.is_zero()) nz.push_back(v);
    pool = nz;
    if (pool.empty()) break;
    Mat e = pool.front();
    size_t j = 1;
    while (j < pool.size() && form(e, pool[j]) == 0) ++j;
    SPCOVER_REQUIRE(j < pool.size(), "form is degenerate");
    Mat g = pool[j].scaled(f->inv(form(e, pool[j])));
    std::vector<Mat> rest;
    for (size_t k = 1; k < pool.size(); ++k) {
      if (k == j) continue;
      rest.push_back(pool[k] - e.scaled(form(pool[k], g)) + g.scaled(form(pool[k], e)));
    }
    E = Mat::vstack(E, e);
    Fb = Mat::vstack(Fb, g);
    pool = std::move(rest);
  }
  Mat Y = Mat::vstack(E, Fb);
  SPCOVER_VERIFY(Y * J * Y.transpose() == standard_gram(f, d / 2), "symplectic basis replay failed");
  return Y;
}

}  // namespace detail

/// Representatives of the Sp-classes contained in the similarity class of a
/// cyclic symplectic R: orbits of the centralizer {p(R)} on R-invariant
/// nondegenerate alternating forms.
inline std::vector<Mat> sp_classes_in_similarity_class(const Mat& R) {
  SPCOVER_REQUIRE(is_symplectic(R), "sp_classes_in_similarity_class needs a symplectic matrix");
  SPCOVER_REQUIRE(is_cyclic(R), "sp_classes_in_similarity_class needs a cyclic matrix");
  const auto& f = R.field();
  const int d = R.rows();
  const int q = f->order();
  // alternating J (strict upper triangle free) with R J R^T = J
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) idx.emplace_back(i, j);
  const int u = static_cast<int>(idx.size());
  auto build = [&](const std::vector<Elem>& x) {
    Mat J(f, d, d);
    for (int t = 0; t < u; ++t) {
      J(idx[t].first, idx[t].second) = x[t];
      J(idx[t].second, idx[t].first) = f->neg(x[t]);
    }
    return J;
  };
  Mat eq(f, d * d, u);
  for (int t = 0; t < u; ++t) {
    std::vector<Elem> e(u, 0);
    e[t] = 1;
    Mat J = build(e);
    Mat r = R * J * R.transpose() - J;
    for (int i = 0; i < d * d; ++i) eq(i, t) = r(i / d, i % d);
  }
  Mat basis = null_space(eq).transpose();
  const int k = basis.rows();
  long long nforms = 1;
  for (int i = 0; i < k; ++i) nforms *= q;
  long long ncent = 1;
  for (int i = 0; i < d; ++i) {
    ncent *= q;
    if (ncent > 50'000'000 || nforms > 50'000'000) throw budget_exceeded("form/centralizer enumeration too large");
  }
  auto combo = [&](long long code, int len, const std::function<Mat(int)>& vec) {
    Mat acc = vec(-1);
    for (int i = 0; i < len; ++i) {
      const Elem a = static_cast<Elem>(code % q);
      code /= q;
      if (a) acc = acc + vec(i).scaled(a);
    }
    return acc;
  };
  // centralizer: invertible polynomials in R of degree < d
  std::vector<Mat> powers{Mat::identity(f, d)};
  for (int i = 1; i < d; ++i) powers.push_back(powers.back() * R);
  std::vector<Mat> cent;
  for (long long code = 1; code < ncent; ++code) {
    Mat c = combo(code, d, [&](int i) { return i < 0 ? Mat(f, d, d) : powers[i]; });
    if (det(c)) cent.push_back(c);
  }
  Packer pk(f, d);
  CodeSet seen;
  std::vector<Mat> reps;
  for (long long code = 1; code < nforms; ++code) {
    Mat J = build(combo(code, k, [&](int i) { return i < 0 ? Mat(f, 1, u) : basis.block(i, 0, 1, u); }).row(0));
    if (det(J) == 0 || seen.count(pk.encode(J))) continue;
    for (const auto& c : cent) seen.insert(pk.encode(c * J * c.transpose()));
    Mat Y = detail::symplectic_basis_for_form(J);  // Y J Y^T = G
    // X = Y^{-1}: X G X^T = J, so X^{-1} R X is symplectic
    Mat X = inverse(Y);
    Mat rep = conj(R, X);
    SPCOVER_VERIFY(is_symplectic(rep), "sp_classes_in_similarity_class: representative not symplectic");
    reps.push_back(rep);
  }
  return reps;
}

}  // namespace spcover
