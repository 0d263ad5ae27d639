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
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "spcover/errors.hpp"
#include "spcover/matrix.hpp"
#include "spcover/poly.hpp"

namespace spcover {

/// Monic divisor chain i_1 | i_2 | ... | i_n, leading ones retained, so the
/// chain length equals the matrix size and i_n is the minimal polynomial.
struct InvariantFactors {
  std::vector<Poly> chain;

  int size() const { return static_cast<int>(chain.size()); }
  const Poly& minimal() const { return chain.back(); }
  Poly characteristic() const {
    Poly r = Poly::one(chain.front().field());
    for (const auto& p : chain) r = r * p;
    return r;
  }
  /// Entries of degree >= 1, ascending.
  std::vector<Poly> nontrivial() const {
    std::vector<Poly> r;
    for (const auto& p : chain)
      if (p.degree() >= 1) r.push_back(p);
    return r;
  }
  bool operator==(const InvariantFactors& o) const { return chain == o.chain; }
  bool operator!=(const InvariantFactors& o) const { return !(*this == o); }
  std::string str() const {
    std::string s = "[";
    for (size_t i = 0; i < chain.size(); ++i) s += (i ? ", " : "") + chain[i].str();
    return s + "]";
  }
};

/// Invariant factors from the Smith normal form of xI - M over K[x].
/// Pivot rule: lowest-degree nonzero entry, ties broken by row-major position.
inline InvariantFactors invariant_factors(const Mat& M) {
  SPCOVER_REQUIRE(M.square(), "invariant factors need a square matrix");
  const auto& f = M.field();
  const int n = M.rows();
  std::vector<std::vector<Poly>> a(n, std::vector<Poly>(n, Poly(f)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[i][j] = Poly::constant(f, f->neg(M(i, j)));
      if (i == j) a[i][j] = a[i][j] + Poly::x(f);
    }
  for (int k = 0; k < n; ++k) {
    while (true) {
      int pi = -1, pj = -1, best = 1 << 30;
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j)
          if (!a[i][j].is_zero() && a[i][j].degree() < best) {
            best = a[i][j].degree();
            pi = i;
            pj = j;
          }
      if (pi < 0) break;
      std::swap(a[k], a[pi]);
      for (int i = 0; i < n; ++i) std::swap(a[i][k], a[i][pj]);
      bool clean = true;
      for (int i = k + 1; i < n; ++i) {
        if (a[i][k].is_zero()) continue;
        auto [q, r] = a[i][k].divmod(a[k][k]);
        for (int j = k; j < n; ++j) a[i][j] = a[i][j] - q * a[k][j];
        if (!r.is_zero()) clean = false;
      }
      for (int j = k + 1; j < n; ++j) {
        if (a[k][j].is_zero()) continue;
        auto [q, r] = a[k][j].divmod(a[k][k]);
        for (int i = k; i < n; ++i) a[i][j] = a[i][j] - q * a[i][k];
        if (!r.is_zero()) clean = false;
      }
      if (!clean) continue;
      bool divisible = true;
      for (int i = k + 1; i < n && divisible; ++i)
        for (int j = k + 1; j < n && divisible; ++j)
          if (!a[k][k].divides(a[i][j])) {
            for (int c = k; c < n; ++c) a[k][c] = a[k][c] + a[i][c];
            divisible = false;
          }
      if (divisible) break;
    }
  }
  InvariantFactors out;
  for (int k = 0; k < n; ++k) out.chain.push_back(a[k][k].monic());
  return out;
}

/// Characteristic polynomial det(xI - M) by Hessenberg reduction.
inline Poly charpoly(const Mat& M) {
  SPCOVER_REQUIRE(M.square(), "charpoly needs a square matrix");
  const Field& F = M.F();
  const auto& f = M.field();
  const int n = M.rows();
  Mat H = M;
  for (int j = 0; j + 2 < n; ++j) {
    int piv = -1;
    for (int i = j + 1; i < n; ++i)
      if (H(i, j)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != j + 1) {
      for (int c = 0; c < n; ++c) std::swap(H(piv, c), H(j + 1, c));
      for (int r = 0; r < n; ++r) std::swap(H(r, piv), H(r, j + 1));
    }
    const Elem s = F.inv(H(j + 1, j));
    for (int r = j + 2; r < n; ++r) {
      if (!H(r, j)) continue;
      const Elem t = F.mul(H(r, j), s);
      for (int c = 0; c < n; ++c) H(r, c) = F.sub(H(r, c), F.mul(t, H(j + 1, c)));
      for (int c = 0; c < n; ++c) H(c, j + 1) = F.add(H(c, j + 1), F.mul(t, H(c, r)));
    }
  }
  std::vector<Poly> p;
  p.push_back(Poly::one(f));
  for (int m = 0; m < n; ++m) {
    Poly next = (Poly::x(f) - Poly::constant(f, H(m, m))) * p[m];
    Elem t = 1;
    for (int i = m - 1; i >= 0; --i) {
      t = F.mul(t, H(i + 1, i));
      next = next - p[i].scaled(F.mul(H(i, m), t));
    }
    p.push_back(next);
  }
  return p[n];
}

/// (chi, mu) from the invariant factors.
inline std::pair<Poly, Poly> char_min_poly(const Mat& M) {
  auto inv = invariant_factors(M);
  return {inv.characteristic(), inv.minimal()};
}

/// v p(M) for a row vector v.
inline Mat apply_poly(const Mat& v, const Poly& p, const Mat& M) {
  Mat r(v.field(), v.rows(), v.cols());
  for (int i = p.degree(); i >= 0; --i) r = r * M + v.scaled(p.coeff(i));
  return r;
}

/// Monic generator of {g : v g(M) = 0}.
inline Poly local_minpoly(const Mat& v, const Mat& M) {
  const auto& f = M.field();
  Mat krylov = v;
  Mat cur = v;
  int d = v.is_zero() ? 0 : 1;
  if (d == 0) return Poly::one(f);
  while (true) {
    cur = cur * M;
    Mat next = Mat::vstack(krylov, cur);
    if (rank(next) == d) {
      Mat k = left_kernel(next);
      // one-dimensional kernel; normalize the coefficient of v M^d
      std::vector<Elem> c = k.row(0);
      const Elem s = f->inv(c[d]);
      for (auto& x : c) x = f->mul(x, s);
      return Poly(f, c);
    }
    krylov = next;
    ++d;
  }
}

/// Minimal polynomial as lcm of local minimal polynomials of a basis.
inline Poly minpoly_fast(const Mat& M) {
  const auto& f = M.field();
  Poly mu = Poly::one(f);
  const int n = M.rows();
  for (int i = 0; i < n; ++i) {
    Mat e(f, 1, n);
    e(0, i) = 1;
    if (!apply_poly(e, mu, M).is_zero()) mu = lcm(mu, local_minpoly(e, M));
  }
  return mu;
}

namespace detail {

// Vector whose local minimal polynomial equals the minimal polynomial of M.
inline std::pair<Mat, Poly> maximal_vector(const Mat& M) {
  const auto& f = M.field();
  const int n = M.rows();
  Mat v(f, 1, n);
  Poly fv = Poly::one(f);
  for (int i = 0; i < n; ++i) {
    Mat e(f, 1, n);
    e(0, i) = 1;
    if (apply_poly(e, fv, M).is_zero()) continue;
    Poly fe = local_minpoly(e, M);
    Poly h = lcm(fv, fe);
    if (h == fv) continue;
    // split h = f1 * g1 coprime with f1 | fv, g1 | fe
    Poly f1 = Poly::one(f), g1 = Poly::one(f);
    for (const auto& [p, mult] : factor(h)) {
      int a = 0, b = 0;
      Poly t = fv;
      while (!t.is_zero() && p.divides(t) && t.degree() > 0) {
        t = t / p;
        ++a;
      }
      t = fe;
      while (!t.is_zero() && p.divides(t) && t.degree() > 0) {
        t = t / p;
        ++b;
      }
      if (a >= b) f1 = f1 * p.pow(a);
      else g1 = g1 * p.pow(b);
    }
    Mat v1 = apply_poly(v, fv / f1, M);
    Mat e1 = apply_poly(e, fe / g1, M);
    v = v1 + e1;
    fv = h;
  }
  return {v, fv};
}

// Cyclic decomposition; blocks returned with descending minimal polynomials.
// Each block is (local minimal polynomial, Krylov basis rows).
inline void cyclic_blocks(const Mat& M, std::vector<std::pair<Poly, Mat>>& out) {
  const auto& f = M.field();
  const int n = M.rows();
  if (n == 0) return;
  auto [v, mu] = maximal_vector(M);
  const int d = mu.degree();
  Mat Z = v;
  Mat cur = v;
  for (int i = 1; i < d; ++i) {
    cur = cur * M;
    Z = Mat::vstack(Z, cur);
  }
  out.emplace_back(mu, Z);
  if (d == n) return;
  // Extend Z by standard vectors to a basis, define psi on it, and take the
  // invariant complement W = {x : psi(x M^i) = 0, i < d}.
  Mat basis = Z;
  for (int i = 0; i < n && basis.rows() < n; ++i) {
    Mat e(f, 1, n);
    e(0, i) = 1;
    Mat t = Mat::vstack(basis, e);
    if (rank(t) == t.rows()) basis = t;
  }
  Mat rhs(f, n, 1);
  rhs(d - 1, 0) = 1;
  auto u = solve(basis, rhs);
  SPCOVER_VERIFY(u.has_value(), "cyclic decomposition: functional extension failed");
  Mat cols(f, n, d);
  Mat w = *u;
  for (int i = 0; i < d; ++i) {
    cols.set_block(0, i, w);
    w = M * w;
  }
  Mat Wb = left_kernel(cols);
  SPCOVER_VERIFY(Wb.rows() == n - d, "cyclic decomposition: complement has wrong dimension");
  // restricted map in W-coordinates
  Mat image = Wb * M;
  Mat MW(f, n - d, n - d);
  for (int r = 0; r < n - d; ++r) {
    auto c = solve(Wb.transpose(), image.block(r, 0, 1, n).transpose());
    SPCOVER_VERIFY(c.has_value(), "cyclic decomposition: complement not invariant");
    MW.set_block(r, 0, c->transpose());
  }
  std::vector<std::pair<Poly, Mat>> sub;
  cyclic_blocks(MW, sub);
  for (auto& [p, B] : sub) out.emplace_back(p, B * Wb);
}

}  // namespace detail

/// Block diagonal sum of companion matrices of the nontrivial chain entries.
inline Mat rcf_build(const InvariantFactors& inv) {
  SPCOVER_REQUIRE(!inv.chain.empty(), "empty invariant factor chain");
  const auto& f = inv.chain.front().field();
  Mat r(f, 0, 0);
  for (const auto& p : inv.nontrivial()) r = r.rows() == 0 ? companion(p) : Mat::direct_sum(r, companion(p));
  return r;
}

/// Rational canonical basis: B with B M B^{-1} = rcf_build(invariant factors),
/// plus the chain it realizes.
inline std::pair<Mat, InvariantFactors> rational_canonical_basis(const Mat& M) {
  SPCOVER_REQUIRE(M.square(), "rational canonical basis needs a square matrix");
  const auto& f = M.field();
  std::vector<std::pair<Poly, Mat>> blocks;
  detail::cyclic_blocks(M, blocks);
  std::reverse(blocks.begin(), blocks.end());
  Mat B(f, 0, M.cols());
  InvariantFactors inv;
  const int ones = M.rows() - static_cast<int>(blocks.size());
  for (int i = 0; i < ones; ++i) inv.chain.push_back(Poly::one(f));
  for (auto& [p, Z] : blocks) {
    B = Mat::vstack(B, Z);
    inv.chain.push_back(p);
  }
  return {B, inv};
}

/// Similarity test; with want_conjugator, X satisfies X^{-1} M X = N.
inline std::pair<bool, std::optional<Mat>> similar(const Mat& M, const Mat& N, bool want_conjugator = false) {
  SPCOVER_REQUIRE(M.square() && N.square() && M.rows() == N.rows(), "similar: size mismatch");
  if (invariant_factors(M) != invariant_factors(N)) return {false, std::nullopt};
  if (!want_conjugator) return {true, std::nullopt};
  auto [BM, iM] = rational_canonical_basis(M);
  auto [BN, iN] = rational_canonical_basis(N);
  Mat X = inverse(BM) * BN;
  SPCOVER_VERIFY(conj(M, X) == N, "similarity conjugator failed replay");
  return {true, X};
}

struct SimilarityProfile {
  bool is_cyclic = false;
  bool is_nonprimary = false;
  int min_rank = 0;
  /// (irreducible, exponent) pairs, one per prime-power piece of the chain.
  std::vector<std::pair<Poly, int>> elementary_divisors;
};

inline std::vector<std::pair<Poly, int>> elementary_divisors(const InvariantFactors& inv) {
  std::vector<std::pair<Poly, int>> out;
  for (const auto& p : inv.nontrivial())
    for (auto& pe : factor(p)) out.push_back(pe);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  });
  return out;
}

inline SimilarityProfile similarity_profile(const Mat& M) {
  auto inv = invariant_factors(M);
  SimilarityProfile s;
  const int n = inv.size();
  for (const auto& p : inv.chain)
    if (p.is_one()) ++s.min_rank;
  s.is_cyclic = s.min_rank == n - 1;
  s.is_nonprimary = factor(inv.minimal()).size() >= 2;
  s.elementary_divisors = elementary_divisors(inv);
  return s;
}

/// Cheap tests used in search loops.
inline bool is_cyclic(const Mat& M) { return minpoly_fast(M).degree() == M.rows(); }
inline bool is_nonprimary(const Mat& M) { return factor(charpoly(M)).size() >= 2; }

struct GeneralizedSpaces {
  Subspace bahn, fix, neg;
};

/// Bahn^j = image of (M - 1)^j, Fix^j = its kernel, Neg^j = kernel of (M + 1)^j.
inline GeneralizedSpaces generalized_spaces(const Mat& M, int j) {
  SPCOVER_REQUIRE(M.square() && j >= 1, "generalized_spaces: need square M and j >= 1");
  const auto& f = M.field();
  const int n = M.rows();
  Mat I = Mat::identity(f, n);
  Mat a = I, b = I;
  for (int i = 0; i < j; ++i) {
    a = a * (M - I);
    b = b * (M + I);
  }
  return {Subspace::span(a), Subspace::span(left_kernel(a)), Subspace::span(left_kernel(b))};
}

/// Depth-first search for a `dim`-dimensional subspace containing the row
/// space of `start` on which the monotone predicate `ok` holds (true on a space
/// implies true on its subspaces). Extensions are normalized vectors, in
/// increasing canonical order, vanishing on the pivot columns of the current
/// echelon basis, so each subspace is reached along essentially one path; the
/// first path tried is the greedy one and the search is exhaustive.
/// Throws budget_exceeded after `node_budget` nodes.
inline std::optional<Mat> search_subspace_from(const Mat& start, int dim, const std::function<bool(const Mat&)>& ok,
                                               long long node_budget = 20'000'000) {
  const auto& f = start.field();
  const int n = start.cols();
  const int q = f->order();
  SPCOVER_REQUIRE(rank(start) == start.rows(), "subspace search start must be independent");
  if (start.rows() > dim) return std::nullopt;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= q;
  std::vector<std::vector<Elem>> cands;
  for (long long code = 1; code < total; ++code) {
    std::vector<Elem> v(n);
    long long c = code;
    for (int i = 0; i < n; ++i) {
      v[i] = static_cast<Elem>(c % q);
      c /= q;
    }
    Elem lead = 0;
    for (int i = n - 1; i >= 0 && !lead; --i) lead = v[i];
    if (lead == 1) cands.push_back(v);
  }
  long long nodes = 0;
  std::function<std::optional<Mat>(const Mat&, size_t)> rec = [&](const Mat& cur, size_t from) -> std::optional<Mat> {
    if (cur.rows() == dim) return cur;
    Mat ech = cur;
    auto piv = rref_in_place(ech);
    for (size_t i = from; i < cands.size(); ++i) {
      bool reduced = true;
      for (int pc : piv)
        if (cands[i][pc]) {
          reduced = false;
          break;
        }
      if (!reduced) continue;
      if (++nodes > node_budget) throw budget_exceeded("subspace search exceeded node budget");
      Mat next = Mat::vstack(cur, Mat::row_vector(f, cands[i]));
      if (!ok(next)) continue;
      if (auto r = rec(next, i + 1)) return r;
    }
    return std::nullopt;
  };
  if (start.rows() > 0 && !ok(start)) return std::nullopt;
  return rec(start, 0);
}

inline std::optional<Mat> search_subspace(const FieldPtr& f, int n, int dim, const std::function<bool(const Mat&)>& ok,
                                          long long node_budget = 20'000'000) {
  return search_subspace_from(Mat(f, 0, n), dim, ok, node_budget);
}

/// Dimension-m subspace T with T and TM meeting trivially. Exists iff 2m <= n
/// and the minimal rank of M is at least m.
inline Subspace anti_invariant_subspace(const Mat& M, int m) {
  SPCOVER_REQUIRE(M.square(), "anti_invariant_subspace needs a square matrix");
  const int n = M.rows();
  const int mr = similarity_profile(M).min_rank;
  if (2 * m > n || mr < m)
    throw precondition_error("no anti-invariant subspace of dimension " + std::to_string(m) +
                             " (n = " + std::to_string(n) + ", min rank " + std::to_string(mr) + ")");
  auto T = search_subspace(M.field(), n, m, [&](const Mat& t) { return rank(Mat::vstack(t, t * M)) == 2 * t.rows(); });
  SPCOVER_VERIFY(T.has_value(), "anti-invariant subspace search failed although the criterion holds");
  return Subspace::span(*T);
}

/// i_k(P) | i_k(A) | i_{k+2q}(P) with q = size difference; upper constraints
/// past the end of P's chain are dropped.
inline bool interlace_check(const InvariantFactors& fP, const InvariantFactors& fA) {
  SPCOVER_REQUIRE(fA.size() <= fP.size(), "interlace_check: A larger than P");
  const int p = fA.size();
  const int q = fP.size() - p;
  for (int k = 0; k < p; ++k) {
    if (!fP.chain[k].divides(fA.chain[k])) return false;
    if (k + 2 * q < fP.size() && !fA.chain[k].divides(fP.chain[k + 2 * q])) return false;
  }
  return true;
}

/// Doolittle LU without pivoting; nullopt when a leading minor vanishes.
inline std::optional<std::pair<Mat, Mat>> lu_nopivot(const Mat& P) {
  const Field& F = P.F();
  const int n = P.rows();
  Mat L = Mat::identity(P.field(), n), U = P;
  for (int c = 0; c < n; ++c) {
    if (!U(c, c)) return std::nullopt;
    const Elem s = F.inv(U(c, c));
    for (int r = c + 1; r < n; ++r) {
      const Elem t = F.mul(U(r, c), s);
      L(r, c) = t;
      if (!t) continue;
      for (int j = 0; j < n; ++j) U(r, j) = F.sub(U(r, j), F.mul(t, U(c, j)));
    }
  }
  return std::make_pair(L, U);
}

struct LuSimilarization {
  Mat X, L, U;
};

/// X^{-1} P X = L U with L lower and U upper triangular, both invertible.
/// Conjugators tried: identity, single transvections, then seeded random
/// products of transvections.
inline LuSimilarization lu_similarize(const Mat& P) {
  SPCOVER_REQUIRE(P.square(), "lu_similarize needs a square matrix");
  SPCOVER_REQUIRE(det(P) != 0, "lu_similarize needs an invertible matrix");
  const auto& f = P.field();
  const int n = P.rows();
  const int q = f->order();
  auto attempt = [&](const Mat& X) -> std::optional<LuSimilarization> {
    auto lu = lu_nopivot(conj(P, X));
    if (!lu) return std::nullopt;
    return LuSimilarization{X, lu->first, lu->second};
  };
  if (auto r = attempt(Mat::identity(f, n))) return *r;
  std::vector<Mat> elementary;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        for (int a = 1; a < q; ++a) {
          Mat X = Mat::identity(f, n);
          X(i, j) = static_cast<Elem>(a);
          elementary.push_back(X);
        }
  for (const auto& X : elementary)
    if (auto r = attempt(X)) return *r;
  std::mt19937_64 rng(0x5eed);
  for (int trial = 0; trial < 200000; ++trial) {
    Mat X = Mat::identity(f, n);
    const int len = 2 + trial % (2 * n + 2);
    for (int s = 0; s < len; ++s) X = X * elementary[rng() % elementary.size()];
    if (auto r = attempt(X)) return *r;
  }
  throw verification_failure("lu_similarize exhausted its conjugator sweep");
}

}  // namespace spcover
