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
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "spcover/errors.hpp"
#include "spcover/similarity.hpp"

namespace spcover {

/// A similarity class of GL(n, K), fingerprinted by its invariant factors.
struct GlClass {
  FieldPtr field;
  int n = 0;
  InvariantFactors inv;
  bool cyclic = false;
  Elem det = 0;
  Mat rep;

  /// Cyclic class with characteristic polynomial chi; representative is the companion matrix.
  static GlClass of_poly(const Poly& chi) {
    SPCOVER_REQUIRE(chi.is_monic() && chi.degree() >= 1, "class polynomial must be monic of degree >= 1");
    SPCOVER_REQUIRE(chi.coeff(0) != 0, "class polynomial must have nonzero constant term");
    return of_matrix(companion(chi));
  }
  static GlClass of_matrix(const Mat& M) {
    SPCOVER_REQUIRE(M.square() && M.rows() >= 1, "class needs a nonempty square matrix");
    GlClass c;
    c.field = M.field();
    c.n = M.rows();
    c.inv = invariant_factors(M);
    c.cyclic = c.inv.nontrivial().size() == 1;
    c.det = spcover::det(M);
    c.rep = rcf_build(c.inv);
    SPCOVER_REQUIRE(c.det != 0, "class must consist of invertible matrices");
    return c;
  }
  Poly chi() const { return inv.characteristic(); }
  bool contains(const Mat& M) const {
    return M.square() && M.rows() == n && invariant_factors(M) == inv;
  }
  bool is_scalar() const { return rep.is_scalar(); }
  /// Class of inverses.
  GlClass inverse_class() const { return of_matrix(spcover::inverse(rep)); }
  bool operator==(const GlClass& o) const { return n == o.n && inv == o.inv; }
};

namespace detail {

inline Poly chi_shift_product(const Mat& U1, const Mat& U2, const Mat& Z) {
  const int n = U1.rows() + U2.rows();
  Mat T = Mat::blocks2(U1, Z, Mat(U1.field(), U2.rows(), U1.rows()), U2);
  return charpoly(Mat::cyclic_shift(U1.field(), n) * T);
}

}  // namespace detail

/// Z such that S [[U1, Z], [0, U2]] is cyclic with the target characteristic
/// polynomial, S the cyclic shift. Only the first row and first column of Z
/// are used; the characteristic polynomial is affine in those entries.
inline Mat complete_shift_product(const Mat& U1, const Mat& U2, const Poly& target) {
  const auto& f = U1.field();
  const int m = U1.rows(), k = U2.rows(), n = m + k;
  SPCOVER_REQUIRE(U1.square() && U2.square() && m >= 1 && k >= 1, "complete_shift_product: blocks must be square and nonempty");
  SPCOVER_REQUIRE(U1.is_upper_triangular() && U2.is_upper_triangular(), "complete_shift_product: blocks must be upper triangular");
  const Elem d = f->mul(det(U1), det(U2));
  SPCOVER_REQUIRE(d != 0, "complete_shift_product: blocks must be invertible");
  SPCOVER_REQUIRE(target.is_monic() && target.degree() == n, "complete_shift_product: target must be monic of degree n");
  SPCOVER_REQUIRE(target.coeff(0) == f->neg(d), "complete_shift_product: determinant condition violated");

  std::vector<std::pair<int, int>> slots;
  for (int j = 0; j < k; ++j) slots.emplace_back(0, j);
  for (int i = 1; i < m; ++i) slots.emplace_back(i, 0);
  Mat Z0(f, m, k);
  const Poly base = detail::chi_shift_product(U1, U2, Z0);
  Mat A(f, n - 1, n - 1), rhs(f, n - 1, 1);
  for (size_t s = 0; s < slots.size(); ++s) {
    Mat Z = Z0;
    Z(slots[s].first, slots[s].second) = 1;
    Poly delta = detail::chi_shift_product(U1, U2, Z) - base;
    for (int c = 1; c < n; ++c) A(c - 1, static_cast<int>(s)) = delta.coeff(c);
  }
  for (int c = 1; c < n; ++c) rhs(c - 1, 0) = f->sub(target.coeff(c), base.coeff(c));
  auto check = [&](const Mat& Z) {
    Mat T = Mat::blocks2(U1, Z, Mat(f, k, m), U2);
    Mat PZ = Mat::cyclic_shift(f, n) * T;
    return charpoly(PZ) == target && is_cyclic(PZ);
  };
  if (auto z = solve(A, rhs)) {
    Mat Z = Z0;
    for (size_t s = 0; s < slots.size(); ++s) Z(slots[s].first, slots[s].second) = (*z)(static_cast<int>(s), 0);
    if (check(Z)) return Z;
  }
  // Degenerate linear system: exhaustive search over the same slots.
  const int q = f->order();
  long long total = 1;
  for (size_t s = 0; s < slots.size(); ++s) {
    total *= q;
    if (total > 5'000'000) throw verification_failure("complete_shift_product: linear system degenerate and search too large");
  }
  for (long long code = 0; code < total; ++code) {
    Mat Z = Z0;
    long long c = code;
    for (auto [i, j] : slots) {
      Z(i, j) = static_cast<Elem>(c % q);
      c /= q;
    }
    if (check(Z)) return Z;
  }
  throw verification_failure("complete_shift_product: no completion found");
}

/// P_Z for given blocks and Z.
inline Mat shift_product(const Mat& U1, const Mat& U2, const Mat& Z) {
  const int n = U1.rows() + U2.rows();
  return Mat::cyclic_shift(U1.field(), n) * Mat::blocks2(U1, Z, Mat(U1.field(), U2.rows(), U1.rows()), U2);
}

struct BlockProduct {
  Mat C, F_Phi, F_Delta;
};

/// [[P1, C], [0, P2]] = F_Phi F_Delta with F_Phi in Phi and F_Delta in Delta.
inline BlockProduct block_triangular_product(const GlClass& Phi, const GlClass& Delta, const Mat& P1, const Mat& P2) {
  SPCOVER_REQUIRE(Phi.cyclic && Delta.cyclic, "block_triangular_product needs cyclic classes");
  const auto& f = P1.field();
  const int m = P1.rows(), k = P2.rows(), n = m + k;
  SPCOVER_REQUIRE(P1.square() && P2.square() && m >= 1 && k >= 1, "block_triangular_product: diagonal blocks must be square and nonempty");
  SPCOVER_REQUIRE(Phi.n == n && Delta.n == n, "block_triangular_product: class size mismatch");
  SPCOVER_REQUIRE(f->mul(det(P1), det(P2)) == f->mul(Phi.det, Delta.det), "block_triangular_product: determinant mismatch");

  auto s1 = lu_similarize(P1);
  auto s2 = lu_similarize(P2);
  Mat L1 = s1.L, U1 = s1.U, L2 = s2.L, U2 = s2.U;
  // Rescale so that det(U1 U2) = (-1)^{n+1} det Delta.
  const Elem sign = (n % 2 == 1) ? f->one() : f->neg(f->one());
  const Elem want = f->mul(sign, Delta.det);
  const Elem s = f->div(want, f->mul(det(U1), det(U2)));
  for (int j = 0; j < m; ++j) U1(0, j) = f->mul(U1(0, j), s);
  for (int i = 0; i < m; ++i) L1(i, 0) = f->div(L1(i, 0), s);

  Mat Z = complete_shift_product(U1, U2, Delta.chi());
  Mat F_Delta = shift_product(U1, U2, Z);
  Mat Zt = complete_shift_product(L2.transpose(), L1.transpose(), Phi.chi());
  Mat Xp = Zt.transpose();
  Mat S = Mat::cyclic_shift(f, n);
  Mat F_Phi = Mat::blocks2(L1, Xp, Mat(f, k, m), L2) * S.transpose();

  Mat X = Mat::direct_sum(s1.X, s2.X);
  Mat Xi = inverse(X);
  BlockProduct out;
  out.F_Phi = X * F_Phi * Xi;
  out.F_Delta = X * F_Delta * Xi;
  Mat prod = out.F_Phi * out.F_Delta;
  out.C = prod.block(0, m, m, k);
  SPCOVER_VERIFY(prod == Mat::blocks2(P1, out.C, Mat(f, k, m), P2), "block_triangular_product: product replay failed");
  SPCOVER_VERIFY(Phi.contains(out.F_Phi), "block_triangular_product: first factor outside its class");
  SPCOVER_VERIFY(Delta.contains(out.F_Delta), "block_triangular_product: second factor outside its class");
  return out;
}

/// Basis change B with B M B^{-1} = M1 (+) M2, where M1 is the primary part of
/// M for the least irreducible factor of chi and M2 the rest.
struct PrimarySplit {
  Mat B, M1, M2;
};

inline PrimarySplit primary_split(const Mat& M) {
  const auto& f = M.field();
  const int n = M.rows();
  auto fac = factor(charpoly(M));
  SPCOVER_REQUIRE(fac.size() >= 2, "primary_split needs a nonprimary matrix");
  Poly first = fac[0].first.pow(fac[0].second);
  Poly rest = Poly::one(f);
  for (size_t i = 1; i < fac.size(); ++i) rest = rest * fac[i].first.pow(fac[i].second);
  Mat V1 = left_kernel(poly_eval(first, M));
  Mat V2 = left_kernel(poly_eval(rest, M));
  Mat B = Mat::vstack(V1, V2);
  SPCOVER_VERIFY(B.rows() == n && det(B) != 0, "primary_split: components do not span");
  Mat D = B * M * inverse(B);
  const int m = V1.rows();
  return {B, D.block(0, 0, m, m), D.block(m, m, n - m, n - m)};
}

/// M = F1 F2 with F1 in Phi, F2 in Delta, for nonprimary M of matching determinant.
inline std::pair<Mat, Mat> nonprimary_product(const GlClass& Phi, const GlClass& Delta, const Mat& M) {
  SPCOVER_REQUIRE(M.square() && M.rows() >= 2, "nonprimary_product needs n >= 2");
  SPCOVER_REQUIRE(Phi.cyclic && Delta.cyclic, "nonprimary_product needs cyclic classes");
  SPCOVER_REQUIRE(Phi.n == M.rows() && Delta.n == M.rows(), "nonprimary_product: size mismatch");
  const auto& f = M.field();
  SPCOVER_REQUIRE(det(M) == f->mul(Phi.det, Delta.det), "nonprimary_product: determinant mismatch");
  SPCOVER_REQUIRE(is_nonprimary(M), "nonprimary_product needs a nonprimary matrix");
  auto sp = primary_split(M);
  auto bp = block_triangular_product(Phi, Delta, sp.M1, sp.M2);
  // The block triangular product has coprime diagonal blocks, hence is similar to M.
  auto [ok, X] = similar(bp.F_Phi * bp.F_Delta, M, true);
  SPCOVER_VERIFY(ok, "nonprimary_product: block product not similar to target");
  Mat F1 = conj(bp.F_Phi, *X), F2 = conj(bp.F_Delta, *X);
  SPCOVER_VERIFY(F1 * F2 == M, "nonprimary_product: product replay failed");
  SPCOVER_VERIFY(Phi.contains(F1) && Delta.contains(F2), "nonprimary_product: factor outside its class");
  return {F1, F2};
}

/// X (+) delta = F1 F2 with F1 in Phi, F2 in Delta; delta is not an eigenvalue of X.
inline std::pair<Mat, Mat> dilatation_split(const GlClass& Phi, const GlClass& Delta, const Mat& X, Elem delta) {
  const auto& f = X.field();
  const int k = X.rows(), n = k + 1;
  SPCOVER_REQUIRE(X.square() && k >= 1, "dilatation_split needs a nonempty square block");
  SPCOVER_REQUIRE(Phi.cyclic && Delta.cyclic && Phi.n == n && Delta.n == n, "dilatation_split: class mismatch");
  SPCOVER_REQUIRE(delta != 0, "dilatation_split: delta must be nonzero");
  SPCOVER_REQUIRE(det(X - Mat::scalar(f, k, delta)) != 0, "dilatation_split: delta is an eigenvalue of the block");
  SPCOVER_REQUIRE(f->mul(det(X), delta) == f->mul(Phi.det, Delta.det), "dilatation_split: determinant mismatch");
  auto lu = lu_similarize(X);
  const Elem sign = (n % 2 == 1) ? f->one() : f->neg(f->one());
  // A = S^{-1} [[L, 0], [a, d]] lies in Phi; B = S [[e, b], [0, U]] lies in Delta.
  const Elem d = f->div(f->mul(sign, Phi.det), det(lu.L));
  const Elem e = f->div(f->mul(sign, Delta.det), det(lu.U));
  SPCOVER_VERIFY(f->mul(d, e) == delta, "dilatation_split: scalar bookkeeping failed");
  Mat a = complete_shift_product(lu.L.transpose(), Mat::scalar(f, 1, d), Phi.chi()).transpose();
  Mat b = complete_shift_product(Mat::scalar(f, 1, e), lu.U, Delta.chi());
  Mat S = Mat::cyclic_shift(f, n);
  Mat A = S.transpose() * Mat::blocks2(lu.L, Mat(f, k, 1), a, Mat::scalar(f, 1, d));
  Mat B = S * Mat::blocks2(Mat::scalar(f, 1, e), b, Mat(f, k, 1), lu.U);
  Mat target = Mat::direct_sum(X, Mat::scalar(f, 1, delta));
  auto [ok, Y] = similar(A * B, target, true);
  SPCOVER_VERIFY(ok, "dilatation_split: product not similar to target");
  Mat F1 = conj(A, *Y), F2 = conj(B, *Y);
  SPCOVER_VERIFY(F1 * F2 == target, "dilatation_split: product replay failed");
  SPCOVER_VERIFY(Phi.contains(F1) && Delta.contains(F2), "dilatation_split: factor outside its class");
  return {F1, F2};
}

/// Two members X = [[Q, M], [0, R]] and Y = [[Q, N], [0, R]] of a reducible
/// cyclic class with rank M = rank N = rank(M - N) = 1, so X Y^{-1} is a
/// transvection. Q, R are companions of a splitting chi = f g; M and N range
/// over rank-one corner blocks.
inline std::pair<Mat, Mat> transvection_pair(const GlClass& Phi) {
  SPCOVER_REQUIRE(Phi.cyclic, "transvection_pair needs a cyclic class");
  const auto& f = Phi.field;
  const Poly chi = Phi.chi();
  const int n = Phi.n;
  SPCOVER_REQUIRE(n >= 2, "transvection_pair needs n >= 2");
  SPCOVER_REQUIRE(!(f->order() == 2 && n == 2), "transvection_pair over GF(2) needs n >= 3");
  auto fac = factor(chi);
  if (fac.size() == 1 && fac[0].second == 1) throw precondition_error("transvection_pair: class polynomial is irreducible");
  // monic divisors of chi of degree 1..n-1, by increasing degree
  std::vector<Poly> divisors{Poly::one(f)};
  for (auto& [p, e] : fac) {
    std::vector<Poly> next;
    for (const auto& d : divisors)
      for (int i = 0; i <= e; ++i) next.push_back(d * p.pow(i));
    divisors = next;
  }
  std::sort(divisors.begin(), divisors.end());
  const int q = f->order();
  for (const auto& fd : divisors) {
    const int m = fd.degree(), k = n - m;
    if (m < 1 || k < 1) continue;
    const Mat Q = companion(fd), R = companion(chi / fd);
    long long total = 1;
    for (int i = 0; i < m * k; ++i) total *= q;
    std::vector<Mat> members;
    for (long long code = 1; code < total; ++code) {
      Mat B(f, m, k);
      long long c = code;
      for (int i = 0; i < m * k; ++i) {
        B(i / k, i % k) = static_cast<Elem>(c % q);
        c /= q;
      }
      if (rank(B) != 1) continue;
      if (Phi.contains(Mat::blocks2(Q, B, Mat(f, k, m), R))) members.push_back(B);
    }
    for (size_t i = 0; i < members.size(); ++i)
      for (size_t j = 0; j < members.size(); ++j) {
        if (i == j || rank(members[i] - members[j]) != 1) continue;
        Mat Xm = Mat::blocks2(Q, members[i], Mat(f, k, m), R);
        Mat Ym = Mat::blocks2(Q, members[j], Mat(f, k, m), R);
        Mat t = Xm * inverse(Ym);
        SPCOVER_VERIFY(rank(t - Mat::identity(f, n)) == 1 && det(t) == 1, "transvection_pair: quotient is not a transvection");
        return {Xm, Ym};
      }
  }
  throw verification_failure("transvection_pair: no rank-one pair found");
}

/// Traces of products F1 F2, F1 in Phi, F2 in Delta, for nonscalar 2x2 classes with Phi
/// not irreducible, with one witness pair per trace value.
struct TraceSet {
  std::set<Elem> traces;
  std::map<Elem, std::pair<Mat, Mat>> witnesses;
};

inline TraceSet trace_set_2x2(const GlClass& Phi, const GlClass& Delta) {
  SPCOVER_REQUIRE(Phi.n == 2 && Delta.n == 2, "trace_set_2x2 needs 2x2 classes");
  SPCOVER_REQUIRE(!Phi.is_scalar() && !Delta.is_scalar(), "trace_set_2x2 needs nonscalar classes");
  SPCOVER_REQUIRE(!is_irreducible(Phi.chi()), "trace_set_2x2 needs Phi not irreducible");
  const auto& f = Phi.field;
  const int q = f->order();
  auto phi_fac = factor(Phi.chi());
  const bool phi_primary = phi_fac.size() == 1;
  const bool delta_irred = is_irreducible(Delta.chi());
  std::optional<Elem> excluded;
  if (phi_primary && delta_irred) {
    const Elem alpha = f->neg(phi_fac[0].first.coeff(0));
    excluded = f->mul(alpha, Delta.rep.trace());
  }
  // Phi members: triangular with the class eigenvalues on the diagonal.
  std::vector<Elem> ev;
  for (auto& [p, e] : phi_fac)
    for (int i = 0; i < e; ++i) ev.push_back(f->neg(p.coeff(0)));
  std::vector<Mat> phis;
  for (int sw = 0; sw < 2; ++sw)
    for (int mu = 0; mu < q; ++mu) {
      const Elem a = ev[sw], b = ev[1 - sw];
      Mat lo(f, 2, 2), up(f, 2, 2);
      lo(0, 0) = up(0, 0) = a;
      lo(1, 1) = up(1, 1) = b;
      lo(1, 0) = up(0, 1) = static_cast<Elem>(mu);
      for (const Mat& c : {lo, up})
        if (Phi.contains(c)) phis.push_back(c);
    }
  // Delta members: companion, its transpose, and their conjugates by
  // elementary matrices.
  std::vector<Mat> deltas;
  const Mat Cd = companion(Delta.chi());
  for (const Mat& base : {Cd, Cd.transpose()}) {
    deltas.push_back(base);
    for (int i = 0; i < 2; ++i)
      for (int a = 1; a < q; ++a) {
        Mat E = Mat::identity(f, 2);
        E(i, 1 - i) = static_cast<Elem>(a);
        deltas.push_back(conj(base, E));
        Mat D = Mat::identity(f, 2);
        D(i, i) = static_cast<Elem>(a);
        deltas.push_back(conj(base, D));
      }
  }
  TraceSet out;
  for (int t = 0; t < q; ++t) {
    const Elem te = static_cast<Elem>(t);
    if (excluded && *excluded == te) continue;
    bool found = false;
    for (const auto& F1 : phis) {
      for (const auto& F2 : deltas)
        if ((F1 * F2).trace() == te) {
          out.witnesses.emplace(te, std::make_pair(F1, F2));
          found = true;
          break;
        }
      if (found) break;
    }
    SPCOVER_VERIFY(found, "trace_set_2x2: no witness for trace " + f->format(te));
    out.traces.insert(te);
  }
  return out;
}

}  // namespace spcover
