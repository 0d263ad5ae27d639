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
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spcover/errors.hpp"
#include "spcover/similarity.hpp"

namespace spcover {

/// Standard alternating form [[0, I], [-I, 0]] on K^{2n}.
inline Mat standard_gram(const FieldPtr& f, int n) {
  Mat G(f, 2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    G(i, n + i) = 1;
    G(n + i, i) = f->neg(1);
  }
  return G;
}

struct SympSpace {
  FieldPtr field;
  int n = 0;
  Mat gram;

  static SympSpace make(const FieldPtr& f, int n) {
    SPCOVER_REQUIRE(n >= 1, "symplectic half-dimension must be >= 1");
    return {f, n, standard_gram(f, n)};
  }
};

/// Half-dimension of a 2n x 2n matrix.
inline int half_dim(const Mat& P) {
  SPCOVER_REQUIRE(P.square() && P.rows() % 2 == 0, "symplectic matrices have even size");
  return P.rows() / 2;
}

/// Alternating form u G v^T.
inline Elem omega(const Mat& u, const Mat& v) {
  const int n = u.cols() / 2;
  const Field& F = u.F();
  Elem s = 0;
  for (int i = 0; i < n; ++i) {
    s = F.add(s, F.mul(u(0, i), v(0, n + i)));
    s = F.sub(s, F.mul(u(0, n + i), v(0, i)));
  }
  return s;
}

inline bool is_symplectic(const Mat& P) {
  const int n = half_dim(P);
  const Mat G = standard_gram(P.field(), n);
  return P * G * P.transpose() == G;
}

inline bool is_symplectic(const Mat& P, const SympSpace& S) {
  SPCOVER_REQUIRE(P.rows() == 2 * S.n, "matrix size does not match the symplectic space");
  return P * S.gram * P.transpose() == S.gram;
}

/// P^{-1} = G P^T G^{-1} for symplectic P.
inline Mat sp_inverse(const Mat& P) {
  const Mat G = standard_gram(P.field(), half_dim(P));
  return G * P.transpose() * G.scaled(P.field()->neg(1));
}

/// True iff the row space of T is totally degenerate.
inline bool is_isotropic(const Mat& T) {
  const Mat G = standard_gram(T.field(), T.cols() / 2);
  return (T * G * T.transpose()).is_zero();
}

struct Quarter {
  Mat A, B, C, D;
};

inline Quarter quarters(const Mat& P) {
  const int n = half_dim(P);
  return {P.block(0, 0, n, n), P.block(0, n, n, n), P.block(n, 0, n, n), P.block(n, n, n, n)};
}

inline Mat from_quarters(const Mat& A, const Mat& B, const Mat& C, const Mat& D) { return Mat::blocks2(A, B, C, D); }

/// [[A (+) R, B (+) S], [C (+) T, D (+) U]].
inline Mat boxplus(const Mat& P, const Mat& Q) {
  SPCOVER_REQUIRE(is_symplectic(P) && is_symplectic(Q), "boxplus needs symplectic inputs");
  auto p = quarters(P), q = quarters(Q);
  return from_quarters(Mat::direct_sum(p.A, q.A), Mat::direct_sum(p.B, q.B), Mat::direct_sum(p.C, q.C),
                       Mat::direct_sum(p.D, q.D));
}

/// Conjugators realizing the corner moves; each is symplectic.
inline Mat diag_conjugator(const Mat& X) { return Mat::direct_sum(X, invtranspose(X)); }
inline Mat shear_conjugator(const Mat& S) {
  SPCOVER_REQUIRE(S.is_symmetric(), "shear needs a symmetric matrix");
  const int n = S.rows();
  return from_quarters(Mat::identity(S.field(), n), Mat(S.field(), n, n), S, Mat::identity(S.field(), n));
}

/// Corner A -> X^{-1} A X.
inline Mat conj_X(const Mat& P, const Mat& X) {
  SPCOVER_REQUIRE(det(X) != 0, "conj_X needs an invertible matrix");
  return conj(P, diag_conjugator(X));
}
/// [[A, B], [C, D]] -> [[D, -C], [-B, A]].
inline Mat conj_G(const Mat& P) { return conj(P, standard_gram(P.field(), half_dim(P))); }
/// Corner A -> A + B S.
inline Mat shear(const Mat& P, const Mat& S) { return conj(P, shear_conjugator(S)); }

/// D - C A^{-1} B == (A^T)^{-1}.
inline bool schur_corner_check(const Mat& W) {
  auto w = quarters(W);
  auto Ai = try_inverse(w.A);
  SPCOVER_REQUIRE(Ai.has_value(), "schur_corner_check needs an invertible corner");
  return w.D - w.C * *Ai * w.B == invtranspose(w.A);
}

/// Invertible symmetric S with S^{-1} P S = P^T.
inline Mat symmetrizer(const Mat& P) {
  SPCOVER_REQUIRE(P.square(), "symmetrizer needs a square matrix");
  SPCOVER_REQUIRE(is_cyclic(P), "symmetrizer needs a cyclic matrix");
  const auto& f = P.field();
  const int n = P.rows();
  // unknowns: upper triangle of S; equations: P S - S P^T = 0
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) idx.emplace_back(i, j);
  const int u = static_cast<int>(idx.size());
  auto build = [&](const std::vector<Elem>& x) {
    Mat S(f, n, n);
    for (int t = 0; t < u; ++t) S(idx[t].first, idx[t].second) = S(idx[t].second, idx[t].first) = x[t];
    return S;
  };
  Mat eq(f, n * n, u);
  for (int t = 0; t < u; ++t) {
    std::vector<Elem> e(u, 0);
    e[t] = 1;
    Mat S = build(e);
    Mat r = P * S - S * P.transpose();
    for (int i = 0; i < n * n; ++i) eq(i, t) = r(i / n, i % n);
  }
  Mat basis = null_space(eq).transpose();  // rows span the solutions
  const int d = basis.rows();
  const int q = f->order();
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    total *= q;
    if (total > 10'000'000) throw budget_exceeded("symmetrizer scan too large");
  }
  for (long long code = 1; code < total; ++code) {
    Mat comb(f, 1, u);
    long long c = code;
    for (int i = 0; i < d; ++i) {
      const Elem a = static_cast<Elem>(c % q);
      c /= q;
      if (a) comb = comb + basis.block(i, 0, 1, u).scaled(a);
    }
    Mat S = build(comb.row(0));
    if (det(S) != 0) {
      SPCOVER_VERIFY(conj(P, S) == P.transpose(), "symmetrizer replay failed");
      return S;
    }
  }
  throw verification_failure("symmetrizer: no invertible symmetric solution");
}

/// Generating set of Sp(2n, K): diag(X, X^+) for generators X of GL(n, K),
/// the root element [[I, E11], [0, I]], and G.
inline std::vector<Mat> sp_generators(const FieldPtr& f, int n) {
  std::vector<Mat> gens;
  const Mat I = Mat::identity(f, n);
  std::vector<Mat> gl;
  gl.push_back(Mat::diag(f, [&] {
    std::vector<Elem> d(n, 1);
    d[0] = f->primitive();
    return d;
  }()));
  if (n >= 2) {
    Mat t = I;
    t(0, 1) = 1;
    gl.push_back(t);
    gl.push_back(Mat::cyclic_shift(f, n));
  }
  for (const auto& X : gl)
    if (!X.is_identity()) gens.push_back(diag_conjugator(X));
  Mat R = Mat::identity(f, 2 * n);
  R(0, n) = 1;
  gens.push_back(R);
  gens.push_back(standard_gram(f, n));
  return gens;
}

/// Random element of Sp(2n, K) as a product of `steps` random generators.
template <class Rng>
Mat random_symplectic(const FieldPtr& f, int n, Rng& rng, int steps = 60) {
  auto gens = sp_generators(f, n);
  std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
  Mat P = Mat::identity(f, 2 * n);
  for (int i = 0; i < steps; ++i) P = P * gens[pick(rng)];
  return P;
}

namespace detail {

// Dual basis of the Lagrangian complement spanned by rows of g, with
// omega(e_i, f_j) = delta_ij; returns the symplectic basis [e; f].
inline Mat symplectic_basis(const Mat& e, const Mat& g) {
  const auto& f = e.field();
  const int n = e.rows();
  const Mat G = standard_gram(f, n);
  Mat Om = e * G * g.transpose();
  auto Oi = try_inverse(Om);
  SPCOVER_VERIFY(Oi.has_value(), "complement is not dual to the Lagrangian");
  Mat fb = Oi->transpose() * g;
  Mat Y = Mat::vstack(e, fb);
  SPCOVER_VERIFY(Y * G * Y.transpose() == G, "constructed basis is not symplectic");
  return Y;
}

// beta(u, v) = omega(u, v P) symmetric on the row space of E.
inline bool beta_symmetric(const Mat& E, const Mat& P) {
  const Mat G = standard_gram(P.field(), half_dim(P));
  Mat b = E * G * (E * P).transpose();
  return b.is_symmetric();
}

}  // namespace detail

/// Odd-degree elementary divisors (x - 1)^k or (x + 1)^k of P, as text; empty if none.
inline std::vector<std::string> odd_unit_divisors(const Mat& P) {
  std::vector<std::string> out;
  const auto& f = P.field();
  for (auto& [p, e] : elementary_divisors(invariant_factors(P))) {
    const bool unit = p == Poly::linear(f, 1) || p == Poly::linear(f, f->neg(1));
    if (unit && e % 2 == 1) out.push_back("(" + p.str() + ")^" + std::to_string(e));
  }
  return out;
}

struct ZeroCornerForm {
  bool ok = false;
  std::string refusal;  // names the offending elementary divisor when !ok
  Mat X, B, D;          // X^{-1} P X = [[0, B], [-B^{-1}, D]], X symplectic
};

/// Conjugate P to [[0, B], [-B^{-1}, D]] with B symmetric, or refuse when P has
/// an elementary divisor (x +- 1)^k with k odd.
inline ZeroCornerForm zero_corner_form(const Mat& P, long long node_budget = 20'000'000) {
  SPCOVER_REQUIRE(is_symplectic(P), "zero_corner_form needs a symplectic matrix");
  const int n = half_dim(P);
  const auto& f = P.field();
  ZeroCornerForm out;
  auto bad = odd_unit_divisors(P);
  if (!bad.empty()) {
    out.refusal = "odd-degree elementary divisor " + bad.front();
    return out;
  }
  auto E = search_subspace(
      f, 2 * n, n,
      [&](const Mat& e) {
        return is_isotropic(e) && detail::beta_symmetric(e, P) && rank(Mat::vstack(e, e * P)) == 2 * e.rows();
      },
      node_budget);
  SPCOVER_VERIFY(E.has_value(), "zero_corner_form: no suitable Lagrangian although the divisor criterion holds");
  Mat Y = detail::symplectic_basis(*E, *E * P);
  Mat form = Y * P * inverse(Y);
  auto q = quarters(form);
  SPCOVER_VERIFY(q.A.is_zero() && q.B.is_symmetric() && q.C == inverse(q.B).scaled(f->neg(1)),
                 "zero_corner_form: replay shape check failed");
  out.ok = true;
  out.X = inverse(Y);
  out.B = q.B;
  out.D = q.D;
  return out;
}

struct UnitCornerForm {
  Mat X, B, C;  // X^{-1} P X = [[I, B], [C, I + C B]], X symplectic
};

/// Conjugate any symplectic P to [[I, B], [C, I + C B]].
inline UnitCornerForm unit_corner_form(const Mat& P, long long node_budget = 20'000'000) {
  SPCOVER_REQUIRE(is_symplectic(P), "unit_corner_form needs a symplectic matrix");
  const int n = half_dim(P);
  const auto& f = P.field();
  const Mat I = Mat::identity(f, n);
  UnitCornerForm out;
  if (odd_unit_divisors(P).empty()) {
    // zero-corner form followed by the shear with B^{-1}
    auto c2 = zero_corner_form(P, node_budget);
    Mat Bi = inverse(c2.B);
    Mat T = shear_conjugator(Bi);
    out.X = c2.X * T;
    out.B = c2.B;
    out.C = (c2.D - I.scaled(f->from_int(2))) * Bi;
  } else {
    const Mat Pm = P - Mat::identity(f, 2 * n);
    auto E = search_subspace(
        f, 2 * n, n,
        [&](const Mat& e) {
          if (!is_isotropic(e) || !detail::beta_symmetric(e, P)) return false;
          Mat img = e * Pm;
          return rank(Mat::vstack(e, img)) == e.rows() + rank(img);
        },
        node_budget);
    // exhaustive: no such Lagrangian means no conjugate of this shape (e.g. -I in odd characteristic)
    if (!E) throw precondition_error("unit_corner_form: no conjugate of the form [[I, B], [C, I + CB]] exists");
    Mat U = rref(*E * Pm);
    Mat Ub(f, 0, 2 * n);
    for (int i = 0; i < U.rows(); ++i)
      if (!U.block(i, 0, 1, 2 * n).is_zero()) Ub = Mat::vstack(Ub, U.block(i, 0, 1, 2 * n));
    auto F = search_subspace_from(
        Ub, n, [&](const Mat& g) { return is_isotropic(g) && rank(Mat::vstack(*E, g)) == n + g.rows(); }, node_budget);
    SPCOVER_VERIFY(F.has_value(), "unit_corner_form: no Lagrangian complement through the image");
    Mat Y = detail::symplectic_basis(*E, *F);
    out.X = inverse(Y);
    Mat form = Y * P * out.X;
    auto q = quarters(form);
    out.B = q.B;
    out.C = q.C;
  }
  Mat form = conj(P, out.X);
  SPCOVER_VERIFY(is_symplectic(out.X), "unit_corner_form: conjugator not symplectic");
  SPCOVER_VERIFY(form == from_quarters(I, out.B, out.C, I + out.C * out.B), "unit_corner_form: replay failed");
  return out;
}

/// Symplectic basis e_1..e_k, f_1..f_k (rows, e's first) of the nondegenerate
/// row space of S.
inline Mat symplectic_basis_of(const Mat& S) {
  const auto& f = S.field();
  const int d = S.cols();
  std::vector<Mat> pool;
  Mat r = rref(S);
  for (int i = 0; i < r.rows(); ++i)
    if (!r.block(i, 0, 1, d).is_zero()) pool.push_back(r.block(i, 0, 1, d));
  Mat E(f, 0, d), Fb(f, 0, d);
  while (!pool.empty()) {
    Mat e = pool.front();
    size_t j = 1;
    while (j < pool.size() && omega(e, pool[j]) == 0) ++j;
    SPCOVER_REQUIRE(j < pool.size(), "symplectic_basis_of: subspace is degenerate");
    Mat g = pool[j].scaled(f->inv(omega(e, pool[j])));
    std::vector<Mat> rest;
    for (size_t k = 1; k < pool.size(); ++k) {
      if (k == j) continue;
      // project away from span{e, g}: v - omega(v, g) e + omega(v, e) g
      Mat v = pool[k] - e.scaled(omega(pool[k], g)) + g.scaled(omega(pool[k], e));
      rest.push_back(v);
    }
    E = Mat::vstack(E, e);
    Fb = Mat::vstack(Fb, g);
    pool = std::move(rest);
  }
  return Mat::vstack(E, Fb);
}

namespace detail {

// [[A1 (+) A2, ...]] interleave of two 2k x 2k and 2l x 2l matrices given in
// their own e/f splittings (boxplus without the symplectic precondition).
inline Mat interleave_sum(const Mat& P, const Mat& Q) {
  if (P.rows() == 0) return Q;
  if (Q.rows() == 0) return P;
  const int a = P.rows() / 2, b = Q.rows() / 2;
  auto blk = [](const Mat& M, int h, int i, int j) { return M.block(i * h, j * h, h, h); };
  Mat out(P.field(), 2 * (a + b), 2 * (a + b));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.set_block(i * (a + b), j * (a + b), Mat::direct_sum(blk(P, a, i, j), blk(Q, b, i, j)));
  return out;
}

inline std::pair<Mat, Mat> pair_from_unit_corner(const Mat& P) {
  const int n = half_dim(P);
  const auto& f = P.field();
  auto uc = unit_corner_form(P);
  const Mat I = Mat::identity(f, n), Z(f, n, n);
  const Mat mI = I.scaled(f->neg(1));
  Mat Xi = inverse(uc.X);
  return {uc.X * from_quarters(I, Z, uc.C, mI) * Xi, uc.X * from_quarters(I, uc.B, Z, mI) * Xi};
}

}  // namespace detail

/// P = sigma tau with sigma^2 = tau^2 = I and sigma G sigma^T = tau G tau^T = -G
/// (in characteristic 2 these are symplectic involutions).
inline std::pair<Mat, Mat> skew_involution_pair(const Mat& P) {
  SPCOVER_REQUIRE(is_symplectic(P), "skew_involution_pair needs a symplectic matrix");
  const int n = half_dim(P);
  const auto& f = P.field();
  const Mat G = standard_gram(f, n);
  const Mat mG = G.scaled(f->neg(1));
  auto check = [&](const Mat& sigma, const Mat& tau) {
    SPCOVER_VERIFY(sigma * tau == P, "skew_involution_pair: product replay failed");
    SPCOVER_VERIFY((sigma * sigma).is_identity() && (tau * tau).is_identity(),
                   "skew_involution_pair: not involutions");
    SPCOVER_VERIFY(sigma * G * sigma.transpose() == mG && tau * G * tau.transpose() == mG,
                   "skew_involution_pair: not skew-symplectic");
  };
  if (f->p() == 2 || odd_unit_divisors(P).empty()) {
    auto [s, t] = detail::pair_from_unit_corner(P);
    check(s, t);
    return {s, t};
  }
  // Split off the -1-primary part; on it P = -U with U unipotent and
  // U = s t gives P = s (-t).
  const int d = 2 * n;
  const Mat I = Mat::identity(f, d);
  Mat a = I, b = I;
  for (int i = 0; i < d; ++i) {
    a = a * (P + I);
    b = b * (P - I);
  }
  Mat Vneg = left_kernel(a);  // kernel of (P + 1)^d
  Mat Vrest = rref(a);        // image of (P + 1)^d, orthogonal to Vneg
  Mat Y(f, 0, d);
  std::vector<Mat> parts;
  Mat Ye(f, 0, d), Yf(f, 0, d);
  std::vector<int> halves;
  for (const Mat* V : {&Vrest, &Vneg}) {
    Mat basis(f, 0, d);
    for (int i = 0; i < V->rows(); ++i)
      if (!V->block(i, 0, 1, d).is_zero()) basis = Mat::vstack(basis, V->block(i, 0, 1, d));
    if (basis.rows() == 0) {
      halves.push_back(0);
      continue;
    }
    Mat sb = symplectic_basis_of(basis);
    const int h = sb.rows() / 2;
    halves.push_back(h);
    Ye = Mat::vstack(Ye, sb.block(0, 0, h, d));
    Yf = Mat::vstack(Yf, sb.block(h, 0, h, d));
  }
  Y = Mat::vstack(Ye, Yf);
  SPCOVER_VERIFY(Y * G * Y.transpose() == G, "skew_involution_pair: split basis not symplectic");
  Mat Yi = inverse(Y);
  Mat Pl = Y * P * Yi;  // interleaved sum of the two parts
  Mat s_all(f, 0, 0), t_all(f, 0, 0);
  int off = 0;
  for (int part = 0; part < 2; ++part) {
    const int h = halves[part];
    if (h == 0) continue;
    Mat blk(f, 2 * h, 2 * h);
    blk.set_block(0, 0, Pl.block(off, off, h, h));
    blk.set_block(0, h, Pl.block(off, n + off, h, h));
    blk.set_block(h, 0, Pl.block(n + off, off, h, h));
    blk.set_block(h, h, Pl.block(n + off, n + off, h, h));
    std::pair<Mat, Mat> st;
    if (part == 0) {
      st = detail::pair_from_unit_corner(blk);
    } else {
      st = detail::pair_from_unit_corner(-blk);
      st.second = -st.second;
    }
    s_all = detail::interleave_sum(s_all, st.first);
    t_all = detail::interleave_sum(t_all, st.second);
    off += h;
  }
  SPCOVER_VERIFY(s_all * t_all == Pl, "skew_involution_pair: block assembly failed");
  Mat sigma = Yi * s_all * Y, tau = Yi * t_all * Y;
  check(sigma, tau);
  return {sigma, tau};
}

/// For cyclic phi similar to its inverse: rho with u phi^i rho = u phi^{-i}
/// for a cyclic vector u; returns (rho, rho phi), both involutions.
inline std::pair<Mat, Mat> reversal_involution_pair(const Mat& phi) {
  SPCOVER_REQUIRE(is_cyclic(phi), "reversal_involution_pair needs a cyclic matrix");
  const Poly chi = charpoly(phi);
  SPCOVER_REQUIRE(chi.coeff(0) != 0 && reciprocal(chi) == chi, "reversal_involution_pair needs a self-reciprocal matrix");
  const auto& f = phi.field();
  const int n = phi.rows();
  Mat u;
  for (int i = 0; i < n; ++i) {
    Mat e(f, 1, n);
    e(0, i) = 1;
    if (local_minpoly(e, phi).degree() == n) {
      u = e;
      break;
    }
  }
  if (u.rows() == 0) u = detail::maximal_vector(phi).first;
  const Mat phii = inverse(phi);
  Mat K(f, 0, n), R(f, 0, n);
  Mat a = u, b = u;
  for (int i = 0; i < n; ++i) {
    K = Mat::vstack(K, a);
    R = Mat::vstack(R, b);
    a = a * phi;
    b = b * phii;
  }
  Mat rho = inverse(K) * R;
  Mat tau = rho * phi;
  SPCOVER_VERIFY((rho * rho).is_identity() && (tau * tau).is_identity() && rho * tau == phi,
                 "reversal_involution_pair: replay failed");
  return {rho, tau};
}

enum class OrthoType { type1o, type1e, type2, type3, decomposable };

inline const char* ortho_type_name(OrthoType t) {
  switch (t) {
    case OrthoType::type1o: return "type1o";
    case OrthoType::type1e: return "type1e";
    case OrthoType::type2: return "type2";
    case OrthoType::type3: return "type3";
    default: return "decomposable";
  }
}

/// Orthogonal indecomposability type of a symplectic P.
inline OrthoType classify_ortho_indecomposable(const Mat& P) {
  SPCOVER_REQUIRE(is_symplectic(P), "classify_ortho_indecomposable needs a symplectic matrix");
  const auto& f = P.field();
  const int n2 = P.rows();
  auto inv = invariant_factors(P);
  auto ed = elementary_divisors(inv);
  // group irreducible factors into reciprocal pairs {p, p*}
  std::vector<Poly> groups;
  for (auto& [p, e] : ed) {
    Poly rep = std::min(p, reciprocal(p));
    if (std::find(groups.begin(), groups.end(), rep) == groups.end()) groups.push_back(rep);
  }
  if (groups.size() != 1) return OrthoType::decomposable;
  const Poly p = groups.front();
  const Poly ps = reciprocal(p);
  const bool unit = p == Poly::linear(f, 1) || p == Poly::linear(f, f->neg(1));
  if (p != ps) {
    // type 3: cyclic with minimal polynomial (p p*)^t
    if (inv.nontrivial().size() != 1) return OrthoType::decomposable;
    int ep = 0, es = 0;
    for (auto& [g, e] : ed) {
      if (g == p) ep += e;
      if (g == ps) es += e;
    }
    return ep == es ? OrthoType::type3 : OrthoType::decomposable;
  }
  if (!unit) return ed.size() == 1 ? OrthoType::type2 : OrthoType::decomposable;
  if (ed.size() == 1) return ed[0].second % 2 == 0 ? OrthoType::type2 : OrthoType::decomposable;
  if (ed.size() != 2 || ed[0].second != ed[1].second) return OrthoType::decomposable;
  const int m = ed[0].second;
  if (m % 2 == 1) return OrthoType::type1o;
  if (f->p() != 2) return OrthoType::decomposable;
  // char 2, m even: indecomposable iff Q(v) = omega(v, v (phi + 1)^{m-1}) vanishes identically
  Mat N = P + Mat::identity(f, n2);
  Mat Nk = Mat::identity(f, n2);
  for (int i = 0; i < m - 1; ++i) Nk = Nk * N;
  const Mat G = standard_gram(f, n2 / 2);
  Mat Qm = G * Nk.transpose();  // Q(v) = v G (v Nk)^T
  // quadratic form vanishes iff diagonal zero and the symmetrized matrix zero
  for (int i = 0; i < n2; ++i)
    if (Qm(i, i)) return OrthoType::decomposable;
  for (int i = 0; i < n2; ++i)
    for (int j = i + 1; j < n2; ++j)
      if (f->add(Qm(i, j), Qm(j, i))) return OrthoType::decomposable;
  return OrthoType::type1e;
}

/// [[0, H], [H, M]] with H = [[0, I_t], [I_t, 0]], M = N_t (+) N_t^T, over characteristic 2.
inline Mat type1e_construct(int t, const FieldPtr& f) {
  SPCOVER_REQUIRE(f->p() == 2, "type1e_construct needs characteristic 2");
  SPCOVER_REQUIRE(t >= 1, "type1e_construct needs t >= 1");
  const int n = 2 * t;
  Mat It = Mat::identity(f, t), Zt(f, t, t);
  Mat H = Mat::blocks2(Zt, It, It, Zt);
  Mat Nt(f, t, t);
  for (int i = 0; i + 1 < t; ++i) Nt(i, i + 1) = 1;
  Mat M = Mat::direct_sum(Nt, Nt.transpose());
  Mat P = Mat::blocks2(Mat(f, n, n), H, H, M);
  SPCOVER_VERIFY(is_symplectic(P), "type1e_construct: result not symplectic");
  return P;
}

/// Totally degenerate n-dimensional T with T and T P meeting trivially, for P
/// whose fixed space has dimension n.
inline Subspace lagrangian_anti_invariant(const Mat& P, long long node_budget = 20'000'000) {
  SPCOVER_REQUIRE(is_symplectic(P), "lagrangian_anti_invariant needs a symplectic matrix");
  const int n = half_dim(P);
  const auto& f = P.field();
  const int fixdim = generalized_spaces(P, 1).fix.dim();
  if (fixdim != n)
    throw precondition_error("lagrangian_anti_invariant needs dim Fix = " + std::to_string(n) + ", got " +
                             std::to_string(fixdim));
  auto T = search_subspace(
      f, 2 * n, n, [&](const Mat& t) { return is_isotropic(t) && rank(Mat::vstack(t, t * P)) == 2 * t.rows(); },
      node_budget);
  SPCOVER_VERIFY(T.has_value(), "lagrangian_anti_invariant: search failed");
  return Subspace::span(*T);
}

/// A conjugacy class of Sp(2n, K) given by a representative.
struct SpClass {
  SympSpace space;
  Mat rep;
  InvariantFactors inv;
  std::optional<Poly> q;  // set for strictly hyperbolic cyclic classes: mu = q q*

  bool similar_to(const Mat& M) const { return M.rows() == rep.rows() && invariant_factors(M) == inv; }
  /// Symplectic and similar to rep; for strictly hyperbolic cyclic classes this is Sp-conjugacy.
  bool contains(const Mat& M) const { return similar_to(M) && is_symplectic(M); }
};

/// Cyclic strictly hyperbolic representative [[C_q, 0], [0, C_q^+]].
inline SpClass strictly_hyperbolic_rep(const Poly& q, const SympSpace& S) {
  SPCOVER_REQUIRE(q.is_monic() && q.coeff(0) != 0, "strictly hyperbolic class needs monic q with q(0) != 0");
  SPCOVER_REQUIRE(q.degree() == S.n, "strictly hyperbolic class: deg q must equal n");
  SPCOVER_REQUIRE(strictly_hyperbolic_seed(q), "strictly hyperbolic class: q shares a factor with its reciprocal");
  Mat C = companion(q);
  Mat rep = Mat::direct_sum(C, invtranspose(C));
  SpClass out{S, rep, invariant_factors(rep), q};
  SPCOVER_VERIFY(is_symplectic(rep), "strictly hyperbolic representative not symplectic");
  SPCOVER_VERIFY(out.inv.nontrivial().size() == 1 && out.inv.minimal() == q * reciprocal(q),
                 "strictly hyperbolic representative has wrong minimal polynomial");
  return out;
}

inline SpClass sp_class_of(const Mat& M) {
  SPCOVER_REQUIRE(is_symplectic(M), "sp_class_of needs a symplectic matrix");
  return SpClass{SympSpace::make(M.field(), half_dim(M)), M, invariant_factors(M), std::nullopt};
}

}  // namespace spcover
