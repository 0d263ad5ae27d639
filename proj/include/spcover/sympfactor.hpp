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

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spcover/glfactor.hpp"
#include "spcover/group.hpp"
#include "spcover/symplectic.hpp"

namespace spcover {

enum class CornerTag { identity, transvection, dilatation, diag_pair, nonprimary, traceless, quad, upper_triangular };

inline const char* corner_tag_name(CornerTag t) {
  switch (t) {
    case CornerTag::identity: return "identity";
    case CornerTag::transvection: return "transvection";
    case CornerTag::dilatation: return "dilatation";
    case CornerTag::diag_pair: return "diag_pair";
    case CornerTag::nonprimary: return "nonprimary";
    case CornerTag::traceless: return "traceless";
    case CornerTag::quad: return "quad";
    default: return "upper_triangular";
  }
}

/// Requested corner shape; `param` is delta or epsilon where the tag takes one.
struct CornerKind {
  CornerTag tag;
  Elem param = 0;
};

/// Shape predicate for a corner of the given kind.
inline bool corner_matches(const Mat& A, const CornerKind& k) {
  const auto& f = A.field();
  const int n = A.rows();
  const Mat I = Mat::identity(f, n);
  switch (k.tag) {
    case CornerTag::identity: return A.is_identity();
    case CornerTag::transvection: return rank(A - I) == 1 && ((A - I) * (A - I)).is_zero();
    case CornerTag::dilatation: return rank(A - I) == 1 && det(A) == k.param && k.param != 1;
    case CornerTag::diag_pair: {
      const Elem e = k.param, ei = f->inv(k.param);
      return e != ei && charpoly(A) == Poly::linear(f, e) * Poly::linear(f, ei);
    }
    case CornerTag::nonprimary: return det(A) == k.param && is_nonprimary(A);
    case CornerTag::traceless: return A.trace() == 0;
    case CornerTag::quad: return n == 2 && charpoly(A) == Poly(f, {k.param, 0, 1});
    default: return A.is_upper_triangular();
  }
}

struct CornerWitness {
  SpClass omega;
  Mat W;  // member of omega: X^{-1} rep X
  Mat X;
  CornerKind kind;
  Mat A;
};

namespace detail {

inline std::vector<Mat> symmetric_matrices(const FieldPtr& f, int n) {
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) idx.emplace_back(i, j);
  long long total = 1;
  for (size_t i = 0; i < idx.size(); ++i) total *= f->order();
  std::vector<Mat> out;
  for (long long code = 0; code < total; ++code) {
    Mat S(f, n, n);
    long long c = code;
    for (auto [i, j] : idx) {
      S(i, j) = S(j, i) = static_cast<Elem>(c % f->order());
      c /= f->order();
    }
    out.push_back(S);
  }
  return out;
}

}  // namespace detail

/// Walks members W = X^{-1} M X of M's class: normal forms, all single shears,
/// G-conjugates followed by a second shear, seeded random conjugates, then a
/// BFS over the whole orbit. visit(W, X, route) returns true to stop.
inline bool walk_class(const Mat& M, const std::function<bool(const Mat&, const Mat&, const std::string&)>& visit,
                       bool structured_only = false, int random_tries = 2000, long long orbit_budget = 4'000'000) {
  const auto& f = M.field();
  const int n = half_dim(M);
  const Mat I2 = Mat::identity(f, 2 * n);
  const Mat G = standard_gram(f, n);
  std::vector<std::pair<Mat, std::string>> bases;
  bases.emplace_back(I2, "identity");
  try {
    bases.emplace_back(unit_corner_form(M).X, "unit-corner");
  } catch (const precondition_error&) {
  }
  if (auto c2 = zero_corner_form(M); c2.ok) bases.emplace_back(c2.X, "zero-corner");
  const auto syms = detail::symmetric_matrices(f, n);
  // single shears of each base and of its G-conjugate
  for (const auto& [X0, name] : bases)
    for (const Mat& Xb : {X0, X0 * G}) {
      const Mat W0 = conj(M, Xb);
      for (const auto& S : syms) {
        Mat T = shear_conjugator(S);
        if (visit(conj(W0, T), Xb * T, name + "+shear")) return true;
      }
    }
  // shear, G, shear
  for (const auto& [X0, name] : bases) {
    const Mat W0 = conj(M, X0);
    for (const auto& S1 : syms) {
      Mat Y = shear_conjugator(S1) * G;
      const Mat W1 = conj(W0, Y);
      for (const auto& S2 : syms) {
        Mat T = shear_conjugator(S2);
        if (visit(conj(W1, T), X0 * Y * T, name + "+shear+G+shear")) return true;
      }
    }
  }
  if (structured_only) return false;
  std::mt19937_64 rng(0x5eed);
  for (int i = 0; i < random_tries; ++i) {
    Mat X = random_symplectic(f, n, rng, 40);
    if (visit(conj(M, X), X, "random-conjugate")) return true;
  }
  GroupStore store(f, n);
  return orbit_search(
      M, store, [&](const Mat& W, const Mat& X) { return visit(W, X, "orbit-search"); }, orbit_budget);
}

/// A member of omega whose upper-left corner has the requested shape.
inline CornerWitness pc_witness(const SpClass& omega, const CornerKind& want) {
  SPCOVER_REQUIRE(!omega.rep.is_scalar(), "pc_witness needs a nonscalar class");
  std::optional<CornerWitness> out;
  const int n = omega.space.n;
  walk_class(omega.rep, [&](const Mat& W, const Mat& X, const std::string&) {
    Mat A = W.block(0, 0, n, n);
    if (!corner_matches(A, want)) return false;
    out = CornerWitness{omega, W, X, want, A};
    return true;
  });
  if (!out) throw precondition_error(std::string("class has no corner of kind ") + corner_tag_name(want.tag));
  SPCOVER_VERIFY(conj(omega.rep, out->X) == out->W && is_symplectic(out->X), "pc_witness: conjugator replay failed");
  return *out;
}

/// Members of the GL-similarity class of a companion matrix, by conjugation
/// closure, together with their inverses.
class GlClassMembers {
 public:
  explicit GlClassMembers(const Poly& chi, long long budget = 2'000'000) {
    const auto& f = chi.field();
    const int n = chi.degree();
    std::vector<Mat> gens;
    {
      Mat d = Mat::identity(f, n);
      d(0, 0) = f->primitive();
      if (!d.is_identity()) gens.push_back(d);
      if (n >= 2) {
        Mat t = Mat::identity(f, n);
        t(0, 1) = 1;
        gens.push_back(t);
        gens.push_back(Mat::cyclic_shift(f, n));
      }
    }
    std::vector<Mat> ginv;
    for (const auto& g : gens) ginv.push_back(inverse(g));
    Packer pk(f, n);
    CodeSet seen;
    std::vector<Mat> queue{companion(chi)};
    seen.insert(pk.encode(queue[0]));
    for (size_t head = 0; head < queue.size(); ++head) {
      for (size_t i = 0; i < gens.size(); ++i) {
        Mat y = ginv[i] * queue[head] * gens[i];
        if (seen.insert(pk.encode(y)).second) {
          queue.push_back(y);
          if (static_cast<long long>(queue.size()) > budget) throw budget_exceeded("GL class enumeration exceeds budget");
        }
      }
    }
    members_ = std::move(queue);
    for (const auto& m : members_) inverses_.push_back(inverse(m));
  }
  const std::vector<Mat>& members() const { return members_; }
  const std::vector<Mat>& inverses() const { return inverses_; }

 private:
  std::vector<Mat> members_, inverses_;
};

struct CornerSplit {
  Mat A1, A2;
  std::string route;
};

/// Reusable state for splitting many corners against the same (q1, q2).
class CornerSplitter {
 public:
  CornerSplitter(Poly q1, Poly q2) : q1_(std::move(q1)), q2_(std::move(q2)) {
    SPCOVER_REQUIRE(q1_.degree() == q2_.degree(), "corner_split: degree mismatch");
    for (const Poly& a : {q1_, reciprocal(q1_)})
      for (const Poly& b : {q2_, reciprocal(q2_)}) orient_.emplace_back(a, b);
  }

  /// Determinants a corner may have: det C_a det C_b over the orientations.
  std::vector<Elem> admissible_dets() const {
    std::vector<Elem> out;
    for (auto& [a, b] : orient_) {
      Elem d = q1_.F().mul(det(companion(a)), det(companion(b)));
      if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    return out;
  }

  /// A = A1 A2 with A1, A2 cyclic and {charpoly A1, charpoly A2} oriented as
  /// (q1 or q1*, q2 or q2*); nullopt when no route applies.
  std::optional<CornerSplit> split(const Mat& A, bool allow_search = true) {
    const auto& f = A.field();
    const int n = A.rows();
    SPCOVER_REQUIRE(A.square() && n == q1_.degree(), "corner_split: corner size must equal deg q");
    const Elem dA = det(A);
    if (dA == 0) return std::nullopt;
    for (auto& [a, b] : orient_) {
      GlClass Phi = GlClass::of_poly(a), Delta = GlClass::of_poly(b);
      if (f->mul(Phi.det, Delta.det) != dA) continue;
      if (n >= 2 && is_nonprimary(A)) {
        auto [A1, A2] = nonprimary_product(Phi, Delta, A);
        return CornerSplit{A1, A2, "nonprimary"};
      }
      if (A.is_scalar()) {
        // A = c I = C_a (c C_a^{-1}) when the second factor lands in Delta
        Mat A1 = companion(a);
        Mat A2 = inverse(A1).scaled(A(0, 0));
        if (Delta.contains(A2)) return CornerSplit{A1, A2, "scalar"};
      }
      if (n >= 2 && Delta == Phi.inverse_class() && corner_matches(A, {CornerTag::transvection, 0}) &&
          !(f->order() == 2 && n == 2) && !is_irreducible(a)) {
        auto [Xm, Ym] = transvection_pair(Phi);
        Mat t = Xm * inverse(Ym);
        auto [ok, Y] = similar(t, A, true);
        if (ok) return CornerSplit{conj(Xm, *Y), conj(inverse(Ym), *Y), "transvection"};
      }
    }
    if (!allow_search) return std::nullopt;
    // certified exhaustive route over one class
    for (size_t o = 0; o < orient_.size(); ++o) {
      auto& [a, b] = orient_[o];
      GlClass Phi = GlClass::of_poly(a), Delta = GlClass::of_poly(b);
      if (f->mul(Phi.det, Delta.det) != dA) continue;
      auto& mem = members(a);
      for (size_t i = 0; i < mem.members().size(); ++i) {
        Mat A2 = mem.inverses()[i] * A;
        if (charpoly(A2) == b && is_cyclic(A2)) return CornerSplit{mem.members()[i], A2, "class-search"};
      }
    }
    return std::nullopt;
  }

 private:
  GlClassMembers& members(const Poly& a) {
    auto key = a.str();
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, GlClassMembers(a)).first;
    return it->second;
  }

  Poly q1_, q2_;
  std::vector<std::pair<Poly, Poly>> orient_;
  std::map<std::string, GlClassMembers> cache_;
};

/// One-shot corner split.
inline CornerSplit corner_split(const Mat& A, const Poly& q1, const Poly& q2) {
  CornerSplitter sp(q1, q2);
  auto dets = sp.admissible_dets();
  SPCOVER_REQUIRE(std::find(dets.begin(), dets.end(), det(A)) != dets.end(),
                  "corner_split: determinant does not match the classes");
  auto r = sp.split(A);
  if (!r) throw precondition_error("corner_split: no factorization of this corner into the requested classes");
  SPCOVER_VERIFY(r->A1 * r->A2 == A, "corner_split: replay failed");
  return *r;
}

/// W = P1 P2 with P1 = [[A1, 0], [C A2^{-1}, A1^+]] and P2 = [[A2, A1^{-1} B], [0, A2^+]].
inline std::pair<Mat, Mat> assemble_from_corner(const Mat& W, const Mat& A1, const Mat& A2) {
  SPCOVER_REQUIRE(is_symplectic(W), "assemble_from_corner needs a symplectic matrix");
  auto w = quarters(W);
  SPCOVER_REQUIRE(det(w.A) != 0, "assemble_from_corner: corner is singular");
  SPCOVER_REQUIRE(A1 * A2 == w.A, "assemble_from_corner: corner factors do not multiply to the corner");
  const auto& f = W.field();
  const int n = w.A.rows();
  Mat A2i = inverse(A2), A1i = inverse(A1);
  Mat P1 = from_quarters(A1, Mat(f, n, n), w.C * A2i, invtranspose(A1));
  Mat P2 = from_quarters(A2, A1i * w.B, Mat(f, n, n), invtranspose(A2));
  SPCOVER_VERIFY(is_symplectic(P1) && is_symplectic(P2), "assemble_from_corner: factor not symplectic");
  SPCOVER_VERIFY(P1 * P2 == W, "assemble_from_corner: product replay failed");
  return {P1, P2};
}

struct FactorCertificate {
  Mat M, X, W, A1, A2, P1, P2;
  Poly q1, q2;
  std::string route;
  std::vector<std::pair<std::string, bool>> checks;

  bool all_pass() const {
    for (auto& c : checks)
      if (!c.second) return false;
    return !checks.empty();
  }
};

/// Replays every claim of a certificate and records the verdicts.
inline void replay_certificate(FactorCertificate& c) {
  c.checks.clear();
  auto mu_ok = [](const Mat& P, const Poly& q) {
    return is_cyclic(P) && charpoly(P) == q * reciprocal(q) && gcd(q, reciprocal(q)).is_one();
  };
  c.checks.emplace_back("X symplectic", is_symplectic(c.X));
  c.checks.emplace_back("X^-1 M X = W", conj(c.M, c.X) == c.W);
  c.checks.emplace_back("W = P1 P2", c.P1 * c.P2 == c.W);
  c.checks.emplace_back("P1 symplectic", is_symplectic(c.P1));
  c.checks.emplace_back("P2 symplectic", is_symplectic(c.P2));
  c.checks.emplace_back("P1 cyclic, mu = q1 q1*", mu_ok(c.P1, c.q1));
  c.checks.emplace_back("P2 cyclic, mu = q2 q2*", mu_ok(c.P2, c.q2));
  c.checks.emplace_back("corner = A1 A2", c.W.block(0, 0, c.A1.rows(), c.A1.rows()) == c.A1 * c.A2);
}

/// True when every root of q lies in K.
inline bool splits_over_field(const Poly& q) {
  for (auto& [p, e] : factor(q))
    if (p.degree() != 1) return false;
  return true;
}

/// X^{-1} M X = P1 P2 with P1, P2 in the strictly hyperbolic classes of q1, q2.
inline FactorCertificate factor_into_classes(const Mat& M, const Poly& q1, const Poly& q2) {
  SPCOVER_REQUIRE(is_symplectic(M), "factor_into_classes needs a symplectic matrix");
  const int n = half_dim(M);
  const auto& f = M.field();
  SPCOVER_REQUIRE(n >= 2, "factor_into_classes needs 2n >= 4");
  SPCOVER_REQUIRE(!M.is_scalar(), "factor_into_classes: M is scalar");
  for (const Poly* q : {&q1, &q2}) {
    SPCOVER_REQUIRE(q->degree() == n && q->is_monic(), "factor_into_classes: class polynomials must be monic of degree n");
    SPCOVER_REQUIRE(strictly_hyperbolic_seed(*q), "factor_into_classes: class polynomial shares a factor with its reciprocal");
  }
  const bool guaranteed = f->order() == 3 || n >= 3 || (splits_over_field(q1) && splits_over_field(q2));
  if (!guaranteed && (M * M).is_identity())
    throw precondition_error("factor_into_classes: involutions of Sp(4, K) are outside the guaranteed range for these classes");
  CornerSplitter splitter(q1, q2);
  const auto dets = splitter.admissible_dets();
  std::optional<FactorCertificate> out;
  // constructive corner routes over the structured family first, then class search everywhere
  for (bool search : {false, true}) {
    walk_class(
        M,
        [&](const Mat& W, const Mat& X, const std::string& route) {
          Mat A = W.block(0, 0, n, n);
          const Elem d = det(A);
          if (d == 0 || std::find(dets.begin(), dets.end(), d) == dets.end()) return false;
          auto s = splitter.split(A, search);
          if (!s) return false;
          auto [P1, P2] = assemble_from_corner(W, s->A1, s->A2);
          out = FactorCertificate{M, X, W, s->A1, s->A2, P1, P2, q1, q2, route + "/" + s->route, {}};
          return true;
        },
        !search);
    if (out) break;
  }
  if (!out) throw verification_failure("factor_into_classes: no corner of the class splits into the requested classes");
  replay_certificate(*out);
  SPCOVER_VERIFY(out->all_pass(), "factor_into_classes: certificate replay failed");
  return *out;
}

/// I = P1 P1^{-1}: P1 = rep(q1), with the inverse in the class of q1* = class of q1.
inline FactorCertificate identity_certificate(const FieldPtr& f, const Poly& q1, const Poly& q2) {
  const int n = q1.degree();
  SPCOVER_REQUIRE(q2 == q1 || q2 == reciprocal(q1), "identity_certificate needs q2 in {q1, q1*}");
  Mat I = Mat::identity(f, 2 * n);
  Mat A1 = companion(q1), A2 = inverse(A1);
  auto [P1, P2] = assemble_from_corner(I, A1, A2);
  FactorCertificate c{I, I, I, A1, A2, P1, P2, q1, q2, "identity", {}};
  replay_certificate(c);
  return c;
}

}  // namespace spcover
