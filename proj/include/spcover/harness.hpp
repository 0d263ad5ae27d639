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

#include <chrono>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "spcover/gl_oracle.hpp"
#include "spcover/group.hpp"
#include "spcover/sympfactor.hpp"

namespace spcover {

/// Wall-clock seconds since construction.
class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Index of each sorted element into store.classes.
inline std::vector<int> class_labels(GroupStore& store) {
  if (!store.classes) class_partition(store);
  const auto& els = *store.elements;
  std::vector<int> label(els.size(), -1);
  for (size_t c = 0; c < store.classes->size(); ++c)
    for (Code code : class_orbit((*store.classes)[c].rep, store)) {
      auto it = std::lower_bound(els.begin(), els.end(), code);
      label[static_cast<size_t>(it - els.begin())] = static_cast<int>(c);
    }
  for (int l : label) SPCOVER_VERIFY(l >= 0, "class_labels: element without a class");
  return label;
}

inline bool in_sorted(const std::vector<Code>& set, Code c) { return std::binary_search(set.begin(), set.end(), c); }

// ---------------------------------------------------------------------------
// Coverage of Sp(2n, K) by the square of one strictly hyperbolic class.

struct CoverRow {
  Mat rep;
  long long size = 0;
  bool scalar = false;
  bool excluded = false;        // -I outside characteristic 2
  bool in_square = false;       // brute force: rep = P Q with P, Q in the class
  long long factorizations = -1;  // number of P with P^{-1} rep in the class (oracle mode)
  std::optional<FactorCertificate> cert;
  bool cert_in_orbit = true;  // oracle mode: P1, P2 found in the enumerated class
  std::string error;
};

struct CoverResult {
  FieldPtr field;
  int n = 0;
  Poly q{FieldPtr{}};
  long long order = 0, omega_size = 0;
  int omega_sp_classes = 0;  // Sp-classes sharing the invariant factors of the class
  std::vector<CoverRow> rows;
  bool set_equality = false;  // classes in the square plus the excluded -I add up to the group
  bool minus_identity_in_square = false;
  bool pass = false;
  double seconds = 0;
};

inline void require_cover_admissible(const FieldPtr& f, int n) {
  if (n < 2) throw precondition_error("coverage needs 2n >= 4");
  if (f->order() == 2 && n < 3) throw precondition_error("coverage over GF(2) needs 2n >= 6");
}

inline CoverResult covering_check(const FieldPtr& f, int n, bool oracle = false) {
  Stopwatch clock;
  require_cover_admissible(f, n);
  CoverResult out;
  out.field = f;
  out.n = n;
  out.q = covering_poly(f, n);
  GroupStore store(f, n);
  out.order = store.order();
  class_partition(store);
  const Mat omega_rep = strictly_hyperbolic_rep(out.q, SympSpace::make(f, n)).rep;
  out.omega_sp_classes = static_cast<int>(sp_classes_in_similarity_class(omega_rep).size());
  std::vector<Code> omega = class_orbit(omega_rep, store);
  std::sort(omega.begin(), omega.end());
  out.omega_size = static_cast<long long>(omega.size());
  std::vector<Mat> omega_inv;
  omega_inv.reserve(omega.size());
  for (Code c : omega) omega_inv.push_back(sp_inverse(store.packer.decode(c)));

  const Mat minus_id = Mat::identity(f, 2 * n).scaled(f->neg(1));
  const bool char2 = f->p() == 2;
  long long covered = 0;
  bool ok = true;
  for (const auto& cls : *store.classes) {
    CoverRow row;
    row.rep = cls.rep;
    row.size = cls.size;
    row.scalar = cls.rep.is_scalar();
    row.excluded = !char2 && cls.rep == minus_id;
    long long hits = 0;
    for (const auto& pinv : omega_inv) {
      if (in_sorted(omega, store.packer.encode(pinv * cls.rep))) {
        ++hits;
        if (!oracle) break;
      }
    }
    row.in_square = hits > 0;
    if (oracle) row.factorizations = hits;
    if (row.excluded) {
      out.minus_identity_in_square = row.in_square;
      covered += cls.size;
    } else {
      if (row.in_square) covered += cls.size;
      ok = ok && row.in_square;
      try {
        row.cert = row.scalar ? identity_certificate(f, out.q, out.q) : factor_into_classes(cls.rep, out.q, out.q);
        if (!row.cert->all_pass()) ok = false;
        if (oracle)
          row.cert_in_orbit = in_sorted(omega, store.packer.encode(row.cert->P1)) &&
                              in_sorted(omega, store.packer.encode(row.cert->P2));
        ok = ok && row.cert_in_orbit;
      } catch (const std::exception& e) {
        row.error = e.what();
        ok = false;
      }
    }
    out.rows.push_back(std::move(row));
  }
  out.set_equality = covered == out.order;
  out.pass = ok && out.set_equality;
  out.seconds = clock.seconds();
  return out;
}

// ---------------------------------------------------------------------------
// The Sp(4,5) pair of classes whose product has no involution.

struct Sp45Pair {
  int omega_index = 0, psi_index = 0;
  long long psi_orbit = 0;
  long long involutions = 0;  // (RQ)^2 = I with RQ != +-I
  long long scalar_hits = 0;  // RQ = +-I
};

struct Sp45Result {
  Poly omega_q{FieldPtr{}}, psi_q{FieldPtr{}}, omega_mu{FieldPtr{}}, psi_mu{FieldPtr{}};
  bool omega_mu_ok = false, psi_mu_ok = false;
  std::vector<Mat> omega_reps, psi_reps;
  std::vector<long long> omega_orbits, psi_orbits;
  std::vector<Sp45Pair> pairs;
  long long involutions = 0, scalar_hits = 0;
  bool pass = false;
  double seconds = 0;
};

/// Over Q in members: (nonscalar involutions R Q, products R Q = +-I).
inline std::pair<long long, long long> involutions_in_products(const Mat& R, const std::vector<Mat>& members) {
  const Mat I = Mat::identity(R.field(), R.rows()), minus_I = I.scaled(R.field()->neg(1));
  long long inv = 0, scalar = 0;
  for (const auto& Q : members) {
    Mat RQ = R * Q;
    if (!(RQ * RQ).is_identity()) continue;
    if (RQ == I || RQ == minus_I)
      ++scalar;
    else
      ++inv;
  }
  return {inv, scalar};
}

inline Sp45Result sp45_counterexample() {
  Stopwatch clock;
  auto f = Field::make(5, 1);
  const auto S = SympSpace::make(f, 2);
  Sp45Result out;
  out.omega_q = Poly::from_ints(f, {2, 0, 1});
  out.psi_q = Poly::from_ints(f, {4, -4, 1});
  const SpClass omega = strictly_hyperbolic_rep(out.omega_q, S), psi = strictly_hyperbolic_rep(out.psi_q, S);
  out.omega_mu = omega.inv.minimal();
  out.psi_mu = psi.inv.minimal();
  out.omega_mu_ok = out.omega_mu == Poly::from_ints(f, {2, 0, 1}) * Poly::from_ints(f, {-2, 0, 1});
  const Poly lin_m = Poly::from_ints(f, {-2, 1}), lin_p = Poly::from_ints(f, {2, 1});
  out.psi_mu_ok = out.psi_mu == lin_m * lin_m * lin_p * lin_p;
  if (!out.omega_mu_ok || !out.psi_mu_ok) throw verification_failure("sp45: class representatives have the wrong minimal polynomial");

  GroupStore store(f, 2);
  out.omega_reps = sp_classes_in_similarity_class(omega.rep);
  out.psi_reps = sp_classes_in_similarity_class(psi.rep);
  for (const auto& r : out.omega_reps) out.omega_orbits.push_back(static_cast<long long>(class_orbit(r, store).size()));
  for (size_t j = 0; j < out.psi_reps.size(); ++j) {
    const auto orbit = class_orbit(out.psi_reps[j], store);
    out.psi_orbits.push_back(static_cast<long long>(orbit.size()));
    std::vector<Mat> members;
    members.reserve(orbit.size());
    for (Code c : orbit) members.push_back(store.packer.decode(c));
    for (size_t i = 0; i < out.omega_reps.size(); ++i) {
      Sp45Pair pr{static_cast<int>(i), static_cast<int>(j), static_cast<long long>(orbit.size()), 0, 0};
      std::tie(pr.involutions, pr.scalar_hits) = involutions_in_products(out.omega_reps[i], members);
      out.involutions += pr.involutions;
      out.scalar_hits += pr.scalar_hits;
      out.pairs.push_back(pr);
    }
  }
  out.pass = out.involutions == 0;
  out.seconds = clock.seconds();
  return out;
}

// ---------------------------------------------------------------------------
// Factorization in Sp(4,5) for the same pair of class polynomials.

struct BoundaryResult {
  int sampled = 0, factored = 0, replayed = 0;
  int involutions_tested = 0, involutions_refused = 0;
  std::vector<std::string> failures;
  bool pass = false;
  double seconds = 0;
};

inline BoundaryResult sp45_boundary(int samples = 25, unsigned seed = 2025) {
  Stopwatch clock;
  auto f = Field::make(5, 1);
  const Poly q1 = Poly::from_ints(f, {2, 0, 1}), q2 = Poly::from_ints(f, {4, -4, 1});
  BoundaryResult out;
  std::mt19937 rng(seed);
  while (out.sampled < samples) {
    Mat M = random_symplectic(f, 2, rng);
    if (M.is_scalar() || (M * M).is_identity()) continue;
    ++out.sampled;
    try {
      auto cert = factor_into_classes(M, q1, q2);
      ++out.factored;
      FactorCertificate copy = cert;
      replay_certificate(copy);
      if (copy.all_pass() && copy.M == M && conj(M, copy.X) == copy.P1 * copy.P2) ++out.replayed;
    } catch (const std::exception& e) {
      out.failures.push_back(M.str() + ": " + e.what());
    }
  }
  // nonscalar involutions: diag(+-1) sums and their conjugates
  const Mat I2 = Mat::identity(f, 2), m2 = I2.scaled(f->neg(1));
  std::vector<Mat> invols{boxplus(I2, m2), boxplus(m2, I2)};
  for (int t = 0; t < 8; ++t) {
    Mat X = random_symplectic(f, 2, rng);
    invols.push_back(conj(invols[t % 2], X));
  }
  for (const auto& M : invols) {
    ++out.involutions_tested;
    try {
      factor_into_classes(M, q1, q2);
    } catch (const precondition_error&) {
      ++out.involutions_refused;
    }
  }
  out.pass = out.sampled >= 20 && out.replayed == out.sampled && out.involutions_refused == out.involutions_tested;
  out.seconds = clock.seconds();
  return out;
}

// ---------------------------------------------------------------------------
// Normal form with zero corner versus the odd unit divisor criterion.

struct ZeroCornerClassRow {
  Mat rep;
  bool criterion = false;  // no odd-degree (x +- 1)^k divisor
  bool form_in_class = false;  // some member is [[0, B], [-B^{-1}, D]] with B symmetric
  bool normalform_ok = false;
};

struct ZeroCornerOracleResult {
  std::vector<ZeroCornerClassRow> rows;
  int random_checked = 0, random_agree = 0;
  bool pass = false;
};

inline ZeroCornerOracleResult zero_corner_oracle(const FieldPtr& f, int n, int random_samples = 100, unsigned seed = 7) {
  GroupStore store(f, n);
  class_partition(store);
  auto labels = class_labels(store);
  ZeroCornerOracleResult out;
  bool ok = true;
  for (const auto& cls : *store.classes) {
    ZeroCornerClassRow row;
    row.rep = cls.rep;
    row.criterion = odd_unit_divisors(cls.rep).empty();
    for (Code c : class_orbit(cls.rep, store)) {
      auto w = quarters(store.packer.decode(c));
      if (w.A.is_zero() && w.B.is_symmetric()) {
        row.form_in_class = true;
        break;
      }
    }
    auto form = zero_corner_form(cls.rep);
    row.normalform_ok = form.ok && is_symplectic(form.X) && quarters(conj(cls.rep, form.X)).A.is_zero();
    ok = ok && row.criterion == row.form_in_class && row.normalform_ok == row.criterion;
    out.rows.push_back(row);
  }
  std::mt19937 rng(seed);
  const auto& els = *store.elements;
  for (int t = 0; t < random_samples; ++t) {
    Mat P = random_symplectic(f, n, rng);
    auto it = std::lower_bound(els.begin(), els.end(), store.packer.encode(P));
    const auto& row = out.rows[static_cast<size_t>(labels[static_cast<size_t>(it - els.begin())])];
    auto form = zero_corner_form(P);
    const bool form_ok = form.ok && is_symplectic(form.X) && quarters(conj(P, form.X)).A.is_zero();
    ++out.random_checked;
    if (form_ok == row.form_in_class && odd_unit_divisors(P).empty() == row.form_in_class) ++out.random_agree;
  }
  out.pass = ok && out.random_agree == out.random_checked;
  return out;
}

// ---------------------------------------------------------------------------
// GL class products against brute force.

struct GlPairRow {
  GlClass phi, delta;
  long long product_size = 0;
  bool nonprimary_covered = false;
  bool has_transvection = false;
  bool transvection_expected = false;
  bool excluded = false;  // GF(2), n = 2, reducible Phi = Delta^{-1}
};

struct GlProductResult {
  std::vector<GlPairRow> rows;
  bool pass = false;
};

/// Expected transvection rule: det Phi Delta = 1, except Delta = Phi^{-1} with Phi irreducible.
inline GlProductResult gl_product_check(const FieldPtr& f, int n) {
  GlOracle gl(f, n);
  std::vector<GlClass> cyc;
  for (const auto& c : gl.classes())
    if (c.cyclic) cyc.push_back(c);
  std::vector<std::uint64_t> nonprimary, transvections;
  const Mat I = Mat::identity(f, n);
  for (const auto& m : gl.elements()) {
    if (is_nonprimary(m)) nonprimary.push_back(gl.encode(m));
    if (rank(m - I) == 1 && det(m) == 1) transvections.push_back(gl.encode(m));
  }
  GlProductResult out;
  bool ok = true;
  for (const auto& phi : cyc)
    for (const auto& delta : cyc) {
      GlPairRow row{phi, delta};
      auto prod = gl.product_set(phi, delta);
      row.product_size = static_cast<long long>(prod.size());
      const Elem d = f->mul(phi.det, delta.det);
      row.nonprimary_covered = true;
      for (auto c : nonprimary)
        if (det(gl.decode(c)) == d && !prod.count(c)) row.nonprimary_covered = false;
      for (auto c : transvections) row.has_transvection = row.has_transvection || prod.count(c);
      const bool inverse_pair = delta == phi.inverse_class();
      row.transvection_expected = d == 1 && !(inverse_pair && is_irreducible(phi.chi()));
      row.excluded = f->order() == 2 && n == 2 && inverse_pair && !is_irreducible(phi.chi());
      ok = ok && row.nonprimary_covered && (row.excluded || row.has_transvection == row.transvection_expected);
      out.rows.push_back(row);
    }
  out.pass = ok;
  return out;
}

/// trace_set_2x2 against the brute-force trace sets for every admissible pair.
inline std::pair<int, int> trace_set_check(const FieldPtr& f) {
  GlOracle gl(f, 2);
  int total = 0, agree = 0;
  for (const auto& phi : gl.classes()) {
    if (phi.is_scalar() || is_irreducible(phi.chi())) continue;
    for (const auto& delta : gl.classes()) {
      if (delta.is_scalar()) continue;
      std::set<Elem> brute;
      auto a = gl.members(phi), b = gl.members(delta);
      for (const auto& x : a)
        for (const auto& y : b) brute.insert((x * y).trace());
      ++total;
      if (trace_set_2x2(phi, delta).traces == brute) ++agree;
    }
  }
  return {total, agree};
}

// ---------------------------------------------------------------------------
// Completion of S [[U1, Z], [0, U2]] to a prescribed characteristic polynomial.

struct ShiftSolveResult {
  int instances = 0, solved = 0, exhaustive_agree = 0;
};

namespace harness_detail {

inline void for_each_entries(const FieldPtr& f, int count, const std::function<void(const std::vector<Elem>&)>& fn) {
  const int q = f->order();
  long long total = 1;
  for (int i = 0; i < count; ++i) total *= q;
  std::vector<Elem> v(static_cast<size_t>(count));
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = 0; i < count; ++i) {
      v[static_cast<size_t>(i)] = static_cast<Elem>(c % q);
      c /= q;
    }
    fn(v);
  }
}

inline std::vector<Mat> unitriangular(const FieldPtr& f, int s) {
  std::vector<Mat> out;
  harness_detail::for_each_entries(f, s * (s - 1) / 2, [&](const std::vector<Elem>& v) {
    Mat u = Mat::identity(f, s);
    size_t t = 0;
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) u(i, j) = v[t++];
    out.push_back(u);
  });
  return out;
}

}  // namespace harness_detail

/// Every unitriangular U1, U2 at each size split of degree 2 and 3, every monic
/// target with the forced constant term.
inline ShiftSolveResult shift_solve_check(const FieldPtr& f) {
  ShiftSolveResult out;
  for (int n = 2; n <= 3; ++n)
    for (int m = 1; m < n; ++m) {
      const int k = n - m;
      for (const auto& U1 : harness_detail::unitriangular(f, m))
        for (const auto& U2 : harness_detail::unitriangular(f, k)) {
          // exhaustive: every Z, grouped by the resulting cyclic characteristic polynomial
          std::set<std::vector<Elem>> reachable;
          std::set<std::pair<std::vector<Elem>, std::vector<Elem>>> solutions;
          harness_detail::for_each_entries(f, m * k, [&](const std::vector<Elem>& z) {
            Mat Z(f, m, k, z);
            Mat PZ = shift_product(U1, U2, Z);
            if (!is_cyclic(PZ)) return;
            reachable.insert(charpoly(PZ).coeffs());
            solutions.insert({charpoly(PZ).coeffs(), z});
          });
          const Elem c0 = f->neg(f->mul(det(U1), det(U2)));
          harness_detail::for_each_entries(f, n - 1, [&](const std::vector<Elem>& mid) {
            std::vector<Elem> c{c0};
            c.insert(c.end(), mid.begin(), mid.end());
            c.push_back(1);
            Poly target(f, c);
            ++out.instances;
            bool solved = false, listed = false;
            try {
              Mat Z = complete_shift_product(U1, U2, target);
              Mat PZ = shift_product(U1, U2, Z);
              solved = charpoly(PZ) == target && is_cyclic(PZ);
              listed = solutions.count({target.coeffs(), Z.entries()}) > 0;
            } catch (const std::exception&) {
            }
            if (solved) ++out.solved;
            if (solved == (reachable.count(target.coeffs()) > 0) && (!solved || listed)) ++out.exhaustive_agree;
          });
        }
    }
  return out;
}

}  // namespace spcover
