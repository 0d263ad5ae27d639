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

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <tuple>

#include "spcover/harness.hpp"

using namespace spcover;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  Stopwatch clock;
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = clock.seconds();
  const bool in_time = t <= limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("CRITERION %d %s: %s [%.2f s, limit %.0f s%s] %s\n", id, pass ? "PASS" : "FAIL", title, t, limit_s,
              in_time ? "" : ", over time", o.detail.c_str());
  std::fflush(stdout);
}

std::string num(long long v) { return std::to_string(v); }

// ---------------------------------------------------------------------------

Outcome sp45() {
  auto r = sp45_counterexample();
  std::string d = "involutions=" + num(r.involutions) + " scalar=" + num(r.scalar_hits) + " omega_classes=" +
                  num(static_cast<long long>(r.omega_reps.size())) + " psi_classes=" +
                  num(static_cast<long long>(r.psi_reps.size())) + " omega_orbit=" + num(r.omega_orbits.at(0)) +
                  " psi_orbit=" + num(r.psi_orbits.at(0));
  return {r.pass && r.omega_mu_ok && r.psi_mu_ok, d};
}

Outcome cover() {
  std::string d;
  bool ok = true;
  for (auto [p, n, want] : {std::tuple{3, 2, std::vector<long long>{-1, -1, 1}}, {2, 3, {1, 0, 1, 1}}}) {
    auto f = Field::make(p, 1);
    Stopwatch clock;
    auto r = covering_check(f, n);
    int certs = 0, nonscalar = 0;
    for (const auto& row : r.rows) {
      if (!row.scalar) ++nonscalar;
      if (!row.excluded && row.cert && row.cert->all_pass()) ++certs;
    }
    const bool q_ok = r.q == Poly::from_ints(f, want);
    ok = ok && r.pass && q_ok && certs >= nonscalar;
    d += "Sp(" + num(2 * n) + "," + num(p) + "): classes=" + num(static_cast<long long>(r.rows.size())) +
         " certificates=" + num(certs) + " set_equality=" + (r.set_equality ? "yes" : "no") +
         (p != 2 ? std::string(" -I_in_square=") + (r.minus_identity_in_square ? "yes" : "no") : "") + " (" +
         std::to_string(clock.seconds()).substr(0, 5) + " s); ";
  }
  return {ok, d};
}

Outcome boundary() {
  auto r = sp45_boundary(25, 2025);
  return {r.pass, "factored=" + num(r.replayed) + "/" + num(r.sampled) + " involutions_refused=" +
                      num(r.involutions_refused) + "/" + num(r.involutions_tested)};
}

Outcome gl_products() {
  bool ok = true;
  std::string d;
  for (auto [p, n] : {std::pair{2, 2}, {3, 2}, {2, 3}}) {
    auto r = gl_product_check(Field::make(p, 1), n);
    int excluded = 0;
    for (const auto& row : r.rows) excluded += row.excluded;
    ok = ok && r.pass;
    d += "GL(" + num(n) + "," + num(p) + "): pairs=" + num(static_cast<long long>(r.rows.size())) +
         (excluded ? " (GF(2), n = 2: reducible Phi = Delta^-1 outside the rule's hypothesis)" : "") + "; ";
  }
  return {ok, d};
}

Outcome trace_sets() {
  bool ok = true;
  std::string d;
  for (int p : {3, 5}) {
    auto [total, agree] = trace_set_check(Field::make(p, 1));
    ok = ok && total > 0 && agree == total;
    d += "GF(" + num(p) + "): " + num(agree) + "/" + num(total) + " pairs; ";
  }
  return {ok, d};
}

Outcome families() {
  struct Range {
    int p, k, lo, hi;
  };
  int checked = 0, good = 0;
  for (auto r : {Range{2, 1, 3, 16}, Range{3, 1, 2, 12}, Range{2, 2, 2, 16}, Range{5, 1, 2, 8}}) {
    auto f = Field::make(r.p, r.k);
    for (int n = r.lo; n <= r.hi; ++n) {
      ++checked;
      if (strictly_hyperbolic_seed(covering_poly(f, n))) ++good;
    }
  }
  return {good == checked, num(good) + "/" + num(checked) + " (GF(4) checked for n = 2..16)"};
}

// ---------------------------------------------------------------------------
// structure suites

template <class Fn>
void for_random(const FieldPtr& f, int n, int count, unsigned seed, Fn&& fn) {
  std::mt19937 rng(seed);
  for (int i = 0; i < count; ++i) fn(random_symplectic(f, n, rng));
}

std::vector<Mat> all_elements(const FieldPtr& f, int n) {
  GroupStore st(f, n);
  group_enumerate(st);
  std::vector<Mat> out;
  for (Code c : *st.elements) out.push_back(st.packer.decode(c));
  return out;
}

Outcome structure() {
  std::string d;
  bool ok = true;
  auto f2 = Field::make(2, 1), f3 = Field::make(3, 1);
  auto tally = [&](const std::string& name, long long good, long long total) {
    ok = ok && good == total && total > 0;
    d += name + " " + num(good) + "/" + num(total) + "; ";
  };

  // Bahn^perp = Fix for (P - 1)^j, j = 1..3
  {
    long long good = 0, total = 0;
    auto check = [&](const Mat& W) {
      const Mat G = standard_gram(W.field(), half_dim(W));
      for (int j = 1; j <= 3; ++j) {
        auto gs = generalized_spaces(W, j);
        ++total;
        if (gs.bahn.perp(G) == gs.fix) ++good;
      }
    };
    for (auto& f : {f2, f3}) for_random(f, 2, 100, 31, check);
    for (auto& f : {f2, f3})
      for (const auto& W : all_elements(f, 1)) check(W);
    for (const auto& W : all_elements(f2, 2)) check(W);
    tally("bahn-perp", good, total);
  }
  // Schur complement of an invertible corner
  {
    long long good = 0, total = 0;
    auto check = [&](const Mat& W) {
      if (det(quarters(W).A) == 0) return;
      ++total;
      if (schur_corner_check(W)) ++good;
    };
    for (auto& f : {f2, f3}) {
      std::mt19937 rng(32);
      int seen = 0;
      while (seen < 100) {
        Mat W = random_symplectic(f, 2, rng);
        if (det(quarters(W).A) == 0) continue;
        check(W);
        ++seen;
      }
      for (const auto& W : all_elements(f, 1)) check(W);
    }
    for (const auto& W : all_elements(f2, 2)) check(W);
    tally("schur", good, total);
  }
  // symmetrizer of cyclic matrices
  {
    long long good = 0, total = 0;
    auto check = [&](const Mat& P) {
      if (!is_cyclic(P)) return;
      ++total;
      Mat S = symmetrizer(P);
      if (S.is_symmetric() && det(S) != 0 && inverse(S) * P * S == P.transpose()) ++good;
    };
    for (auto& f : {f2, f3}) {
      std::mt19937 rng(33);
      int seen = 0;
      while (seen < 100) {
        Mat P = random_symplectic(f, 2, rng);
        if (!is_cyclic(P)) continue;
        check(P);
        ++seen;
      }
      GlOracle gl(f, 2);
      for (const auto& P : gl.elements()) check(P);
    }
    tally("symmetrizer", good, total);
  }
  // sigma tau = P with sigma, tau involutions, skew (odd char) or symplectic (char 2)
  {
    long long good = 0, total = 0;
    auto check = [&](const Mat& W) {
      const auto& f = W.field();
      const Mat G = standard_gram(f, half_dim(W));
      const Mat want = f->p() == 2 ? G : G.scaled(f->neg(1));
      auto [s, t] = skew_involution_pair(W);
      ++total;
      if (s * t == W && (s * s).is_identity() && (t * t).is_identity() && s * G * s.transpose() == want &&
          t * G * t.transpose() == want)
        ++good;
    };
    for (auto& f : {f2, f3}) for_random(f, 2, 100, 34, check);
    for (auto& f : {f2, f3})
      for (const auto& W : all_elements(f, 1)) check(W);
    tally("involution-pairs", good, total);
  }
  // zero-corner normal form exists iff no odd-degree (x +- 1)^k divisor
  {
    long long good = 0, total = 0;
    for (auto& f : {f2, f3}) {
      auto r = zero_corner_oracle(f, 2, 100, 35);
      for (const auto& row : r.rows) {
        ++total;
        if (row.criterion == row.form_in_class && row.normalform_ok == row.criterion) ++good;
      }
      total += r.random_checked;
      good += r.random_agree;
    }
    tally("zero-corner-iff", good, total);
  }
  // Dickson transforms of the invariant divisors of D for W = [[0, B], [-B^-1, D]]
  {
    long long good = 0, total = 0;
    for (auto [p, nmax] : {std::pair{2, 3}, {3, 3}}) {
      auto f = Field::make(p, 1);
      const int q = f->order();
      for (int n = 1; n <= nmax; ++n) {
        auto syms = detail::symmetric_matrices(f, n);
        std::vector<Mat> sym_inv;
        for (const auto& B : syms)
          if (det(B)) sym_inv.push_back(B);
        long long count = 1;
        for (int i = 0; i < n * n; ++i) count *= q;
        for (long long code = 0; code < count; ++code) {
          Mat D(f, n, n);
          long long c = code;
          for (int i = 0; i < n * n; ++i) {
            D(i / n, i % n) = static_cast<Elem>(c % q);
            c /= q;
          }
          ++total;
          for (const auto& B : sym_inv) {
            if (B * D != D.transpose() * B) continue;
            Mat W = from_quarters(Mat(f, n, n), B, inverse(B).scaled(f->neg(1)), D);
            std::vector<Poly> want;
            for (const auto& dd : invariant_factors(D).nontrivial()) want.push_back(dickson_transform(dd));
            if (is_symplectic(W) && invariant_factors(W).nontrivial() == want) ++good;
            break;
          }
        }
      }
    }
    tally("dickson", good, total);
  }
  return {ok, d};
}

Outcome shift_solve() {
  bool ok = true;
  std::string d;
  for (int p : {2, 3}) {
    auto r = shift_solve_check(Field::make(p, 1));
    ok = ok && r.instances > 0 && r.solved == r.instances && r.exhaustive_agree == r.instances;
    d += "GF(" + num(p) + "): solved " + num(r.solved) + "/" + num(r.instances) + ", exhaustive agreement " +
         num(r.exhaustive_agree) + "; ";
  }
  return {ok, d};
}

}  // namespace

int main() {
  criterion(1, "Sp(4,5) class product has no involution", 300, sp45);
  criterion(2, "Sp(4,3) and Sp(6,2) are covered by the square of one class", 1200, cover);
  criterion(3, "Sp(4,5) factorization with involutions refused", 120, boundary);
  criterion(4, "GL class products against brute force", 120, gl_products);
  criterion(5, "2x2 trace sets against brute force", 60, trace_sets);
  criterion(6, "class polynomial families are prime to their reciprocals", 1, families);
  criterion(7, "structure property suites", 300, structure);
  criterion(8, "shift-product completion against exhaustive search", 120, shift_solve);
  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
