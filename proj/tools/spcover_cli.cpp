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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "spcover/harness.hpp"
#include "spcover/io.hpp"

using namespace spcover;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerify = 1, kUsage = 2, kBudget = 3 };

void emit_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw precondition_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

FieldPtr field_from(int p, int k) { return Field::make(p, k); }

/// Matrix file, checked against -p/-k when those were given.
Mat load_matrix(const std::string& path, const FieldPtr& expect = nullptr) {
  auto pm = parse_matrix(read_file(path));
  if (expect && !(*pm.m.field() == *expect))
    throw precondition_error("matrix field " + pm.m.field()->header() + " differs from " + expect->header());
  return pm.m;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

int run_factor(int p, int k, int n, const std::string& matrix, const std::string& q1s, const std::string& q2s,
               const std::string& json_out) {
  auto f = field_from(p, k);
  Mat M = load_matrix(matrix, f);
  if (M.rows() != 2 * n || M.cols() != 2 * n)
    throw precondition_error("matrix is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                             ", expected " + std::to_string(2 * n) + "x" + std::to_string(2 * n));
  // reuse the matrix's field object so every operand agrees
  f = M.field();
  Poly q1 = parse_poly_over(f, q1s), q2 = parse_poly_over(f, q2s);
  Stopwatch clock;
  auto cert = factor_into_classes(M, q1, q2);
  std::cout << "route: " << cert.route << "\n";
  for (const auto& [name, ok] : cert.checks) std::cout << (ok ? "PASS  " : "FAIL  ") << name << "\n";
  std::cout << "P1 =\n" << format_matrix(cert.P1) << "P2 =\n" << format_matrix(cert.P2);
  std::printf("time: %.3f s\n", clock.seconds());
  emit_json(json_out, certificate_json(cert));
  return cert.all_pass() ? kOk : kVerify;
}

int run_cover(int p, int k, int n, bool oracle, const std::string& json_out, const std::string& cert_dir) {
  auto f = field_from(p, k);
  auto r = covering_check(f, n, oracle);
  Report rep;
  rep.command = "cover";
  rep.params = {{"field", f->header()}, {"n", n}, {"q", format_poly(r.q)}, {"oracle", oracle}};
  std::cout << "Sp(" << 2 * n << ", " << f->order() << "), order " << r.order << ", q = " << r.q.str() << "\n";
  std::cout << "class of q: " << r.omega_size << " elements, " << r.omega_sp_classes
            << " symplectic class(es) with these invariant factors\n";
  std::printf("%4s %8s %-10s %-6s %-10s %s\n", "#", "size", "in square", "cert", "route", "invariant factors");
  int idx = 0, certs = 0;
  json rows = json::array();
  for (const auto& row : r.rows) {
    std::string certs_text = row.excluded ? "-" : (row.cert && row.cert->all_pass() ? "ok" : "FAIL");
    std::string route = row.cert ? row.cert->route : (row.excluded ? "excluded" : row.error);
    std::printf("%4d %8lld %-10s %-6s %-10s %s\n", idx, row.size, yes(row.in_square).c_str(), certs_text.c_str(),
                route.c_str(), invariant_factors(row.rep).str().c_str());
    json jr{{"index", idx},
            {"size", row.size},
            {"rep", format_matrix(row.rep)},
            {"in_square", row.in_square},
            {"excluded", row.excluded}};
    if (oracle) {
      jr["factorizations"] = row.factorizations;
      jr["certificate_in_orbit"] = row.cert_in_orbit;
    }
    if (row.cert) {
      jr["certificate"] = certificate_json(*row.cert);
      ++certs;
      if (!cert_dir.empty()) emit_json(cert_dir + "/class_" + std::to_string(idx) + ".json", jr["certificate"]);
    }
    if (!row.error.empty()) jr["error"] = row.error;
    rows.push_back(jr);
    ++idx;
  }
  const bool all_in = std::all_of(r.rows.begin(), r.rows.end(), [](const CoverRow& x) { return x.excluded || x.in_square; });
  rep.counts = {{"group_order", r.order},
                {"classes", r.rows.size()},
                {"class_size", r.omega_size},
                {"symplectic_classes_in_similarity_class", r.omega_sp_classes},
                {"certificates", certs}};
  rep.verdict("every class except -I meets the square (brute force)", all_in);
  rep.verdict("class sizes add up to the group order", r.set_equality);
  rep.verdict("every certificate replays", std::all_of(r.rows.begin(), r.rows.end(), [](const CoverRow& x) {
                return x.excluded || (x.cert && x.cert->all_pass() && x.cert_in_orbit);
              }));
  if (f->p() != 2) std::cout << "-I in the square: " << yes(r.minus_identity_in_square) << " (not required)\n";
  rep.counts["minus_identity_in_square"] = r.minus_identity_in_square;
  rep.timing = {{"seconds", r.seconds}};
  json j = rep.json();
  j["classes"] = rows;
  emit_json(json_out, j);
  std::printf("time: %.2f s\n%s\n", r.seconds, r.pass ? "PASS" : "FAIL");
  return r.pass ? kOk : kVerify;
}

int run_sp45(const std::string& json_out) {
  auto r = sp45_counterexample();
  std::cout << "Omega: mu = " << r.omega_mu.str() << " (" << (r.omega_mu_ok ? "ok" : "mismatch") << ")\n";
  std::cout << "Psi:   mu = " << r.psi_mu.str() << " (" << (r.psi_mu_ok ? "ok" : "mismatch") << ")\n";
  std::cout << "symplectic classes per similarity class: Omega " << r.omega_reps.size() << ", Psi " << r.psi_reps.size()
            << "\n";
  for (size_t i = 0; i < r.omega_orbits.size(); ++i) std::cout << "Omega[" << i << "] orbit size " << r.omega_orbits[i] << "\n";
  for (size_t i = 0; i < r.psi_orbits.size(); ++i) std::cout << "Psi[" << i << "] orbit size " << r.psi_orbits[i] << "\n";
  std::cout << "one fixed representative R per Omega class, Q over the whole Psi class;\n"
               "conjugating RQ by g gives (g^-1 R g)(g^-1 Q g), so this covers every product\n";
  json pairs = json::array();
  for (const auto& pr : r.pairs) {
    std::cout << "Omega[" << pr.omega_index << "] x Psi[" << pr.psi_index << "]: " << pr.involutions
              << " involutions, " << pr.scalar_hits << " scalar products\n";
    pairs.push_back({{"omega", pr.omega_index},
                     {"psi", pr.psi_index},
                     {"psi_orbit", pr.psi_orbit},
                     {"involutions", pr.involutions},
                     {"scalar_hits", pr.scalar_hits}});
  }
  Report rep;
  rep.command = "sp45";
  rep.params = {{"field", "GF 5 1"}, {"n", 2}, {"omega_q", format_poly(r.omega_q)}, {"psi_q", format_poly(r.psi_q)}};
  rep.counts = {{"omega_orbits", r.omega_orbits},
                {"psi_orbits", r.psi_orbits},
                {"involutions", r.involutions},
                {"scalar_hits", r.scalar_hits}};
  rep.verdict("minimal polynomial of Omega", r.omega_mu_ok, r.omega_mu.str());
  rep.verdict("minimal polynomial of Psi", r.psi_mu_ok, r.psi_mu.str());
  rep.verdict("no involution in the product of the classes", r.pass);
  rep.timing = {{"seconds", r.seconds}};
  json j = rep.json();
  j["pairs"] = pairs;
  emit_json(json_out, j);
  std::printf("time: %.2f s\n%s\n", r.seconds, r.pass ? "PASS" : "FAIL");
  return r.pass ? kOk : kVerify;
}

int run_pc(const std::string& class_file, const std::string& json_out) {
  Mat P = load_matrix(class_file);
  SPCOVER_REQUIRE(P.square() && P.rows() % 2 == 0 && is_symplectic(P), "pc needs a symplectic class representative");
  const int n = P.rows() / 2;
  GroupStore store(P.field(), n);
  Stopwatch clock;
  auto corners = pc_enumerate(P, store);
  std::map<std::string, int> kinds;
  json list = json::array();
  for (const auto& A : corners) {
    list.push_back(format_matrix(A));
    if (det(A) == 0)
      ++kinds["singular"];
    else if (A.is_scalar())
      ++kinds["scalar"];
    else if (is_nonprimary(A))
      ++kinds["nonprimary"];
    else
      ++kinds["primary nonscalar"];
  }
  std::cout << corners.size() << " distinct upper-left blocks\n";
  for (const auto& [k, c] : kinds) std::cout << "  " << k << ": " << c << "\n";
  const bool has_identity = std::find(corners.begin(), corners.end(), Mat::identity(P.field(), n)) != corners.end();
  std::cout << "identity block present: " << yes(has_identity) << "\n";
  Report rep;
  rep.command = "pc";
  rep.params = {{"field", P.field()->header()}, {"n", n}, {"rep", format_matrix(P)}};
  rep.counts = {{"corners", corners.size()}, {"kinds", kinds}, {"identity_present", has_identity}};
  rep.timing = {{"seconds", clock.seconds()}};
  json j = rep.json();
  j["corners"] = list;
  emit_json(json_out, j);
  return kOk;
}

int run_class_info(const std::string& matrix, const std::string& json_out) {
  Mat M = load_matrix(matrix);
  SPCOVER_REQUIRE(M.square(), "class-info needs a square matrix");
  auto inv = invariant_factors(M);
  json j{{"field", M.field()->header()}, {"size", M.rows()}, {"invariant_factors", inv.str()}};
  std::cout << "invariant factors: " << inv.str() << "\n";
  std::string ed;
  for (auto& [p, e] : elementary_divisors(inv)) ed += (ed.empty() ? "" : ", ") + ("(" + p.str() + ")^" + std::to_string(e));
  std::cout << "elementary divisors: " << ed << "\n";
  j["elementary_divisors"] = ed;
  std::cout << "cyclic: " << yes(is_cyclic(M)) << ", nonprimary: " << yes(is_nonprimary(M)) << "\n";
  j["cyclic"] = is_cyclic(M);
  const bool sp = M.rows() % 2 == 0 && is_symplectic(M);
  std::cout << "symplectic: " << yes(sp) << "\n";
  j["symplectic"] = sp;
  if (sp) {
    auto odd = odd_unit_divisors(M);
    std::string s;
    for (auto& x : odd) s += (s.empty() ? "" : ", ") + x;
    std::cout << "odd-degree (x +- 1) divisors: " << (s.empty() ? "none" : s) << "\n";
    j["odd_unit_divisors"] = odd;
    std::cout << "involution: " << yes((M * M).is_identity()) << "\n";
    auto zc = zero_corner_form(M);
    std::cout << "conjugate to [[0, B], [-B^-1, D]]: " << yes(zc.ok) << "\n";
    j["zero_corner_form"] = zc.ok;
    try {
      auto t = classify_ortho_indecomposable(M);
      std::cout << "orthogonal type: " << ortho_type_name(t) << "\n";
      j["orthogonal_type"] = ortho_type_name(t);
    } catch (const precondition_error&) {
    }
    const auto fac = factor(inv.minimal());
    if (inv.nontrivial().size() == 1) {
      // strictly hyperbolic: mu = q q* with gcd(q, q*) = 1
      bool sh = true;
      for (auto& [pp, e] : fac) sh = sh && !(pp == reciprocal(pp));
      std::cout << "strictly hyperbolic: " << yes(sh) << "\n";
      j["strictly_hyperbolic"] = sh;
    }
  }
  emit_json(json_out, j);
  return kOk;
}

int run_gl_product(int p, int k, int n, const std::string& phis, const std::string& deltas, bool all,
                   const std::string& json_out) {
  auto f = field_from(p, k);
  Report rep;
  rep.command = "oracle gl-product";
  rep.params = {{"field", f->header()}, {"n", n}};
  Stopwatch clock;
  if (all) {
    auto r = gl_product_check(f, n);
    json rows = json::array();
    for (const auto& row : r.rows) {
      std::printf("%-22s %-22s %7lld  nonprimary %-3s transvection %-3s expected %-3s%s\n", row.phi.chi().str().c_str(),
                  row.delta.chi().str().c_str(), row.product_size, yes(row.nonprimary_covered).c_str(),
                  yes(row.has_transvection).c_str(), yes(row.transvection_expected).c_str(),
                  row.excluded ? "  (GF(2) exception)" : "");
      rows.push_back({{"phi", row.phi.chi().str()},
                      {"delta", row.delta.chi().str()},
                      {"product_size", row.product_size},
                      {"nonprimary_covered", row.nonprimary_covered},
                      {"transvection", row.has_transvection},
                      {"transvection_expected", row.transvection_expected},
                      {"excluded", row.excluded}});
    }
    rep.counts = {{"pairs", r.rows.size()}};
    rep.verdict("product sets agree with the class rules", r.pass);
    rep.timing = {{"seconds", clock.seconds()}};
    json j = rep.json();
    j["pairs"] = rows;
    emit_json(json_out, j);
    std::cout << (r.pass ? "PASS" : "FAIL") << "\n";
    return r.pass ? kOk : kVerify;
  }
  if (phis.empty() || deltas.empty()) throw precondition_error("give --phi and --delta, or --all");
  auto Phi = GlClass::of_poly(parse_poly_over(f, phis)), Delta = GlClass::of_poly(parse_poly_over(f, deltas));
  SPCOVER_REQUIRE(Phi.n == n && Delta.n == n, "class polynomials must have degree n");
  GlOracle gl(f, n);
  auto prod = gl.product_set(Phi, Delta);
  long long nonprimary = 0, missing = 0, transvections = 0;
  const Elem d = f->mul(Phi.det, Delta.det);
  for (const auto& m : gl.elements()) {
    const auto c = gl.encode(m);
    if (is_nonprimary(m) && det(m) == d) {
      ++nonprimary;
      if (!prod.count(c)) ++missing;
    }
    if (prod.count(c) && rank(m - Mat::identity(f, n)) == 1 && det(m) == 1) ++transvections;
  }
  std::cout << "product set: " << prod.size() << " matrices\n"
            << "nonprimary matrices of determinant " << f->format(d) << ": " << nonprimary << ", missing " << missing
            << "\ntransvections in product: " << transvections << "\n";
  rep.counts = {{"product_size", prod.size()},
                {"nonprimary", nonprimary},
                {"nonprimary_missing", missing},
                {"transvections", transvections}};
  rep.timing = {{"seconds", clock.seconds()}};
  emit_json(json_out, rep.json());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor symplectic matrices over small finite fields into products of two conjugacy classes"};
  app.require_subcommand(1);

  int p = 0, k = 1, n = 0;
  std::string matrix, q1, q2, json_out, class_file, phi, delta, cert_dir;
  bool oracle = false, all = false;

  auto* factor = app.add_subcommand("factor", "factor a symplectic matrix as P1 P2");
  factor->add_option("-p", p, "field characteristic")->required();
  factor->add_option("-n", n, "half dimension")->required();
  factor->add_option("-k", k, "extension degree");
  factor->add_option("--matrix", matrix, "matrix file")->required();
  factor->add_option("--q1", q1, "first class polynomial (c0,c1,... or full text)")->required();
  factor->add_option("--q2", q2, "second class polynomial")->required();
  factor->add_option("--json", json_out, "write the certificate as JSON ('-' for stdout)");

  auto* cover = app.add_subcommand("cover", "check that one class squares onto the group");
  cover->add_option("-p", p, "field characteristic")->required();
  cover->add_option("-n", n, "half dimension")->required();
  cover->add_option("-k", k, "extension degree");
  cover->add_flag("--oracle", oracle, "count factorizations and cross-check certificates against the class");
  cover->add_option("--json", json_out, "write the report as JSON ('-' for stdout)");
  cover->add_option("--cert-dir", cert_dir, "write one certificate file per class into this directory");

  auto* sp45 = app.add_subcommand("sp45", "scan the Sp(4,5) class pair for involutions");
  sp45->add_option("--json", json_out, "write the report as JSON ('-' for stdout)");

  auto* pc = app.add_subcommand("pc", "all upper-left blocks of a conjugacy class");
  pc->add_option("--class", class_file, "class representative file")->required();
  pc->add_option("--json", json_out, "write the report as JSON ('-' for stdout)");

  auto* info = app.add_subcommand("class-info", "similarity and symplectic invariants of a matrix");
  info->add_option("--matrix", matrix, "matrix file")->required();
  info->add_option("--json", json_out, "write the report as JSON ('-' for stdout)");

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force oracles");
  oracle_cmd->require_subcommand(1);
  auto* glp = oracle_cmd->add_subcommand("gl-product", "product set of two cyclic GL classes");
  glp->add_option("-p", p, "field characteristic")->required();
  glp->add_option("-n", n, "matrix size")->required();
  glp->add_option("-k", k, "extension degree");
  glp->add_option("--phi", phi, "characteristic polynomial of the first class");
  glp->add_option("--delta", delta, "characteristic polynomial of the second class");
  glp->add_flag("--all", all, "check every pair of cyclic classes");
  glp->add_option("--json", json_out, "write the report as JSON ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*factor) return run_factor(p, k, n, matrix, q1, q2, json_out);
    if (*cover) return run_cover(p, k, n, oracle, json_out, cert_dir);
    if (*sp45) return run_sp45(json_out);
    if (*pc) return run_pc(class_file, json_out);
    if (*info) return run_class_info(matrix, json_out);
    if (*glp) return run_gl_product(p, k, n, phi, delta, all, json_out);
  } catch (const budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const verification_failure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerify;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerify;
  }
  return kUsage;
}
