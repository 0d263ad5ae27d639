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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "spcover/sympfactor.hpp"

namespace spcover {

namespace io_detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline int to_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw precondition_error("bad " + what + " '" + s + "'");
  }
}

}  // namespace io_detail

/// "GF p k" with optional "; [modulus] m0,m1,...".
inline FieldPtr parse_field_header(const std::string& text) {
  std::string head = text, mod;
  if (auto semi = text.find(';'); semi != std::string::npos) {
    head = text.substr(0, semi);
    mod = io_detail::trim(text.substr(semi + 1));
    if (mod.rfind("modulus", 0) == 0) mod = io_detail::trim(mod.substr(7));
  }
  std::istringstream hs(head);
  std::string tag, ps, ks;
  hs >> tag >> ps >> ks;
  std::string extra;
  if (tag != "GF" || ps.empty() || ks.empty() || (hs >> extra))
    throw precondition_error("field header must read 'GF p k', got '" + io_detail::trim(text) + "'");
  const int p = io_detail::to_int(ps, "characteristic"), k = io_detail::to_int(ks, "extension degree");
  std::optional<std::vector<int>> modulus;
  if (!mod.empty()) {
    std::vector<int> m;
    std::stringstream ms(mod);
    std::string item;
    while (std::getline(ms, item, ',')) m.push_back(io_detail::to_int(io_detail::trim(item), "modulus coefficient"));
    modulus = m;
  }
  return Field::make(p, k, modulus);
}

/// Polynomial text: "GF p k [; modulus] : c0,c1,...,cd", ascending.
inline std::string format_poly(const Poly& q) {
  std::string s = q.F().header() + " :";
  if (q.is_zero()) return s + " 0";
  for (int i = 0; i <= q.degree(); ++i) s += (i ? "," : " ") + q.F().format(q.coeff(i));
  return s;
}

inline Poly parse_poly(const std::string& text) {
  const auto colon = text.find(" :");
  const auto at = colon == std::string::npos ? text.rfind(':') : colon + 1;
  if (at == std::string::npos) throw precondition_error("polynomial text needs 'GF p k : c0,c1,...'");
  auto f = parse_field_header(text.substr(0, at));
  std::vector<Elem> c;
  std::stringstream cs(text.substr(at + 1));
  std::string item;
  while (std::getline(cs, item, ',')) {
    item = io_detail::trim(item);
    if (item.empty()) throw precondition_error("empty polynomial coefficient in '" + text + "'");
    c.push_back(f->parse(item));
  }
  if (c.empty()) throw precondition_error("polynomial without coefficients");
  return Poly(f, std::move(c));
}

/// Polynomial given either in full text form or as bare integer coefficients
/// "c0,c1,..." over an already known field.
inline Poly parse_poly_over(const FieldPtr& f, const std::string& text) {
  if (text.find("GF") != std::string::npos) {
    Poly q = parse_poly(text);
    SPCOVER_REQUIRE(q.F() == *f, "polynomial field differs from the matrix field");
    return Poly(f, q.coeffs());
  }
  std::vector<Elem> c;
  std::stringstream cs(text);
  std::string item;
  while (std::getline(cs, item, ',')) c.push_back(f->parse(io_detail::trim(item)));
  if (c.empty()) throw precondition_error("polynomial without coefficients");
  return Poly(f, std::move(c));
}

/// Matrix text: optional "SP n", field header, "rows cols", entries row-major.
inline std::string format_matrix(const Mat& m, bool symplectic_header = false) {
  std::string s;
  if (symplectic_header) s += "SP " + std::to_string(m.rows() / 2) + "\n";
  s += m.field()->header() + "\n" + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) s += (j ? " " : "") + m.field()->format(m(i, j));
    s += "\n";
  }
  return s;
}

struct ParsedMatrix {
  Mat m;
  std::optional<int> sp_n;
};

inline ParsedMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      line = io_detail::trim(line);
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw precondition_error("empty matrix text");
  std::optional<int> sp_n;
  if (line.rfind("SP", 0) == 0) {
    sp_n = io_detail::to_int(io_detail::trim(line.substr(2)), "SP dimension");
    if (!next_line()) throw precondition_error("matrix text ends after the SP line");
  }
  auto f = parse_field_header(line);
  if (!next_line()) throw precondition_error("matrix text lacks a shape line");
  std::istringstream shape(line);
  std::string rs, cs, extra;
  shape >> rs >> cs;
  if (rs.empty() || cs.empty() || (shape >> extra)) throw precondition_error("shape line must read 'rows cols'");
  const int r = io_detail::to_int(rs, "row count"), c = io_detail::to_int(cs, "column count");
  SPCOVER_REQUIRE(r >= 0 && c >= 0, "negative matrix shape");
  std::vector<Elem> entries;
  std::string tok;
  while (in >> tok) entries.push_back(f->parse(tok));
  if (entries.size() != static_cast<size_t>(r) * c)
    throw precondition_error("expected " + std::to_string(r * c) + " entries, found " + std::to_string(entries.size()));
  Mat m(f, r, c, std::move(entries));
  if (sp_n) {
    SPCOVER_REQUIRE(r == 2 * *sp_n && c == r, "SP header does not match the matrix shape");
    SPCOVER_REQUIRE(is_symplectic(m), "matrix under an SP header is not symplectic");
  }
  return {m, sp_n};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json certificate_json(const FactorCertificate& c) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& [name, ok] : c.checks) checks.push_back({{"name", name}, {"pass", ok}});
  return {{"field", c.M.field()->header()},
          {"n", c.M.rows() / 2},
          {"M", format_matrix(c.M)},
          {"X", format_matrix(c.X)},
          {"W", format_matrix(c.W)},
          {"A1", format_matrix(c.A1)},
          {"A2", format_matrix(c.A2)},
          {"P1", format_matrix(c.P1)},
          {"P2", format_matrix(c.P2)},
          {"q1", format_poly(c.q1)},
          {"q2", format_poly(c.q2)},
          {"route", c.route},
          {"checks", checks}};
}

/// Rebuilds a certificate from JSON and replays every check from scratch.
inline FactorCertificate certificate_from_json(const nlohmann::json& j) {
  auto mat = [&](const char* key) { return parse_matrix(j.at(key).get<std::string>()).m; };
  FactorCertificate c{mat("M"),
                      mat("X"),
                      mat("W"),
                      mat("A1"),
                      mat("A2"),
                      mat("P1"),
                      mat("P2"),
                      parse_poly(j.at("q1").get<std::string>()),
                      parse_poly(j.at("q2").get<std::string>()),
                      j.value("route", std::string{}),
                      {}};
  replay_certificate(c);
  return c;
}

/// Report envelope shared by the command line tools.
struct Report {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json counts = nlohmann::json::object();
  nlohmann::json verdicts = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::object();

  void verdict(const std::string& name, bool pass, const std::string& detail = "") {
    nlohmann::json v{{"name", name}, {"pass", pass}};
    if (!detail.empty()) v["detail"] = detail;
    verdicts.push_back(v);
  }
  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.at("pass").get<bool>()) return false;
    return true;
  }
  nlohmann::json json() const {
    return {{"command", command}, {"params", params}, {"counts", counts}, {"verdicts", verdicts}, {"timing", timing}};
  }
};

}  // namespace spcover
