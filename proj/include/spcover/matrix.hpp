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

#include <initializer_list>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spcover/errors.hpp"
#include "spcover/field.hpp"
#include "spcover/poly.hpp"

namespace spcover {

/// Dense matrix over a finite field, row-major. Vectors are rows and act on
/// the right: v -> v M.
class Mat {
 public:
  Mat() = default;
  Mat(FieldPtr f, int rows, int cols) : f_(std::move(f)), r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}
  Mat(FieldPtr f, int rows, int cols, std::vector<Elem> entries)
      : f_(std::move(f)), r_(rows), c_(cols), a_(std::move(entries)) {
    SPCOVER_REQUIRE(a_.size() == static_cast<size_t>(rows) * cols, "entry count does not match shape");
  }
  /// Integer rows mapped into the prime subfield.
  static Mat from_ints(const FieldPtr& f, std::initializer_list<std::initializer_list<long long>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r ? static_cast<int>(rows.begin()->size()) : 0;
    Mat m(f, r, c);
    int i = 0;
    for (const auto& row : rows) {
      SPCOVER_REQUIRE(static_cast<int>(row.size()) == c, "ragged matrix literal");
      int j = 0;
      for (auto v : row) m(i, j++) = f->from_int(v);
      ++i;
    }
    return m;
  }
  static Mat identity(const FieldPtr& f, int n) { return scalar(f, n, 1); }
  static Mat scalar(const FieldPtr& f, int n, Elem a) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = a;
    return m;
  }
  static Mat diag(const FieldPtr& f, const std::vector<Elem>& d) {
    Mat m(f, static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }
  static Mat row_vector(const FieldPtr& f, const std::vector<Elem>& v) {
    return Mat(f, 1, static_cast<int>(v.size()), v);
  }
  /// Reverse identity (anti-diagonal ones).
  static Mat rev_identity(const FieldPtr& f, int n) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i) m(i, n - 1 - i) = 1;
    return m;
  }
  /// Cyclic shift [[0, I_{n-1}], [1, 0]]: row i of S X is row i+1 of X.
  static Mat cyclic_shift(const FieldPtr& f, int n) {
    Mat m(f, n, n);
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1;
    m(n - 1, 0) = 1;
    return m;
  }

  const FieldPtr& field() const { return f_; }
  const Field& F() const { return *f_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  bool square() const { return r_ == c_; }
  const std::vector<Elem>& entries() const { return a_; }
  Elem& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  Elem operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }
  std::vector<Elem> row(int i) const { return {a_.begin() + static_cast<long>(i) * c_, a_.begin() + static_cast<long>(i + 1) * c_}; }

  bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }
  bool operator<(const Mat& o) const { return std::tie(r_, c_, a_) < std::tie(o.r_, o.c_, o.a_); }

  Mat operator+(const Mat& o) const {
    check_same_shape(o);
    Mat m(f_, r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_->add(a_[i], o.a_[i]);
    return m;
  }
  Mat operator-(const Mat& o) const {
    check_same_shape(o);
    Mat m(f_, r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_->sub(a_[i], o.a_[i]);
    return m;
  }
  Mat operator-() const { return scaled(f_->neg(1)); }
  Mat scaled(Elem s) const {
    Mat m(f_, r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_->mul(a_[i], s);
    return m;
  }
  Mat operator*(const Mat& o) const {
    require_same_field(f_, o.f_);
    SPCOVER_REQUIRE(c_ == o.r_, "matrix product shape mismatch");
    Mat m(f_, r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const Elem x = (*this)(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.c_; ++j) m(i, j) = f_->add(m(i, j), f_->mul(x, o(k, j)));
      }
    return m;
  }
  Mat transpose() const {
    Mat m(f_, c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  Elem trace() const {
    SPCOVER_REQUIRE(square(), "trace of non-square matrix");
    Elem t = 0;
    for (int i = 0; i < r_; ++i) t = f_->add(t, (*this)(i, i));
    return t;
  }
  bool is_zero() const {
    for (auto x : a_)
      if (x) return false;
    return true;
  }
  bool is_identity() const { return square() && *this == identity(f_, r_); }
  bool is_scalar() const { return square() && (r_ == 0 || *this == scalar(f_, r_, (*this)(0, 0))); }
  bool is_symmetric() const { return square() && *this == transpose(); }
  bool is_upper_triangular() const {
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < std::min(i, c_); ++j)
        if ((*this)(i, j)) return false;
    return true;
  }
  bool is_lower_triangular() const { return transpose().is_upper_triangular(); }

  Mat block(int r0, int c0, int nr, int nc) const {
    SPCOVER_REQUIRE(r0 >= 0 && c0 >= 0 && r0 + nr <= r_ && c0 + nc <= c_, "block out of range");
    Mat m(f_, nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }
  void set_block(int r0, int c0, const Mat& b) {
    SPCOVER_REQUIRE(r0 + b.r_ <= r_ && c0 + b.c_ <= c_, "set_block out of range");
    for (int i = 0; i < b.r_; ++i)
      for (int j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  /// [[A, B], [C, D]] with square diagonal blocks of matching sizes.
  static Mat blocks2(const Mat& A, const Mat& B, const Mat& C, const Mat& D) {
    SPCOVER_REQUIRE(A.r_ == B.r_ && C.r_ == D.r_ && A.c_ == C.c_ && B.c_ == D.c_, "block shapes do not fit");
    Mat m(A.f_, A.r_ + C.r_, A.c_ + B.c_);
    m.set_block(0, 0, A);
    m.set_block(0, A.c_, B);
    m.set_block(A.r_, 0, C);
    m.set_block(A.r_, A.c_, D);
    return m;
  }
  static Mat direct_sum(const Mat& A, const Mat& B) {
    return blocks2(A, Mat(A.f_, A.r_, B.c_), Mat(A.f_, B.r_, A.c_), B);
  }
  static Mat vstack(const Mat& A, const Mat& B) {
    if (A.r_ == 0) return B;
    if (B.r_ == 0) return A;
    SPCOVER_REQUIRE(A.c_ == B.c_, "vstack width mismatch");
    Mat m(A.f_, A.r_ + B.r_, A.c_);
    m.set_block(0, 0, A);
    m.set_block(A.r_, 0, B);
    return m;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < r_; ++i) {
      s += "[";
      for (int j = 0; j < c_; ++j) s += (j ? " " : "") + f_->format((*this)(i, j));
      s += "]";
      if (i + 1 < r_) s += "\n";
    }
    return s;
  }

 private:
  void check_same_shape(const Mat& o) const {
    require_same_field(f_, o.f_);
    SPCOVER_REQUIRE(r_ == o.r_ && c_ == o.c_, "matrix shape mismatch");
  }

  FieldPtr f_;
  int r_ = 0, c_ = 0;
  std::vector<Elem> a_;
};

/// Reduced row echelon form; returns pivot columns.
inline std::vector<int> rref_in_place(Mat& m) {
  const Field& F = m.F();
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    const Elem s = F.inv(m(r, c));
    for (int j = 0; j < m.cols(); ++j) m(r, j) = F.mul(m(r, j), s);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Elem t = m(i, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) = F.sub(m(i, j), F.mul(t, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline Mat rref(Mat m) {
  rref_in_place(m);
  return m;
}

inline int rank(const Mat& m) {
  Mat t = m;
  return static_cast<int>(rref_in_place(t).size());
}

inline Elem det(const Mat& m) {
  SPCOVER_REQUIRE(m.square(), "determinant of non-square matrix");
  const Field& F = m.F();
  Mat t = m;
  Elem d = 1;
  const int n = t.rows();
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (t(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(t(piv, j), t(c, j));
      d = F.neg(d);
    }
    d = F.mul(d, t(c, c));
    const Elem s = F.inv(t(c, c));
    for (int i = c + 1; i < n; ++i) {
      if (!t(i, c)) continue;
      const Elem k = F.mul(t(i, c), s);
      for (int j = c; j < n; ++j) t(i, j) = F.sub(t(i, j), F.mul(k, t(c, j)));
    }
  }
  return d;
}

inline std::optional<Mat> try_inverse(const Mat& m) {
  SPCOVER_REQUIRE(m.square(), "inverse of non-square matrix");
  const int n = m.rows();
  Mat aug(m.field(), n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Mat::identity(m.field(), n));
  auto piv = rref_in_place(aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  return aug.block(0, n, n, n);
}

inline Mat inverse(const Mat& m) {
  auto r = try_inverse(m);
  if (!r) throw precondition_error("matrix is singular");
  return *r;
}

/// A^+ = (A^T)^{-1}.
inline Mat invtranspose(const Mat& m) { return inverse(m.transpose()); }

/// X^{-1} M X.
inline Mat conj(const Mat& M, const Mat& X) { return inverse(X) * M * X; }

/// Rows spanning {v : v M = 0}, in reduced echelon form.
inline Mat left_kernel(const Mat& M) {
  // v M = 0  <=>  M^T v^T = 0; null space of M^T via RREF.
  Mat t = rref(M.transpose());
  Mat tt = t;
  auto piv = rref_in_place(tt);
  const int n = M.rows();
  std::vector<bool> is_piv(n, false);
  for (int p : piv) is_piv[p] = true;
  std::vector<std::vector<Elem>> basis;
  const Field& F = M.F();
  for (int freec = 0; freec < n; ++freec) {
    if (is_piv[freec]) continue;
    std::vector<Elem> v(n, 0);
    v[freec] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = F.neg(tt(static_cast<int>(r), freec));
    basis.push_back(v);
  }
  Mat k(M.field(), static_cast<int>(basis.size()), n);
  for (size_t i = 0; i < basis.size(); ++i)
    for (int j = 0; j < n; ++j) k(static_cast<int>(i), j) = basis[i][j];
  return rref(k);
}

/// Column null space {x : A x = 0} as columns of the returned matrix.
inline Mat null_space(const Mat& A) { return left_kernel(A.transpose()).transpose(); }

/// One solution x of A x = b (b a column), or nullopt when inconsistent.
inline std::optional<Mat> solve(const Mat& A, const Mat& b) {
  SPCOVER_REQUIRE(b.cols() == 1 && b.rows() == A.rows(), "solve: rhs shape");
  const int n = A.cols();
  Mat aug(A.field(), A.rows(), n + 1);
  aug.set_block(0, 0, A);
  aug.set_block(0, n, b);
  auto piv = rref_in_place(aug);
  if (!piv.empty() && piv.back() == n) return std::nullopt;
  Mat x(A.field(), n, 1);
  for (size_t r = 0; r < piv.size(); ++r) x(piv[r], 0) = aug(static_cast<int>(r), n);
  return x;
}

/// p(M) by Horner.
inline Mat poly_eval(const Poly& p, const Mat& M) {
  SPCOVER_REQUIRE(M.square(), "poly_eval needs a square matrix");
  const auto& f = M.field();
  Mat r(f, M.rows(), M.cols());
  for (int i = p.degree(); i >= 0; --i) r = r * M + Mat::scalar(f, M.rows(), p.coeff(i));
  return r;
}

/// Companion matrix with superdiagonal ones and last row -c_0, ..., -c_{d-1},
/// so chi = mu = q under the row action.
inline Mat companion(const Poly& q) {
  SPCOVER_REQUIRE(q.is_monic() && q.degree() >= 1, "companion needs a monic polynomial of degree >= 1");
  const int d = q.degree();
  const auto& f = q.field();
  Mat m(f, d, d);
  for (int i = 0; i + 1 < d; ++i) m(i, i + 1) = 1;
  for (int j = 0; j < d; ++j) m(d - 1, j) = f->neg(q.coeff(j));
  return m;
}

/// Subspace of K^n stored by its canonical reduced echelon basis.
class Subspace {
 public:
  Subspace(FieldPtr f, int ambient) : basis_(std::move(f), 0, ambient) {}
  /// Row span of the given generators.
  static Subspace span(const Mat& gens) {
    Subspace s(gens.field(), gens.cols());
    Mat r = rref(gens);
    const int k = rank(r);
    s.basis_ = r.block(0, 0, k, gens.cols());
    return s;
  }
  static Subspace whole(const FieldPtr& f, int n) { return span(Mat::identity(f, n)); }

  int dim() const { return basis_.rows(); }
  int ambient() const { return basis_.cols(); }
  const Mat& basis() const { return basis_; }
  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
  bool contains(const std::vector<Elem>& v) const {
    return rank(Mat::vstack(basis_, Mat::row_vector(basis_.field(), v))) == dim();
  }
  bool contains(const Subspace& o) const { return rank(Mat::vstack(basis_, o.basis_)) == dim(); }
  Subspace operator+(const Subspace& o) const { return span(Mat::vstack(basis_, o.basis_)); }
  /// Intersection via the kernel of [U; -W].
  Subspace intersect(const Subspace& o) const {
    if (dim() == 0 || o.dim() == 0) return Subspace(basis_.field(), ambient());
    Mat stacked = Mat::vstack(basis_, -o.basis_);
    Mat k = left_kernel(stacked);
    if (k.rows() == 0) return Subspace(basis_.field(), ambient());
    return span(k.block(0, 0, k.rows(), dim()) * basis_);
  }
  /// Image under the right action v -> v M.
  Subspace image(const Mat& M) const {
    if (dim() == 0) return *this;
    return span(basis_ * M);
  }
  /// {v : u gram v^T = 0 for all u in this}.
  Subspace perp(const Mat& gram) const {
    if (dim() == 0) return whole(basis_.field(), ambient());
    return span(left_kernel((basis_ * gram).transpose()));
  }

 private:
  Mat basis_;
};

}  // namespace spcover
