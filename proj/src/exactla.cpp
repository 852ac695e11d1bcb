// SPDX-License-Identifier: Apache-2.0
#include "exactla.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace fanossa::exactla {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldDesc FieldDesc::prime(long p) {
  if (p < 3 || !is_prime(p))
    throw field_error("prime field requires an odd prime p >= 3, got " +
                      std::to_string(p));
  return {FieldKind::Prime, p};
}

std::string FieldDesc::str() const {
  switch (kind) {
    case FieldKind::Rational: return "rational";
    case FieldKind::Prime: return "prime(" + std::to_string(p) + ")";
    case FieldKind::Float64: return "float64";
  }
  return "?";
}

mpq_class normalize_scalar(const FieldDesc& f, const mpq_class& a) {
  if (f.kind != FieldKind::Prime) return a;
  mpz_class den = a.get_den();
  mpz_class num = a.get_num();
  mpz_class p(f.p);
  mpz_class dinv;
  mpz_class dmod = den % p;
  if (dmod < 0) dmod += p;
  if (mpz_invert(dinv.get_mpz_t(), dmod.get_mpz_t(), p.get_mpz_t()) == 0)
    throw field_error("denominator not invertible mod p");
  mpz_class r = (num % p) * dinv % p;
  if (r < 0) r += p;
  return mpq_class(r);
}

Mat::Mat(FieldDesc f, int rows, int cols)
    : field_(f), rows_(rows), cols_(cols), e_(size_t(rows) * cols, mpq_class(0)) {
  if (f.kind == FieldKind::Float64)
    throw field_error("exact Mat does not hold float64 entries");
  if (rows < 0 || cols < 0) throw field_error("negative extent");
}

Mat Mat::identity(FieldDesc f, int n) {
  Mat m(f, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void Mat::set(int i, int j, const mpq_class& v) {
  e_[i * cols_ + j] = normalize_scalar(field_, v);
}

Mat Mat::transpose() const {
  Mat t(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
  return t;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_ || !(field_ == o.field_))
    throw field_error("matrix product shape/field mismatch");
  Mat r(field_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      mpq_class acc = 0;
      for (int k = 0; k < cols_; ++k) acc += at(i, k) * o.at(k, j);
      r.set(i, j, acc);
    }
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || !(field_ == o.field_))
    throw field_error("matrix sum mismatch");
  Mat r(field_, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(i, j, at(i, j) + o.at(i, j));
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  return *this + o.scaled(-1);
}

Mat Mat::scaled(const mpq_class& c) const {
  Mat r(field_, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(i, j, at(i, j) * c);
  return r;
}

Mat Mat::vstack(const Mat& o) const {
  if (cols_ != o.cols_ || !(field_ == o.field_))
    throw field_error("vstack mismatch");
  Mat r(field_, rows_ + o.rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(i, j, at(i, j));
  for (int i = 0; i < o.rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(rows_ + i, j, o.at(i, j));
  return r;
}

Mat Mat::submatrix(const std::vector<int>& row_idx,
                   const std::vector<int>& col_idx) const {
  Mat r(field_, int(row_idx.size()), int(col_idx.size()));
  for (size_t i = 0; i < row_idx.size(); ++i)
    for (size_t j = 0; j < col_idx.size(); ++j)
      r.set(int(i), int(j), at(row_idx[i], col_idx[j]));
  return r;
}

bool Mat::is_zero() const {
  for (const auto& x : e_)
    if (x != 0) return false;
  return true;
}

bool Mat::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

Eigen::MatrixXd Mat::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).get_d();
  return m;
}

mpq_class Mat::fadd(const mpq_class& a, const mpq_class& b) const {
  return normalize_scalar(field_, a + b);
}
mpq_class Mat::fsub(const mpq_class& a, const mpq_class& b) const {
  return normalize_scalar(field_, a - b);
}
mpq_class Mat::fmul(const mpq_class& a, const mpq_class& b) const {
  return normalize_scalar(field_, a * b);
}
mpq_class Mat::fdiv(const mpq_class& a, const mpq_class& b) const {
  if (field_.kind == FieldKind::Prime) {
    mpq_class binv;
    mpz_class bz = normalize_scalar(field_, b).get_num();
    mpz_class p(field_.p), inv;
    if (mpz_invert(inv.get_mpz_t(), bz.get_mpz_t(), p.get_mpz_t()) == 0)
      throw field_error("division by zero in F_p");
    return normalize_scalar(field_, a * mpq_class(inv));
  }
  if (b == 0) throw field_error("division by zero");
  return a / b;
}
mpq_class Mat::fneg(const mpq_class& a) const {
  return normalize_scalar(field_, -a);
}
mpq_class Mat::normalize(const mpq_class& a) const {
  return normalize_scalar(field_, a);
}

std::pair<Mat, std::vector<int>> rref(const Mat& m) {
  Mat a = m;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a.at(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < a.cols(); ++j) {
        mpq_class t = a.at(r, j);
        a.set(r, j, a.at(piv, j));
        a.set(piv, j, t);
      }
    mpq_class lead = a.at(r, c);
    for (int j = c; j < a.cols(); ++j) a.set(r, j, a.fdiv(a.at(r, j), lead));
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, c) == 0) continue;
      mpq_class f = a.at(i, c);
      for (int j = c; j < a.cols(); ++j)
        a.set(i, j, a.fsub(a.at(i, j), a.fmul(f, a.at(r, j))));
    }
    pivots.push_back(c);
    ++r;
  }
  return {a, pivots};
}

int rank_exact(const Mat& m) { return int(rref(m).second.size()); }

Mat nullspace(const Mat& m) {
  auto [r, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat basis(m.field(), int(free_cols.size()), m.cols());
  for (size_t fi = 0; fi < free_cols.size(); ++fi) {
    int fc = free_cols[fi];
    basis.set(int(fi), fc, 1);
    for (size_t pi = 0; pi < pivots.size(); ++pi)
      basis.set(int(fi), pivots[pi], r.fneg(r.at(int(pi), fc)));
  }
  return basis;
}

mpq_class det(const Mat& m) {
  if (m.rows() != m.cols()) throw field_error("det of non-square matrix");
  Mat a = m;
  mpq_class d = 1;
  int n = a.rows();
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (a.at(i, c) != 0) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        mpq_class t = a.at(c, j);
        a.set(c, j, a.at(piv, j));
        a.set(piv, j, t);
      }
      d = a.fneg(d);
    }
    d = a.fmul(d, a.at(c, c));
    for (int i = c + 1; i < n; ++i) {
      if (a.at(i, c) == 0) continue;
      mpq_class f = a.fdiv(a.at(i, c), a.at(c, c));
      for (int j = c; j < n; ++j)
        a.set(i, j, a.fsub(a.at(i, j), a.fmul(f, a.at(c, j))));
    }
  }
  return d;
}

Mat inverse(const Mat& m) {
  if (m.rows() != m.cols()) throw field_error("inverse of non-square matrix");
  int n = m.rows();
  Mat aug(m.field(), n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, n + i, 1);
  }
  auto [r, pivots] = rref(aug);
  if (int(pivots.size()) != n || pivots[n - 1] != n - 1)
    throw field_error("matrix is singular");
  Mat inv(m.field(), n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.set(i, j, r.at(i, n + j));
  return inv;
}

int rank_numeric(const Eigen::MatrixXd& m, double tol) {
  if (!m.allFinite()) throw field_error("non-finite entries in rank_numeric");
  if (tol <= 0) throw field_error("tolerance must be positive");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * smax) ++r;
  return r;
}

Eigen::MatrixXd nullspace_numeric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (smax > 0 && s(i) > tol * smax) ++r;
  int nullity = int(m.cols()) - r;
  Eigen::MatrixXd v = svd.matrixV();
  return v.rightCols(nullity).transpose();
}

}  // namespace fanossa::exactla
