// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fanossa::exactla {

enum class FieldKind { Rational, Prime, Float64 };

// Scalar-field tag carried by every exact matrix.  Prime fields are
// restricted to odd p: quadric polarization divides by 2.
struct FieldDesc {
  FieldKind kind = FieldKind::Rational;
  long p = 0;

  static FieldDesc rational() { return {FieldKind::Rational, 0}; }
  static FieldDesc prime(long p);
  static FieldDesc float64() { return {FieldKind::Float64, 0}; }

  bool exact() const { return kind != FieldKind::Float64; }
  bool operator==(const FieldDesc&) const = default;
  std::string str() const;
};

bool is_prime(long n);

struct field_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dense matrix over an exact field (rational or prime).  Entries are
// mpq_class; prime-field entries are kept normalized as integers in [0, p).
class Mat {
 public:
  Mat() : field_(FieldDesc::rational()) {}
  Mat(FieldDesc f, int rows, int cols);

  static Mat identity(FieldDesc f, int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldDesc& field() const { return field_; }

  const mpq_class& at(int i, int j) const { return e_[i * cols_ + j]; }
  void set(int i, int j, const mpq_class& v);

  bool operator==(const Mat&) const = default;

  Mat transpose() const;
  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat scaled(const mpq_class& c) const;

  // Stacks o below *this (column counts must match).
  Mat vstack(const Mat& o) const;
  Mat submatrix(const std::vector<int>& row_idx,
                const std::vector<int>& col_idx) const;

  bool is_zero() const;
  bool is_symmetric() const;

  Eigen::MatrixXd to_double() const;

  // Field arithmetic on scalars of this matrix's field.
  mpq_class fadd(const mpq_class& a, const mpq_class& b) const;
  mpq_class fsub(const mpq_class& a, const mpq_class& b) const;
  mpq_class fmul(const mpq_class& a, const mpq_class& b) const;
  mpq_class fdiv(const mpq_class& a, const mpq_class& b) const;
  mpq_class fneg(const mpq_class& a) const;
  mpq_class normalize(const mpq_class& a) const;

 private:
  FieldDesc field_;
  int rows_ = 0, cols_ = 0;
  std::vector<mpq_class> e_;
};

// Normalizes a scalar into the given field (mod-p reduction for primes).
mpq_class normalize_scalar(const FieldDesc& f, const mpq_class& a);

int rank_exact(const Mat& m);

// Reduced row-echelon form with the pivot column list.
std::pair<Mat, std::vector<int>> rref(const Mat& m);

// Rows form a basis of the right null space: m * row^T = 0.
Mat nullspace(const Mat& m);

mpq_class det(const Mat& m);

// Inverse of a square nonsingular matrix.
Mat inverse(const Mat& m);

// Numeric rank: count of singular values above tol * sigma_max.
int rank_numeric(const Eigen::MatrixXd& m, double tol = 1e-8);

// Rows span the right null space, orthonormal; tolerance is relative.
Eigen::MatrixXd nullspace_numeric(const Eigen::MatrixXd& m, double tol = 1e-8);

}  // namespace fanossa::exactla
