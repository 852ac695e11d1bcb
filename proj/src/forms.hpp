// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "exactla.hpp"
#include "grass.hpp"

#include <map>
#include <random>

namespace fanossa::forms {

using exactla::FieldDesc;
using exactla::Mat;
using grass::Plane;

using Exponents = std::vector<int>;  // length n+1, entries sum to the degree

// Homogeneous polynomial in n+1 variables over an exact field, stored as a
// map from exponent vectors to coefficients.
class Form {
 public:
  Form(FieldDesc f, int n, int degree);

  int n() const { return n_; }
  int degree() const { return degree_; }
  const FieldDesc& field() const { return field_; }
  const std::map<Exponents, mpq_class>& coeffs() const { return coeffs_; }

  void set_coeff(const Exponents& e, const mpq_class& c);
  mpq_class coeff(const Exponents& e) const;
  bool is_zero() const { return coeffs_.empty(); }

  Form operator+(const Form& o) const;
  Form operator-(const Form& o) const;
  Form scaled(const mpq_class& c) const;

  // Product with another form (degrees add).
  Form operator*(const Form& o) const;

  // Partial derivative with respect to x_j.
  Form derivative(int j) const;

  // Substitution x_j -> sum_a m(a, j) * y_a where m is (m.rows()) x (n+1);
  // the result lives in m.rows() variables.
  Form substitute(const Mat& m) const;

  bool operator==(const Form&) const = default;

 private:
  FieldDesc field_;
  int n_, degree_;
  std::map<Exponents, mpq_class> coeffs_;
};

// Degree-d monomial exponent vectors in `vars` variables, ordered
// lexicographically descending ((d,0,...) first).
std::vector<Exponents> monomial_basis(int vars, int degree);

struct PolySystem {
  std::vector<Form> forms;
  PolySystem(std::vector<Form> fs);
  int n() const { return forms.front().n(); }
  std::vector<int> multidegree() const;
  const FieldDesc& field() const { return forms.front().field(); }
};

// Coefficients of f restricted to the plane (substituting its row basis),
// in the descending-lex degree-d basis of the k+1 plane parameters.
// Length C(d+k, k); identically zero iff the plane lies on V(f).
std::vector<mpq_class> restrict_to_plane(const Form& f, const Plane& L);

bool vanishes_on(const Form& f, const Plane& L);

// Deterministic draws shared by every sampler in the project.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  // uniform in [lo, hi]
  int64_t uniform(int64_t lo, int64_t hi);
  // uniform nonzero integer in [-bound, bound]
  int64_t nonzero_box(int64_t bound);
  // uniform nonzero residue in a prime field
  int64_t nonzero_mod(long p);
  double gaussian();
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Draws a scalar for the given field: nonzero box integer over the
// rationals, nonzero residue over F_p.
mpq_class random_nonzero_scalar(const FieldDesc& f, int64_t bound, Rng& rng);

// Generic degree-d form vanishing identically on L: built in the basis
// adapted to L with the monomials supported on the plane variables
// excluded, then pulled back to the original coordinates.
Form random_vanishing_form(FieldDesc f, int n, int d, const Plane& L,
                           int64_t bound, Rng& rng);

// --- quadrics / Gram matrices -------------------------------------------

// Gram matrix view: q(x) = x^T Q x, off-diagonal entries half the
// monomial coefficients.  Requires characteristic != 2.
Mat gram_of(const Form& f);
Form form_of(const Mat& q);

struct chart_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fills the bottom-right (n+1-r)x(n+1-r) corner of a symmetric matrix so
// every bordered (r+1)x(r+1) minor through the leading r x r block
// vanishes; the result has rank exactly r.  Entries q_{u,v} with
// min(u,v) < r must already be set and the leading r x r minor must be
// nonzero (otherwise the matrix lies outside the completion chart and a
// chart_error asks the caller to resample).
Mat complete_rank_r(const Mat& partial, int r);

// Generic rank-r quadric vanishing on L, for 2k+2 <= r <= n+1.
Mat random_rank_r_vanishing_quadric(int n, int k, int r, const Plane& L,
                                    int64_t bound, Rng& rng,
                                    int max_attempts = 100);

// Generic full Gram sampler helper: change of basis pulling a Gram matrix
// built in the adapted coordinates of L back to the original coordinates.
Mat conjugate_gram_from_adapted(const Mat& gram_adapted, const Plane& L);

}  // namespace fanossa::forms
