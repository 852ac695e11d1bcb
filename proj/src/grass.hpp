// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "exactla.hpp"

#include <cstdint>
#include <functional>

namespace fanossa::grass {

using exactla::FieldDesc;
using exactla::Mat;

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A k-plane in P^n, held as its canonical RREF row basis.  Two Planes are
// equal iff their basis matrices are identical.
class Plane {
 public:
  // Canonicalizes M (must have full row rank) to its RREF representative.
  static Plane from_rows(const Mat& m);
  // Span of coordinate axes e_i for i in idx.
  static Plane coordinate(FieldDesc f, int n, const std::vector<int>& idx);

  int n() const { return basis_.cols() - 1; }
  int k() const { return basis_.rows() - 1; }
  const Mat& basis() const { return basis_; }
  bool operator==(const Plane&) const = default;

  // Completes the basis to an invertible (n+1)x(n+1) matrix whose first
  // k+1 rows are the plane's basis; the rest are unit vectors at the
  // non-pivot columns.
  Mat adapted_basis() const;

 private:
  explicit Plane(Mat b) : basis_(std::move(b)) {}
  Mat basis_;
};

struct ChartPoint {
  Plane base;
  Mat x;  // (k+1) x (n-k) chart coordinates
};

// Row space of (I | X) in the basis adapted to the base plane.
Plane chart_plane(const ChartPoint& c);

// Recovers X from a plane in the chart patch around base; throws if the
// plane lies outside the patch.
Mat chart_coordinates(const Plane& base, const Plane& target);

// Projective dimension of the intersection; -1 for disjoint planes.
int intersection_dim(const Plane& a, const Plane& b);

// Number of k-planes in P^n over F_q.
mpz_class gaussian_binomial(int n, int k, long q);

// Streams every k-plane of P^n(F_q) exactly once, ordered by
// (pivot set, free entries) lexicographically.  Basis rows are handed to
// the visitor as a row-major (k+1) x (n+1) int64 array of entries in [0,q).
// Returning false from the visitor stops the stream.
void enumerate_planes_raw(
    int n, int k, long q,
    const std::function<bool(const std::vector<int64_t>&)>& visit,
    mpz_class budget = 10000000, bool override_budget = false);

std::vector<Plane> enumerate_planes(int n, int k, long q,
                                    mpz_class budget = 10000000,
                                    bool override_budget = false);

Plane plane_from_raw(FieldDesc f, int n, int k, const std::vector<int64_t>& rows);

struct SubspaceDistance {
  double chordal;
  double max_principal_angle;
};

// Distance between the row spaces of two full-rank real matrices with the
// same column count.
SubspaceDistance subspace_distance(const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b);

}  // namespace fanossa::grass
