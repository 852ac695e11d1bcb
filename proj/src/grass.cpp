// SPDX-License-Identifier: Apache-2.0
#include "grass.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace fanossa::grass {

Plane Plane::from_rows(const Mat& m) {
  if (!m.field().exact())
    throw exactla::field_error("Plane requires an exact field");
  auto [r, pivots] = exactla::rref(m);
  if (int(pivots.size()) != m.rows())
    throw exactla::field_error("plane basis is rank-deficient");
  Mat b(m.field(), m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) b.set(i, j, r.at(i, j));
  return Plane(std::move(b));
}

Plane Plane::coordinate(FieldDesc f, int n, const std::vector<int>& idx) {
  Mat m(f, int(idx.size()), n + 1);
  for (size_t i = 0; i < idx.size(); ++i) m.set(int(i), idx[i], 1);
  return from_rows(m);
}

Mat Plane::adapted_basis() const {
  auto [r, pivots] = exactla::rref(basis_);
  std::vector<bool> is_pivot(basis_.cols(), false);
  for (int c : pivots) is_pivot[c] = true;
  Mat m(basis_.field(), basis_.cols(), basis_.cols());
  for (int i = 0; i < basis_.rows(); ++i)
    for (int j = 0; j < basis_.cols(); ++j) m.set(i, j, basis_.at(i, j));
  int row = basis_.rows();
  for (int c = 0; c < basis_.cols(); ++c)
    if (!is_pivot[c]) m.set(row++, c, 1);
  return m;
}

Plane chart_plane(const ChartPoint& c) {
  int k = c.base.k(), n = c.base.n();
  if (c.x.rows() != k + 1 || c.x.cols() != n - k)
    throw exactla::field_error("chart coordinate extents mismatch");
  Mat m = c.base.adapted_basis();
  Mat rows(m.field(), k + 1, n + 1);
  for (int a = 0; a <= k; ++a)
    for (int j = 0; j <= n; ++j) {
      mpq_class acc = m.at(a, j);
      for (int b = 0; b < n - k; ++b) acc += c.x.at(a, b) * m.at(k + 1 + b, j);
      rows.set(a, j, acc);
    }
  return Plane::from_rows(rows);
}

Mat chart_coordinates(const Plane& base, const Plane& target) {
  int k = base.k(), n = base.n();
  if (target.k() != k || target.n() != n)
    throw exactla::field_error("chart_coordinates extents mismatch");
  // Solve R * M = basis(target) row-by-row with R = (C | X) unknown and
  // enforce C = I after normalization.
  Mat m = base.adapted_basis();
  // coords of target rows in the adapted basis: solve y * M = row
  Mat mt = m.transpose();
  Mat coords(m.field(), k + 1, n + 1);
  for (int i = 0; i <= k; ++i) {
    // Solve M^T x^T = row^T via stacked elimination.
    Mat aug(m.field(), n + 1, n + 2);
    for (int r = 0; r <= n; ++r) {
      for (int c = 0; c <= n; ++c) aug.set(r, c, mt.at(r, c));
      aug.set(r, n + 1, target.basis().at(i, r));
    }
    auto [rr, piv] = exactla::rref(aug);
    for (int r = 0; r <= n; ++r) coords.set(i, r, rr.at(r, n + 1));
  }
  // Normalize so that the first (k+1) x (k+1) block is the identity.
  std::vector<int> head(k + 1), tail(n - k);
  for (int i = 0; i <= k; ++i) head[i] = i;
  for (int i = 0; i < n - k; ++i) tail[i] = k + 1 + i;
  Mat c0 = coords.submatrix(head, head);
  if (exactla::rank_exact(c0) != k + 1)
    throw exactla::field_error("plane lies outside the chart patch");
  // X = c0^{-1} * tail-block
  Mat aug(m.field(), k + 1, 2 * (k + 1));
  Mat inv(m.field(), k + 1, k + 1);
  {
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; j <= k; ++j) aug.set(i, j, c0.at(i, j));
      aug.set(i, k + 1 + i, 1);
    }
    auto [rr, piv] = exactla::rref(aug);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) inv.set(i, j, rr.at(i, k + 1 + j));
  }
  return inv * coords.submatrix(head, tail);
}

int intersection_dim(const Plane& a, const Plane& b) {
  if (a.n() != b.n()) throw exactla::field_error("ambient dimension mismatch");
  Mat stacked = a.basis().vstack(b.basis());
  int r = exactla::rank_exact(stacked);
  return (a.k() + 1) + (b.k() + 1) - r - 1;
}

mpz_class gaussian_binomial(int n, int k, long q) {
  // [n+1 choose k+1]_q
  int N = n + 1, K = k + 1;
  mpz_class num = 1, den = 1, Q(q);
  auto qpow_minus1 = [&](int e) -> mpz_class {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), Q.get_mpz_t(), (unsigned long)e);
    return r - 1;
  };
  for (int i = 0; i < K; ++i) {
    num *= qpow_minus1(N - i);
    den *= qpow_minus1(i + 1);
  }
  return num / den;
}

void enumerate_planes_raw(
    int n, int k, long q,
    const std::function<bool(const std::vector<int64_t>&)>& visit,
    mpz_class budget, bool override_budget) {
  if (q < 3 || !exactla::is_prime(q))
    throw exactla::field_error("enumeration requires an odd prime q");
  if (k < 0 || k >= n)
    throw exactla::field_error("enumeration requires 0 <= k < n");
  mpz_class total = gaussian_binomial(n, k, q);
  if (!override_budget && total > budget)
    throw budget_error("plane count " + total.get_str() +
                       " exceeds enumeration budget " + budget.get_str());
  const int rows = k + 1, cols = n + 1;
  // Pivot columns p_0 < ... < p_k, lexicographic.
  std::vector<int> piv(rows);
  for (int i = 0; i < rows; ++i) piv[i] = i;
  std::vector<int64_t> basis(size_t(rows) * cols);
  auto emit_all_for_pivots = [&]() -> bool {
    // Free positions: row i, column c with c > piv[i] and c not a pivot.
    std::vector<std::pair<int, int>> free_pos;
    std::vector<bool> is_piv(cols, false);
    for (int p : piv) is_piv[p] = true;
    for (int i = 0; i < rows; ++i)
      for (int c = piv[i] + 1; c < cols; ++c)
        if (!is_piv[c]) free_pos.emplace_back(i, c);
    std::fill(basis.begin(), basis.end(), 0);
    for (int i = 0; i < rows; ++i) basis[size_t(i) * cols + piv[i]] = 1;
    // Odometer over free entries, most significant first.
    size_t nf = free_pos.size();
    std::vector<int64_t> digits(nf, 0);
    while (true) {
      for (size_t t = 0; t < nf; ++t)
        basis[size_t(free_pos[t].first) * cols + free_pos[t].second] = digits[t];
      if (!visit(basis)) return false;
      size_t t = nf;
      while (t > 0) {
        --t;
        if (++digits[t] < q) break;
        digits[t] = 0;
        if (t == 0) return true;
      }
      if (nf == 0) return true;
    }
  };
  while (true) {
    if (!emit_all_for_pivots()) return;
    // next pivot combination in lexicographic order
    int i = rows - 1;
    while (i >= 0 && piv[i] == cols - rows + i) --i;
    if (i < 0) return;
    ++piv[i];
    for (int j = i + 1; j < rows; ++j) piv[j] = piv[j - 1] + 1;
  }
}

Plane plane_from_raw(FieldDesc f, int n, int k, const std::vector<int64_t>& rows) {
  Mat m(f, k + 1, n + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= n; ++j)
      m.set(i, j, mpq_class(long(rows[size_t(i) * (n + 1) + j])));
  return Plane::from_rows(m);
}

std::vector<Plane> enumerate_planes(int n, int k, long q, mpz_class budget,
                                    bool override_budget) {
  std::vector<Plane> out;
  FieldDesc f = FieldDesc::prime(q);
  enumerate_planes_raw(
      n, k, q,
      [&](const std::vector<int64_t>& rows) {
        out.push_back(plane_from_raw(f, n, k, rows));
        return true;
      },
      budget, override_budget);
  return out;
}

SubspaceDistance subspace_distance(const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols())
    throw exactla::field_error("subspace_distance: ambient mismatch");
  auto orth = [](const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.transpose(), Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
      if (smax > 0 && s(i) > 1e-12 * smax) ++r;
    if (r != m.rows())
      throw exactla::field_error("subspace_distance: rank-deficient basis");
    return Eigen::MatrixXd(svd.matrixU().leftCols(r));
  };
  Eigen::MatrixXd u1 = orth(a), u2 = orth(b);
  Eigen::MatrixXd p1 = u1 * u1.transpose(), p2 = u2 * u2.transpose();
  double chordal = (p1 - p2).norm() / std::sqrt(2.0);
  SubspaceDistance d{chordal, 0.0};
  if (a.rows() == b.rows()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u1.transpose() * u2);
    const auto& s = svd.singularValues();
    double smin = s.size() ? s(s.size() - 1) : 1.0;
    smin = std::clamp(smin, -1.0, 1.0);
    d.max_principal_angle = std::acos(smin);
  } else {
    d.max_principal_angle = std::asin(std::clamp(chordal, 0.0, 1.0));
  }
  return d;
}

}  // namespace fanossa::grass
