// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grass.hpp"

#include <random>
#include <set>

using namespace fanossa::grass;
using fanossa::exactla::FieldDesc;
using fanossa::exactla::Mat;

static Mat rows_matrix(FieldDesc f, int cols,
                       const std::vector<std::vector<long>>& rows) {
  Mat m(f, int(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < cols; ++j) m.set(int(i), j, mpq_class(rows[i][j]));
  return m;
}

TEST_CASE("canonicalize") {
  auto f = FieldDesc::rational();
  Plane p = Plane::from_rows(rows_matrix(f, 4, {{2, 0, 0, 0}, {0, 0, 3, 0}}));
  CHECK(p == Plane::coordinate(f, 3, {0, 2}));
  // idempotence
  CHECK(Plane::from_rows(p.basis()) == p);
  CHECK_THROWS(Plane::from_rows(rows_matrix(f, 4, {{1, 1, 0, 0}, {2, 2, 0, 0}})));
}

TEST_CASE("canonicalize kills random row mixes") {
  std::mt19937_64 eng(3);
  auto f = FieldDesc::rational();
  for (int trial = 0; trial < 500; ++trial) {
    int n = 3 + int(eng() % 3), k = int(eng() % 3);
    if (k >= n) continue;
    Mat m(f, k + 1, n + 1);
    int rank;
    do {
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= n; ++j)
          m.set(i, j, mpq_class(long(eng() % 11) - 5));
      rank = fanossa::exactla::rank_exact(m);
    } while (rank != k + 1);
    Plane p = Plane::from_rows(m);
    // invertible row mix: L * m for random unimodular-ish L
    Mat l(f, k + 1, k + 1);
    do {
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
          l.set(i, j, mpq_class(long(eng() % 7) - 3));
    } while (fanossa::exactla::rank_exact(l) != k + 1);
    CHECK(Plane::from_rows(l * m) == p);
  }
}

TEST_CASE("chart_plane") {
  auto f = FieldDesc::rational();
  Plane base = Plane::coordinate(f, 3, {0, 1});
  ChartPoint origin{base, Mat(f, 2, 2)};
  CHECK(chart_plane(origin) == base);

  Mat x(f, 2, 2);
  x.set(0, 1, 1);
  x.set(1, 0, 1);
  Plane moved = chart_plane({base, x});
  CHECK(moved == Plane::from_rows(
                     rows_matrix(f, 4, {{1, 0, 0, 1}, {0, 1, 1, 0}})));

  // chart coordinates round-trip
  Mat rec = chart_coordinates(base, moved);
  CHECK(rec == x);
}

TEST_CASE("chart round-trip on random points") {
  std::mt19937_64 eng(5);
  auto f = FieldDesc::rational();
  for (int trial = 0; trial < 100; ++trial) {
    int n = 3 + int(eng() % 2), k = int(eng() % 2);
    Plane base = Plane::coordinate(f, n, [&] {
      std::set<int> s;
      while (int(s.size()) < k + 1) s.insert(int(eng() % (n + 1)));
      return std::vector<int>(s.begin(), s.end());
    }());
    Mat x(f, k + 1, n - k);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j < n - k; ++j)
        x.set(i, j, mpq_class(long(eng() % 9) - 4));
    CHECK(chart_coordinates(base, chart_plane({base, x})) == x);
  }
}

TEST_CASE("intersection_dim") {
  auto f = FieldDesc::rational();
  Plane a = Plane::coordinate(f, 3, {0, 1});
  CHECK(intersection_dim(a, a) == 1);
  CHECK(intersection_dim(a, Plane::coordinate(f, 3, {2, 3})) == -1);
  CHECK(intersection_dim(a, Plane::coordinate(f, 3, {1, 2})) == 0);
  CHECK_THROWS(intersection_dim(a, Plane::coordinate(f, 4, {0, 1})));
}

TEST_CASE("intersection_dim vs chart coordinate rank") {
  // projective dim of (chart plane) meet (base) = k - rank(X)
  auto f = FieldDesc::rational();
  std::mt19937_64 eng(9);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 4, k = 1 + int(eng() % 2);
    Plane base = Plane::coordinate(f, n, [&] {
      std::vector<int> v;
      for (int i = 0; i <= k; ++i) v.push_back(i);
      return v;
    }());
    Mat x(f, k + 1, n - k);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j < n - k; ++j)
        x.set(i, j, mpq_class(long(eng() % 5) - 2));
    CHECK(intersection_dim(chart_plane({base, x}), base) ==
          k - fanossa::exactla::rank_exact(x));
  }
}

TEST_CASE("gaussian binomial counts") {
  CHECK(gaussian_binomial(3, 1, 3) == 130);
  CHECK(gaussian_binomial(2, 1, 3) == 13);
  CHECK(gaussian_binomial(3, 0, 3) == 40);
}

TEST_CASE("enumeration matches gaussian binomials, no duplicates") {
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k < n && k <= 2; ++k)
      for (long q : {3L, 5L, 7L, 11L}) {
        mpz_class expected = gaussian_binomial(n, k, q);
        if (expected > 20000) continue;
        auto planes = enumerate_planes(n, k, q);
        CHECK(mpz_class(planes.size()) == expected);
        std::set<std::vector<std::string>> seen;
        for (const auto& p : planes) {
          std::vector<std::string> key;
          for (int i = 0; i < p.basis().rows(); ++i)
            for (int j = 0; j < p.basis().cols(); ++j)
              key.push_back(p.basis().at(i, j).get_str());
          CHECK(seen.insert(key).second);
        }
      }
}

TEST_CASE("enumeration guards") {
  CHECK_THROWS_AS(enumerate_planes(3, 1, 2), fanossa::exactla::field_error);
  CHECK_THROWS_AS(enumerate_planes(4, 2, 11, /*budget=*/100), budget_error);
  // override lifts the budget
  CHECK(enumerate_planes(2, 0, 3, /*budget=*/1, true).size() == 13);
}

TEST_CASE("subspace_distance") {
  Eigen::MatrixXd a(1, 2), b(1, 2);
  a << 1, 0;
  b << 1, 0;
  auto d0 = subspace_distance(a, b);
  CHECK(d0.chordal == doctest::Approx(0).epsilon(1e-12));
  CHECK(d0.max_principal_angle == doctest::Approx(0).epsilon(1e-6));

  b << 0, 1;
  auto d1 = subspace_distance(a, b);
  CHECK(d1.max_principal_angle == doctest::Approx(M_PI / 2));

  double theta = 0.3;
  b << std::cos(theta), std::sin(theta);
  CHECK(subspace_distance(a, b).max_principal_angle == doctest::Approx(theta));

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(1, 2);
  CHECK_THROWS(subspace_distance(a, bad));
}
