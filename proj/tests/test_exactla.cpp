// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exactla.hpp"

#include <random>

using namespace fanossa::exactla;

static Mat random_int_matrix(FieldDesc f, int rows, int cols,
                             std::mt19937_64& eng, int box = 9) {
  Mat m(f, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m.set(i, j, mpq_class(long(eng() % (2 * box + 1)) - box));
  return m;
}

TEST_CASE("field descriptors") {
  CHECK_THROWS_AS(FieldDesc::prime(2), field_error);
  CHECK_THROWS_AS(FieldDesc::prime(9), field_error);
  CHECK(FieldDesc::prime(11).p == 11);
  CHECK(FieldDesc::rational().exact());
  CHECK_FALSE(FieldDesc::float64().exact());
  CHECK_THROWS_AS(Mat(FieldDesc::float64(), 2, 2), field_error);
}

TEST_CASE("rank_exact basics") {
  CHECK(rank_exact(Mat::identity(FieldDesc::rational(), 5)) == 5);
  CHECK(rank_exact(Mat(FieldDesc::rational(), 3, 4)) == 0);
  Mat m(FieldDesc::rational(), 2, 2);
  m.set(0, 0, 1);
  m.set(0, 1, 2);
  m.set(1, 0, 2);
  m.set(1, 1, 4);
  CHECK(rank_exact(m) == 1);
}

TEST_CASE("rref examples") {
  Mat m(FieldDesc::rational(), 2, 2);
  m.set(0, 0, 2);
  m.set(1, 1, 2);
  auto [r, piv] = rref(m);
  CHECK(r == Mat::identity(FieldDesc::rational(), 2));
  CHECK(piv == std::vector<int>{0, 1});

  Mat f3(FieldDesc::prime(3), 1, 3);
  f3.set(0, 1, 1);
  f3.set(0, 2, 1);
  auto [r2, piv2] = rref(f3);
  CHECK(r2 == f3);
  CHECK(piv2 == std::vector<int>{1});

  Mat ones(FieldDesc::rational(), 2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ones.set(i, j, 1);
  auto [r3, piv3] = rref(ones);
  CHECK(r3.at(0, 0) == 1);
  CHECK(r3.at(0, 1) == 1);
  CHECK(r3.at(1, 0) == 0);
  CHECK(r3.at(1, 1) == 0);
}

TEST_CASE("rref is idempotent and rank-preserving on a random corpus") {
  std::mt19937_64 eng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    FieldDesc f = (trial % 3 == 0) ? FieldDesc::prime(7) : FieldDesc::rational();
    int rows = 1 + int(eng() % 5), cols = 1 + int(eng() % 6);
    Mat m = random_int_matrix(f, rows, cols, eng);
    auto [r, piv] = rref(m);
    auto [rr, piv2] = rref(r);
    CHECK(rr == r);
    CHECK(piv2 == piv);
    CHECK(rank_exact(r) == rank_exact(m));
    CHECK(int(piv.size()) == rank_exact(m));
  }
}

TEST_CASE("nullspace") {
  CHECK(nullspace(Mat::identity(FieldDesc::rational(), 3)).rows() == 0);
  CHECK(nullspace(Mat(FieldDesc::rational(), 2, 3)).rows() == 3);

  Mat m(FieldDesc::rational(), 1, 3);
  m.set(0, 0, 1);
  m.set(0, 1, 1);
  Mat ns = nullspace(m);
  REQUIRE(ns.rows() == 2);
  CHECK((m * ns.transpose()).is_zero());
}

TEST_CASE("rank-nullity on random matrices") {
  std::mt19937_64 eng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Mat m = random_int_matrix(FieldDesc::rational(), 2 + int(eng() % 4),
                              2 + int(eng() % 5), eng);
    Mat ns = nullspace(m);
    CHECK(rank_exact(m) + ns.rows() == m.cols());
    CHECK((m * ns.transpose()).is_zero());
  }
}

TEST_CASE("rational rank vs F_p rank, p = 1009") {
  std::mt19937_64 eng(13);
  int agree = 0, total = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int rows = 2 + int(eng() % 4), cols = 2 + int(eng() % 4);
    Mat mq(FieldDesc::rational(), rows, cols);
    Mat mp(FieldDesc::prime(1009), rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        long v = long(eng() % 2001) - 1000;
        mq.set(i, j, mpq_class(v));
        mp.set(i, j, mpq_class(v));
      }
    int rq = rank_exact(mq), rp = rank_exact(mp);
    ++total;
    if (rq == rp)
      ++agree;
    else
      CHECK(rq > rp);  // reduction can only lose rank
  }
  CHECK(agree >= total * 99 / 100);
}

TEST_CASE("det and inverse") {
  Mat m(FieldDesc::rational(), 2, 2);
  m.set(0, 0, 1);
  m.set(0, 1, 2);
  m.set(1, 0, 3);
  m.set(1, 1, 4);
  CHECK(det(m) == -2);
  CHECK(m * inverse(m) == Mat::identity(FieldDesc::rational(), 2));
  Mat sing(FieldDesc::rational(), 2, 2);
  CHECK(det(sing) == 0);
  CHECK_THROWS_AS(inverse(sing), field_error);

  Mat mp(FieldDesc::prime(5), 2, 2);
  mp.set(0, 0, 2);
  mp.set(1, 1, 3);
  CHECK(det(mp) == 1);  // 6 mod 5
  CHECK(mp * inverse(mp) == Mat::identity(FieldDesc::prime(5), 2));
}

TEST_CASE("rank_numeric") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-12;
  CHECK(rank_numeric(d, 1e-8) == 1);
  CHECK(rank_numeric(Eigen::MatrixXd::Zero(3, 3)) == 0);

  // random orthonormal 4x4: all singular values 1
  Eigen::MatrixXd g = Eigen::MatrixXd::Random(4, 4);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  CHECK(rank_numeric(q) == 4);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(2, 2, std::nan(""));
  CHECK_THROWS_AS(rank_numeric(bad), field_error);
  CHECK_THROWS_AS(rank_numeric(d, -1.0), field_error);
}

TEST_CASE("nullspace_numeric") {
  Eigen::MatrixXd m(1, 3);
  m << 1, 1, 0;
  Eigen::MatrixXd ns = nullspace_numeric(m);
  REQUIRE(ns.rows() == 2);
  CHECK((m * ns.transpose()).norm() < 1e-12);
}
