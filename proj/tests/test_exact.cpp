#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ih/exact.hpp"
#include "support/oracles.hpp"

using namespace ih;
using oracle_ref::ZMat;

namespace {

Mat from_zmat(const ZMat& a) {
  Mat m(oracle_ref::zrows(a), oracle_ref::zcols(a));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = mpq_class(a[i][j]);
  return m;
}

bool equal_mod(const Mat& a, const Mat& b, unsigned long p) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const mpz_class pp(p);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      mpq_class d = a.at(i, j) - b.at(i, j);
      if (d.get_den() != 1 || d.get_num() % pp != 0) return false;
    }
  return true;
}

void check_snf_contract(const Mat& m, const RingSpec& ring) {
  SnfResult s = smith_normal_form(m, ring, true);
  Mat lhs = s.u * m * s.v;
  if (ring.kind == RingSpec::Kind::prime_field)
    CHECK(equal_mod(lhs, s.d, ring.p));
  else
    CHECK(lhs == s.d);
  for (int i = 0; i < s.d.rows(); ++i)
    for (int j = 0; j < s.d.cols(); ++j)
      if (i != j) CHECK(s.d.at(i, j) == 0);
  for (int i = 0; i + 1 < s.rank; ++i) {
    CHECK(s.d.at(i, i) != 0);
    if (ring.kind == RingSpec::Kind::integers)
      CHECK(s.d.at(i + 1, i + 1).get_num() % s.d.at(i, i).get_num() == 0);
  }
  const int n = std::min(s.d.rows(), s.d.cols());
  for (int i = s.rank; i < n; ++i) CHECK(s.d.at(i, i) == 0);

  if (ring.kind == RingSpec::Kind::integers) {
    mpq_class du = det(s.u), dv = det(s.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
  } else if (ring.kind == RingSpec::Kind::prime_field) {
    CHECK(det(s.u).get_num() % mpz_class(ring.p) != 0);
    CHECK(det(s.v).get_num() % mpz_class(ring.p) != 0);
  } else {
    CHECK(det(s.u) != 0);
    CHECK(det(s.v) != 0);
  }

  const Mat iu = Mat::identity(m.rows()), iv = Mat::identity(m.cols());
  if (ring.kind == RingSpec::Kind::prime_field) {
    CHECK(equal_mod(s.u * s.u_inv, iu, ring.p));
    CHECK(equal_mod(s.v * s.v_inv, iv, ring.p));
  } else {
    CHECK(s.u * s.u_inv == iu);
    CHECK(s.v * s.v_inv == iv);
  }
}

}  // namespace

TEST_CASE("ring parsing") {
  CHECK(parse_ring("Z") == RingSpec::Z());
  CHECK(parse_ring("Q") == RingSpec::Q());
  CHECK(parse_ring("Zp:5") == RingSpec::Zp(5));
  CHECK(parse_ring("Zp:2").name() == "Z/2");
  CHECK_THROWS_AS(parse_ring("Zp:4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring("Zp:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring("R"), std::invalid_argument);
  CHECK_THROWS_AS(RingSpec::Zp(1), std::invalid_argument);
}

TEST_CASE("smith form of a fixed matrix") {
  Mat m = from_zmat({{2, 4}, {6, 8}});
  SnfResult s = smith_normal_form(m, RingSpec::Z());
  REQUIRE(s.rank == 2);
  CHECK(s.diagonal == std::vector<mpz_class>{2, 4});
  CHECK(det(m) == -8);

  SnfResult sq = smith_normal_form(m, RingSpec::Q());
  CHECK(sq.rank == 2);
  CHECK(sq.diagonal == std::vector<mpz_class>{1, 1});

  SnfResult s2 = smith_normal_form(m, RingSpec::Zp(2));
  CHECK(s2.rank == 0);

  Mat t = from_zmat({{2, 1}, {0, 2}});
  CHECK(smith_normal_form(t, RingSpec::Zp(2)).rank == 1);
  CHECK(smith_normal_form(t, RingSpec::Z()).diagonal == std::vector<mpz_class>{1, 4});
}

TEST_CASE("smith form rejects fractions over Z") {
  Mat m(1, 1);
  m.at(0, 0) = mpq_class(1, 2);
  CHECK_THROWS_AS(smith_normal_form(m, RingSpec::Z()), std::invalid_argument);
  CHECK_NOTHROW(smith_normal_form(m, RingSpec::Q()));
}

TEST_CASE("smith form against the reference on random matrices") {
  std::mt19937_64 rng(20240811);
  for (int iter = 0; iter < 160; ++iter) {
    const int rows = 1 + int(rng() % 6), cols = 1 + int(rng() % 6);
    ZMat a = oracle_ref::random_zmat(rng, rows, cols, -9, 9, 0.7);
    Mat m = from_zmat(a);

    SnfResult s = smith_normal_form(m, RingSpec::Z());
    CHECK(s.diagonal == oracle_ref::naive_snf_diagonal(a));
    CHECK(s.diagonal == oracle_ref::elim_snf_diagonal(a));
    CHECK(s.rank == oracle_ref::naive_rank_q(a));
    CHECK(smith_normal_form(m, RingSpec::Q()).rank == oracle_ref::naive_rank_q(a));
    CHECK(smith_normal_form(m, RingSpec::Zp(2)).rank == oracle_ref::naive_rank_p(a, 2));
    CHECK(smith_normal_form(m, RingSpec::Zp(5)).rank == oracle_ref::naive_rank_p(a, 5));

    if (iter % 4 == 0) {
      check_snf_contract(m, RingSpec::Z());
      check_snf_contract(m, RingSpec::Q());
      check_snf_contract(m, RingSpec::Zp(3));
    }
  }
}

TEST_CASE("smith form is deterministic") {
  std::mt19937_64 rng(77);
  ZMat a = oracle_ref::random_zmat(rng, 5, 5, -9, 9, 0.8);
  Mat m = from_zmat(a);
  SnfResult s1 = smith_normal_form(m, RingSpec::Z(), true);
  SnfResult s2 = smith_normal_form(m, RingSpec::Z(), true);
  CHECK(s1.u == s2.u);
  CHECK(s1.d == s2.d);
  CHECK(s1.v == s2.v);
  CHECK(s1.u_inv == s2.u_inv);
}

TEST_CASE("determinants") {
  CHECK(det(Mat::identity(4)) == 1);
  CHECK(det(Mat(0, 0)) == 1);
  Mat m = from_zmat({{0, 2}, {3, 0}});
  CHECK(det(m) == -6);
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 40; ++iter) {
    ZMat a = oracle_ref::random_zmat(rng, 4, 4, -5, 5, 0.8);
    const bool singular = oracle_ref::naive_rank_q(a) < 4;
    CHECK((det(from_zmat(a)) == 0) == singular);
  }
}
