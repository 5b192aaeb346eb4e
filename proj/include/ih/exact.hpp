#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "ih/ring.hpp"

namespace ih {

// Dense matrix with exact rational entries, row-major.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(size_t(rows) * cols) {}
  static Mat identity(int n);

  int rows() const { return r_; }
  int cols() const { return c_; }
  mpq_class& at(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const mpq_class& at(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool is_integral() const;
  bool is_zero() const;
  Mat operator*(const Mat& o) const;
  Mat transposed() const;
  std::string str() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<mpq_class> a_;
};

// u * input * v == d with d diagonal. Over Z the diagonal entries are
// positive and each divides the next; over a field they are 1. u and v are
// invertible over the ring (unimodular over Z). u_inv and v_inv are filled
// only when requested.
struct SnfResult {
  Mat u, d, v;
  Mat u_inv, v_inv;
  int rank = 0;
  std::vector<mpz_class> diagonal;  // the rank many nonzero diagonal entries
};

// Deterministic: pivots are chosen by minimal absolute value over the active
// submatrix, ties broken by lowest (row, col). Over Z/p entries are reduced
// to [0, p) first and "absolute value" means that representative.
SnfResult smith_normal_form(const Mat& m, const RingSpec& ring, bool want_inverses = false);

mpq_class det(const Mat& m);

}  // namespace ih
