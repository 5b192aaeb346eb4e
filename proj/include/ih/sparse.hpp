#pragma once

#include <gmpxx.h>

#include <vector>

#include "ih/exact.hpp"
#include "ih/ring.hpp"

namespace ih::sparse {

struct Entry {
  int row;
  mpz_class val;
};

// Column-major sparse matrix over Z; each column sorted by row, no zero
// values stored. Over Q the same integer data is used (integral bases),
// over Z/p entries are interpreted mod p by the eliminations.
class SMat {
 public:
  SMat() = default;
  SMat(int rows, int cols) : r_(rows), cols_(cols) {}

  int rows() const { return r_; }
  int cols() const { return int(cols_.size()); }
  std::vector<Entry>& col(int j) { return cols_[j]; }
  const std::vector<Entry>& col(int j) const { return cols_[j]; }

  void add(int r, int c, mpz_class v);  // accumulate, any order
  void finalize();                      // sort columns, combine, drop zeros
  long long nnz() const;
  bool is_zero() const;
  mpz_class get(int r, int c) const;

  Mat dense() const;
  static SMat from_dense(const Mat& m);  // entries must be integral
  bool operator==(const SMat& o) const { return r_ == o.r_ && cols_ == o.cols_; }

 private:
  int r_ = 0;
  std::vector<std::vector<Entry>> cols_;
};

inline bool operator==(const Entry& a, const Entry& b) { return a.row == b.row && a.val == b.val; }

SMat mul(const SMat& a, const SMat& b);
std::vector<mpz_class> apply(const SMat& a, const std::vector<mpz_class>& x);  // dense vector

struct DiagResult {
  long rank = 0;
  std::vector<mpz_class> factors;  // invariant factor chain, units dropped
};

// Fraction-free elimination by unimodular row/column operations; pivot order
// Markowitz-flavoured but any order is sound. Over fields factors is empty.
DiagResult invariant_factors(SMat m, const RingSpec& ring);
long rank_of(SMat m, const RingSpec& ring);

// Basis of ker(m) as columns over the domain. Over Z the basis spans the
// kernel as a direct summand (saturated), via column operations on [m; I].
SMat kernel_basis(const SMat& m, const RingSpec& ring);

// Column echelon form with pivot bookkeeping for exact membership solves.
// Columns are reported in retirement order: column t has a pivot row at
// which every later column vanishes, so back substitution in order is exact.
struct Echelon {
  SMat k;
  std::vector<int> pivot_row;
  RingSpec ring;
};
Echelon echelonize_columns(SMat k, const RingSpec& ring);

// Writes x in the column span of e.k; returns false when x is not in the
// span (including non-integral coordinates over Z). x is consumed.
bool solve_in_span(const Echelon& e, std::vector<mpz_class> x, std::vector<mpz_class>& coords);

}  // namespace ih::sparse
