#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "ih/ring.hpp"

namespace ih {

// Finitely generated module over the coefficient ring, in invariant factor
// form: free rank plus a divisibility chain of torsion orders (each >= 2,
// each dividing the next). Over a field the torsion list is always empty.
struct FgModule {
  RingSpec ring;
  long rank = 0;
  std::vector<mpz_class> torsion;

  bool is_zero() const { return rank == 0 && torsion.empty(); }
  bool operator==(const FgModule& o) const;
  bool operator!=(const FgModule& o) const { return !(*this == o); }
  std::string str() const;
};

FgModule fg_zero(const RingSpec& ring);
FgModule fg_free(const RingSpec& ring, long rank);
FgModule fg_cyclic(const RingSpec& ring, const mpz_class& order);
FgModule direct_sum(const FgModule& a, const FgModule& b);
FgModule tensor(const FgModule& a, const FgModule& b);
FgModule torsion_product(const FgModule& a, const FgModule& b);

// Turns an arbitrary multiset of nonzero orders into the invariant factor
// chain of the same module: pairwise gcd/lcm until every entry divides the
// next, units dropped.
std::vector<mpz_class> normalize_invariant_factors(std::vector<mpz_class> v);

// Degreewise modules, index = degree, zero beyond the stored range.
struct GradedModule {
  RingSpec ring;
  std::vector<FgModule> deg;

  explicit GradedModule(const RingSpec& r = RingSpec::Z()) : ring(r) {}
  FgModule at(int i) const;  // zero module outside the stored range
  void set(int i, FgModule m);
  int top_nonzero() const;  // -1 when everything vanishes
  bool operator==(const GradedModule& o) const;
  bool operator!=(const GradedModule& o) const { return !(*this == o); }
  std::string str() const;
};

GradedModule shift_degrees(const GradedModule& a, int by);
GradedModule direct_sum(const GradedModule& a, const GradedModule& b);

// Degreewise (tensor in degree i) + (torsion product in degree i-1), the
// right-hand side of the ordinary Kunneth formula.
GradedModule kunneth_rhs(const GradedModule& a, const GradedModule& b);

// Splits off one free summand in degree 0 (reduced homology of a nonempty
// space). Throws if degree 0 has no free summand.
GradedModule reduce_degree_zero(const GradedModule& a);

}  // namespace ih
