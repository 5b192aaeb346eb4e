#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ih/chaincx.hpp"
#include "ih/perv.hpp"
#include "ih/strat.hpp"

namespace ih {

enum class CoeffRegime { constant, stratified_zero, saralegi };

CoeffRegime parse_regime(const std::string& s);  // "constant" | "r0" | "saralegi"
std::string regime_name(CoeffRegime r);

struct CoefficientSpec {
  RingSpec ring = RingSpec::Z();
  CoeffRegime regime = CoeffRegime::constant;
  std::string str() const;
};

// Uniform allowability lens over both arities. A single-filtered space is
// seen as bifiltered with vertex pairs (codim, 0) and Q(k, 0) = p(k).
// Holds references; the viewed complex and table must outlive the view.
class StratView {
 public:
  StratView(const FilteredComplex& x, const Perversity& p);
  StratView(const BifilteredComplex& x, const ProductPerversity& q);

  const FilteredComplex& carrier() const { return *carrier_; }
  bool arity_two() const { return arity_two_; }
  std::array<int, 2> vertex_pair(int v) const { return pairs_[v]; }
  std::array<int, 2> simplex_pair(const Simplex& s) const;
  int q_at(int k, int l) const;
  int max_k() const { return int(q_.size()) - 1; }
  int max_l() const { return int(q_[0].size()) - 1; }
  bool top_stratum(const Simplex& s) const;  // does not touch the singular set
  // Perversity value in the range where the cone formula breaks down.
  bool bad_stratum_value(int k, int l) const;
  std::uint64_t fingerprint() const;

  struct StratumRow {
    int k = 0, l = 0;
    long dim = 0;    // exact dimension of the open-stratum preimage
    long bound = 0;  // i - k - l + Q(k, l)
  };
  // One row per stratum the simplex actually meets, deepest pairs included.
  std::vector<StratumRow> stratum_rows(const Simplex& s) const;
  bool allowable(const Simplex& s) const;

 private:
  void check_coverage(const std::string& what) const;

  const FilteredComplex* carrier_ = nullptr;
  bool arity_two_ = false;
  std::vector<std::array<int, 2>> pairs_;
  std::vector<std::vector<int>> q_;
  std::uint64_t fp_ = 0;
};

struct AllowabilityEntry {
  bool allowed = true;
  int bind_k = 0, bind_l = 0;  // stratum with the least slack
  long slack = 0;
  std::vector<StratView::StratumRow> rows;
  std::string str() const;
};

AllowabilityEntry simplex_allowability(const StratView& view, const Simplex& s);

// Chain subcomplex cut out by an allowability condition, with a basis that is
// a direct summand of the simplicial chain group in each degree.
struct IntersectionComplex {
  RingSpec ring;
  CoeffRegime regime = CoeffRegime::constant;
  BoundedChainComplex cx;
  // basis[d]: one column per generator, coordinates over the degree-d
  // simplices of the carrier.
  std::vector<sparse::SMat> basis;
  bool audited = false;
};

IntersectionComplex intersection_complex(const FilteredComplex& x, const Perversity& p,
                                         const CoefficientSpec& coeff);
IntersectionComplex intersection_complex(const BifilteredComplex& x, const ProductPerversity& q,
                                         const CoefficientSpec& coeff);

// Relative-style quotient complex that restores the cone formula for high
// perversity values: chains allowable for p, corrected along the closure of
// the strata whose value exceeds the classical range by a quotient against
// (p+1)-allowable chains supported there. Single perversities only.
IntersectionComplex saralegi_complex(const FilteredComplex& x, const Perversity& p,
                                     const RingSpec& ring);

GradedModule intersection_homology(const FilteredComplex& x, const Perversity& p,
                                   const CoefficientSpec& coeff);
GradedModule intersection_homology(const BifilteredComplex& x, const ProductPerversity& q,
                                   const CoefficientSpec& coeff);

// A is the full subcomplex spanned by the vertices v with in_a[v] != 0; the
// result is the homology of the allowable chains modulo those lying in A.
GradedModule relative_intersection_homology(const FilteredComplex& x, const Perversity& p,
                                            const CoefficientSpec& coeff,
                                            const std::vector<char>& in_a);

struct Chain {
  int degree = -1;
  std::vector<mpz_class> coord;  // over the carrier simplices of that degree
};

Chain boundary_chain(const FilteredComplex& x, const Chain& c);

// True when the chain and its boundary are supported on allowable simplices.
bool chain_allowable(const StratView& view, const Chain& c);

// Simplicial cross product of allowable chains, landing in the staircase
// triangulation of the product. Requires Q(k, l) >= p(k) + q(l) everywhere;
// the output is checked to be Q-allowable.
Chain cross_chain(const StratView& vx, const Chain& xi, const StratView& vy, const Chain& eta,
                  const BifilteredComplex& xy, const ProductPerversity& q);

}  // namespace ih
