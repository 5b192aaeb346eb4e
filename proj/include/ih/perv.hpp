#pragma once

#include <map>
#include <string>
#include <vector>

#include "ih/fgmod.hpp"

namespace ih {

// Perversity values indexed by stratum codimension. Entry 0 is always 0;
// values are otherwise arbitrary integers ("loose"). Reading past the stored
// table throws, which is how undersized tables surface as errors.
class Perversity {
 public:
  explicit Perversity(std::vector<int> vals);
  static Perversity zero(int max_codim);
  static Perversity preset(const std::string& name, int max_codim);  // also parses "0,0,1,…"

  int max_codim() const { return int(v_.size()) - 1; }
  int at(int k) const;
  bool growth_ok() const;              // p(k) <= p(k+1) <= p(k)+1 for k >= 2
  bool traditional() const;            // growth_ok and p(2) = 0 and nonnegative
  bool super_at(int k) const { return at(k) > k - 2; }
  bool is_super() const;               // super at some codim >= 2
  bool within_cone_range() const;      // p(k) <= k-2 for all k >= 2
  const std::vector<int>& values() const { return v_; }
  std::string str() const;
  bool operator==(const Perversity& o) const { return v_ == o.v_; }

 private:
  std::vector<int> v_;
};

// Caps values at k-1; larger values give the same intersection homology
// (the chain groups themselves can grow, the homology does not move).
Perversity normalize_super(const Perversity& p);

enum class QMode { sum, cgj, king, table };
QMode parse_q_mode(const std::string& s);
std::string q_mode_name(QMode m);

// Biperversity on codimension pairs, table of size (maxk+1) x (maxl+1).
class ProductPerversity {
 public:
  ProductPerversity(std::vector<std::vector<int>> table);
  static ProductPerversity make(QMode mode, const Perversity& p, const Perversity& q, int maxk,
                                int maxl, int interior_shift = 0);

  int maxk() const { return int(t_.size()) - 1; }
  int maxl() const { return t_.empty() ? -1 : int(t_[0].size()) - 1; }
  int at(int k, int l) const;
  std::string str() const;
  bool operator==(const ProductPerversity& o) const { return t_ == o.t_; }
  uint64_t fingerprint() const;

 private:
  std::vector<std::vector<int>> t_;
};

// Intersection homology of the links of each side, keyed by stratum
// codimension; one entry per stratum component.
struct LinkData {
  std::map<int, std::vector<GradedModule>> links;
};

enum class CellTag {
  boundary_ok,
  boundary_bad,
  shift_zero,
  shift_one,
  shift_two_torsion_free,
  shift_two_torsion,
  super_side,
  off_range,
};

struct CellVerdict {
  int k = 0, l = 0;
  int shift = 0;
  CellTag tag = CellTag::shift_zero;
  bool pass = false;
  FgModule torsion_witness;
  std::string note;
};

struct ConditionVerdict {
  bool pass = false;
  std::vector<CellVerdict> cells;
  std::string str() const;
};

// Decides whether the product formula is guaranteed for this biperversity,
// cell by occupied cell: boundary rows must restrict to the factor
// perversities, interior cells may sit 0, 1 or 2 above the sum, where 2
// additionally needs the relevant link torsion product to vanish and any
// cell with a super side only tolerates 0 (both sides) or 0/1 (one side).
ConditionVerdict classify_conditions(const Perversity& p, const Perversity& q,
                                     const ProductPerversity& bi, const std::vector<int>& occ_k,
                                     const std::vector<int>& occ_l, const LinkData& lx,
                                     const LinkData& ly);

// True when every link used by the shift-two test is torsion free in the
// single degree the test consults.
bool is_locally_torsion_free(const LinkData& lx, const Perversity& p);

}  // namespace ih
