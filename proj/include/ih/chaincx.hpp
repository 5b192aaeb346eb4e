#pragma once

#include <vector>

#include "ih/fgmod.hpp"
#include "ih/ring.hpp"
#include "ih/sparse.hpp"

namespace ih {

// Chain complex concentrated in degrees 0..top. bnd[i] maps degree i to
// degree i-1; bnd[0] has zero rows. Entries are integers; over Z/p they are
// read mod p, over Q an integral basis is assumed (which every complex
// produced here has).
struct BoundedChainComplex {
  RingSpec ring;
  std::vector<long> dims;
  std::vector<sparse::SMat> bnd;

  int top() const { return int(dims.size()) - 1; }
  void validate() const;  // shape and boundary-squared-zero, throws
};

GradedModule homology_of_complex(const BoundedChainComplex& c);

}  // namespace ih
