#pragma once

// Test helpers for building filtered complexes out of plain vertex lists.

#include <vector>

#include "ih/chaincx.hpp"
#include "ih/strat.hpp"
#include "support/oracles.hpp"

namespace testspace {

// All vertices in the regular stratum (label = formal dimension).
inline ih::FilteredComplex trivially_filtered(const std::vector<std::vector<int>>& gens, int n) {
  int maxv = -1;
  for (const auto& s : gens)
    for (int v : s) maxv = std::max(maxv, v);
  ih::FilteredComplex x(n);
  for (int v = 0; v <= maxv; ++v) x.add_vertex(n);
  for (const auto& s : gens) x.add_simplex(s);
  x.finalize();
  return x;
}

inline ih::FilteredComplex point_space() {
  ih::FilteredComplex x(0);
  x.add_vertex(0);
  x.add_simplex({0});
  x.finalize();
  return x;
}

inline ih::GradedModule homology_of(const ih::FilteredComplex& x, const ih::RingSpec& ring) {
  return homology_of_complex(boundary_matrices(x, ring));
}

inline ih::GradedModule homology_of(const ih::BifilteredComplex& x, const ih::RingSpec& ring) {
  return homology_of_complex(boundary_matrices(x, ring));
}

inline oracle_ref::ZMat zmat_of(const ih::sparse::SMat& m) {
  oracle_ref::ZMat out(size_t(m.rows()), std::vector<mpz_class>(size_t(m.cols())));
  for (int j = 0; j < m.cols(); ++j)
    for (const auto& e : m.col(j)) out[size_t(e.row)][size_t(j)] = e.val;
  return out;
}

}  // namespace testspace
