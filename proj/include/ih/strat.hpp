#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ih/chaincx.hpp"
#include "ih/ring.hpp"

namespace ih {

// Vertex ids in strictly increasing order.
using Simplex = std::vector<int>;

struct SimplexHash {
  size_t operator()(const Simplex& s) const;
};

// Simplicial complex with a vertex-label filtration: label j means the vertex
// first appears in the j-skeleton piece X^j, 0 <= j <= formal_dim. Every
// filtration piece is the full subcomplex on the vertices with label <= j, so
// the allowability bookkeeping can count vertices. A simplex sits in the
// stratum of its most regular vertex (max label).
class FilteredComplex {
 public:
  explicit FilteredComplex(int formal_dim);  // -1 builds the empty complex

  int formal_dim() const { return n_; }
  int add_vertex(int label);
  void add_simplex(const Simplex& s);  // inserts all faces too
  // Raw insert for bulk builders whose output is already face closed; no
  // duplicate check here, finalize() validates both properties anyway.
  void push_raw(const Simplex& s);
  void finalize();
  bool finalized() const { return finalized_; }

  int vertex_count() const { return int(labels_.size()); }
  int vertex_label(int v) const;
  int top_dim() const;  // largest dimension carrying a simplex, -1 if none
  long long count(int d) const;
  long long total_count() const;
  const std::vector<Simplex>& simplices(int d) const;
  long index_of(const Simplex& s) const;  // -1 when absent
  bool contains(const Simplex& s) const { return index_of(s) >= 0; }

  int stratum_label(const Simplex& s) const;
  int vertex_codim(int v) const { return n_ - vertex_label(v); }
  std::vector<int> occupied_codims() const;  // singular stratum codims, ascending
  int max_occupied_codim() const;

  uint64_t fingerprint() const;
  std::string summary() const;

 private:
  void require_finalized(const char* op) const;

  int n_ = -1;
  bool finalized_ = false;
  std::vector<int> labels_;
  std::vector<std::vector<Simplex>> by_dim_;
  std::unordered_map<Simplex, long, SimplexHash> index_;
};

// Two independent codimension labels per vertex, for spaces carrying a
// bifiltration (products, joins). The carrier holds the total filtration
// labels; allowability and stratum accounting use the pairs. A simplex lives
// over the componentwise minimum of its vertex pairs; its total-filtration
// stratum is (m - k) + (n - l) - link_offset for that minimum (k, l).
struct BifilteredComplex {
  FilteredComplex carrier{-1};
  int m = 0, n = 0;      // nominal factor dimensions
  int link_offset = 0;   // 0 for products, 1 for joins
  std::vector<std::array<int, 2>> pair;  // per vertex (codim1, codim2)

  std::array<int, 2> simplex_pair(const Simplex& s) const;
  int stratum_label(const Simplex& s) const;
  std::vector<std::array<int, 2>> occupied_pairs() const;  // singular, ascending
  uint64_t fingerprint() const;
  std::string summary() const;
};

// Cone and suspension push every label up by one and put the new apexes in
// the 0-skeleton; the apex ids come after the input vertices.
FilteredComplex cone(const FilteredComplex& base);
FilteredComplex suspension(const FilteredComplex& base);

// Link of a vertex / of a simplex, as the filtered complex it inherits:
// labels drop by the number of removed vertices, clamped at 0, and the
// formal dimension drops the same way.
FilteredComplex vertex_link(const FilteredComplex& x, int v);
FilteredComplex simplex_link(const FilteredComplex& x, const Simplex& s);

// Staircase triangulation of the product. Vertices are pairs, id
// v * |vertices of y| + w; each pair of simplices contributes one simplex per
// monotone staircase through the grid of their vertices.
BifilteredComplex product(const FilteredComplex& x, const FilteredComplex& y);

// Join: simplices are disjoint unions of a simplex on each side (either side
// may be empty, not both). Nominal dimensions are the cone dimensions
// k+1, l+1 and the pair of a factor vertex keeps its own codimension and
// takes the full nominal codimension on the other side.
BifilteredComplex join_complex(const FilteredComplex& x, const FilteredComplex& y);

// Barycentric subdivision: one vertex per simplex, labelled by the stratum of
// that simplex; simplices are chains of proper inclusions.
FilteredComplex barycentric_subdivision(const FilteredComplex& x);
BifilteredComplex barycentric_subdivision(const BifilteredComplex& x);

BoundedChainComplex boundary_matrices(const FilteredComplex& x, const RingSpec& ring);
BoundedChainComplex boundary_matrices(const BifilteredComplex& x, const RingSpec& ring);

struct StratumReport {
  bool closure_ok = true;        // faces present (always true after finalize)
  bool pure = true;              // every simplex is a face of a top one
  bool no_codim_one = true;      // no occupied stratum of codimension 1
  bool skeleta_ok = true;        // dim of each piece within its bound
  std::vector<std::string> problems;
  std::vector<std::pair<int, long long>> stratum_sizes;  // label -> simplex count
  bool ok() const { return closure_ok && pure && no_codim_one && skeleta_ok; }
  std::string str() const;
};

StratumReport validate_space(const FilteredComplex& x);
StratumReport validate_space(const BifilteredComplex& x);

}  // namespace ih
