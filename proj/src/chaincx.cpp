#include "ih/chaincx.hpp"

#include <string>

namespace ih {

void BoundedChainComplex::validate() const {
  if (dims.empty()) throw std::invalid_argument("chain complex with no degrees");
  if (dims.size() != bnd.size()) throw std::invalid_argument("chain complex: dims/bnd length mismatch");
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 0) throw std::invalid_argument("chain complex: negative dimension");
    const int want_rows = i == 0 ? 0 : int(dims[i - 1]);
    if (bnd[i].rows() != want_rows || bnd[i].cols() != int(dims[i]))
      throw std::invalid_argument("chain complex: boundary shape mismatch in degree " + std::to_string(i));
  }
  for (size_t i = 2; i < dims.size(); ++i) {
    sparse::SMat sq = sparse::mul(bnd[i - 1], bnd[i]);
    if (ring.kind == RingSpec::Kind::prime_field) {
      const mpz_class p(ring.p);
      for (int j = 0; j < sq.cols(); ++j)
        for (const auto& e : sq.col(j))
          if (e.val % p != 0)
            throw std::invalid_argument("chain complex: boundary squared nonzero in degree " + std::to_string(i));
    } else if (!sq.is_zero()) {
      throw std::invalid_argument("chain complex: boundary squared nonzero in degree " + std::to_string(i));
    }
  }
}

GradedModule homology_of_complex(const BoundedChainComplex& c) {
  const int top = c.top();
  if (top < 0) throw std::invalid_argument("chain complex with no degrees");
  std::vector<sparse::DiagResult> diag(top + 2);
  for (int i = 1; i <= top; ++i) diag[i] = sparse::invariant_factors(c.bnd[i], c.ring);

  GradedModule out(c.ring);
  for (int i = 0; i <= top; ++i) {
    const long r_out = i == 0 ? 0 : diag[i].rank;
    const long r_in = i == top ? 0 : diag[i + 1].rank;
    FgModule h{c.ring, c.dims[i] - r_out - r_in, i == top ? std::vector<mpz_class>{} : diag[i + 1].factors};
    if (h.rank < 0) throw std::logic_error("homology rank went negative");
    out.set(i, std::move(h));
  }
  return out;
}

}  // namespace ih
