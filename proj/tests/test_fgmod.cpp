#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ih/fgmod.hpp"

using namespace ih;

namespace {

const RingSpec Z = RingSpec::Z();
const RingSpec Q = RingSpec::Q();

FgModule mod(long rank, std::vector<long> tors, RingSpec ring = RingSpec::Z()) {
  FgModule m = fg_free(ring, rank);
  for (long t : tors) m = direct_sum(m, fg_cyclic(ring, t));
  return m;
}

GradedModule graded(std::vector<FgModule> degs, RingSpec ring = RingSpec::Z()) {
  GradedModule g(ring);
  for (int i = 0; i < int(degs.size()); ++i) g.set(i, degs[i]);
  return g;
}

}  // namespace

TEST_CASE("invariant factor normalization") {
  using V = std::vector<mpz_class>;
  CHECK(normalize_invariant_factors({6, 4}) == V{2, 12});
  CHECK(normalize_invariant_factors({2, 2}) == V{2, 2});
  CHECK(normalize_invariant_factors({1, 3, 1}) == V{3});
  CHECK(normalize_invariant_factors({2, 3}) == V{6});
  CHECK(normalize_invariant_factors({4, 6, 10}) == V{2, 2, 60});
  CHECK(normalize_invariant_factors({}) == V{});
  CHECK_THROWS_AS(normalize_invariant_factors({0}), std::invalid_argument);
}

TEST_CASE("module formatting") {
  CHECK(fg_zero(Z).str() == "0");
  CHECK(mod(1, {}).str() == "Z");
  CHECK(mod(2, {2, 4}).str() == "Z^2 + Z/2 + Z/4");
  CHECK(mod(0, {2, 2}).str() == "(Z/2)^2");
  CHECK(fg_free(Q, 3).str() == "Q^3");
  CHECK(fg_free(RingSpec::Zp(5), 2).str() == "(Z/5)^2");
}

TEST_CASE("cyclic modules by ring") {
  CHECK(fg_cyclic(Z, 4) == mod(0, {4}));
  CHECK(fg_cyclic(Z, 1).is_zero());
  CHECK(fg_cyclic(Z, 0) == fg_free(Z, 1));
  CHECK(fg_cyclic(Q, 7).is_zero());
  CHECK(fg_cyclic(RingSpec::Zp(2), 6) == fg_free(RingSpec::Zp(2), 1));
  CHECK(fg_cyclic(RingSpec::Zp(2), 3).is_zero());
}

TEST_CASE("tensor products") {
  CHECK(tensor(mod(1, {2}), mod(1, {3})) == mod(1, {6}));
  CHECK(tensor(mod(2, {}), mod(3, {})) == mod(6, {}));
  CHECK(tensor(mod(0, {4}), mod(0, {6})) == mod(0, {2}));
  CHECK(tensor(mod(0, {2}), mod(2, {})) == mod(0, {2, 2}));
  CHECK(tensor(fg_zero(Z), mod(5, {2})).is_zero());
  CHECK_THROWS_AS(tensor(fg_free(Z, 1), fg_free(Q, 1)), std::invalid_argument);
}

TEST_CASE("torsion products") {
  CHECK(torsion_product(mod(0, {4}), mod(0, {6})) == mod(0, {2}));
  CHECK(torsion_product(mod(3, {}), mod(0, {6})).is_zero());
  CHECK(torsion_product(mod(1, {2}), mod(1, {2})) == mod(0, {2}));
  CHECK(torsion_product(fg_free(Q, 2), fg_free(Q, 3)).is_zero());
}

TEST_CASE("graded module basics") {
  GradedModule g(Z);
  g.set(2, mod(1, {3}));
  CHECK(g.at(0).is_zero());
  CHECK(g.at(2) == mod(1, {3}));
  CHECK(g.at(17).is_zero());
  CHECK(g.top_nonzero() == 2);
  CHECK(shift_degrees(g, 2).at(4) == mod(1, {3}));
  CHECK_THROWS_AS(shift_degrees(g, -3), std::invalid_argument);
  CHECK(g.str() == "(0, 0, Z + Z/3)");
}

TEST_CASE("kunneth right hand side on tori") {
  GradedModule t2 = graded({mod(1, {}), mod(2, {}), mod(1, {})});
  GradedModule t4 = kunneth_rhs(t2, t2);
  CHECK(t4 == graded({mod(1, {}), mod(4, {}), mod(6, {}), mod(4, {}), mod(1, {})}));
}

TEST_CASE("kunneth right hand side with torsion") {
  GradedModule rp2 = graded({mod(1, {}), mod(0, {2}), mod(0, {})});
  GradedModule prod = kunneth_rhs(rp2, rp2);
  CHECK(prod == graded({mod(1, {}), mod(0, {2, 2}), mod(0, {2}), mod(0, {2}), mod(0, {})}));

  GradedModule s1 = graded({mod(1, {}), mod(1, {})});
  CHECK(kunneth_rhs(rp2, s1) ==
        graded({mod(1, {}), mod(1, {2}), mod(0, {2}), mod(0, {})}));
}

TEST_CASE("degree zero reduction") {
  GradedModule g = graded({mod(2, {2}), mod(1, {})});
  GradedModule r = reduce_degree_zero(g);
  CHECK(r.at(0) == mod(1, {2}));
  CHECK(r.at(1) == mod(1, {}));
  GradedModule torsion_only = graded({mod(0, {2})});
  CHECK_THROWS_AS(reduce_degree_zero(torsion_only), std::invalid_argument);
}
