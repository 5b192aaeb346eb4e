#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "ih/perv.hpp"

using namespace ih;

namespace {

GradedModule sphere2_homology() {
  GradedModule g(RingSpec::Z());
  g.set(0, fg_free(RingSpec::Z(), 1));
  g.set(2, fg_free(RingSpec::Z(), 1));
  return g;
}

GradedModule rp2_homology() {
  GradedModule g(RingSpec::Z());
  g.set(0, fg_free(RingSpec::Z(), 1));
  g.set(1, fg_cyclic(RingSpec::Z(), 2));
  return g;
}

LinkData one_link(int codim, GradedModule g) {
  LinkData d;
  d.links[codim] = {std::move(g)};
  return d;
}

}  // namespace

TEST_CASE("presets and parsing") {
  Perversity z = Perversity::zero(5);
  CHECK(z.max_codim() == 5);
  CHECK(z.at(5) == 0);
  CHECK(z.traditional());
  CHECK(z.within_cone_range());
  CHECK_FALSE(z.is_super());

  Perversity lm = Perversity::preset("lower-middle", 7);
  CHECK(lm.at(2) == 0);
  CHECK(lm.at(3) == 0);
  CHECK(lm.at(4) == 1);
  CHECK(lm.at(7) == 2);
  CHECK(lm.traditional());

  Perversity um = Perversity::preset("upper-middle", 7);
  CHECK(um.at(2) == 0);
  CHECK(um.at(3) == 1);
  CHECK(um.at(4) == 1);
  CHECK(um.at(7) == 3);

  Perversity top = Perversity::preset("top", 6);
  CHECK(top.at(6) == 4);
  CHECK(top.within_cone_range());

  Perversity lst = Perversity::preset("0,0,1,3", 6);
  CHECK(lst.at(3) == 3);
  CHECK(lst.at(6) == 3);  // padded with the last value
  CHECK_FALSE(lst.growth_ok());
  CHECK_FALSE(lst.within_cone_range());
  CHECK(lst.super_at(3));

  CHECK_THROWS_AS(Perversity::preset("middle", 4), std::invalid_argument);
  CHECK_THROWS_AS(Perversity::preset("0,0,x", 4), std::invalid_argument);
  CHECK_THROWS_AS(Perversity({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Perversity::zero(3).at(4), std::out_of_range);
  CHECK(Perversity::preset("0,0,-2,5", 3).at(2) == -2);
}

TEST_CASE("super detection and normalization") {
  Perversity p = Perversity::preset("0,0,3,1", 3);
  CHECK(p.super_at(2));
  CHECK(p.is_super());
  CHECK_FALSE(p.super_at(3));
  Perversity n = normalize_super(p);
  CHECK(n.values() == std::vector<int>{0, 0, 1, 1});
  CHECK(n.super_at(2));  // k-1 is still above k-2
  CHECK(normalize_super(Perversity::preset("top", 5)) == Perversity::preset("top", 5));
  CHECK(p.str() == "(0,0,3,1)");
}

TEST_CASE("biperversity construction") {
  Perversity p = Perversity::zero(3);
  Perversity q = Perversity::preset("0,0,0,1", 3);

  ProductPerversity s0 = ProductPerversity::make(QMode::sum, p, q, 3, 3, 0);
  CHECK(s0.at(3, 3) == 1);
  CHECK(s0.at(3, 0) == 0);
  CHECK(s0.at(0, 3) == 1);

  ProductPerversity s2 = ProductPerversity::make(QMode::sum, p, q, 3, 3, 2);
  CHECK(s2.at(3, 3) == 3);
  CHECK(s2.at(3, 0) == 0);  // shift only applies to interior cells
  CHECK(s2.at(0, 3) == 1);

  Perversity lm = Perversity::preset("lower-middle", 6);
  ProductPerversity cgj = ProductPerversity::make(QMode::cgj, lm, lm, 3, 3);
  CHECK(cgj.at(3, 0) == lm.at(3));
  CHECK(cgj.at(3, 3) == lm.at(6));
  CHECK(cgj.at(3, 3) - lm.at(3) - lm.at(3) == 2);

  ProductPerversity king = ProductPerversity::make(QMode::king, lm, lm, 3, 3);
  CHECK(king.at(3, 2) == lm.at(3));
  CHECK(king.at(0, 2) == 0);

  ProductPerversity tbl({{0, 1}, {2, 3}});
  CHECK(tbl.at(1, 1) == 3);
  CHECK_THROWS_AS(tbl.at(2, 0), std::out_of_range);
  using Tbl = std::vector<std::vector<int>>;
  CHECK_THROWS_AS(ProductPerversity(Tbl{{-1}}), std::invalid_argument);
  CHECK(ProductPerversity(Tbl{{1}}).at(0, 0) == 1);
  CHECK_THROWS_AS(ProductPerversity(Tbl{{0, 1}, {2}}), std::invalid_argument);
  CHECK_THROWS_AS(ProductPerversity::make(QMode::cgj, p, q, 3, 3, 1), std::invalid_argument);
  CHECK(s2.fingerprint() != s0.fingerprint());
}

TEST_CASE("per cell conditions, torsion free links") {
  Perversity p = Perversity::zero(3);
  LinkData lx = one_link(3, sphere2_homology());
  ProductPerversity bi = ProductPerversity::make(QMode::sum, p, p, 3, 3, 2);
  ConditionVerdict v = classify_conditions(p, p, bi, {3}, {3}, lx, lx);
  CHECK(v.pass);
  REQUIRE(v.cells.size() == 3);  // (3,0), (0,3), (3,3)
  CHECK(v.cells[2].shift == 2);
  CHECK(v.cells[2].tag == CellTag::shift_two_torsion_free);
}

TEST_CASE("per cell conditions, torsion obstruction") {
  Perversity p = Perversity::zero(3);
  LinkData lx = one_link(3, rp2_homology());
  ProductPerversity bi = ProductPerversity::make(QMode::sum, p, p, 3, 3, 2);
  ConditionVerdict v = classify_conditions(p, p, bi, {3}, {3}, lx, lx);
  CHECK_FALSE(v.pass);
  CHECK(v.cells[2].tag == CellTag::shift_two_torsion);
  CHECK(v.cells[2].torsion_witness == fg_cyclic(RingSpec::Z(), 2));

  ProductPerversity bi1 = ProductPerversity::make(QMode::sum, p, p, 3, 3, 1);
  CHECK(classify_conditions(p, p, bi1, {3}, {3}, lx, lx).pass);
  ProductPerversity bi0 = ProductPerversity::make(QMode::sum, p, p, 3, 3, 0);
  CHECK(classify_conditions(p, p, bi0, {3}, {3}, lx, lx).pass);
}

TEST_CASE("per cell conditions, super sides and bad rows") {
  Perversity sup = Perversity::preset("0,0,0,2", 3);  // super at codim 3
  Perversity reg = Perversity::zero(3);
  LinkData lx = one_link(3, sphere2_homology());

  ProductPerversity one = ProductPerversity::make(QMode::sum, sup, reg, 3, 3, 1);
  ConditionVerdict v1 = classify_conditions(sup, reg, one, {3}, {3}, lx, lx);
  CHECK(v1.pass);
  CHECK(v1.cells[2].tag == CellTag::super_side);

  ProductPerversity two = ProductPerversity::make(QMode::sum, sup, reg, 3, 3, 2);
  CHECK_FALSE(classify_conditions(sup, reg, two, {3}, {3}, lx, lx).pass);

  // both sides super: only shift zero is tolerated
  ProductPerversity both1 = ProductPerversity::make(QMode::sum, sup, sup, 3, 3, 1);
  CHECK_FALSE(classify_conditions(sup, sup, both1, {3}, {3}, lx, lx).pass);
  ProductPerversity both0 = ProductPerversity::make(QMode::sum, sup, sup, 3, 3, 0);
  CHECK(classify_conditions(sup, sup, both0, {3}, {3}, lx, lx).pass);

  // a table whose boundary row disagrees with the factor perversity
  ProductPerversity bad({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}});
  ConditionVerdict vb = classify_conditions(reg, reg, bad, {3}, {3}, lx, lx);
  CHECK_FALSE(vb.pass);
  CHECK(vb.cells[0].tag == CellTag::boundary_bad);

  // negative interior shift
  ProductPerversity neg({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, -1}});
  ConditionVerdict vn = classify_conditions(reg, reg, neg, {3}, {3}, lx, lx);
  CHECK_FALSE(vn.pass);
  CHECK(vn.cells[2].tag == CellTag::off_range);
  CHECK(vn.str().find("FAIL") != std::string::npos);
}

TEST_CASE("local torsion freeness") {
  Perversity p = Perversity::zero(3);
  CHECK(is_locally_torsion_free(one_link(3, sphere2_homology()), p));
  CHECK_FALSE(is_locally_torsion_free(one_link(3, rp2_homology()), p));
  // consulted degree moves with the perversity: at p(3)=1 the test reads
  // degree 0, which is free for either link
  Perversity p1 = Perversity::preset("0,0,0,1", 3);
  CHECK(is_locally_torsion_free(one_link(3, rp2_homology()), p1));
}
