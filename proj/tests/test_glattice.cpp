#include <doctest.h>

#include "support.hpp"
#include "tori/error.hpp"

using namespace tori;

TEST_CASE("action tables are checked") {
  auto g = group_from_shorthand("C4");
  // an order-3 matrix cannot give a C4 action
  IntMatrix rot{{0, -1}, {1, -1}};
  CHECK_THROWS_AS(GLattice::from_generator_action(g, {rot}), InvalidInput);
  IntMatrix quarter{{0, -1}, {1, 0}};
  auto m = GLattice::from_generator_action(g, {quarter});
  CHECK(m.rank() == 2);
  CHECK(m.action(g->parse_word("g^2")) == IntMatrix{{-1, 0}, {0, -1}});

  // a forged table: correct on the generator, wrong elsewhere
  auto table = m.action_table();
  table[2] = IntMatrix::identity(2);
  CHECK_THROWS_AS(GLattice(g, table), InvalidInput);
  table = m.action_table();
  table[0] = quarter;
  CHECK_THROWS_AS(GLattice(g, table), InvalidInput);
}

TEST_CASE("permutation lattices") {
  auto g = group_from_shorthand("D8");
  auto s = support::sub(g, {g->parse_word("s")});
  auto p = permutation_lattice(s);
  CHECK(p.rank() == 4);
  for (int x = 0; x < 8; ++x) {
    const auto& a = p.action(x);
    // permutation matrices: one 1 per column
    for (std::size_t j = 0; j < 4; ++j) {
      int ones = 0;
      for (std::size_t i = 0; i < 4; ++i) ones += a(i, j) == 1;
      CHECK(ones == 1);
    }
  }
  CHECK(p.norm_matrix()(0, 0) == 2);
  CHECK(trivial_lattice(g).rank() == 1);
  CHECK(zero_lattice(g).rank() == 0);
  CHECK(norm_one_lattice(s).rank() == 3);
}

TEST_CASE("maps are checked for equivariance") {
  auto g = group_from_shorthand("C3");
  auto p = permutation_lattice(trivial_subgroup(g));
  auto z = trivial_lattice(g);
  CHECK_NOTHROW(LatticeMap(p, z, IntMatrix{{1, 1, 1}}));
  CHECK_THROWS_AS(LatticeMap(p, z, IntMatrix{{1, 0, 0}}), InvalidInput);
  CHECK_THROWS_AS(LatticeMap(p, z, IntMatrix{{1, 1}}), InvalidInput);
  auto aug = augmentation_map(trivial_subgroup(g));
  auto nrm = norm_element_map(trivial_subgroup(g));
  CHECK(nrm.then(aug).matrix() == IntMatrix{{3}});
  CHECK(nrm.is_injective());
  CHECK_FALSE(aug.is_injective());
}

TEST_CASE("fiber sums") {
  auto g = group_from_shorthand("D8");
  auto h = support::sub(g, {g->parse_word("s")});
  auto hplus = support::sub(g, {g->parse_word("s"), g->parse_word("r^2")});
  auto f = fiber_sum_map(h, hplus);
  CHECK(f.source().rank() == 2);
  CHECK(f.target().rank() == 4);
  CHECK(f.is_injective());
  for (std::size_t j = 0; j < 2; ++j) {
    Integer col = 0;
    for (std::size_t i = 0; i < 4; ++i) col += f.matrix()(i, j);
    CHECK(col == 2);
  }
}

TEST_CASE("cokernels") {
  auto g = group_from_shorthand("C3");
  auto one = trivial_subgroup(g);
  auto c = cokernel_lattice(norm_element_map(one));
  CHECK(c.lattice.rank() == 2);
  CHECK((c.quotient.matrix() * norm_element_map(one).matrix()).is_zero());
  CHECK(c.quotient.matrix() * c.lift == IntMatrix::identity(2));
  // Z --3--> Z has torsion cokernel
  auto z = trivial_lattice(g);
  CHECK_THROWS_AS(cokernel_lattice(LatticeMap(z, z, IntMatrix{{3}})), InvalidInput);
}

TEST_CASE("direct sums and restriction") {
  auto g = group_from_shorthand("Q8");
  auto a = permutation_lattice(support::sub(g, {g->parse_word("i")}));
  auto b = trivial_lattice(g);
  auto s = direct_sum(a, b);
  CHECK(s.sum.rank() == 3);
  CHECK(s.projections[0].then(LatticeMap(a, a, IntMatrix::identity(2))).matrix() == IntMatrix{{1, 0, 0}, {0, 1, 0}});
  CHECK(s.inclusions[1].then(s.projections[1]).matrix() == IntMatrix{{1}});

  auto c4 = support::sub(g, {g->parse_word("j")});
  auto r = restrict(a, c4);
  CHECK(r.group().order() == 4);
  for (int k = 0; k < 4; ++k) CHECK(r.action(k) == a.action(c4.members()[static_cast<std::size_t>(k)]));
}

TEST_CASE("matrix json round-trip") {
  IntMatrix m{{1, -2}, {3, 4}, {0, 0}};
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1, 2], [3]]")), InvalidInput);
}
