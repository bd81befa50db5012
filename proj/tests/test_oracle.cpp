// The engine against the brute-force oracle on small groups.

#include <doctest.h>

#include "support.hpp"
#include "tori/localglobal.hpp"

using namespace tori;
using support::factors;

namespace {

void agree(const GLattice& lat, const oracle::Module& mod, int lo, int hi) {
  REQUIRE(oracle::is_action(mod));
  REQUIRE(lat.rank() == static_cast<std::size_t>(mod.rank));
  for (int i = lo; i <= hi; ++i) {
    CAPTURE(i);
    CHECK(factors(tate(lat, i).presentation) == oracle::tate_invariants(mod, i));
  }
}

}  // namespace

TEST_CASE("oracle: trivial lattice on cyclic groups") {
  for (int n = 2; n <= 8; ++n) {
    CAPTURE(n);
    auto g = cyclic_group(n);
    auto mod = oracle::trivial_module(*g);
    for (int i = -2; i <= 3; ++i) {
      auto expect = i % 2 == 0 ? std::vector<long>{n} : std::vector<long>{};
      CHECK(oracle::tate_invariants(mod, i) == expect);
    }
    agree(trivial_lattice(g), mod, -2, 3);
  }
}

TEST_CASE("oracle: permutation and norm-one lattices, |G| <= 8") {
  for (const auto& g : catalog_groups_up_to(8)) {
    CAPTURE(g->name());
    int hi = g->order() <= 4 ? 3 : 2;
    for (const auto& s : subgroup_classes(g)) {
      CAPTURE(s.members().size());
      agree(permutation_lattice(s), oracle::permutation_module(*g, s.members()), -2, hi);
      if (!s.is_whole()) agree(norm_one_lattice(s), oracle::norm_one_module(*g, s.members()), -2, hi);
    }
  }
}

TEST_CASE("oracle: H^1 and H^2 of torus lattices, |G| <= 8") {
  for (const auto& g : catalog_groups_up_to(8)) {
    CAPTURE(g->name());
    for (const auto& c : central_prime_order_elements(*g))
      for (const auto& h : subgroup_classes(g)) {
        if (h.contains(c.iota)) continue;
        CAPTURE(h.members().size());
        CAPTURE(c.iota);
        auto lat = build_character_lattice(h, c);
        auto mod = support::oracle_torus(h, c.iota);
        agree(lat.x(), mod, 1, 2);
        auto h1 = factors(tate(lat.x(), 1).presentation);
        long n1 = 1;
        for (long f : h1) n1 *= f;
        CHECK(oracle::cohomology_order(mod, 1) == n1);
      }
  }
}

TEST_CASE("oracle: Sha^2 of the V4 norm-one lattice") {
  auto g = group_from_shorthand("C2^2");
  auto one = trivial_subgroup(g);
  auto mod = oracle::norm_one_module(*g, one.members());
  auto fam = cyclic_subgroup_classes(g);
  CHECK(oracle::sha_invariants(mod, 2, support::family_members(fam)) == std::vector<long>{2});
  CHECK(oracle::sha_invariants(mod, 1, support::family_members(fam)).empty());
  CHECK(factors(sha(norm_one_lattice(one), 2, default_family(g)).presentation) == std::vector<long>{2});
}

TEST_CASE("oracle: Sha of torus lattices on groups of order 8") {
  for (const char* name : {"D8", "Q8", "C8", "C4xC2", "C2^3"}) {
    CAPTURE(name);
    auto g = group_from_shorthand(name);
    auto fam = cyclic_subgroup_classes(g);
    for (const auto& c : central_prime_order_elements(*g)) {
      auto h = trivial_subgroup(g);
      auto lat = build_character_lattice(h, c);
      auto mod = support::oracle_torus(h, c.iota);
      for (int i : {1, 2}) {
        CAPTURE(i);
        CHECK(factors(sha(lat.x(), i, default_family(g)).presentation) ==
              oracle::sha_invariants(mod, i, support::family_members(fam)));
      }
    }
  }
}

TEST_CASE("oracle: abelianizations") {
  for (const auto& g : catalog_groups_up_to(16)) {
    CAPTURE(g->name());
    CHECK(factors(abelianization(whole_group(g)).presentation) == oracle::abelianization_invariants(*g));
    CHECK(factors(tate(trivial_lattice(g), -2).presentation) == oracle::abelianization_invariants(*g));
  }
}
