#include <doctest.h>

#include "support.hpp"
#include "tori/error.hpp"

using namespace tori;

namespace {

TorusDatum datum(const char* json) { return parse_torus_datum(nlohmann::json::parse(json)); }

bool is_zero_composite(const LatticeMap& a, const LatticeMap& b) { return (b.matrix() * a.matrix()).is_zero(); }

// first map injective, second surjective onto a lattice, composite zero, ranks add up
void check_short_exact(const LatticeMap& a, const LatticeMap& b) {
  CHECK(a.is_injective());
  CHECK(is_zero_composite(a, b));
  CHECK(a.source().rank() + b.target().rank() == a.target().rank());
  CHECK(snf(b.matrix()).invariant_factors() == IntVector(b.target().rank(), 1));
}

}  // namespace

TEST_CASE("datum parsing") {
  auto d = datum(R"({"group": "D8", "subgroups": [["s"]], "iota": "r^2"})");
  CHECK(d.iota.p == 2);
  CHECK(d.hplus[0].order() == 4);
  CHECK_FALSE(d.any_degenerate());
  CHECK(d.is_field());

  auto dflt = datum(R"({"group": "C4", "iota": "g^2"})");
  CHECK(dflt.subgroups.size() == 1);
  CHECK(dflt.subgroups[0].is_trivial());

  auto deg = datum(R"({"group": "Q8", "subgroups": [["i"]], "iota": "i^2"})");
  CHECK(deg.any_degenerate());

  CHECK_THROWS_AS(datum(R"({"group": "D8", "iota": "r"})"), InvalidInput);
  CHECK_THROWS_AS(datum(R"({"group": "D8", "iota": "s"})"), InvalidInput);
  CHECK_THROWS_AS(datum(R"({"group": "D8", "iota": "r^2", "p": 3})"), InvalidInput);
  CHECK_THROWS_AS(datum(R"({"group": "D8", "iota": 99})"), InvalidInput);
  CHECK_THROWS_AS(datum(R"({"group": "D8"})"), InvalidInput);
  CHECK_THROWS_AS(datum(R"({"group": "D8", "subgroups": [], "iota": "r^2"})"), InvalidInput);
  CHECK_THROWS_AS(datum(R"({"group": "D8", "subgroups": [["t"]], "iota": "r^2"})"), InvalidInput);

  auto back = parse_torus_datum(torus_datum_json(d));
  CHECK(back.subgroups[0].members() == d.subgroups[0].members());
  CHECK(back.iota.iota == d.iota.iota);
}

TEST_CASE("lattice ranks and exact sequences") {
  for (const auto& g : catalog_groups_up_to(12))
    for (const auto& c : central_prime_order_elements(*g))
      for (const auto& h : subgroup_classes(g)) {
        CAPTURE(g->name());
        auto t = build_character_lattice(h, c);
        CHECK(t.x().rank() == t.expected_rank());
        CHECK(t.x().rank() == h.index() - t.datum.hplus[0].index() + 1);
        CHECK(t.x_aux().rank() == h.index() - t.datum.hplus[0].index());
        check_short_exact(t.norm, t.to_x);
        check_short_exact(t.fiber, t.to_aux);
        check_short_exact(t.multiplier, t.x_to_aux);
      }
}

TEST_CASE("étale algebras") {
  auto g = group_from_shorthand("C2^2");
  auto a = make_central_datum(*g, g->parse_word("a"), 2);
  std::vector<Subgroup> subs{trivial_subgroup(g), support::sub(g, {g->parse_word("b")})};
  auto shared = build_etale_lattice(subs, a);
  // (4 - 2) + (2 - 1) + 1
  CHECK(shared.x().rank() == 4);
  auto per = build_etale_lattice(subs, a, MultiplierConvention::per_factor);
  CHECK(per.x().rank() == 5);
  check_short_exact(shared.norm, shared.to_x);
  check_short_exact(per.norm, per.to_x);
  check_short_exact(per.multiplier, per.x_to_aux);
  CHECK(shared.x().labels().front().rfind("H1", 0) == 0);

  auto c3 = cyclic_group(6);
  auto iota = make_central_datum(*c3, 3, 2);
  auto t = build_etale_lattice({trivial_subgroup(c3)}, iota);
  CHECK(t.x().rank() == 6 - 3 + 1);
}

TEST_CASE("galois classifier") {
  auto g = group_from_shorthand("D8");
  CHECK(galois_classifier(support::sub(g, {g->parse_word("r")})) == GaloisType::galois);
  CHECK(galois_classifier(support::sub(g, {g->parse_word("s")})) == GaloisType::non_galois);
  CHECK(std::string(to_string(GaloisType::non_galois)) == "non-galois");
}
