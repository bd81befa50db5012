#include <doctest.h>

#include "support.hpp"
#include "tori/catalog.hpp"
#include "tori/error.hpp"

using namespace tori;
using support::factors;

TEST_CASE("catalog orders") {
  CHECK(group_from_shorthand("C1")->order() == 1);
  CHECK(group_from_shorthand("D8")->order() == 8);
  CHECK(group_from_shorthand("D6")->order() == 6);
  CHECK(group_from_shorthand("Q16")->order() == 16);
  CHECK(group_from_shorthand("C2^3")->order() == 8);
  CHECK(group_from_shorthand("D8xC2")->order() == 16);
  CHECK(group_from_shorthand("catalog:Pauli")->order() == 16);
  CHECK(group_from_shorthand("S4")->order() == 24);
  CHECK(build_group(nlohmann::json::parse(R"({"catalog": {"name": "dihedral", "params": [10]}})"))->order() == 10);
  CHECK_THROWS_AS(group_from_shorthand("X5"), InvalidInput);
  CHECK_THROWS_AS(group_from_shorthand("C64xC2"), ResourceLimit);
  CHECK_THROWS_AS(build_group(nlohmann::json::parse(R"({"catalog": {"name": "symmetric", "params": [5]}})")), InvalidInput);
}

TEST_CASE("every group of order at most 16 appears once") {
  auto groups = catalog_groups_up_to(16);
  CHECK(groups.size() == 42);
  int per_order[17] = {};
  for (const auto& g : groups) ++per_order[g->order()];
  CHECK(per_order[8] == 5);
  CHECK(per_order[12] == 5);
  CHECK(per_order[16] == 14);
  CHECK(two_groups_up_to(16).size() == 1 + 2 + 5 + 14);
}

TEST_CASE("group axioms hold for the catalog") {
  for (const auto& g : catalog_groups_up_to(16)) {
    CAPTURE(g->name());
    int n = static_cast<int>(g->order());
    for (int a = 0; a < n; ++a) {
      CHECK(g->multiply(0, a) == a);
      CHECK(g->multiply(a, g->inverse(a)) == 0);
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; c += 3)
          CHECK(g->multiply(g->multiply(a, b), c) == g->multiply(a, g->multiply(b, c)));
    }
  }
}

TEST_CASE("words round-trip") {
  for (const char* name : {"Q8", "D8", "C2xC4", "Pauli", "A4"}) {
    auto g = group_from_shorthand(name);
    for (int x = 0; x < static_cast<int>(g->order()); ++x) CHECK(g->parse_word(g->word(x)) == x);
  }
  auto q = group_from_shorthand("Q8");
  CHECK(q->parse_word("i^2") == q->parse_word("j^2"));
  CHECK(q->parse_word("1") == 0);
  CHECK_THROWS_AS(q->parse_word("k"), InvalidInput);
}

TEST_CASE("centers") {
  CHECK(group_from_shorthand("D8")->center().size() == 2);
  CHECK(group_from_shorthand("Q8")->center().size() == 2);
  CHECK(group_from_shorthand("D6")->center().size() == 1);
  CHECK(group_from_shorthand("A4")->center().size() == 1);
  CHECK(group_from_shorthand("C2xC4")->center().size() == 8);
  CHECK(group_from_shorthand("Pauli")->center().size() == 4);
}

TEST_CASE("subgroup classes") {
  CHECK(cyclic_subgroup_classes(group_from_shorthand("C4")).size() == 3);
  CHECK(cyclic_subgroup_classes(group_from_shorthand("Q8")).size() == 5);
  CHECK(cyclic_subgroup_classes(group_from_shorthand("D6")).size() == 3);
  CHECK(subgroup_classes(group_from_shorthand("D8")).size() == 8);
  CHECK(subgroup_classes(group_from_shorthand("Q8")).size() == 6);
  CHECK(subgroup_classes(group_from_shorthand("A4")).size() == 5);
  CHECK(subgroup_classes(group_from_shorthand("C2^3")).size() == 16);
  CHECK(subgroup_classes(group_from_shorthand("S4")).size() == 11);
}

TEST_CASE("subgroup closure and conjugation") {
  auto g = group_from_shorthand("D8");
  auto s = support::sub(g, {g->parse_word("s")});
  CHECK(s.order() == 2);
  CHECK_FALSE(is_normal(s));
  auto r = support::sub(g, {g->parse_word("r")});
  CHECK(is_normal(r));
  CHECK(r.index() == 2);
  auto t = conjugate(s, g->parse_word("r"));
  CHECK(t.order() == 2);
  CHECK_FALSE(t == s);
  CHECK(is_subgroup_of(trivial_subgroup(g), s));
  CHECK(left_cosets(s).count() == 4);
}

TEST_CASE("central elements of prime order") {
  auto d8 = group_from_shorthand("D8");
  auto c = central_prime_order_elements(*d8);
  REQUIRE(c.size() == 1);
  CHECK(c[0].p == 2);
  CHECK(c[0].iota == d8->parse_word("r^2"));
  CHECK(central_prime_order_elements(*group_from_shorthand("C6")).size() == 3);
  CHECK(central_prime_order_elements(*group_from_shorthand("C2^3")).size() == 7);
  CHECK_THROWS_AS(make_central_datum(*d8, d8->parse_word("s"), 2), InvalidInput);
  CHECK_THROWS_AS(make_central_datum(*d8, d8->parse_word("r"), 2), InvalidInput);
}

TEST_CASE("abelianizations") {
  auto q = abelianization(whole_group(group_from_shorthand("Q8")));
  CHECK(factors(q.presentation) == std::vector<long>{2, 2});
  CHECK(factors(abelianization(whole_group(group_from_shorthand("D6"))).presentation) == std::vector<long>{2});
  CHECK(factors(abelianization(whole_group(group_from_shorthand("A4"))).presentation) == std::vector<long>{3});
  CHECK(factors(abelianization(whole_group(group_from_shorthand("C2xC6"))).presentation) == std::vector<long>{2, 6});
}

namespace {

// Checks Ver_{G->S} is a homomorphism, is independent of the transversal and
// agrees with g -> g^[G:S] when S is central.
void transfer_laws(const GroupPtr& g, const Subgroup& s) {
  Transfer ver(s);
  const auto& ab = ver.target();
  int n = static_cast<int>(g->order());
  for (int x = 0; x < n; ++x) {
    for (std::uint64_t seed : {1u, 2u, 3u}) CHECK(ver.evaluate(x, seed) == ver(x));
    for (int y = 0; y < n; ++y) CHECK(ver(g->multiply(x, y)) == ab.add(ver(x), ver(y)));
  }
  bool central = true;
  for (int m : s.members()) central = central && g->is_central(m);
  if (central)
    for (int x = 0; x < n; ++x) CHECK(ver(x) == ab.image(s, g->power(x, static_cast<long>(s.index()))));
}

}  // namespace

TEST_CASE("transfer laws on groups of order at most 16") {
  for (const auto& g : catalog_groups_up_to(16)) {
    CAPTURE(g->name());
    for (const auto& s : subgroup_classes(g)) transfer_laws(g, s);
  }
}

TEST_CASE("transfer is transitive") {
  for (const char* name : {"D8", "Q8", "Q16", "D8xC2", "C2^2:C4"}) {
    CAPTURE(name);
    auto g = group_from_shorthand(name);
    auto subs = subgroup_classes(g);
    for (const auto& h : subs)
      for (const auto& k : subgroup_classes(g)) {
        if (!is_subgroup_of(k, h) || k == h) continue;
        // K inside H inside G; Ver_{H->K} is computed on H as a group
        Transfer g_to_k(k), g_to_h(h);
        auto hg = h.as_group();
        std::vector<int> local;
        for (int m : k.members()) local.push_back(h.local_index(m));
        Subgroup k_in_h(hg, local);
        Transfer h_to_k(k_in_h);
        for (int x = 0; x < static_cast<int>(g->order()); ++x) {
          // pick any element of H representing Ver_{G->H}(x)
          auto target = g_to_h(x);
          int rep = -1;
          for (int m : h.members())
            if (g_to_h.target().image(h, m) == target) {
              rep = m;
              break;
            }
          REQUIRE(rep >= 0);
          auto via_h = h_to_k(h.local_index(rep));
          // compare as elements of K^ab: both target abelianizations index K's members identically
          CHECK(via_h == g_to_k(x));
        }
      }
  }
}
