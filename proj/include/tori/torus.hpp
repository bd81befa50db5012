#pragma once

#include <json.hpp>

#include <vector>

#include "tori/glattice.hpp"
#include "tori/group.hpp"

namespace tori {

// How the multiplier G_m sits inside an étale algebra torus: one coordinate
// shared by all factors, or one per factor (rank grows by r instead of 1).
enum class MultiplierConvention { shared, per_factor };

struct TorusDatum {
  GroupPtr group;
  std::vector<Subgroup> subgroups;  // H_1, ..., H_r
  CentralDatum iota;
  std::vector<Subgroup> hplus;      // <H_i, iota>
  std::vector<bool> degenerate;     // iota in H_i

  bool any_degenerate() const;
  bool is_field() const { return subgroups.size() == 1; }
};

// An element given as an index or a generator word; a subgroup as a list of
// such generators.
int parse_element(const Group& g, const nlohmann::json& e);
Subgroup parse_subgroup(const GroupPtr& g, const nlohmann::json& gens);

TorusDatum make_torus_datum(GroupPtr group, std::vector<Subgroup> subgroups, const CentralDatum& iota);

// {"group": <spec>, "subgroups": [[gen, ...], ...], "iota": <index or word>,
//  "p": <prime>}. Generators may be indices or words; "p" defaults to the
// order of iota.
TorusDatum parse_torus_datum(const nlohmann::json& spec, std::size_t max_order = kDefaultMaxOrder);
nlohmann::json torus_datum_json(const TorusDatum& datum);

struct TorusLattices {
  TorusDatum datum;
  MultiplierConvention convention = MultiplierConvention::shared;
  // 0 -> (+) Z[G/H_i+] --norm--> (+) Z[G/H_i] (+) Z^m --to_x--> X -> 0
  LatticeMap norm;
  LatticeMap to_x;
  // 0 -> (+) Z[G/H_i+] --fiber--> (+) Z[G/H_i] --to_aux--> X_aux -> 0
  LatticeMap fiber;
  LatticeMap to_aux;
  // 0 -> Z^m --multiplier--> X --x_to_aux--> X_aux -> 0
  LatticeMap multiplier;
  LatticeMap x_to_aux;

  const GLattice& x() const { return to_x.target(); }
  const GLattice& x_aux() const { return to_aux.target(); }
  std::size_t expected_rank() const;  // sum [G:H_i] - sum [G:H_i+] + m
};

TorusLattices build_character_lattice(const Subgroup& h, const CentralDatum& iota);
TorusLattices build_etale_lattice(const std::vector<Subgroup>& subgroups, const CentralDatum& iota,
                                  MultiplierConvention convention = MultiplierConvention::shared);
TorusLattices build_lattices(const TorusDatum& datum, MultiplierConvention convention = MultiplierConvention::shared);

enum class GaloisType { galois, non_galois };
GaloisType galois_classifier(const Subgroup& h);
const char* to_string(GaloisType t);

}  // namespace tori
