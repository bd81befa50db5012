#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

#include "tori/group.hpp"

namespace tori {

GroupPtr cyclic_group(int n);
GroupPtr dihedral_group(int order);
GroupPtr dicyclic_group(int order);      // quaternion_group for 2-power orders
GroupPtr quaternion_group(int order);
GroupPtr semidihedral_group(int order);
GroupPtr modular_group(int order);       // <x, y | x^{n}, y^2, y x y^-1 = x^{n/2+1}>
GroupPtr symmetric_group(int n);
GroupPtr alternating_group(int n);
GroupPtr c4_semidirect_c4();    // SmallGroup(16, 4)
GroupPtr c2sq_semidirect_c4();  // SmallGroup(16, 3)
GroupPtr pauli_group();         // C4 o D8, SmallGroup(16, 13)
GroupPtr abelian_group(const std::vector<int>& cyclic_factors);
GroupPtr elementary_abelian_group(int p, int k);
GroupPtr direct_product(const std::vector<GroupPtr>& factors, std::size_t max_order = kDefaultMaxOrder);

struct CatalogEntry {
  std::string name;
  std::string params;
  std::string shorthand;
  std::string generators;
  std::string description;
};
std::vector<CatalogEntry> catalog_entries();

// Accepts {"catalog": {"name": ..., "params": [...]}}, {"catalog": "D8xC2"} or
// {"permutations": {"degree": n, "generators": [[...], ...], "names": [...]}}.
GroupPtr build_group(const nlohmann::json& spec, std::size_t max_order = kDefaultMaxOrder);
// Shorthand such as "C4", "catalog:Q8", "D8xC2", "C2^3".
GroupPtr group_from_shorthand(std::string_view shorthand, std::size_t max_order = kDefaultMaxOrder);

// Sweep families, in a fixed order.
std::vector<GroupPtr> abelian_groups_up_to(int max_order);
std::vector<GroupPtr> two_groups_up_to(int max_order);
std::vector<GroupPtr> catalog_groups_up_to(int max_order);

}  // namespace tori
