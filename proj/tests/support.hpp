#pragma once

#include <initializer_list>
#include <vector>

#include "oracle/local_cohomology.hpp"
#include "tori/catalog.hpp"
#include "tori/cohomology.hpp"
#include "tori/glattice.hpp"
#include "tori/torus.hpp"

namespace support {

inline std::vector<long> factors(const tori::AbelianPresentation& p) {
  std::vector<long> out;
  if (!p.is_finite()) return {-1};
  for (const auto& t : p.torsion) out.push_back(t.get_si());
  return out;
}

inline tori::Subgroup sub(const tori::GroupPtr& g, std::initializer_list<int> gens) {
  std::vector<int> v(gens);
  return tori::subgroup_closure(g, v);
}

inline std::vector<int> members(const tori::Subgroup& s) { return s.members(); }

inline std::vector<std::vector<int>> family_members(const std::vector<tori::Subgroup>& fam) {
  std::vector<std::vector<int>> out;
  for (const auto& d : fam) out.push_back(d.members());
  return out;
}

// The character lattice of a single-field datum, rebuilt inside the oracle.
inline oracle::Module oracle_torus(const tori::Subgroup& h, int iota) {
  return oracle::torus_module(h.parent(), h.members(), iota);
}

}  // namespace support
