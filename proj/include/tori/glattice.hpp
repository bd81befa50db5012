#pragma once

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

#include "tori/group.hpp"
#include "tori/intlinalg.hpp"

namespace tori {

// A free Z-module of finite rank with a G-action, stored as one integer matrix
// per group element (column convention: g acts on column vectors).
// Immutable; copies share storage.
class GLattice {
 public:
  GLattice() = default;
  // Verifies action(1) = 1 and action(g) action(s) = action(g s) for every g
  // and every generator s, which pins down the whole table.
  GLattice(GroupPtr group, std::vector<IntMatrix> action, std::vector<std::string> labels = {});
  // Extends a generator action to the full element table, then verifies it.
  static GLattice from_generator_action(GroupPtr group, const std::vector<IntMatrix>& generator_action,
                                        std::vector<std::string> labels = {});

  const Group& group() const { return *data_->group; }
  const GroupPtr& group_ptr() const { return data_->group; }
  std::size_t rank() const { return data_->rank; }
  const IntMatrix& action(int g) const { return data_->action[static_cast<std::size_t>(g)]; }
  const std::vector<IntMatrix>& action_table() const { return data_->action; }
  const std::vector<std::string>& labels() const { return data_->labels; }

  IntMatrix norm_matrix() const;  // sum of all action matrices

  // Rank, basis labels and the action of the named generators.
  nlohmann::json dump() const;

 private:
  struct Data {
    GroupPtr group;
    std::size_t rank = 0;
    std::vector<IntMatrix> action;
    std::vector<std::string> labels;
  };
  std::shared_ptr<const Data> data_;
};

// A G-equivariant map; matrix is target.rank x source.rank.
class LatticeMap {
 public:
  LatticeMap(GLattice source, GLattice target, IntMatrix matrix);

  const GLattice& source() const { return source_; }
  const GLattice& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  bool is_injective() const;
  LatticeMap then(const LatticeMap& next) const;  // next o this

 private:
  GLattice source_;
  GLattice target_;
  IntMatrix matrix_;
};

GLattice zero_lattice(const GroupPtr& g);
GLattice trivial_lattice(const GroupPtr& g);
// Z[G/S] with the left action on cosets; labels are coset representatives.
GLattice permutation_lattice(const Subgroup& s);

// Z[G/H+] -> Z[G/H], gH+ |-> sum of the cosets g'H inside gH+.
LatticeMap fiber_sum_map(const Subgroup& h, const Subgroup& hplus);
// Z[G/S] -> Z, every coset |-> 1.
LatticeMap augmentation_map(const Subgroup& s);
// Z -> Z[G/S], 1 |-> sum of all cosets.
LatticeMap norm_element_map(const Subgroup& s);

struct DirectSum {
  GLattice sum;
  std::vector<LatticeMap> inclusions;
  std::vector<LatticeMap> projections;
};
DirectSum direct_sum(const GLattice& a, const GLattice& b);
DirectSum direct_sum(const std::vector<GLattice>& parts, const GroupPtr& g);

struct Cokernel {
  GLattice lattice;
  LatticeMap quotient;  // target(f) -> lattice, surjective
  IntMatrix lift;       // section of the quotient over Z (not equivariant)
};
nlohmann::json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const nlohmann::json& j);

// Throws InvalidInput when coker(f) has torsion.
Cokernel cokernel_lattice(const LatticeMap& f);

// The same Z-module viewed over S (whose element k is s.members()[k]).
GLattice restrict(const GLattice& m, const Subgroup& s, GroupPtr s_group = nullptr);

// Z[G/S] / Z * (sum of cosets); the norm-one torus lattice of the G-set G/S.
GLattice norm_one_lattice(const Subgroup& s);

}  // namespace tori
