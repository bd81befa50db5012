#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tori/cokernel.hpp"
#include "tori/glattice.hpp"
#include "tori/group.hpp"
#include "tori/intlinalg.hpp"

namespace tori {

inline constexpr int kMinDegree = -2;
inline constexpr int kMaxDegree = 3;
inline constexpr std::size_t kDefaultColumnCeiling = 200000;

enum class TateMethod {
  // Ĥ^i as the torsion of a single cokernel (see TateSolver).
  cokernel_torsion,
  // Dense ker/im with a saturated kernel basis. Slow; kept as a cross-check.
  kernel_image,
};

struct CohomologyOptions {
  std::size_t max_columns = kDefaultColumnCeiling;
  TateMethod method = TateMethod::cokernel_torsion;
};

// Largest chain/cochain module assembled for Ĥ^i(G, M), as a Z-rank.
std::size_t cochain_dimension(std::size_t group_order, std::size_t rank, int degree);

struct CohomologyGroup {
  int degree = 0;
  AbelianPresentation presentation;
  // Representatives, one per invariant factor: cochain tables G^i -> M for
  // i >= 1 (index = tuple index * rank + basis index, tuples lexicographic),
  // elements of M for i in {0, -1}, chains in Z[G] (x) M for i = -2.
  std::vector<IntVector> generators;

  Integer order() const { return presentation.order(); }
  bool is_trivial() const { return presentation.is_trivial(); }
  std::string to_string() const { return presentation.to_string(); }
};

struct CohomologyMap {
  AbelianPresentation source;
  AbelianPresentation target;
  IntMatrix matrix;  // column j: target coordinates of the j-th source generator
};

// Bar cochain coboundary d_n : C^n(G, M) -> C^{n+1}(G, M), n >= 0.
SparseMatrix coboundary(const GLattice& m, int n);
// Bar chain boundaries for homology with coefficients in M (g acts via g^-1
// on the right): d_1 : C_1 -> C_0 = M and d_2 : C_2 -> C_1.
SparseMatrix boundary1(const GLattice& m);
SparseMatrix boundary2(const GLattice& m);

// Ĥ^i(G, M) with a coordinate map. Because every Tate group of a finite group
// with lattice coefficients is finite, Ĥ^i is the torsion subgroup of one
// cokernel:
//   i >= 1: C^i / d C^{i-1}      i = 0: M / N M
//   i = -1: M / I_G M            i = -2: C_1 / d C_2
// (the quotient by cycles embeds in the next term, which is torsion-free).
class TateSolver {
 public:
  TateSolver(const GLattice& m, int degree, const CohomologyOptions& options = {});

  int degree() const { return degree_; }
  const GLattice& lattice() const { return lattice_; }
  const CohomologyGroup& group() const { return group_; }
  std::size_t cochain_rank() const { return solver_->ambient_rank(); }

  // Coordinates of the class of a cocycle (or, for i = 0, of an invariant
  // element of M), reduced into [0, order).
  IntVector coordinates(std::span<const Integer> cocycle) const;
  bool is_trivial_class(std::span<const Integer> cocycle) const { return solver_->in_image(cocycle); }

 private:
  GLattice lattice_;
  int degree_;
  std::shared_ptr<const CokernelSolver> solver_;
  CohomologyGroup group_;
};

CohomologyGroup tate(const GLattice& m, int degree, const CohomologyOptions& options = {});

// Restricts a cochain table on G^i to C^i, where C's element k is
// c.members()[k].
IntVector restrict_cochain(std::span<const Integer> cochain, const Subgroup& c, int degree, std::size_t rank);

// Ĥ^i(G, M) -> Ĥ^i(C, M|_C) for i in {0, 1, 2}. `local` must be a solver for
// the restricted lattice in the same degree.
CohomologyMap restriction_map(const TateSolver& global, const Subgroup& c, const TateSolver& local);
CohomologyMap restriction_map(const GLattice& m, const Subgroup& c, int degree, const CohomologyOptions& options = {});

// Image of a class map on coordinates: phi_* of every generator of `source`,
// expressed in `target`.
CohomologyMap induced_map(const TateSolver& source, const LatticeMap& phi, const TateSolver& target);

// H^1(G, X) for X = coker(phi) with phi injective: the kernel of
// H^2(G, A) -> H^2(G, B), which is exact because H^1(G, B) = 0 is verified
// on the way (B must be a sum of permutation lattices).
struct LesH1 {
  CohomologyGroup h2_source;                 // H^2(G, A)
  CohomologyGroup h2_target;                 // H^2(G, B)
  CohomologyMap map;                         // phi_*
  AbelianPresentation kernel;                // ≅ H^1(G, X)
  std::vector<IntVector> kernel_generators;  // in H^2(G, A) coordinates
};
LesH1 les_h1(const LatticeMap& phi, const CohomologyOptions& options = {});

// The orbit-counting form of the transfer into H+ = <H, iota>: each element
// s of H+ is h * iota^e with h in H, and Ver_{G -> H+}(g) contributes the sum
// of the exponents e over the <g>-orbits on G/H+, mod p.
struct TransferCount {
  std::string generator;  // word of the group generator g
  std::vector<int> counts;  // one per subgroup H_i, in [0, p)
  friend bool operator==(const TransferCount&, const TransferCount&) = default;
};
struct TransferH1 {
  CohomologyGroup group;  // (Z/p)^k
  std::vector<TransferCount> witness;
  std::vector<IntVector> characters;  // kernel basis of (Z/p)^r
};
// Throws InvalidInput when iota lies in some H_i (degenerate tower).
TransferH1 h1_via_transfer(const std::vector<Subgroup>& subgroups, const CentralDatum& iota);
int transfer_count(const Subgroup& h, const CentralDatum& iota, int g);

}  // namespace tori
