#include "tori/cohomology.hpp"

#include <algorithm>
#include <limits>

#include "tori/error.hpp"

namespace tori {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
    out *= base;
  }
  return out;
}

void check_degree(int degree) {
  if (degree < kMinDegree || degree > kMaxDegree)
    throw InvalidInput("cohomological degree " + std::to_string(degree) + " outside [-2, 3]");
}

// Digits of a tuple index, most significant first.
void decode(std::size_t t, std::size_t n, int len, std::vector<int>& digits) {
  digits.assign(static_cast<std::size_t>(len), 0);
  for (int k = len - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = static_cast<int>(t % n);
    t /= n;
  }
}

std::size_t encode(const std::vector<int>& digits, std::size_t n) {
  std::size_t t = 0;
  for (int d : digits) t = t * n + static_cast<std::size_t>(d);
  return t;
}

SparseMatrix invariants_matrix(const GLattice& m) {
  // r x (|G| r): block g is rho(g) - 1; its cokernel is M / I_G M.
  const std::size_t r = m.rank(), n = m.group().order();
  SparseBuilder b(r, n * r);
  for (std::size_t g = 0; g < n; ++g) {
    const IntMatrix& a = m.action(static_cast<int>(g));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        Integer v = a(i, j);
        if (i == j) v -= 1;
        b.add(i, g * r + j, v);
      }
  }
  return b.build();
}

SparseMatrix solver_matrix(const GLattice& m, int degree) {
  switch (degree) {
    case -2:
      return boundary2(m);
    case -1:
      return invariants_matrix(m);
    case 0:
      return SparseMatrix::from_dense(m.norm_matrix());
    default:
      return coboundary(m, degree - 1);
  }
}

AbelianPresentation torsion_only(const AbelianPresentation& p) { return AbelianPresentation{0, p.torsion}; }

AbelianPresentation subquotient(const IntMatrix& cycle_map, const IntMatrix& boundaries) {
  IntMatrix k = kernel_basis(cycle_map);
  IntMatrix coords = image_in_kernel_coordinates(boundaries, k);
  return quotient_presentation(k.cols(), coords);
}

AbelianPresentation tate_kernel_image(const GLattice& m, int degree) {
  AbelianPresentation p;
  switch (degree) {
    case -2:
      p = subquotient(boundary1(m).to_dense(), boundary2(m).to_dense());
      break;
    case -1:
      p = subquotient(m.norm_matrix(), invariants_matrix(m).to_dense());
      break;
    case 0:
      p = subquotient(coboundary(m, 0).to_dense(), m.norm_matrix());
      break;
    default:
      p = subquotient(coboundary(m, degree).to_dense(), coboundary(m, degree - 1).to_dense());
  }
  if (p.free_rank != 0)
    throw InternalError("Tate cohomology in degree " + std::to_string(degree) + " came out infinite");
  return p;
}

}  // namespace

std::size_t cochain_dimension(std::size_t group_order, std::size_t rank, int degree) {
  check_degree(degree);
  std::size_t cells = degree >= 1 ? ipow(group_order, degree) : degree == 0 ? 1 : degree == -1 ? group_order : ipow(group_order, 2);
  if (rank != 0 && cells > std::numeric_limits<std::size_t>::max() / rank) return std::numeric_limits<std::size_t>::max();
  return cells * rank;
}

SparseMatrix coboundary(const GLattice& m, int n) {
  if (n < 0) throw InvalidInput("coboundary degree must be nonnegative");
  const std::size_t order = m.group().order(), r = m.rank();
  const std::size_t rows_t = ipow(order, n + 1);
  SparseBuilder b(rows_t * r, ipow(order, n) * r);
  std::vector<int> digits, merged;
  const std::size_t tail_mod = ipow(order, n);
  for (std::size_t t = 0; t < rows_t; ++t) {
    decode(t, order, n + 1, digits);
    const std::size_t tail = t % tail_mod;
    const IntMatrix& a = m.action(digits[0]);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) b.add(t * r + i, tail * r + j, a(i, j));
    for (int k = 1; k <= n; ++k) {
      merged.clear();
      for (int q = 0; q < n + 1; ++q) {
        if (q == k - 1) {
          merged.push_back(m.group().multiply(digits[static_cast<std::size_t>(q)], digits[static_cast<std::size_t>(q) + 1]));
          ++q;
        } else {
          merged.push_back(digits[static_cast<std::size_t>(q)]);
        }
      }
      const std::size_t mi = encode(merged, order);
      for (std::size_t i = 0; i < r; ++i) b.add(t * r + i, mi * r + i, k % 2 ? -1L : 1L);
    }
    const std::size_t head = t / order;
    for (std::size_t i = 0; i < r; ++i) b.add(t * r + i, head * r + i, (n + 1) % 2 ? -1L : 1L);
  }
  return b.build();
}

SparseMatrix boundary1(const GLattice& m) {
  const std::size_t order = m.group().order(), r = m.rank();
  SparseBuilder b(r, order * r);
  for (std::size_t g = 0; g < order; ++g) {
    const IntMatrix& a = m.action(m.group().inverse(static_cast<int>(g)));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        Integer v = a(i, j);
        if (i == j) v -= 1;
        b.add(i, g * r + j, v);
      }
  }
  return b.build();
}

SparseMatrix boundary2(const GLattice& m) {
  // m (x) [g|h]  |->  g^-1 m (x) [h]  -  m (x) [gh]  +  m (x) [g]
  const Group& grp = m.group();
  const std::size_t order = grp.order(), r = m.rank();
  SparseBuilder b(order * r, order * order * r);
  for (std::size_t g = 0; g < order; ++g) {
    const IntMatrix& a = m.action(grp.inverse(static_cast<int>(g)));
    for (std::size_t h = 0; h < order; ++h) {
      const std::size_t col = (g * order + h) * r;
      const std::size_t gh = static_cast<std::size_t>(grp.multiply(static_cast<int>(g), static_cast<int>(h)));
      for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < r; ++i) b.add(h * r + i, col + j, a(i, j));
        b.add(gh * r + j, col + j, -1L);
        b.add(g * r + j, col + j, 1L);
      }
    }
  }
  return b.build();
}

TateSolver::TateSolver(const GLattice& m, int degree, const CohomologyOptions& options)
    : lattice_(m), degree_(degree) {
  check_degree(degree);
  const std::size_t dim = cochain_dimension(m.group().order(), m.rank(), degree);
  if (dim > options.max_columns)
    throw ResourceLimit("degree " + std::to_string(degree) + " over a group of order " +
                        std::to_string(m.group().order()) + " on a rank " + std::to_string(m.rank()) +
                        " lattice needs " + std::to_string(dim) + " columns; ceiling is " +
                        std::to_string(options.max_columns));
  solver_ = std::make_shared<const CokernelSolver>(solver_matrix(m, degree));
  group_.degree = degree;
  group_.presentation = torsion_only(solver_->presentation());
  for (std::size_t k = 0; k < group_.presentation.torsion.size(); ++k)
    group_.generators.push_back(solver_->torsion_generator(k));
}

IntVector TateSolver::coordinates(std::span<const Integer> cocycle) const {
  if (cocycle.size() != solver_->ambient_rank()) throw InvalidInput("cochain has the wrong length");
  return solver_->torsion_coordinates(cocycle);
}

CohomologyGroup tate(const GLattice& m, int degree, const CohomologyOptions& options) {
  if (options.method == TateMethod::cokernel_torsion) return TateSolver(m, degree, options).group();
  check_degree(degree);
  const std::size_t dim = cochain_dimension(m.group().order(), m.rank(), std::min(degree + 1, kMaxDegree));
  if (dim > options.max_columns) throw ResourceLimit("kernel/image computation exceeds the column ceiling");
  CohomologyGroup out;
  out.degree = degree;
  out.presentation = tate_kernel_image(m, degree);
  return out;
}

IntVector restrict_cochain(std::span<const Integer> cochain, const Subgroup& c, int degree, std::size_t rank) {
  if (degree < 0) throw InvalidInput("cochain restriction is only defined in nonnegative degrees");
  const std::size_t n = c.parent().order(), d = c.order();
  if (cochain.size() != ipow(n, degree) * rank) throw InvalidInput("cochain has the wrong length");
  const std::size_t tuples = ipow(d, degree);
  IntVector out(tuples * rank);
  std::vector<int> digits;
  for (std::size_t t = 0; t < tuples; ++t) {
    decode(t, d, degree, digits);
    for (auto& x : digits) x = c.members()[static_cast<std::size_t>(x)];
    const std::size_t parent = encode(digits, n);
    for (std::size_t b = 0; b < rank; ++b) out[t * rank + b] = cochain[parent * rank + b];
  }
  return out;
}

CohomologyMap restriction_map(const TateSolver& global, const Subgroup& c, const TateSolver& local) {
  const int degree = global.degree();
  if (degree < 0 || degree > 2)
    throw InvalidInput("restriction maps are only supported in degrees 0, 1, 2");
  if (local.degree() != degree) throw InvalidInput("restriction between different degrees");
  if (c.parent_ptr() != global.lattice().group_ptr() || local.lattice().group().order() != c.order())
    throw InvalidInput("restriction target is not the given subgroup");
  const auto& src = global.group();
  const auto& tgt = local.group();
  CohomologyMap out{src.presentation, tgt.presentation,
                    IntMatrix(tgt.presentation.torsion.size(), src.presentation.torsion.size())};
  for (std::size_t j = 0; j < src.generators.size(); ++j) {
    IntVector res = restrict_cochain(src.generators[j], c, degree, global.lattice().rank());
    IntVector coords = local.coordinates(res);
    for (std::size_t i = 0; i < coords.size(); ++i) out.matrix(i, j) = coords[i];
  }
  return out;
}

CohomologyMap restriction_map(const GLattice& m, const Subgroup& c, int degree, const CohomologyOptions& options) {
  if (degree < 0 || degree > 2)
    throw InvalidInput("restriction maps are only supported in degrees 0, 1, 2");
  TateSolver global(m, degree, options);
  TateSolver local(restrict(m, c), degree, options);
  return restriction_map(global, c, local);
}

CohomologyMap induced_map(const TateSolver& source, const LatticeMap& phi, const TateSolver& target) {
  if (source.degree() != target.degree()) throw InvalidInput("induced map between different degrees");
  const std::size_t ra = phi.source().rank(), rb = phi.target().rank();
  if (source.lattice().rank() != ra || target.lattice().rank() != rb)
    throw InvalidInput("induced map: lattice ranks do not match the map");
  const auto& src = source.group();
  const auto& tgt = target.group();
  CohomologyMap out{src.presentation, tgt.presentation,
                    IntMatrix(tgt.presentation.torsion.size(), src.presentation.torsion.size())};
  const IntMatrix& f = phi.matrix();
  for (std::size_t j = 0; j < src.generators.size(); ++j) {
    const IntVector& z = src.generators[j];
    const std::size_t blocks = ra == 0 ? 0 : z.size() / ra;
    IntVector image(target.cochain_rank());
    for (std::size_t t = 0; t < blocks; ++t)
      for (std::size_t a = 0; a < rb; ++a)
        for (std::size_t b = 0; b < ra; ++b)
          if (sgn(f(a, b)) != 0 && sgn(z[t * ra + b]) != 0)
            mpz_addmul(image[t * rb + a].get_mpz_t(), f(a, b).get_mpz_t(), z[t * ra + b].get_mpz_t());
    IntVector coords = target.coordinates(image);
    for (std::size_t i = 0; i < coords.size(); ++i) out.matrix(i, j) = coords[i];
  }
  return out;
}

LesH1 les_h1(const LatticeMap& phi, const CohomologyOptions& options) {
  if (!phi.is_injective()) throw InvalidInput("les_h1 needs an injective lattice map");
  TateSolver h1b(phi.target(), 1, options);
  if (!h1b.group().is_trivial())
    throw InternalError("H^1(G, B) = " + h1b.group().to_string() + " is not zero; the long exact sequence does not split off H^1(G, X)");
  TateSolver sa(phi.source(), 2, options);
  TateSolver sb(phi.target(), 2, options);
  LesH1 out;
  out.h2_source = sa.group();
  out.h2_target = sb.group();
  out.map = induced_map(sa, phi, sb);
  FiniteSubgroup k = finite_kernel(sa.group().presentation.torsion, sb.group().presentation.torsion, out.map.matrix);
  out.kernel = k.presentation;
  out.kernel_generators = std::move(k.generators);
  return out;
}

int transfer_count(const Subgroup& h, const CentralDatum& iota, int g) {
  const GroupPtr& grp = h.parent_ptr();
  std::vector<int> gens = h.generators();
  gens.push_back(iota.iota);
  Subgroup hplus = subgroup_closure(grp, gens);
  Cosets cosets = left_cosets(hplus);
  std::vector<char> seen(cosets.count(), 0);
  long total = 0;
  for (std::size_t j = 0; j < cosets.count(); ++j) {
    if (seen[j]) continue;
    const int rep = cosets.representatives[j];
    int x = rep, f = 0;
    do {
      x = grp->multiply(g, x);
      seen[static_cast<std::size_t>(cosets.coset_of[static_cast<std::size_t>(x)])] = 1;
      ++f;
    } while (static_cast<std::size_t>(cosets.coset_of[static_cast<std::size_t>(x)]) != j);
    const int s = grp->multiply(grp->inverse(rep), grp->multiply(grp->power(g, f), rep));
    int e = 0, y = s;
    const int iota_inv = grp->inverse(iota.iota);
    while (!h.contains(y)) {
      if (++e >= iota.p) throw InternalError("transfer contribution outside <H, iota>");
      y = grp->multiply(y, iota_inv);
    }
    total += e;
  }
  return static_cast<int>(total % iota.p);
}

TransferH1 h1_via_transfer(const std::vector<Subgroup>& subgroups, const CentralDatum& iota) {
  if (subgroups.empty()) throw InvalidInput("at least one subgroup is required");
  const GroupPtr& grp = subgroups.front().parent_ptr();
  for (const auto& h : subgroups) {
    if (h.parent_ptr() != grp) throw InvalidInput("subgroups of different groups");
    if (h.contains(iota.iota)) throw InvalidInput("iota lies in H: degenerate tower, no transfer description");
  }
  TransferH1 out;
  const std::size_t r = subgroups.size(), ngens = grp->generators().size();
  IntMatrix counts(ngens, r);
  for (std::size_t k = 0; k < ngens; ++k) {
    const int g = grp->generators()[k];
    TransferCount w{grp->word(g), {}};
    for (std::size_t i = 0; i < r; ++i) {
      int c = transfer_count(subgroups[i], iota, g);
      w.counts.push_back(c);
      counts(k, i) = c;
    }
    out.witness.push_back(std::move(w));
  }
  FiniteSubgroup k = finite_kernel(IntVector(r, Integer(iota.p)), IntVector(ngens, Integer(iota.p)), counts);
  out.group.degree = 1;
  out.group.presentation = k.presentation;
  out.characters = std::move(k.generators);
  return out;
}

}  // namespace tori
