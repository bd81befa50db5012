#include "tori/glattice.hpp"

#include <deque>

#include "tori/error.hpp"

namespace tori {

GLattice::GLattice(GroupPtr group, std::vector<IntMatrix> action, std::vector<std::string> labels) {
  if (!group) throw InvalidInput("lattice needs a group");
  if (action.size() != group->order()) throw InvalidInput("action table must have one matrix per group element");
  const std::size_t r = action.empty() ? 0 : action.front().rows();
  for (const auto& m : action)
    if (m.rows() != r || m.cols() != r) throw InvalidInput("action matrices must all be rank x rank");
  if (!(action[0] == IntMatrix::identity(r))) throw InvalidInput("the identity must act trivially");
  for (std::size_t g = 0; g < action.size(); ++g)
    for (int s : group->generators())
      if (!(action[g] * action[static_cast<std::size_t>(s)] == action[static_cast<std::size_t>(group->multiply(static_cast<int>(g), s))]))
        throw InvalidInput("action is not a homomorphism: rho(" + group->word(static_cast<int>(g)) + ") rho(" +
                           group->word(s) + ") != rho(product)");
  if (labels.empty())
    for (std::size_t i = 0; i < r; ++i) labels.push_back("e" + std::to_string(i));
  if (labels.size() != r) throw InvalidInput("one label per basis vector required");

  auto d = std::make_shared<Data>();
  d->group = std::move(group);
  d->rank = r;
  d->action = std::move(action);
  d->labels = std::move(labels);
  data_ = std::move(d);
}

GLattice GLattice::from_generator_action(GroupPtr group, const std::vector<IntMatrix>& generator_action,
                                         std::vector<std::string> labels) {
  if (generator_action.size() != group->generators().size())
    throw InvalidInput("one action matrix per group generator required");
  std::size_t r = labels.size();
  if (!generator_action.empty()) r = generator_action.front().rows();
  std::vector<IntMatrix> table(group->order());
  std::vector<char> done(group->order(), 0);
  table[0] = IntMatrix::identity(r);
  done[0] = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int e = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < generator_action.size(); ++j) {
      const auto& m = generator_action[j];
      if (m.rows() != r || m.cols() != r) throw InvalidInput("generator action matrices must all be rank x rank");
      int x = group->multiply(e, group->generators()[j]);
      if (done[static_cast<std::size_t>(x)]) continue;
      done[static_cast<std::size_t>(x)] = 1;
      table[static_cast<std::size_t>(x)] = table[static_cast<std::size_t>(e)] * m;
      queue.push_back(x);
    }
  }
  return GLattice(std::move(group), std::move(table), std::move(labels));
}

IntMatrix GLattice::norm_matrix() const {
  IntMatrix n(rank(), rank());
  for (const auto& m : action_table())
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) n(i, j) += m(i, j);
  return n;
}

nlohmann::json matrix_to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).fits_slong_p()) row.push_back(m(i, j).get_si());
      else row.push_back(m(i, j).get_str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("a matrix is a list of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.front().size() : 0;
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput("matrix rows must be lists of equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& e = j[i][k];
      if (e.is_number_integer()) m(i, k) = Integer(e.get<long>());
      else if (e.is_string()) {
        try {
          m(i, k) = Integer(e.get<std::string>());
        } catch (const std::invalid_argument&) {
          throw InvalidInput("matrix entry '" + e.get<std::string>() + "' is not an integer");
        }
      } else throw InvalidInput("matrix entries must be integers");
    }
  }
  return m;
}

nlohmann::json GLattice::dump() const {
  nlohmann::ordered_json gens = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < group().generators().size(); ++j)
    gens.push_back({{"generator", group().generator_names()[j]}, {"matrix", matrix_to_json(action(group().generators()[j]))}});
  nlohmann::ordered_json out;
  out["rank"] = rank();
  out["labels"] = labels();
  out["generator_action"] = std::move(gens);
  return nlohmann::json::parse(out.dump());
}

LatticeMap::LatticeMap(GLattice source, GLattice target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (source_.group_ptr() != target_.group_ptr()) throw InvalidInput("lattice map between lattices over different groups");
  if (matrix_.rows() != target_.rank() || matrix_.cols() != source_.rank())
    throw InvalidInput("lattice map matrix has the wrong shape");
  for (std::size_t g = 0; g < source_.group().order(); ++g) {
    const int e = static_cast<int>(g);
    if (!(target_.action(e) * matrix_ == matrix_ * source_.action(e)))
      throw InvalidInput("lattice map is not equivariant under " + source_.group().word(e));
  }
}

bool LatticeMap::is_injective() const { return rank(matrix_) == source_.rank(); }

LatticeMap LatticeMap::then(const LatticeMap& next) const {
  if (next.source().rank() != target_.rank()) throw InvalidInput("maps do not compose");
  return LatticeMap(source_, next.target(), next.matrix() * matrix_);
}

GLattice zero_lattice(const GroupPtr& g) {
  return GLattice(g, std::vector<IntMatrix>(g->order(), IntMatrix(0, 0)), {});
}

GLattice trivial_lattice(const GroupPtr& g) {
  return GLattice(g, std::vector<IntMatrix>(g->order(), IntMatrix::identity(1)), {"1"});
}

GLattice permutation_lattice(const Subgroup& s) {
  const Group& g = s.parent();
  Cosets c = left_cosets(s);
  const std::size_t n = c.count();
  std::vector<IntMatrix> action;
  action.reserve(g.order());
  for (int x = 0; x < static_cast<int>(g.order()); ++x) {
    IntMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<std::size_t>(c.coset_of[static_cast<std::size_t>(g.multiply(x, c.representatives[j]))]), j) = 1;
    action.push_back(std::move(m));
  }
  std::vector<std::string> labels;
  for (int rep : c.representatives) labels.push_back("[" + g.word(rep) + "]");
  return GLattice(s.parent_ptr(), std::move(action), std::move(labels));
}

LatticeMap fiber_sum_map(const Subgroup& h, const Subgroup& hplus) {
  if (h.parent_ptr() != hplus.parent_ptr()) throw InvalidInput("subgroups of different groups");
  if (!is_subgroup_of(h, hplus)) throw InvalidInput("fiber_sum_map requires H to be contained in H+");
  Cosets ch = left_cosets(h), cp = left_cosets(hplus);
  IntMatrix m(ch.count(), cp.count());
  for (std::size_t i = 0; i < ch.count(); ++i)
    m(i, static_cast<std::size_t>(cp.coset_of[static_cast<std::size_t>(ch.representatives[i])])) = 1;
  return LatticeMap(permutation_lattice(hplus), permutation_lattice(h), std::move(m));
}

LatticeMap augmentation_map(const Subgroup& s) {
  GLattice src = permutation_lattice(s);
  IntMatrix m(1, src.rank());
  for (std::size_t j = 0; j < src.rank(); ++j) m(0, j) = 1;
  return LatticeMap(src, trivial_lattice(s.parent_ptr()), std::move(m));
}

LatticeMap norm_element_map(const Subgroup& s) {
  GLattice tgt = permutation_lattice(s);
  IntMatrix m(tgt.rank(), 1);
  for (std::size_t i = 0; i < tgt.rank(); ++i) m(i, 0) = 1;
  return LatticeMap(trivial_lattice(s.parent_ptr()), tgt, std::move(m));
}

DirectSum direct_sum(const std::vector<GLattice>& parts, const GroupPtr& g) {
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.group_ptr() != g) throw InvalidInput("direct sum of lattices over different groups");
    total += p.rank();
  }
  std::vector<IntMatrix> action;
  for (int x = 0; x < static_cast<int>(g->order()); ++x) {
    IntMatrix m(total, total);
    std::size_t off = 0;
    for (const auto& p : parts) {
      const IntMatrix& a = p.action(x);
      for (std::size_t i = 0; i < p.rank(); ++i)
        for (std::size_t j = 0; j < p.rank(); ++j) m(off + i, off + j) = a(i, j);
      off += p.rank();
    }
    action.push_back(std::move(m));
  }
  std::vector<std::string> labels;
  for (const auto& p : parts) labels.insert(labels.end(), p.labels().begin(), p.labels().end());
  DirectSum out{GLattice(g, std::move(action), std::move(labels)), {}, {}};
  std::size_t off = 0;
  for (const auto& p : parts) {
    IntMatrix inc(total, p.rank()), proj(p.rank(), total);
    for (std::size_t i = 0; i < p.rank(); ++i) inc(off + i, i) = 1, proj(i, off + i) = 1;
    out.inclusions.emplace_back(p, out.sum, std::move(inc));
    out.projections.emplace_back(out.sum, p, std::move(proj));
    off += p.rank();
  }
  return out;
}

DirectSum direct_sum(const GLattice& a, const GLattice& b) {
  if (a.group_ptr() != b.group_ptr()) throw InvalidInput("direct sum of lattices over different groups");
  return direct_sum({a, b}, a.group_ptr());
}

namespace {

std::string combination_label(const IntMatrix& lift, std::size_t col, const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < lift.rows(); ++i) {
    const Integer& c = lift(i, col);
    if (sgn(c) == 0) continue;
    if (!out.empty()) out += sgn(c) > 0 ? " + " : " - ";
    else if (sgn(c) < 0) out += "-";
    Integer a = abs(c);
    if (a != 1) out += a.get_str() + "*";
    out += labels[i];
  }
  return out.empty() ? "0" : out;
}

}  // namespace

Cokernel cokernel_lattice(const LatticeMap& f) {
  const GLattice& target = f.target();
  const std::size_t n = target.rank();
  SmithForm s = snf(f.matrix());
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.S(i, i) != 1)
      throw InvalidInput("cokernel has torsion (invariant factor " + s.S(i, i).get_str() +
                         "); the maps do not define a torus character lattice");
  const std::size_t q = n - s.rank;
  IntMatrix quotient = s.U.row_range(s.rank, q);
  IntMatrix lift = s.U_inverse.column_range(s.rank, q);

  std::vector<IntMatrix> action;
  action.reserve(target.group().order());
  for (const auto& m : target.action_table()) action.push_back(quotient * m * lift);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < q; ++k) labels.push_back(combination_label(lift, k, target.labels()));
  GLattice lattice(target.group_ptr(), std::move(action), std::move(labels));
  LatticeMap qmap(target, lattice, std::move(quotient));
  return Cokernel{std::move(lattice), std::move(qmap), std::move(lift)};
}

GLattice restrict(const GLattice& m, const Subgroup& s, GroupPtr s_group) {
  if (s.parent_ptr() != m.group_ptr()) throw InvalidInput("restriction to a subgroup of a different group");
  if (!s_group) s_group = s.as_group();
  std::vector<IntMatrix> action;
  action.reserve(s.order());
  for (int x : s.members()) action.push_back(m.action(x));
  return GLattice(std::move(s_group), std::move(action), m.labels());
}

GLattice norm_one_lattice(const Subgroup& s) { return cokernel_lattice(norm_element_map(s)).lattice; }

}  // namespace tori
