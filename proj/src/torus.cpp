#include "tori/torus.hpp"

#include "tori/catalog.hpp"
#include "tori/error.hpp"

namespace tori {

bool TorusDatum::any_degenerate() const {
  for (bool d : degenerate)
    if (d) return true;
  return false;
}

TorusDatum make_torus_datum(GroupPtr group, std::vector<Subgroup> subgroups, const CentralDatum& iota) {
  if (subgroups.empty()) throw InvalidInput("a torus datum needs at least one subgroup");
  for (const auto& h : subgroups)
    if (h.parent_ptr() != group) throw InvalidInput("subgroup of a different group");
  make_central_datum(*group, iota.iota, iota.p);
  TorusDatum d{std::move(group), std::move(subgroups), iota, {}, {}};
  for (const auto& h : d.subgroups) {
    std::vector<int> gens = h.generators();
    gens.push_back(iota.iota);
    d.hplus.push_back(subgroup_closure(d.group, gens));
    d.degenerate.push_back(h.contains(iota.iota));
  }
  return d;
}

int parse_element(const Group& g, const nlohmann::json& e) {
  if (e.is_number_integer()) {
    long v = e.get<long>();
    if (v < 0 || static_cast<std::size_t>(v) >= g.order())
      throw InvalidInput("element index " + std::to_string(v) + " out of range");
    return static_cast<int>(v);
  }
  if (e.is_string()) return g.parse_word(e.get<std::string>());
  throw InvalidInput("elements are given as indices or generator words");
}

Subgroup parse_subgroup(const GroupPtr& g, const nlohmann::json& gens) {
  if (!gens.is_array()) throw InvalidInput("a subgroup is given as a list of generators");
  std::vector<int> idx;
  for (const auto& e : gens) idx.push_back(parse_element(*g, e));
  return subgroup_closure(g, idx);
}

TorusDatum parse_torus_datum(const nlohmann::json& spec, std::size_t max_order) {
  if (!spec.is_object()) throw InvalidInput("torus datum must be a JSON object");
  if (!spec.contains("group")) throw InvalidInput("torus datum needs \"group\"");
  if (!spec.contains("iota")) throw InvalidInput("torus datum needs \"iota\"");
  GroupPtr g = build_group(spec.at("group"), max_order);
  std::vector<Subgroup> subs;
  const nlohmann::json list = spec.value("subgroups", nlohmann::json::array({nlohmann::json::array()}));
  if (!list.is_array() || list.empty()) throw InvalidInput("\"subgroups\" must be a nonempty list of generator lists");
  for (const auto& gens : list) subs.push_back(parse_subgroup(g, gens));
  int iota = parse_element(*g, spec.at("iota"));
  int p = g->element_order(iota);
  if (spec.contains("p")) {
    if (!spec.at("p").is_number_integer()) throw InvalidInput("\"p\" must be an integer");
    p = spec.at("p").get<int>();
  }
  return make_torus_datum(g, std::move(subs), make_central_datum(*g, iota, p));
}

nlohmann::json torus_datum_json(const TorusDatum& d) {
  nlohmann::ordered_json out;
  out["group"] = d.group->name();
  nlohmann::ordered_json subs = nlohmann::ordered_json::array();
  for (const auto& h : d.subgroups) {
    nlohmann::ordered_json gens = nlohmann::ordered_json::array();
    for (int x : h.generators()) gens.push_back(d.group->word(x));
    subs.push_back(std::move(gens));
  }
  out["subgroups"] = std::move(subs);
  out["iota"] = d.group->word(d.iota.iota);
  out["p"] = d.iota.p;
  return nlohmann::json::parse(out.dump());
}

std::size_t TorusLattices::expected_rank() const {
  std::size_t r = convention == MultiplierConvention::shared ? 1 : datum.subgroups.size();
  for (std::size_t i = 0; i < datum.subgroups.size(); ++i) r += datum.subgroups[i].index() - datum.hplus[i].index();
  return r;
}

TorusLattices build_lattices(const TorusDatum& datum, MultiplierConvention convention) {
  const GroupPtr& g = datum.group;
  const std::size_t r = datum.subgroups.size();
  const bool labelled = r > 1;

  std::vector<GLattice> sources, blocks;
  std::vector<LatticeMap> fibers;
  for (std::size_t i = 0; i < r; ++i) {
    LatticeMap f = fiber_sum_map(datum.subgroups[i], datum.hplus[i]);
    auto relabel = [&](const GLattice& l) {
      if (!labelled) return l;
      std::vector<std::string> labels;
      for (const auto& s : l.labels()) labels.push_back("H" + std::to_string(i + 1) + s);
      return GLattice(g, l.action_table(), std::move(labels));
    };
    GLattice src = relabel(f.source()), tgt = relabel(f.target());
    fibers.emplace_back(src, tgt, f.matrix());
    sources.push_back(src);
    blocks.push_back(tgt);
  }
  const std::size_t m = convention == MultiplierConvention::shared ? 1 : r;
  GLattice unit = trivial_lattice(g);
  std::vector<GLattice> multipliers;
  for (std::size_t k = 0; k < m; ++k)
    multipliers.emplace_back(g, unit.action_table(), std::vector<std::string>{m == 1 ? "u" : "u" + std::to_string(k + 1)});

  DirectSum a = direct_sum(sources, g);
  DirectSum perm = direct_sum(blocks, g);
  std::vector<GLattice> bparts = blocks;
  bparts.insert(bparts.end(), multipliers.begin(), multipliers.end());
  DirectSum b = direct_sum(bparts, g);
  DirectSum zm = direct_sum(multipliers, g);

  // Block i: gH_i+ |-> (fiber sum in block i, -1 on its multiplier coordinate).
  IntMatrix norm(b.sum.rank(), a.sum.rank());
  IntMatrix fiber(perm.sum.rank(), a.sum.rank());
  std::size_t row = 0, col = 0;
  const std::size_t zrow0 = perm.sum.rank();
  for (std::size_t i = 0; i < r; ++i) {
    const IntMatrix& f = fibers[i].matrix();
    for (std::size_t x = 0; x < f.rows(); ++x)
      for (std::size_t y = 0; y < f.cols(); ++y) norm(row + x, col + y) = f(x, y), fiber(row + x, col + y) = f(x, y);
    const std::size_t zrow = zrow0 + (m == 1 ? 0 : i);
    for (std::size_t y = 0; y < f.cols(); ++y) norm(zrow, col + y) = -1;
    row += f.rows();
    col += f.cols();
  }

  LatticeMap norm_map(a.sum, b.sum, std::move(norm));
  LatticeMap fiber_map(a.sum, perm.sum, std::move(fiber));
  Cokernel cx = cokernel_lattice(norm_map);
  Cokernel caux = cokernel_lattice(fiber_map);

  // Z^m -> X: the multiplier coordinates of B pushed to the quotient.
  IntMatrix mult(cx.lattice.rank(), m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < cx.lattice.rank(); ++i) mult(i, k) = cx.quotient.matrix()(i, zrow0 + k);

  // X -> X_aux: lift to B, drop the multiplier coordinates, project.
  IntMatrix drop(perm.sum.rank(), b.sum.rank());
  for (std::size_t i = 0; i < perm.sum.rank(); ++i) drop(i, i) = 1;
  IntMatrix down = caux.quotient.matrix() * drop * cx.lift;

  TorusLattices out{datum,
                    convention,
                    std::move(norm_map),
                    cx.quotient,
                    std::move(fiber_map),
                    caux.quotient,
                    LatticeMap(zm.sum, cx.lattice, std::move(mult)),
                    LatticeMap(cx.lattice, caux.lattice, std::move(down))};
  if (out.x().rank() != out.expected_rank() || out.x_aux().rank() + m != out.x().rank())
    throw InternalError("torus lattice ranks do not match the rank formula");
  return out;
}

TorusLattices build_etale_lattice(const std::vector<Subgroup>& subgroups, const CentralDatum& iota,
                                  MultiplierConvention convention) {
  if (subgroups.empty()) throw InvalidInput("an étale algebra needs at least one factor");
  return build_lattices(make_torus_datum(subgroups.front().parent_ptr(), subgroups, iota), convention);
}

TorusLattices build_character_lattice(const Subgroup& h, const CentralDatum& iota) {
  return build_etale_lattice({h}, iota, MultiplierConvention::shared);
}

GaloisType galois_classifier(const Subgroup& h) { return is_normal(h) ? GaloisType::galois : GaloisType::non_galois; }

const char* to_string(GaloisType t) { return t == GaloisType::galois ? "galois" : "non-galois"; }

}  // namespace tori
