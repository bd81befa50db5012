#include "tori/localglobal.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tori/catalog.hpp"
#include "tori/error.hpp"

namespace tori {

LocalFamily default_family(const GroupPtr& g) { return {cyclic_subgroup_classes(g), FamilyProvenance::default_cyclic}; }

LocalFamily user_family(std::vector<Subgroup> subgroups) {
  if (subgroups.empty()) throw InvalidInput("a local family must not be empty");
  for (const auto& s : subgroups)
    if (s.parent_ptr() != subgroups.front().parent_ptr()) throw InvalidInput("local family mixes groups");
  return {std::move(subgroups), FamilyProvenance::user_supplied};
}

CohomologyGroup sha(const TateSolver& global, const LocalFamily& family, const CohomologyOptions& options) {
  const int degree = global.degree();
  if (degree != 1 && degree != 2) throw InvalidInput("Sha is computed in degrees 1 and 2 only");
  if (family.subgroups.empty()) throw InvalidInput("a local family must not be empty");
  const GLattice& m = global.lattice();
  for (const auto& d : family.subgroups)
    if (d.parent_ptr() != m.group_ptr()) throw InvalidInput("local family is not over the lattice's group");

  CohomologyGroup out;
  out.degree = degree;
  const auto& src = global.group();
  if (src.is_trivial()) return out;

  IntVector target_orders;
  std::vector<IntVector> rows;
  for (const auto& d : family.subgroups) {
    if (d.is_trivial()) continue;  // Ĥ^i of the trivial group vanishes
    TateSolver local(restrict(m, d), degree, options);
    CohomologyMap res = restriction_map(global, d, local);
    for (std::size_t i = 0; i < res.matrix.rows(); ++i) {
      rows.emplace_back(res.matrix.row(i).begin(), res.matrix.row(i).end());
      target_orders.push_back(res.target.torsion[i]);
    }
  }
  IntMatrix stacked(rows.size(), src.presentation.torsion.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) stacked(i, j) = rows[i][j];
  FiniteSubgroup k = finite_kernel(src.presentation.torsion, target_orders, stacked);
  out.presentation = k.presentation;
  for (const auto& c : k.generators) {
    IntVector z(src.generators.front().size());
    for (std::size_t j = 0; j < c.size(); ++j)
      if (sgn(c[j]) != 0)
        for (std::size_t t = 0; t < z.size(); ++t) z[t] += c[j] * src.generators[j][t];
    out.generators.push_back(std::move(z));
  }
  return out;
}

CohomologyGroup sha(const GLattice& m, int degree, const LocalFamily& family, const CohomologyOptions& options) {
  if (degree != 1 && degree != 2) throw InvalidInput("Sha is computed in degrees 1 and 2 only");
  return sha(TateSolver(m, degree, options), family, options);
}

Fraction make_fraction(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw InvalidInput("zero denominator");
  Integer g = gcd(num, den);
  Fraction f{num / g, den / g};
  if (sgn(f.den) < 0) f.num = -f.num, f.den = -f.den;
  return f;
}

Fraction parse_fraction(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) throw InvalidInput("fraction '" + text + "' is not of the form a/b");
  try {
    return make_fraction(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw InvalidInput("fraction '" + text + "' is not of the form a/b");
  }
}

bool TamagawaReport::any_degenerate() const {
  return std::find(degenerate.begin(), degenerate.end(), true) != degenerate.end();
}

namespace {

const char* convention_name(MultiplierConvention c) { return c == MultiplierConvention::shared ? "shared" : "per_factor"; }

std::string members_string(const Subgroup& s) { return s.describe(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw InternalError("cross-check failed: " + what);
}

TransferH1 transfer_path(const TorusDatum& datum, MultiplierConvention convention) {
  if (convention == MultiplierConvention::shared) return h1_via_transfer(datum.subgroups, datum.iota);
  // One multiplier per factor: X splits as a sum of field-case lattices.
  TransferH1 out;
  out.group.degree = 1;
  for (const auto& h : datum.subgroups) {
    TransferH1 one = h1_via_transfer({h}, datum.iota);
    auto& t = out.group.presentation.torsion;
    t.insert(t.end(), one.group.presentation.torsion.begin(), one.group.presentation.torsion.end());
    if (out.witness.empty()) {
      out.witness = one.witness;
    } else {
      for (std::size_t k = 0; k < one.witness.size(); ++k) out.witness[k].counts.push_back(one.witness[k].counts.front());
    }
  }
  return out;
}

}  // namespace

TamagawaReport tamagawa(const TorusDatum& datum, const TamagawaOptions& options) {
  if (options.min_degree < kMinDegree || options.max_degree > kMaxDegree || options.min_degree > options.max_degree)
    throw InvalidInput("degree range must lie inside [-2, 3]");
  const GroupPtr& g = datum.group;
  const CohomologyOptions& copt = options.cohomology;
  TorusLattices lat = build_lattices(datum, options.convention);
  LocalFamily family = options.family ? *options.family : default_family(g);
  for (const auto& d : family.subgroups)
    if (d.parent_ptr() != g) throw InvalidInput("local family is not over the datum's group");

  TamagawaReport r;
  r.group = g->name();
  r.group_order = g->order();
  for (std::size_t i = 0; i < datum.subgroups.size(); ++i) {
    r.subgroups.push_back(members_string(datum.subgroups[i]));
    r.hplus.push_back(members_string(datum.hplus[i]));
    r.galois.push_back(to_string(galois_classifier(datum.subgroups[i])));
    r.degenerate.push_back(datum.degenerate[i]);
  }
  r.iota = g->word(datum.iota.iota);
  r.p = datum.iota.p;
  r.convention = convention_name(options.convention);
  r.family_provenance = family.provenance == FamilyProvenance::default_cyclic ? "default_cyclic" : "user_supplied";
  for (const auto& d : family.subgroups) r.family.push_back(members_string(d));
  r.rank_x = lat.x().rank();
  r.rank_x_aux = lat.x_aux().rank();

  // Structural checks: both sequences are complexes and the first maps inject.
  require(lat.norm.is_injective() && lat.fiber.is_injective(), "defining maps are not injective");
  require((lat.to_x.matrix() * lat.norm.matrix()).is_zero(), "X quotient does not kill the norm image");
  require((lat.to_aux.matrix() * lat.fiber.matrix()).is_zero(), "X_aux quotient does not kill the fiber image");
  require((lat.x_to_aux.matrix() * lat.multiplier.matrix()).is_zero(), "Z -> X -> X_aux is not a complex");
  r.cross_checks.push_back({"exact_sequences", "pass", "composites vanish, defining maps injective"});

  std::map<int, TateSolver> sx, saux;
  auto solver = [&](std::map<int, TateSolver>& cache, const GLattice& m, int i) -> const TateSolver& {
    auto it = cache.find(i);
    if (it == cache.end()) it = cache.emplace(i, TateSolver(m, i, copt)).first;
    return it->second;
  };
  for (int i = options.min_degree; i <= options.max_degree; ++i)
    r.table.push_back({i, solver(sx, lat.x(), i).group().presentation, solver(saux, lat.x_aux(), i).group().presentation});

  const TateSolver& x1 = solver(sx, lat.x(), 1);
  const TateSolver& x2 = solver(sx, lat.x(), 2);
  r.h1_tate = x1.group().presentation;
  r.h1_les = les_h1(lat.norm, copt).kernel;
  require(r.h1_les == r.h1_tate, "H^1(G, X) is " + r.h1_tate.to_string() + " from cochains but " +
                                     r.h1_les.to_string() + " from the long exact sequence");
  r.cross_checks.push_back({"h1_tate_vs_les", "pass", r.h1_tate.to_string()});
  if (datum.any_degenerate()) {
    r.cross_checks.push_back({"h1_tate_vs_transfer", "n/a", "iota in H: no transfer description"});
  } else {
    TransferH1 t = transfer_path(datum, options.convention);
    r.h1_transfer = t.group.presentation;
    r.transfer_witness = t.witness;
    require(*r.h1_transfer == r.h1_tate, "H^1(G, X) is " + r.h1_tate.to_string() + " from cochains but " +
                                             r.h1_transfer->to_string() + " from the transfer criterion");
    r.cross_checks.push_back({"h1_tate_vs_transfer", "pass", r.h1_tate.to_string()});
  }
  r.numerator = r.h1_tate.order();

  r.sha1 = sha(x1, family, copt).presentation;
  r.sha2 = sha(x2, family, copt).presentation;
  r.tau = make_fraction(r.numerator, r.sha2.order());

  const TateSolver& a1 = solver(saux, lat.x_aux(), 1);
  const TateSolver& a2 = solver(saux, lat.x_aux(), 2);
  r.aux_h1 = a1.group().order();
  r.aux_sha2 = sha(a2, family, copt).order();
  r.aux_ratio = make_fraction(r.aux_h1, r.aux_sha2);
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::ordered_json integer_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Integer integer_from(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw InvalidInput("expected an integer");
}

nlohmann::ordered_json presentation_json(const AbelianPresentation& p) {
  nlohmann::ordered_json inv = nlohmann::ordered_json::array();
  for (const auto& t : p.torsion) inv.push_back(integer_json(t));
  nlohmann::ordered_json out;
  out["invariants"] = std::move(inv);
  out["order"] = integer_json(p.order());
  out["text"] = p.to_string();
  return out;
}

AbelianPresentation presentation_from(const nlohmann::json& j) {
  AbelianPresentation p;
  for (const auto& t : j.at("invariants")) p.torsion.push_back(integer_from(t));
  return p;
}

}  // namespace

nlohmann::ordered_json to_json(const TamagawaReport& r) {
  using oj = nlohmann::ordered_json;
  oj input;
  input["group"] = r.group;
  input["order"] = r.group_order;
  input["subgroups"] = r.subgroups;
  input["hplus"] = r.hplus;
  input["iota"] = r.iota;
  input["p"] = r.p;
  input["galois"] = r.galois;
  input["degenerate"] = r.degenerate;
  input["convention"] = r.convention;
  input["family"] = oj{{"provenance", r.family_provenance}, {"subgroups", r.family}};

  oj table = oj::array();
  for (const auto& row : r.table)
    table.push_back(oj{{"degree", row.degree}, {"X", presentation_json(row.x)}, {"X_aux", presentation_json(row.x_aux)}});

  oj witness = oj::array();
  for (const auto& w : r.transfer_witness) witness.push_back(oj{{"generator", w.generator}, {"counts", w.counts}});
  oj paths;
  paths["tate"] = presentation_json(r.h1_tate);
  paths["les"] = presentation_json(r.h1_les);
  paths["transfer"] = r.h1_transfer ? presentation_json(*r.h1_transfer) : oj(nullptr);

  oj checks = oj::array();
  for (const auto& c : r.cross_checks) checks.push_back(oj{{"name", c.name}, {"status", c.status}, {"detail", c.detail}});

  oj out;
  out["input"] = std::move(input);
  out["lattices"] = oj{{"rank_X", r.rank_x}, {"rank_X_aux", r.rank_x_aux}};
  out["cohomology"] = std::move(table);
  out["numerator"] = oj{{"order", integer_json(r.numerator)}, {"paths", std::move(paths)}, {"transfer_witness", std::move(witness)}};
  out["sha1"] = presentation_json(r.sha1);
  out["sha2"] = presentation_json(r.sha2);
  out["tau"] = r.tau.to_string();
  out["aux"] = oj{{"h1_order", integer_json(r.aux_h1)}, {"sha2_order", integer_json(r.aux_sha2)}, {"ratio", r.aux_ratio.to_string()}};
  out["cross_checks"] = std::move(checks);
  return out;
}

TamagawaReport report_from_json(const nlohmann::json& j) {
  try {
    TamagawaReport r;
    const auto& in = j.at("input");
    r.group = in.at("group").get<std::string>();
    r.group_order = in.at("order").get<std::size_t>();
    r.subgroups = in.at("subgroups").get<std::vector<std::string>>();
    r.hplus = in.at("hplus").get<std::vector<std::string>>();
    r.iota = in.at("iota").get<std::string>();
    r.p = in.at("p").get<int>();
    r.galois = in.at("galois").get<std::vector<std::string>>();
    r.degenerate = in.at("degenerate").get<std::vector<bool>>();
    r.convention = in.at("convention").get<std::string>();
    r.family_provenance = in.at("family").at("provenance").get<std::string>();
    r.family = in.at("family").at("subgroups").get<std::vector<std::string>>();
    r.rank_x = j.at("lattices").at("rank_X").get<std::size_t>();
    r.rank_x_aux = j.at("lattices").at("rank_X_aux").get<std::size_t>();
    for (const auto& row : j.at("cohomology"))
      r.table.push_back({row.at("degree").get<int>(), presentation_from(row.at("X")), presentation_from(row.at("X_aux"))});
    const auto& num = j.at("numerator");
    r.numerator = integer_from(num.at("order"));
    r.h1_tate = presentation_from(num.at("paths").at("tate"));
    r.h1_les = presentation_from(num.at("paths").at("les"));
    if (!num.at("paths").at("transfer").is_null()) r.h1_transfer = presentation_from(num.at("paths").at("transfer"));
    for (const auto& w : num.at("transfer_witness"))
      r.transfer_witness.push_back({w.at("generator").get<std::string>(), w.at("counts").get<std::vector<int>>()});
    r.sha1 = presentation_from(j.at("sha1"));
    r.sha2 = presentation_from(j.at("sha2"));
    r.tau = parse_fraction(j.at("tau").get<std::string>());
    r.aux_h1 = integer_from(j.at("aux").at("h1_order"));
    r.aux_sha2 = integer_from(j.at("aux").at("sha2_order"));
    r.aux_ratio = parse_fraction(j.at("aux").at("ratio").get<std::string>());
    for (const auto& c : j.at("cross_checks"))
      r.cross_checks.push_back({c.at("name").get<std::string>(), c.at("status").get<std::string>(), c.at("detail").get<std::string>()});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace

std::string render_text(const TamagawaReport& r) {
  std::ostringstream os;
  const std::size_t w = 14;
  if (r.any_degenerate()) os << "DEGENERATE: iota in H\n";
  os << "Tamagawa report\n";
  os << pad("group", w) << r.group << " (order " << r.group_order << ")\n";
  os << pad("H", w) << join(r.subgroups, "; ") << "\n";
  os << pad("H+", w) << join(r.hplus, "; ") << "\n";
  os << pad("iota", w) << r.iota << " (p = " << r.p << ")\n";
  os << pad("extension", w) << join(r.galois, "; ") << "\n";
  if (r.subgroups.size() > 1) os << pad("multiplier", w) << r.convention << "\n";
  os << pad("family", w) << (r.family_provenance == "default_cyclic" ? "cyclic subgroup classes" : "user supplied")
     << " (" << r.family.size() << ")\n";
  os << pad("rank X", w) << r.rank_x << "\n";
  os << pad("rank X_aux", w) << r.rank_x_aux << "\n\n";

  const std::size_t cw = 22;
  os << pad("degree", 8) << pad("H^i(G, X)", cw) << "H^i(G, X_aux)\n";
  for (const auto& row : r.table)
    os << pad(std::to_string(row.degree), 8) << pad(row.x.to_string(), cw) << row.x_aux.to_string() << "\n";
  os << "\n";
  os << pad("numerator", w) << r.numerator.get_str() << "\n";
  os << pad("  cochains", w) << r.h1_tate.to_string() << "\n";
  os << pad("  les", w) << r.h1_les.to_string() << "\n";
  os << pad("  transfer", w) << (r.h1_transfer ? r.h1_transfer->to_string() : std::string("n/a"));
  if (!r.transfer_witness.empty()) {
    std::vector<std::string> counts;
    for (const auto& t : r.transfer_witness) {
      std::vector<std::string> c;
      for (int x : t.counts) c.push_back(std::to_string(x));
      counts.push_back(t.generator + ":" + join(c, ","));
    }
    os << "  [counts " << join(counts, " ") << "]";
  }
  os << "\n";
  os << pad("Sha^1(G, X)", w) << r.sha1.to_string() << "\n";
  os << pad("Sha^2(G, X)", w) << r.sha2.to_string() << "\n";
  os << pad("tau", w) << r.tau.to_string() << "\n";
  os << pad("aux ratio", w) << r.aux_ratio.to_string() << "  (|H^1| = " << r.aux_h1.get_str()
     << ", |Sha^2| = " << r.aux_sha2.get_str() << ")\n";
  os << pad("checks", w);
  std::vector<std::string> checks;
  for (const auto& c : r.cross_checks) checks.push_back(c.name + " " + c.status);
  os << join(checks, ", ") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Survey

namespace {

bool is_cyclic(const Group& g) {
  for (std::size_t x = 0; x < g.order(); ++x)
    if (static_cast<std::size_t>(g.element_order(static_cast<int>(x))) == g.order()) return true;
  return false;
}

std::vector<std::pair<std::string, std::size_t>> tally(const std::map<std::pair<Integer, Integer>, std::size_t>& m,
                                                       bool fraction) {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& [k, v] : m) out.emplace_back(fraction ? k.first.get_str() + "/" + k.second.get_str() : k.first.get_str(), v);
  return out;
}

}  // namespace

Survey batch_survey(const SurveyConstraints& c) {
  Survey out;
  std::vector<GroupPtr> groups;
  std::vector<std::string> seen;
  for (const auto& fam : c.families) {
    std::vector<GroupPtr> part;
    if (fam == "abelian") part = abelian_groups_up_to(c.max_order);
    else if (fam == "2-groups") part = two_groups_up_to(c.max_order);
    else if (fam == "catalog") part = catalog_groups_up_to(c.max_order);
    else throw InvalidInput("unknown survey family '" + fam + "' (expected abelian, 2-groups or catalog)");
    for (auto& g : part)
      if (std::find(seen.begin(), seen.end(), g->name()) == seen.end()) {
        seen.push_back(g->name());
        groups.push_back(std::move(g));
      }
  }

  std::map<std::pair<Integer, Integer>, std::size_t> nums, dens, taus;
  for (const auto& g : groups) {
    const bool cyclic = is_cyclic(*g);
    std::vector<Subgroup> hs = c.trivial_h_only ? std::vector<Subgroup>{trivial_subgroup(g)} : subgroup_classes(g);
    std::size_t before = out.reports.size();
    for (const auto& h : hs)
      for (const auto& iota : central_prime_order_elements(*g)) {
        if (h.contains(iota.iota) && !c.include_degenerate) continue;
        TamagawaReport r = tamagawa(make_torus_datum(g, {h}, iota), c.tamagawa);
        const Integer den = r.sha2.order();
        ++nums[{r.numerator, 1}];
        ++dens[{den, 1}];
        ++taus[{r.tau.num, r.tau.den}];
        if (r.numerator == 1 || r.numerator == r.p) ++out.summary.numerator_in_1_or_p;
        if (cyclic) {
          ++out.summary.cyclic_reports;
          if (den == 1) ++out.summary.cyclic_denominator_one;
        }
        out.reports.push_back(std::move(r));
      }
    if (out.reports.size() > before) ++out.summary.groups;
  }
  out.summary.reports = out.reports.size();
  out.summary.numerators = tally(nums, false);
  out.summary.denominators = tally(dens, false);
  out.summary.taus = tally(taus, true);
  return out;
}

nlohmann::ordered_json to_json(const Survey& s) {
  using oj = nlohmann::ordered_json;
  auto dist = [](const std::vector<std::pair<std::string, std::size_t>>& v) {
    oj o;
    for (const auto& [k, n] : v) o[k] = n;
    return o.is_null() ? oj::object() : o;
  };
  oj summary;
  summary["reports"] = s.summary.reports;
  summary["groups"] = s.summary.groups;
  summary["numerators"] = dist(s.summary.numerators);
  summary["denominators"] = dist(s.summary.denominators);
  summary["tau"] = dist(s.summary.taus);
  summary["numerator_in_1_or_p"] = s.summary.numerator_in_1_or_p;
  summary["cyclic_reports"] = s.summary.cyclic_reports;
  summary["cyclic_denominator_one"] = s.summary.cyclic_denominator_one;
  oj reports = oj::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  return oj{{"summary", std::move(summary)}, {"reports", std::move(reports)}};
}

std::string render_text(const Survey& s) {
  std::ostringstream os;
  auto dist = [](const std::vector<std::pair<std::string, std::size_t>>& v) {
    std::vector<std::string> parts;
    for (const auto& [k, n] : v) parts.push_back(k + ": " + std::to_string(n));
    return parts.empty() ? std::string("-") : join(parts, ", ");
  };
  os << "Survey: " << s.summary.reports << " reports over " << s.summary.groups << " groups\n";
  os << pad("numerators", 14) << dist(s.summary.numerators) << "\n";
  os << pad("denominators", 14) << dist(s.summary.denominators) << "\n";
  os << pad("tau", 14) << dist(s.summary.taus) << "\n";
  os << pad("num in {1,p}", 14) << s.summary.numerator_in_1_or_p << "/" << s.summary.reports << "\n";
  os << pad("cyclic den 1", 14) << s.summary.cyclic_denominator_one << "/" << s.summary.cyclic_reports << "\n\n";
  os << pad("group", 10) << pad("H", 28) << pad("iota", 10) << pad("H^1", 10) << pad("Sha^2", 12) << "tau\n";
  for (const auto& r : s.reports)
    os << pad(r.group, 10) << pad(join(r.subgroups, "; "), 28) << pad(r.iota, 10) << pad(r.h1_tate.to_string(), 10)
       << pad(r.sha2.to_string(), 12) << r.tau.to_string() << "\n";
  return os.str();
}

}  // namespace tori
