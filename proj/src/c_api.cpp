#include "tori/tori.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "tori/catalog.hpp"
#include "tori/cohomology.hpp"
#include "tori/error.hpp"
#include "tori/glattice.hpp"
#include "tori/localglobal.hpp"
#include "tori/torus.hpp"

using namespace tori;
using ojson = nlohmann::ordered_json;

struct tori_context {
  std::size_t max_columns = kDefaultColumnCeiling;
  std::size_t max_order = kDefaultMaxOrder;
  std::string last_error;
};

struct tori_group {
  GroupPtr group;
};

struct tori_torus {
  TorusDatum datum;
  TorusLattices lattices;
};

struct tori_report {
  TamagawaReport report;
};

namespace {

// Malformed JSON text; carries the byte offset reported by the parser.
class ParseFailure : public InvalidInput {
 public:
  ParseFailure(const std::string& what, std::size_t position) : InvalidInput(what), position(position) {}
  std::size_t position;
};

nlohmann::json parse(const char* text, const char* what) {
  if (text == nullptr) throw InvalidInput(std::string(what) + " is missing");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseFailure(std::string("malformed JSON in ") + what + " at byte " + std::to_string(e.byte) + ": " + e.what(),
                       e.byte);
  }
}

nlohmann::json parse_optional(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return nlohmann::json::object();
  nlohmann::json j = parse(text, what);
  if (!j.is_object()) throw InvalidInput(std::string(what) + " must be a JSON object");
  return j;
}

void set_error(tori_context* ctx, const char* kind, const std::string& message, std::optional<std::size_t> position = {}) {
  ojson e;
  e["kind"] = kind;
  e["message"] = message;
  if (position) e["position"] = *position;
  ctx->last_error = ojson{{"error", std::move(e)}}.dump();
}

template <class F>
tori_status guard(tori_context* ctx, F&& body) {
  if (!ctx) return TORI_INVALID_INPUT;
  ctx->last_error.clear();
  try {
    body();
    return TORI_OK;
  } catch (const ParseFailure& e) {
    set_error(ctx, "invalid_input", e.what(), e.position);
    return TORI_INVALID_INPUT;
  } catch (const InvalidInput& e) {
    set_error(ctx, "invalid_input", e.what());
    return TORI_INVALID_INPUT;
  } catch (const ResourceLimit& e) {
    set_error(ctx, "resource_limit", e.what());
    return TORI_RESOURCE_LIMIT;
  } catch (const InternalError& e) {
    set_error(ctx, "internal_error", e.what());
    return TORI_INTERNAL_ERROR;
  } catch (const nlohmann::json::exception& e) {
    set_error(ctx, "invalid_input", std::string("unexpected JSON shape: ") + e.what());
    return TORI_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    set_error(ctx, "resource_limit", "out of memory");
    return TORI_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    set_error(ctx, "internal_error", e.what());
    return TORI_INTERNAL_ERROR;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

CohomologyOptions cohomology_options(const tori_context* ctx) {
  CohomologyOptions o;
  o.max_columns = ctx->max_columns;
  return o;
}

GroupPtr group_from_text(const std::string& text, std::size_t max_order) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && (text[i] == '{' || text[i] == '"')) return build_group(parse(text.c_str(), "group spec"), max_order);
  return group_from_shorthand(text, max_order);
}

std::pair<int, int> parse_degrees(const nlohmann::json& req, int lo, int hi) {
  if (!req.contains("degrees")) return {lo, hi};
  const auto& d = req.at("degrees");
  if (d.is_number_integer()) return {d.get<int>(), d.get<int>()};
  if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer())
    throw InvalidInput("\"degrees\" must be [lo, hi]");
  return {d[0].get<int>(), d[1].get<int>()};
}

std::optional<LocalFamily> parse_family(const nlohmann::json& req, const GroupPtr& g) {
  if (!req.contains("family") || req.at("family").is_null()) return std::nullopt;
  const auto& f = req.at("family");
  if (f.is_string() && f.get<std::string>() == "default") return std::nullopt;
  if (!f.is_array()) throw InvalidInput("\"family\" must be a list of generator lists");
  std::vector<Subgroup> subs;
  for (const auto& gens : f) subs.push_back(parse_subgroup(g, gens));
  return user_family(std::move(subs));
}

MultiplierConvention parse_convention(const nlohmann::json& opts) {
  const std::string c = opts.value("convention", std::string("shared"));
  if (c == "shared") return MultiplierConvention::shared;
  if (c == "per_factor") return MultiplierConvention::per_factor;
  throw InvalidInput("unknown multiplier convention '" + c + "'");
}

struct LatticeRequest {
  GLattice lattice;
  std::string description;
};

LatticeRequest parse_lattice(const nlohmann::json& spec, std::size_t max_order) {
  if (!spec.is_object()) throw InvalidInput("lattice spec must be a JSON object");
  if (spec.contains("torus")) {
    TorusDatum d = parse_torus_datum(spec.at("torus"), max_order);
    TorusLattices l = build_lattices(d, parse_convention(spec));
    const std::string which = spec.value("which", std::string("X"));
    if (which == "X") return {l.x(), "X"};
    if (which == "X_aux") return {l.x_aux(), "X_aux"};
    throw InvalidInput("\"which\" must be X or X_aux");
  }
  if (!spec.contains("group")) throw InvalidInput("lattice spec needs \"torus\" or \"group\"");
  GroupPtr g = build_group(spec.at("group"), max_order);
  if (spec.value("trivial", false)) return {trivial_lattice(g), "Z"};
  if (spec.contains("permutation")) {
    Subgroup s = parse_subgroup(g, spec.at("permutation"));
    return {permutation_lattice(s), "Z[G/S], S = " + s.describe()};
  }
  if (spec.contains("norm_one")) {
    Subgroup s = parse_subgroup(g, spec.at("norm_one"));
    return {norm_one_lattice(s), "Z[G/S]/Z, S = " + s.describe()};
  }
  if (spec.contains("generator_action")) {
    std::vector<IntMatrix> gens;
    for (const auto& m : spec.at("generator_action")) gens.push_back(matrix_from_json(m));
    return {GLattice::from_generator_action(g, gens), "explicit"};
  }
  throw InvalidInput("lattice spec needs one of trivial, permutation, norm_one, generator_action");
}

ojson presentation_json(const AbelianPresentation& p) {
  ojson inv = ojson::array();
  for (const auto& t : p.torsion) inv.push_back(t.fits_slong_p() ? ojson(t.get_si()) : ojson(t.get_str()));
  return ojson{{"invariants", std::move(inv)}, {"order", p.order().get_str()}, {"text", p.to_string()}};
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

}  // namespace

extern "C" {

tori_context* tori_context_new(void) { return new (std::nothrow) tori_context(); }
void tori_context_free(tori_context* ctx) { delete ctx; }
void tori_context_set_max_columns(tori_context* ctx, size_t columns) {
  if (ctx) ctx->max_columns = columns;
}
void tori_context_set_max_order(tori_context* ctx, size_t order) {
  if (ctx) ctx->max_order = order;
}
const char* tori_last_error(const tori_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }
void tori_string_free(char* s) { std::free(s); }

tori_status tori_group_new(tori_context* ctx, const char* spec, tori_group** out) {
  return guard(ctx, [&] {
    if (!spec || !out) throw InvalidInput("null argument");
    *out = new tori_group{group_from_text(spec, ctx->max_order)};
  });
}

void tori_group_free(tori_group* g) { delete g; }
size_t tori_group_order(const tori_group* g) { return g ? g->group->order() : 0; }

tori_status tori_group_describe(tori_context* ctx, const tori_group* grp, tori_format format, char** out) {
  return guard(ctx, [&] {
    if (!grp || !out) throw InvalidInput("null argument");
    const Group& g = *grp->group;
    const Subgroup whole = whole_group(grp->group);
    const Abelianization ab = abelianization(whole);
    std::vector<std::string> classes, center;
    for (const auto& s : cyclic_subgroup_classes(grp->group)) classes.push_back(s.describe());
    for (int x : g.center()) center.push_back(g.word(x));
    if (format == TORI_FORMAT_TEXT) {
      std::ostringstream os;
      os << pad("group", 14) << g.name() << " (order " << g.order() << ", degree " << g.degree() << ")\n";
      os << pad("generators", 14);
      for (std::size_t i = 0; i < g.generators().size(); ++i) os << (i ? ", " : "") << g.generator_names()[i];
      os << "\n" << pad("abelian", 14) << (g.is_abelian() ? "yes" : "no") << "\n";
      os << pad("G^ab", 14) << ab.presentation.to_string() << "\n";
      os << pad("center", 14);
      for (std::size_t i = 0; i < center.size(); ++i) os << (i ? ", " : "") << center[i];
      os << "\n" << pad("cyclic", 14) << classes.size() << " classes\n";
      for (const auto& c : classes) os << "  " << c << "\n";
      os << "\n" << pad("index", 7) << pad("order", 7) << "word\n";
      for (int x = 0; x < static_cast<int>(g.order()); ++x)
        os << pad(std::to_string(x), 7) << pad(std::to_string(g.element_order(x)), 7) << g.word(x) << "\n";
      *out = copy_string(os.str());
      return;
    }
    ojson gens = ojson::array();
    for (std::size_t i = 0; i < g.generators().size(); ++i)
      gens.push_back(ojson{{"name", g.generator_names()[i]}, {"permutation", g.element(g.generators()[i])}});
    ojson elements = ojson::array();
    for (int x = 0; x < static_cast<int>(g.order()); ++x)
      elements.push_back(ojson{{"index", x}, {"word", g.word(x)}, {"order", g.element_order(x)}, {"permutation", g.element(x)}});
    ojson j;
    j["name"] = g.name();
    j["order"] = g.order();
    j["degree"] = g.degree();
    j["abelian"] = g.is_abelian();
    j["abelianization"] = presentation_json(ab.presentation);
    j["generators"] = std::move(gens);
    j["center"] = center;
    j["cyclic_subgroup_classes"] = classes;
    j["elements"] = std::move(elements);
    *out = copy_string(dump(j));
  });
}

tori_status tori_torus_new(tori_context* ctx, const char* datum, const char* options, tori_torus** out) {
  return guard(ctx, [&] {
    if (!out) throw InvalidInput("null argument");
    nlohmann::json spec = parse(datum, "torus datum");
    nlohmann::json opts = parse_optional(options, "torus options");
    TorusDatum d = parse_torus_datum(spec, ctx->max_order);
    const std::string policy = opts.value("degenerate", std::string("allow"));
    if (policy != "allow" && policy != "reject") throw InvalidInput("degenerate policy must be allow or reject");
    if (policy == "reject" && d.any_degenerate())
      throw InvalidInput("DEGENERATE: iota in H (rejected by the degenerate-input policy)");
    TorusLattices l = build_lattices(d, parse_convention(opts));
    *out = new tori_torus{std::move(d), std::move(l)};
  });
}

void tori_torus_free(tori_torus* t) { delete t; }
int tori_torus_is_degenerate(const tori_torus* t) { return t && t->datum.any_degenerate() ? 1 : 0; }
size_t tori_torus_rank(const tori_torus* t) { return t ? t->lattices.x().rank() : 0; }
size_t tori_torus_aux_rank(const tori_torus* t) { return t ? t->lattices.x_aux().rank() : 0; }

tori_status tori_torus_describe(tori_context* ctx, const tori_torus* t, tori_format format, char** out) {
  return guard(ctx, [&] {
    if (!t || !out) throw InvalidInput("null argument");
    const TorusDatum& d = t->datum;
    const TorusLattices& l = t->lattices;
    if (format == TORI_FORMAT_TEXT) {
      std::ostringstream os;
      if (d.any_degenerate()) os << "DEGENERATE: iota in H\n";
      os << pad("group", 14) << d.group->name() << " (order " << d.group->order() << ")\n";
      for (std::size_t i = 0; i < d.subgroups.size(); ++i) {
        os << pad(i ? "" : "H", 14) << d.subgroups[i].describe() << "  (" << to_string(galois_classifier(d.subgroups[i])) << ")\n";
      }
      for (std::size_t i = 0; i < d.hplus.size(); ++i) os << pad(i ? "" : "H+", 14) << d.hplus[i].describe() << "\n";
      os << pad("iota", 14) << d.group->word(d.iota.iota) << " (p = " << d.iota.p << ")\n";
      os << pad("rank X", 14) << l.x().rank() << "  (formula " << l.expected_rank() << ")\n";
      os << pad("rank X_aux", 14) << l.x_aux().rank() << "\n";
      auto lattice = [&](const char* name, const GLattice& m) {
        os << "\n" << name << " basis:\n";
        for (std::size_t i = 0; i < m.rank(); ++i) os << "  " << i << ": " << m.labels()[i] << "\n";
        for (std::size_t k = 0; k < m.group().generators().size(); ++k) {
          os << name << " action of " << m.group().generator_names()[k] << ":\n";
          const IntMatrix& a = m.action(m.group().generators()[k]);
          for (std::size_t i = 0; i < a.rows(); ++i) {
            os << " ";
            for (std::size_t j = 0; j < a.cols(); ++j) {
              std::string e = a(i, j).get_str();
              os << std::string(e.size() < 3 ? 3 - e.size() : 0, ' ') << e;
            }
            os << "\n";
          }
        }
      };
      lattice("X", l.x());
      lattice("X_aux", l.x_aux());
      *out = copy_string(os.str());
      return;
    }
    ojson j;
    j["datum"] = torus_datum_json(d);
    std::vector<std::string> hplus, galois;
    for (const auto& h : d.hplus) hplus.push_back(h.describe());
    for (const auto& h : d.subgroups) galois.push_back(to_string(galois_classifier(h)));
    j["hplus"] = hplus;
    j["galois"] = galois;
    j["degenerate"] = d.degenerate;
    j["convention"] = l.convention == MultiplierConvention::shared ? "shared" : "per_factor";
    j["rank_formula"] = l.expected_rank();
    j["X"] = l.x().dump();
    j["X_aux"] = l.x_aux().dump();
    j["maps"] = ojson{{"norm", matrix_to_json(l.norm.matrix())},
                      {"to_X", matrix_to_json(l.to_x.matrix())},
                      {"fiber", matrix_to_json(l.fiber.matrix())},
                      {"to_X_aux", matrix_to_json(l.to_aux.matrix())},
                      {"multiplier", matrix_to_json(l.multiplier.matrix())},
                      {"X_to_X_aux", matrix_to_json(l.x_to_aux.matrix())}};
    *out = copy_string(dump(j));
  });
}

tori_status tori_tamagawa(tori_context* ctx, const tori_torus* t, const char* options, tori_report** out) {
  return guard(ctx, [&] {
    if (!t || !out) throw InvalidInput("null argument");
    nlohmann::json opts = parse_optional(options, "tamagawa options");
    TamagawaOptions o;
    o.cohomology = cohomology_options(ctx);
    std::tie(o.min_degree, o.max_degree) = parse_degrees(opts, kMinDegree, kMaxDegree);
    o.convention = t->lattices.convention;
    o.family = parse_family(opts, t->datum.group);
    *out = new tori_report{tamagawa(t->datum, o)};
  });
}

void tori_report_free(tori_report* r) { delete r; }

tori_status tori_report_render(tori_context* ctx, const tori_report* r, tori_format format, char** out) {
  return guard(ctx, [&] {
    if (!r || !out) throw InvalidInput("null argument");
    *out = copy_string(format == TORI_FORMAT_TEXT ? render_text(r->report) : dump(to_json(r->report)));
  });
}

tori_status tori_report_roundtrip(tori_context* ctx, const char* report_json, char** out) {
  return guard(ctx, [&] {
    if (!out) throw InvalidInput("null argument");
    *out = copy_string(dump(to_json(report_from_json(parse(report_json, "report")))));
  });
}

tori_status tori_cohomology(tori_context* ctx, const char* request, tori_format format, char** out) {
  return guard(ctx, [&] {
    if (!out) throw InvalidInput("null argument");
    nlohmann::json req = parse(request, "cohomology request");
    if (!req.contains("lattice")) throw InvalidInput("cohomology request needs \"lattice\"");
    LatticeRequest lat = parse_lattice(req.at("lattice"), ctx->max_order);
    auto [lo, hi] = parse_degrees(req, kMinDegree, kMaxDegree);
    if (lo > hi) throw InvalidInput("empty degree range");
    CohomologyOptions o = cohomology_options(ctx);
    const std::string method = req.value("method", std::string("cokernel"));
    if (method == "kernel_image") o.method = TateMethod::kernel_image;
    else if (method != "cokernel") throw InvalidInput("method must be cokernel or kernel_image");
    std::vector<CohomologyGroup> groups;
    for (int i = lo; i <= hi; ++i) groups.push_back(tate(lat.lattice, i, o));
    if (format == TORI_FORMAT_TEXT) {
      std::ostringstream os;
      os << pad("group", 10) << lat.lattice.group().name() << " (order " << lat.lattice.group().order() << ")\n";
      os << pad("lattice", 10) << lat.description << ", rank " << lat.lattice.rank() << "\n\n";
      os << pad("degree", 8) << "H^i(G, M)\n";
      for (const auto& c : groups) os << pad(std::to_string(c.degree), 8) << c.to_string() << "\n";
      *out = copy_string(os.str());
      return;
    }
    ojson rows = ojson::array();
    for (const auto& c : groups) {
      ojson row = presentation_json(c.presentation);
      rows.push_back(ojson{{"degree", c.degree}, {"group", std::move(row)}});
    }
    ojson j;
    j["group"] = lat.lattice.group().name();
    j["lattice"] = ojson{{"description", lat.description}, {"rank", lat.lattice.rank()}};
    j["method"] = method;
    j["cohomology"] = std::move(rows);
    *out = copy_string(dump(j));
  });
}

tori_status tori_sha(tori_context* ctx, const char* request, tori_format format, char** out) {
  return guard(ctx, [&] {
    if (!out) throw InvalidInput("null argument");
    nlohmann::json req = parse(request, "sha request");
    if (!req.contains("lattice")) throw InvalidInput("sha request needs \"lattice\"");
    LatticeRequest lat = parse_lattice(req.at("lattice"), ctx->max_order);
    auto [lo, hi] = parse_degrees(req, 1, 2);
    if (lo < 1 || hi > 2 || lo > hi) throw InvalidInput("Sha is computed in degrees 1 and 2 only");
    std::optional<LocalFamily> fam = parse_family(req, lat.lattice.group_ptr());
    LocalFamily family = fam ? *fam : default_family(lat.lattice.group_ptr());
    CohomologyOptions o = cohomology_options(ctx);
    std::vector<std::pair<CohomologyGroup, CohomologyGroup>> rows;
    for (int i = lo; i <= hi; ++i) {
      TateSolver global(lat.lattice, i, o);
      rows.emplace_back(global.group(), sha(global, family, o));
    }
    std::vector<std::string> members;
    for (const auto& d : family.subgroups) members.push_back(d.describe());
    const std::string provenance = family.provenance == FamilyProvenance::default_cyclic ? "default_cyclic" : "user_supplied";
    if (format == TORI_FORMAT_TEXT) {
      std::ostringstream os;
      os << pad("group", 10) << lat.lattice.group().name() << " (order " << lat.lattice.group().order() << ")\n";
      os << pad("lattice", 10) << lat.description << ", rank " << lat.lattice.rank() << "\n";
      os << pad("family", 10) << provenance << " (" << members.size() << ")\n\n";
      os << pad("degree", 8) << pad("H^i(G, M)", 22) << "Sha^i(G, M)\n";
      for (const auto& [g, s] : rows) os << pad(std::to_string(s.degree), 8) << pad(g.to_string(), 22) << s.to_string() << "\n";
      *out = copy_string(os.str());
      return;
    }
    ojson list = ojson::array();
    for (const auto& [g, s] : rows)
      list.push_back(ojson{{"degree", s.degree}, {"global", presentation_json(g.presentation)}, {"sha", presentation_json(s.presentation)}});
    ojson j;
    j["group"] = lat.lattice.group().name();
    j["lattice"] = ojson{{"description", lat.description}, {"rank", lat.lattice.rank()}};
    j["family"] = ojson{{"provenance", provenance}, {"subgroups", members}};
    j["sha"] = std::move(list);
    *out = copy_string(dump(j));
  });
}

tori_status tori_survey(tori_context* ctx, const char* request, tori_format format, char** out) {
  return guard(ctx, [&] {
    if (!out) throw InvalidInput("null argument");
    nlohmann::json req = parse_optional(request, "survey request");
    SurveyConstraints c;
    if (req.contains("families")) c.families = req.at("families").get<std::vector<std::string>>();
    c.max_order = req.value("max_order", 16);
    if (c.max_order < 1 || static_cast<std::size_t>(c.max_order) > ctx->max_order)
      throw InvalidInput("max_order must lie in [1, " + std::to_string(ctx->max_order) + "]");
    c.include_degenerate = req.value("include_degenerate", false);
    c.trivial_h_only = req.value("trivial_h_only", false);
    c.tamagawa.cohomology = cohomology_options(ctx);
    std::tie(c.tamagawa.min_degree, c.tamagawa.max_degree) = parse_degrees(req, kMinDegree, kMaxDegree);
    Survey s = batch_survey(c);
    *out = copy_string(format == TORI_FORMAT_TEXT ? render_text(s) : dump(to_json(s)));
  });
}

tori_status tori_catalog(tori_context* ctx, tori_format format, char** out) {
  return guard(ctx, [&] {
    if (!out) throw InvalidInput("null argument");
    auto entries = catalog_entries();
    if (format == TORI_FORMAT_TEXT) {
      std::ostringstream os;
      os << pad("name", 20) << pad("params", 18) << pad("shorthand", 12) << "description\n";
      for (const auto& e : entries) os << pad(e.name, 20) << pad(e.params, 18) << pad(e.shorthand, 12) << e.description << "\n";
      *out = copy_string(os.str());
      return;
    }
    ojson list = ojson::array();
    for (const auto& e : entries)
      list.push_back(ojson{{"name", e.name}, {"params", e.params}, {"shorthand", e.shorthand}, {"generators", e.generators},
                           {"description", e.description}});
    *out = copy_string(dump(ojson{{"catalog", std::move(list)}}));
  });
}

}  // extern "C"
