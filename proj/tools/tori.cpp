// Command-line front end. Everything goes through the C API.
#include <CLI11.hpp>
#include <json.hpp>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tori/tori.h"

namespace {

using json = nlohmann::json;

struct Options {
  std::string format;
  std::size_t max_columns = 0;
  std::size_t max_order = 0;

  std::string input;
  std::string group;
  std::vector<std::string> h;
  std::string iota;
  int p = 0;
  std::string convention = "shared";
  std::string degenerate = "allow";

  std::string lattice = "X";
  std::string permutation;
  std::string norm_one;
  bool trivial = false;
  bool permutation_set = false;
  bool norm_one_set = false;

  std::string degrees;
  std::vector<std::string> family;
  std::string method = "cokernel";

  std::string families = "abelian,2-groups";
  int survey_order = 16;
  bool include_degenerate = false;
  bool trivial_h = false;
};

// Thrown for usage problems detected before the library is reached.
struct UsageError {
  std::string message;
};

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

// A word ("1" is the identity); "#k" is the element with index k.
json element(const std::string& w) {
  if (w.size() > 1 && w[0] == '#' && w.find_first_not_of("0123456789", 1) == std::string::npos) return std::stol(w.substr(1));
  return w;
}

json generator_list(const std::string& s) {
  json out = json::array();
  for (const auto& w : split(s, ',')) out.push_back(element(w));
  return out;
}

std::string read_input(const std::string& arg) {
  std::string t = trim(arg);
  if (!t.empty() && (t.front() == '{' || t.front() == '[')) return arg;
  std::ostringstream ss;
  if (t == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(arg);
  if (!f) throw UsageError{"cannot read input file '" + arg + "'"};
  ss << f.rdbuf();
  return ss.str();
}

json group_value(const std::string& g) {
  std::string t = trim(g);
  if (!t.empty() && t.front() == '{') {
    // Let the library report malformed JSON with its position.
    return json::parse(t, nullptr, false).is_discarded() ? json(t) : json::parse(t);
  }
  return t;
}

// The torus datum from --input or from --group/--H/--iota/--p.
std::string datum_text(const Options& o) {
  if (!o.input.empty()) return read_input(o.input);
  if (o.group.empty()) throw UsageError{"give --input or --group"};
  if (o.iota.empty()) throw UsageError{"give --iota"};
  json d;
  d["group"] = group_value(o.group);
  json subs = json::array();
  for (const auto& h : o.h) subs.push_back(generator_list(h));
  if (subs.empty()) subs.push_back(json::array());
  d["subgroups"] = subs;
  d["iota"] = element(o.iota);
  if (o.p != 0) d["p"] = o.p;
  return d.dump();
}

json degrees_value(const std::string& s) {
  auto colon = s.find(':');
  try {
    if (colon == std::string::npos) return json::array({std::stoi(s), std::stoi(s)});
    return json::array({std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))});
  } catch (const std::exception&) {
    throw UsageError{"--degrees expects lo:hi or a single degree"};
  }
}

json family_value(const std::vector<std::string>& fam) {
  if (fam.empty() || (fam.size() == 1 && fam.front() == "default")) return nullptr;
  json out = json::array();
  for (const auto& f : fam) out.push_back(generator_list(f));
  return out;
}

std::string lattice_request(const Options& o) {
  json lattice;
  if (o.trivial || o.permutation_set || o.norm_one_set) {
    if (o.group.empty()) throw UsageError{"--trivial, --permutation and --norm-one need --group"};
    lattice["group"] = group_value(o.group);
    if (o.trivial) lattice["trivial"] = true;
    else if (o.permutation_set) lattice["permutation"] = generator_list(o.permutation);
    else lattice["norm_one"] = generator_list(o.norm_one);
  } else if (!o.input.empty()) {
    std::string text = read_input(o.input);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return text;  // surfaced by the library with a position
    if (j.is_object() && j.contains("lattice")) return text;
    if (j.is_object() && j.contains("iota")) {
      lattice["torus"] = j;
      lattice["which"] = o.lattice;
      lattice["convention"] = o.convention;
    } else {
      lattice = j;
    }
  } else {
    lattice["torus"] = json::parse(datum_text(o));
    lattice["which"] = o.lattice;
    lattice["convention"] = o.convention;
  }
  json req;
  req["lattice"] = lattice;
  return req.dump();
}

int emit_error(tori_context* ctx, int status) {
  std::string err = tori_last_error(ctx);
  std::cout << err << "\n";
  json j = json::parse(err, nullptr, false);
  if (!j.is_discarded()) std::cerr << "error: " << j["error"]["message"].get<std::string>() << "\n";
  return status;
}

// Calls a C API entry point producing a string and prints the result.
template <class F>
int emit(tori_context* ctx, F&& call) {
  char* text = nullptr;
  tori_status st = call(&text);
  if (st != TORI_OK) return emit_error(ctx, st);
  std::cout << text;
  tori_string_free(text);
  return 0;
}

int usage_error(const std::string& message) {
  json e = {{"error", {{"kind", "invalid_input"}, {"message", message}}}};
  std::cout << e.dump() << "\n";
  std::cerr << "error: " << message << "\n";
  return 2;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "json or text (default: text on a terminal, json otherwise)")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--max-columns", o.max_columns, "cochain column ceiling (also TORI_MAX_COLUMNS)");
  cmd->add_option("--max-order", o.max_order, "largest group order accepted");
}

void add_torus(CLI::App* cmd, Options& o) {
  cmd->add_option("--input,-i", o.input, "JSON file, '-' for stdin, or inline JSON");
  cmd->add_option("--group,-g", o.group, "group shorthand (catalog:D8, C2xC4) or JSON spec");
  cmd->add_option("--H", o.h, "generators of H, comma separated; repeat for an etale algebra")->allow_extra_args(false);
  cmd->add_option("--iota", o.iota, "central element: a word such as g^2, or #k for index k");
  cmd->add_option("--p", o.p, "prime order of iota (default: its order)");
  cmd->add_option("--convention", o.convention, "multiplier convention for several subgroups")
      ->check(CLI::IsMember({"shared", "per_factor"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tate cohomology, Sha and Tamagawa numbers of norm-condition tori"};
  app.require_subcommand(1);
  Options o;

  auto* catalog = app.add_subcommand("catalog", "list the group constructors");
  add_common(catalog, o);

  auto* build = app.add_subcommand("build", "build a group, or the lattices X and X_aux of a torus datum");
  add_common(build, o);
  add_torus(build, o);
  build->add_option("--degenerate", o.degenerate, "allow or reject iota in H")->check(CLI::IsMember({"allow", "reject"}));

  auto* cohomology = app.add_subcommand("cohomology", "Tate cohomology of a lattice");
  auto* sha = app.add_subcommand("sha", "Sha^1 and Sha^2 of a lattice");
  for (auto* cmd : {cohomology, sha}) {
    add_common(cmd, o);
    add_torus(cmd, o);
    cmd->add_option("--lattice", o.lattice, "X or X_aux when the input is a torus datum")->check(CLI::IsMember({"X", "X_aux"}));
    cmd->add_flag("--trivial", o.trivial, "the trivial lattice Z over --group");
    cmd->add_option("--permutation", o.permutation, "Z[G/S] for S generated by these elements")->each([&](const std::string&) { o.permutation_set = true; });
    cmd->add_option("--norm-one", o.norm_one, "Z[G/S]/Z for S generated by these elements")->each([&](const std::string&) { o.norm_one_set = true; });
    cmd->add_option("--degrees", o.degrees, "lo:hi or a single degree");
  }
  cohomology->add_option("--method", o.method, "cokernel or kernel_image")->check(CLI::IsMember({"cokernel", "kernel_image"}));
  sha->add_option("--family", o.family, "a local subgroup by generators; repeat; 'default' for cyclic classes");

  auto* tamagawa = app.add_subcommand("tamagawa", "full Tamagawa number report");
  add_common(tamagawa, o);
  add_torus(tamagawa, o);
  tamagawa->add_option("--degrees", o.degrees, "cohomology table degrees lo:hi (default -2:3)");
  tamagawa->add_option("--family", o.family, "a local subgroup by generators; repeat; 'default' for cyclic classes");
  tamagawa->add_option("--degenerate", o.degenerate, "allow or reject iota in H")->check(CLI::IsMember({"allow", "reject"}));

  auto* survey = app.add_subcommand("survey", "Tamagawa reports over a family of groups");
  add_common(survey, o);
  survey->add_option("--families", o.families, "comma separated: abelian, 2-groups, catalog ('' for none)");
  survey->add_option("--max-group-order", o.survey_order, "largest group order in the sweep");
  survey->add_flag("--include-degenerate", o.include_degenerate, "also report data with iota in H");
  survey->add_flag("--trivial-h", o.trivial_h, "only H = {1}");
  survey->add_option("--degrees", o.degrees, "cohomology table degrees lo:hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  tori_context* ctx = tori_context_new();
  if (const char* env = std::getenv("TORI_MAX_COLUMNS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') return usage_error("TORI_MAX_COLUMNS must be a positive integer");
    tori_context_set_max_columns(ctx, static_cast<size_t>(v));
  }
  if (o.max_columns) tori_context_set_max_columns(ctx, o.max_columns);
  if (o.max_order) tori_context_set_max_order(ctx, o.max_order);
  const tori_format format = o.format.empty() ? (isatty(STDOUT_FILENO) ? TORI_FORMAT_TEXT : TORI_FORMAT_JSON)
                             : o.format == "text" ? TORI_FORMAT_TEXT
                                                  : TORI_FORMAT_JSON;

  int code = 0;
  try {
    if (catalog->parsed()) {
      code = emit(ctx, [&](char** out) { return tori_catalog(ctx, format, out); });
    } else if (build->parsed()) {
      if (o.iota.empty() && o.input.empty()) {
        if (o.group.empty()) throw UsageError{"give --input or --group"};
        tori_group* g = nullptr;
        tori_status st = tori_group_new(ctx, o.group.c_str(), &g);
        if (st != TORI_OK) {
          code = emit_error(ctx, st);
        } else {
          code = emit(ctx, [&](char** out) { return tori_group_describe(ctx, g, format, out); });
          tori_group_free(g);
        }
      } else {
        std::string datum = datum_text(o);
        std::string opts = json{{"convention", o.convention}, {"degenerate", o.degenerate}}.dump();
        tori_torus* t = nullptr;
        tori_status st = tori_torus_new(ctx, datum.c_str(), opts.c_str(), &t);
        if (st != TORI_OK) {
          code = emit_error(ctx, st);
        } else {
          code = emit(ctx, [&](char** out) { return tori_torus_describe(ctx, t, format, out); });
          tori_torus_free(t);
        }
      }
    } else if (cohomology->parsed() || sha->parsed()) {
      std::string text = lattice_request(o);
      json req = json::parse(text, nullptr, false);
      if (!req.is_discarded() && req.is_object()) {
        if (!o.degrees.empty()) req["degrees"] = degrees_value(o.degrees);
        if (cohomology->parsed()) req["method"] = o.method;
        if (sha->parsed() && !o.family.empty()) req["family"] = family_value(o.family);
        text = req.dump();
      }
      const bool coh = cohomology->parsed();
      code = emit(ctx, [&](char** out) {
        return coh ? tori_cohomology(ctx, text.c_str(), format, out) : tori_sha(ctx, text.c_str(), format, out);
      });
    } else if (tamagawa->parsed()) {
      std::string datum = datum_text(o);
      std::string topts = json{{"convention", o.convention}, {"degenerate", o.degenerate}}.dump();
      json ropts = json::object();
      if (!o.degrees.empty()) ropts["degrees"] = degrees_value(o.degrees);
      if (!o.family.empty()) ropts["family"] = family_value(o.family);
      tori_torus* t = nullptr;
      tori_status st = tori_torus_new(ctx, datum.c_str(), topts.c_str(), &t);
      if (st != TORI_OK) {
        code = emit_error(ctx, st);
      } else {
        tori_report* r = nullptr;
        std::string rtext = ropts.dump();
        st = tori_tamagawa(ctx, t, rtext.c_str(), &r);
        if (st != TORI_OK) {
          code = emit_error(ctx, st);
        } else {
          code = emit(ctx, [&](char** out) { return tori_report_render(ctx, r, format, out); });
          tori_report_free(r);
        }
        tori_torus_free(t);
      }
    } else if (survey->parsed()) {
      json req;
      req["families"] = split(o.families, ',');
      req["max_order"] = o.survey_order;
      req["include_degenerate"] = o.include_degenerate;
      req["trivial_h_only"] = o.trivial_h;
      if (!o.degrees.empty()) req["degrees"] = degrees_value(o.degrees);
      std::string text = req.dump();
      code = emit(ctx, [&](char** out) { return tori_survey(ctx, text.c_str(), format, out); });
    }
  } catch (const UsageError& e) {
    code = usage_error(e.message);
  }
  tori_context_free(ctx);
  return code;
}
