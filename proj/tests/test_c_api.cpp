// Exercises the shared library through its C header only.

#include <doctest.h>
#include <json.hpp>

#include <string>

#include "tori/tori.h"

namespace {

struct Ctx {
  tori_context* c = tori_context_new();
  ~Ctx() { tori_context_free(c); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  tori_string_free(s);
  return out;
}

nlohmann::json last_error(const Ctx& ctx) { return nlohmann::json::parse(tori_last_error(ctx.c)); }

}  // namespace

TEST_CASE("groups") {
  Ctx ctx;
  tori_group* g = nullptr;
  REQUIRE(tori_group_new(ctx.c, "catalog:D8", &g) == TORI_OK);
  CHECK(tori_group_order(g) == 8);
  char* out = nullptr;
  REQUIRE(tori_group_describe(ctx.c, g, TORI_FORMAT_JSON, &out) == TORI_OK);
  auto j = nlohmann::json::parse(take(out));
  CHECK(j.at("order") == 8);
  tori_group_free(g);

  CHECK(tori_group_new(ctx.c, R"({"catalog": {"name": "cyclic", "params": [5]}})", &g) == TORI_OK);
  CHECK(tori_group_order(g) == 5);
  tori_group_free(g);

  CHECK(tori_group_new(ctx.c, "nonsense", &g) == TORI_INVALID_INPUT);
  CHECK(last_error(ctx)["error"]["kind"] == "invalid_input");
  tori_context_set_max_order(ctx.c, 8);
  CHECK(tori_group_new(ctx.c, "D16", &g) == TORI_RESOURCE_LIMIT);
  CHECK(last_error(ctx)["error"]["kind"] == "resource_limit");
}

TEST_CASE("malformed JSON reports a position") {
  Ctx ctx;
  tori_torus* t = nullptr;
  CHECK(tori_torus_new(ctx.c, R"({"group": "D8", "iota": )", nullptr, &t) == TORI_INVALID_INPUT);
  auto e = last_error(ctx)["error"];
  CHECK(e["kind"] == "invalid_input");
  CHECK(e.contains("position"));
  CHECK(t == nullptr);
}

TEST_CASE("tori and reports") {
  Ctx ctx;
  tori_torus* t = nullptr;
  REQUIRE(tori_torus_new(ctx.c, R"({"group": "Q8", "iota": "i^2"})", nullptr, &t) == TORI_OK);
  CHECK(tori_torus_rank(t) == 5);
  CHECK(tori_torus_aux_rank(t) == 4);
  CHECK(tori_torus_is_degenerate(t) == 0);

  tori_report* r = nullptr;
  REQUIRE(tori_tamagawa(ctx.c, t, nullptr, &r) == TORI_OK);
  char* out = nullptr;
  REQUIRE(tori_report_render(ctx.c, r, TORI_FORMAT_JSON, &out) == TORI_OK);
  std::string json = take(out);
  auto j = nlohmann::json::parse(json);
  CHECK(j["tau"] == "1/2");
  REQUIRE(tori_report_roundtrip(ctx.c, json.c_str(), &out) == TORI_OK);
  CHECK(take(out) == json);
  REQUIRE(tori_report_render(ctx.c, r, TORI_FORMAT_TEXT, &out) == TORI_OK);
  CHECK(take(out).find("1/2") != std::string::npos);
  tori_report_free(r);

  // degree options, explicit family
  REQUIRE(tori_tamagawa(ctx.c, t, R"({"degrees": [1, 2], "family": [["i"], ["j"], ["i*j"]]})", &r) == TORI_OK);
  tori_report_free(r);
  CHECK(tori_tamagawa(ctx.c, t, R"({"degrees": "x"})", &r) == TORI_INVALID_INPUT);

  tori_context_set_max_columns(ctx.c, 10);
  CHECK(tori_tamagawa(ctx.c, t, nullptr, &r) == TORI_RESOURCE_LIMIT);
  tori_torus_free(t);
}

TEST_CASE("degenerate data") {
  Ctx ctx;
  tori_torus* t = nullptr;
  const char* datum = R"({"group": "Q8", "subgroups": [["i"]], "iota": "i^2"})";
  REQUIRE(tori_torus_new(ctx.c, datum, nullptr, &t) == TORI_OK);
  CHECK(tori_torus_is_degenerate(t) == 1);
  tori_torus_free(t);
  CHECK(tori_torus_new(ctx.c, datum, R"({"degenerate": "reject"})", &t) == TORI_INVALID_INPUT);
}

TEST_CASE("cohomology and sha requests") {
  Ctx ctx;
  char* out = nullptr;
  REQUIRE(tori_cohomology(ctx.c, R"({"lattice": {"group": "Q8", "trivial": true}, "degrees": [-2, 3]})",
                          TORI_FORMAT_JSON, &out) == TORI_OK);
  auto j = nlohmann::json::parse(take(out));
  CHECK(j["cohomology"][2]["group"]["text"] == "Z/8");
  REQUIRE(tori_sha(ctx.c, R"({"lattice": {"group": "C2^2", "norm_one": []}, "degrees": 2})", TORI_FORMAT_JSON, &out) ==
          TORI_OK);
  CHECK(take(out).find("Z/2") != std::string::npos);
  CHECK(tori_sha(ctx.c, R"({"lattice": {"group": "C2^2", "norm_one": []}, "degrees": [0, 2]})", TORI_FORMAT_JSON,
                 &out) == TORI_INVALID_INPUT);
  CHECK(tori_cohomology(ctx.c, R"({"lattice": {"group": "C2", "generator_action": [[[2]]]}})", TORI_FORMAT_JSON,
                        &out) == TORI_INVALID_INPUT);
  REQUIRE(tori_catalog(ctx.c, TORI_FORMAT_TEXT, &out) == TORI_OK);
  CHECK(take(out).find("dihedral") != std::string::npos);
}

TEST_CASE("null arguments") {
  Ctx ctx;
  CHECK(tori_tamagawa(ctx.c, nullptr, nullptr, nullptr) == TORI_INVALID_INPUT);
  CHECK(tori_catalog(nullptr, TORI_FORMAT_JSON, nullptr) == TORI_INVALID_INPUT);
  CHECK(tori_group_order(nullptr) == 0);
  CHECK(std::string(tori_last_error(nullptr)).empty());
}
