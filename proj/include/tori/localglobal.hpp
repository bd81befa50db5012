#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "tori/cohomology.hpp"
#include "tori/torus.hpp"

namespace tori {

enum class FamilyProvenance { default_cyclic, user_supplied };

struct LocalFamily {
  std::vector<Subgroup> subgroups;
  FamilyProvenance provenance = FamilyProvenance::default_cyclic;
};

LocalFamily default_family(const GroupPtr& g);  // cyclic_subgroup_classes
LocalFamily user_family(std::vector<Subgroup> subgroups);

// Kernel of Ĥ^i(G, M) -> prod_D Ĥ^i(D, M|_D), i in {1, 2}. Generators are
// returned as cocycles on G^i.
CohomologyGroup sha(const GLattice& m, int degree, const LocalFamily& family, const CohomologyOptions& options = {});
CohomologyGroup sha(const TateSolver& global, const LocalFamily& family, const CohomologyOptions& options = {});

struct Fraction {
  Integer num = 1;
  Integer den = 1;
  std::string to_string() const { return num.get_str() + "/" + den.get_str(); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};
Fraction make_fraction(const Integer& num, const Integer& den);
Fraction parse_fraction(const std::string& text);

struct TamagawaOptions {
  CohomologyOptions cohomology;
  int min_degree = kMinDegree;
  int max_degree = kMaxDegree;
  MultiplierConvention convention = MultiplierConvention::shared;
  std::optional<LocalFamily> family;  // default: cyclic subgroup classes
};

struct CrossCheck {
  std::string name;
  std::string status;  // "pass", "n/a"
  std::string detail;
  friend bool operator==(const CrossCheck&, const CrossCheck&) = default;
};

struct CohomologyRow {
  int degree = 0;
  AbelianPresentation x;
  AbelianPresentation x_aux;
  friend bool operator==(const CohomologyRow&, const CohomologyRow&) = default;
};

struct TamagawaReport {
  // input echo
  std::string group;
  std::size_t group_order = 0;
  std::vector<std::string> subgroups;   // H_i as element lists
  std::vector<std::string> hplus;
  std::vector<std::string> galois;      // per H_i
  std::vector<bool> degenerate;
  std::string iota;
  int p = 0;
  std::string convention;
  std::string family_provenance;
  std::vector<std::string> family;
  // lattices
  std::size_t rank_x = 0;
  std::size_t rank_x_aux = 0;
  // cohomology
  std::vector<CohomologyRow> table;
  // numerator
  Integer numerator = 1;
  AbelianPresentation h1_tate;
  AbelianPresentation h1_les;
  std::optional<AbelianPresentation> h1_transfer;  // absent for degenerate data
  std::vector<TransferCount> transfer_witness;
  // denominator
  AbelianPresentation sha1;
  AbelianPresentation sha2;
  Fraction tau;
  // auxiliary torus
  Integer aux_h1 = 1;
  Integer aux_sha2 = 1;
  Fraction aux_ratio;
  std::vector<CrossCheck> cross_checks;

  bool any_degenerate() const;
  friend bool operator==(const TamagawaReport&, const TamagawaReport&) = default;
};

// Throws InternalError when the three H^1 computations disagree.
TamagawaReport tamagawa(const TorusDatum& datum, const TamagawaOptions& options = {});

nlohmann::ordered_json to_json(const TamagawaReport& r);
TamagawaReport report_from_json(const nlohmann::json& j);
std::string render_text(const TamagawaReport& r);

struct SurveyConstraints {
  std::vector<std::string> families;  // "abelian", "2-groups", "catalog"
  int max_order = 16;
  bool include_degenerate = false;
  bool trivial_h_only = false;
  TamagawaOptions tamagawa;
};

struct SurveySummary {
  std::size_t reports = 0;
  std::size_t groups = 0;
  std::vector<std::pair<std::string, std::size_t>> numerators;
  std::vector<std::pair<std::string, std::size_t>> denominators;
  std::vector<std::pair<std::string, std::size_t>> taus;
  std::size_t numerator_in_1_or_p = 0;
  std::size_t cyclic_denominator_one = 0;
  std::size_t cyclic_reports = 0;
};

struct Survey {
  std::vector<TamagawaReport> reports;
  SurveySummary summary;
};

// Deterministic: groups in family order, then subgroup classes, then iota.
Survey batch_survey(const SurveyConstraints& constraints);
nlohmann::ordered_json to_json(const Survey& s);
std::string render_text(const Survey& s);

}  // namespace tori
