#pragma once

// Structured reports (JSON) and their plain-text rendering.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skewtower/graded.hpp"
#include "skewtower/ideals.hpp"
#include "skewtower/parser.hpp"
#include "skewtower/render.hpp"
#include "skewtower/tower.hpp"

namespace skewtower {

using Json = nlohmann::ordered_json;

inline Json tower_header_json(const RingTower& t) {
  return Json{{"tower", t.name()},
              {"field", t.field().name()},
              {"precision", t.precision()},
              {"generators", generator_names(t)},
              {"presentation", t.presentation().block_sizes}};
}

inline Json to_json(const ValidationReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"generator", s.generator},
                     {"images_checked", s.images_checked},
                     {"pairs_checked", s.pairs_checked},
                     {"linear_part_invertible", s.linear_part_invertible}});
  }
  return Json{{"valid", true}, {"precision", r.precision}, {"steps", steps}};
}

inline Json to_json(const GradedPresentation& gp) {
  Json steps = Json::array();
  for (int j = 0; j < static_cast<int>(gp.steps.size()); ++j) {
    const auto& step = gp.steps[static_cast<std::size_t>(j)];
    Json sigma = Json::object(), delta = Json::object();
    for (int t = 0; t < j; ++t) {
      Terms image;
      for (int s = 0; s < j; ++s) add_term(image, Monomial::generator(s), step.sigma_bar.at(t, s));
      const std::string& sym = gp.symbols[static_cast<std::size_t>(t)];
      sigma[sym] = render_terms(image, gp.symbols);
      delta[sym] = gp.render(step.delta_bar[static_cast<std::size_t>(t)]);
    }
    steps.push_back({{"symbol", gp.symbols[static_cast<std::size_t>(j)]}, {"sigma_bar", sigma}, {"delta_bar", delta}});
  }
  return Json{{"filtration", to_string(gp.filtration)},
              {"symbols", gp.symbols},
              {"weights", gp.weights},
              {"delta_bar_zero", gp.delta_bar_is_zero()},
              {"relations", gp.relations()},
              {"steps", steps}};
}

inline Json to_json(const StabilityReport& r, const RingTower& t) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json entry{{"i", p.i}, {"j", p.j}, {"holds", p.holds}};
    if (p.witness) {
      entry["step"] = p.step;
      entry["witness"] = {{"generator", t.generator_name(p.witness->generator)},
                          {"map", to_string(p.witness->kind)},
                          {"image", render_series(p.witness->image)},
                          {"reason", p.witness->reason}};
    }
    pairs.push_back(entry);
  }
  return Json{{"presentation", r.presentation.block_sizes},
              {"precision", r.precision},
              {"stable", r.stable()},
              {"pairs", pairs}};
}

inline Json to_json(const ObstructionReport& r, const RingTower& t) {
  Json stage2 = Json::array();
  for (const auto& s : r.stage2) {
    Json survivors = Json::array();
    for (const auto& v : s.survivors) survivors.push_back({{"t", v.t}, {"eta", v.eta}, {"theta", v.theta}});
    stage2.push_back({{"s", s.s}, {"survivors", survivors}});
  }
  return Json{{"coordinates", generator_names(t)},
              {"defect", r.defect},
              {"abelian", r.abelian},
              {"truncation_order", r.truncation_order},
              {"stage1_survivors", r.stage1_survivors},
              {"stage2_run", r.stage2_run},
              {"stage2", stage2},
              {"verdict", to_string(r.verdict)}};
}

/// Dimension and ring-theoretic flags that follow from known results once
/// their hypotheses have been checked; nothing here is computed directly.
inline Json derived_flags(const RingTower& t, bool validated, RigidityVerdict rigidity) {
  const int n = t.generator_count();
  Json hyp_field = Json::array({"coefficients form a field", "tower validated up to precision"});
  auto flag = [](Json value, const std::string& basis, Json hypotheses) {
    return Json{{"value", std::move(value)}, {"basis", basis}, {"hypotheses", std::move(hypotheses)}};
  };
  Json out = Json::object();
  if (!validated) return out;
  out["krull_dimension"] = flag(n, "dimension theorem for iterated skew power series rings over a field", hyp_field);
  out["global_dimension"] = flag(n, "dimension theorem for iterated skew power series rings over a field", hyp_field);

  Json clk_hyp = Json::array();
  if (rigidity == RigidityVerdict::RigidByExhibitedPresentation) clk_hyp.push_back("stable presentation of length n");
  if (t.is_pure_automorphic()) clk_hyp.push_back("pure automorphic type");
  if (clk_hyp.empty()) {
    out["classical_krull_dimension"] =
        flag(nullptr, "not derived: neither rigid by an exhibited presentation nor of pure automorphic type", clk_hyp);
  } else {
    out["classical_krull_dimension"] =
        flag(n, "classical Krull dimension of rigid or pure automorphic towers", clk_hyp);
  }
  out["prime"] = flag(true, "primality lifts from the associated graded ring",
                      Json::array({"associated graded ring of the base field is prime"}));
  out["domain"] = flag(true, "associated graded ring is an iterated skew polynomial ring over a field",
                       Json::array({"associated graded ring of the base field is a domain"}));
  out["noetherian"] = flag(true, "associated graded ring is an iterated skew polynomial ring over a field",
                           Json::array({"associated graded ring of the base field is noetherian"}));
  return out;
}

/// Everything at once. Rigidity failures that are preconditions (such as
/// rational coefficients) are reported as INCONCLUSIVE with a note.
inline Json full_report(const TowerPtr& tower) {
  const RingTower& t = *tower;
  Json out = tower_header_json(t);
  out["validation"] = to_json(validate_tower(tower));
  out["residue_rank"] = t.precision() >= 3 ? Json(residue_rank(tower)) : Json(nullptr);
  Json graded = Json::object();
  graded["m-adic"] = to_json(gr_presentation(tower, Filtration::MAdic));
  if (t.generator_count() > 0) graded["f"] = to_json(gr_presentation(tower, Filtration::F));
  out["graded"] = graded;
  out["stability"] = to_json(check_presentation_stability(tower), t);
  RigidityVerdict verdict = RigidityVerdict::Inconclusive;
  try {
    const ObstructionReport r = rigidity_report(tower);
    verdict = r.verdict;
    out["rigidity"] = to_json(r, t);
  } catch (const Error& e) {
    out["rigidity"] = Json{{"verdict", to_string(RigidityVerdict::Inconclusive)}, {"note", e.what()}};
  }
  out["derived"] = derived_flags(t, true, verdict);
  return out;
}

namespace detail {

inline std::string vector_text(const std::vector<std::int64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ":" : "") + std::to_string(v[i]);
  return s + "]";
}

inline std::string json_scalar_text(const Json& j) {
  if (j.is_null()) return "n/a";
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  return j.dump();
}

}  // namespace detail

inline std::string text_header(const Json& j) {
  std::ostringstream out;
  out << "tower " << j["tower"].get<std::string>() << " over " << j["field"].get<std::string>() << ", precision "
      << j["precision"].get<int>() << "\n";
  out << "generators:";
  for (const auto& g : j["generators"]) out << " " << g.get<std::string>();
  out << "\n";
  return out.str();
}

inline std::string text_validation(const Json& j) {
  std::ostringstream out;
  out << "valid up to degree " << j["precision"].get<int>() - 1 << "\n";
  for (const auto& s : j["steps"]) {
    out << "  step " << s["generator"].get<std::string>() << ": " << s["images_checked"].get<int>()
        << " images local, " << s["pairs_checked"].get<int>() << " relations consistent, linear part invertible\n";
  }
  return out.str();
}

inline std::string text_graded(const Json& j) {
  std::ostringstream out;
  out << "graded ring (" << j["filtration"].get<std::string>() << "), weights";
  for (std::size_t i = 0; i < j["symbols"].size(); ++i) {
    out << " " << j["symbols"][i].get<std::string>() << ":" << j["weights"][i].get<int>();
  }
  out << "\n";
  for (const auto& r : j["relations"]) out << "  " << r.get<std::string>() << "\n";
  out << "  delta-bar " << (j["delta_bar_zero"].get<bool>() ? "is zero" : "is nonzero") << "\n";
  return out.str();
}

inline std::string text_stability(const Json& j) {
  std::ostringstream out;
  out << "presentation";
  for (const auto& d : j["presentation"]) out << " " << d.get<int>();
  out << ": " << (j["stable"].get<bool>() ? "stable up to degree " + std::to_string(j["precision"].get<int>() - 1)
                                          : std::string("not stable"))
      << "\n";
  for (const auto& p : j["pairs"]) {
    if (p["holds"].get<bool>()) continue;
    const auto& w = p["witness"];
    out << "  pair (" << p["i"].get<int>() << ", " << p["j"].get<int>() << ") fails at step "
        << p["step"].get<std::string>() << ": " << w["map"].get<std::string>() << "("
        << w["generator"].get<std::string>() << ") = " << w["image"].get<std::string>() << "\n";
  }
  return out.str();
}

inline std::string text_obstruction(const Json& j) {
  std::ostringstream out;
  out << "verdict " << j["verdict"].get<std::string>() << "\n";
  if (j.contains("note")) {
    out << "  " << j["note"].get<std::string>() << "\n";
    return out.str();
  }
  out << "  defect " << j["defect"].get<int>() << (j["abelian"].get<bool>() ? " (abelian)" : "")
      << ", truncation order " << j["truncation_order"].get<int>() << "\n";
  if (j["verdict"] == "RIGID_BY_EXHIBITED_PRESENTATION") return out.str();
  out << "  coordinates";
  for (const auto& c : j["coordinates"]) out << " " << c.get<std::string>();
  out << "\n  stage 1 survivors:";
  if (j["stage1_survivors"].empty()) out << " none";
  for (const auto& v : j["stage1_survivors"]) out << " " << detail::vector_text(v.get<std::vector<std::int64_t>>());
  out << "\n";
  for (const auto& s : j["stage2"]) {
    out << "  stage 2 for " << detail::vector_text(s["s"].get<std::vector<std::int64_t>>()) << ":";
    if (s["survivors"].empty()) out << " no independent survivor";
    for (const auto& v : s["survivors"]) {
      out << " " << detail::vector_text(v["t"].get<std::vector<std::int64_t>>()) << " (eta " << v["eta"].get<int>()
          << ", theta " << v["theta"].get<int>() << ")";
    }
    out << "\n";
  }
  return out.str();
}

inline std::string text_derived(const Json& j) {
  std::ostringstream out;
  for (const auto& [key, flag] : j.items()) {
    out << "  " << key << " = " << detail::json_scalar_text(flag["value"]) << "  (" << flag["basis"].get<std::string>()
        << ")\n";
  }
  return out.str();
}

inline std::string text_full_report(const Json& j) {
  std::ostringstream out;
  out << text_header(j) << text_validation(j["validation"]);
  out << "residue rank dim(m/m^2) = " << detail::json_scalar_text(j["residue_rank"]) << "\n";
  for (const auto& [key, g] : j["graded"].items()) out << text_graded(g);
  out << text_stability(j["stability"]) << "rigidity: " << text_obstruction(j["rigidity"]);
  out << "derived:\n" << text_derived(j["derived"]);
  return out.str();
}

}  // namespace skewtower
