#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "compositum/acceptance.hpp"
#include "compositum/affine.hpp"
#include "compositum/classify.hpp"
#include "compositum/cyclo.hpp"
#include "compositum/deck.hpp"
#include "compositum/factorized.hpp"
#include "compositum/germ.hpp"
#include "compositum/poly.hpp"
#include "compositum/zmodule.hpp"

namespace compositum {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "compositum/1";
inline constexpr const char* kVersion = "1.0.0";

inline Json to_json(const CycloNum& c) { return c.str(); }

inline Json to_json(const Rational& r) { return r.get_str(); }

inline Json to_json(const Poly& p) {
  Json coeffs = Json::array();
  for (const CycloNum& c : p.coeffs()) coeffs.push_back(c.str());
  return Json{{"expr", to_string(p)}, {"degree", p.is_zero() ? -1 : p.degree()}, {"coeffs", coeffs}};
}

inline Json to_json(const Germ& g) {
  Json coeffs = Json::array();
  for (const CycloNum& c : g.stored()) coeffs.push_back(c.str());
  return Json{{"expr", g.str()}, {"exact", g.is_exact()}, {"trunc", g.trunc_order()}, {"coeffs", coeffs}};
}

inline Json to_json(const ZModule& m) {
  Json basis = Json::array();
  for (const CycloNum& b : m.basis()) basis.push_back(b.str());
  const DiscretenessVerdict v = zmodule_discreteness(m);
  return Json{{"field_order", m.order()}, {"rank", m.rank()}, {"basis", basis}, {"discrete", v.discrete}};
}

inline Json to_json(const StandardFormData& s) {
  return Json{{"n", s.n},
              {"m", s.m},
              {"beta", to_json(s.beta)},
              {"y_change", to_json(s.y_change)},
              {"z_change", to_json(s.z_change)}};
}

inline Json to_json(const GermGroupReport& r) {
  Json levels = Json::object();
  for (const auto& [k, residues] : r.levels) {
    Json xs = Json::array();
    for (const CycloNum& x : residues) xs.push_back(x.str());
    levels[std::to_string(k)] = xs;
  }
  Json lattice = Json::array();
  for (const LevelVerdict& v : r.lattice_verdicts)
    lattice.push_back(Json{{"level", v.level}, {"rank", v.rank}, {"discrete", v.discrete}});
  return Json{{"verdict", r.verdict},
              {"word_bound", r.word_bound},
              {"trunc", r.trunc_order},
              {"elements_by_length", r.elements_found},
              {"nontrivial_levels", r.nontrivial_levels},
              {"level_residues", levels},
              {"level_lattices", lattice},
              {"outside_j1", r.outside_j1},
              {"identity_in_window", r.identity_in_window}};
}

inline Json to_json(const Classification& c) {
  Json j{{"verdict", verdict_name(c.verdict)}, {"certificate", c.certificate}};
  if (c.witness)
    j["witness"] = Json{{"w", to_json(c.witness->w)}, {"a", to_json(c.witness->a)}, {"b", to_json(c.witness->b)}};
  j["reduced"] = Json{{"p", to_json(c.p_tilde)}, {"q", to_json(c.q_tilde)}, {"degrees", {c.reduced_deg_p, c.reduced_deg_q}}};
  if (c.standard) {
    j["standard_form"] = to_json(*c.standard);
    j["d"] = c.d;
    j["lattice_rank"] = c.lattice_rank;
  }
  if (c.germ_report) j["diagnostics"] = Json{{"germ_report", to_json(*c.germ_report)}};
  return j;
}

inline Json to_json(const ExponentRelation& r) {
  return Json{{"relation", r.str()}, {"lhs", r.lhs_letters}, {"rhs", r.rhs_letters}, {"exponents", r.tuple()},
              {"trivial", r.trivial}};
}

inline Json to_json(const Lemma51Report& r) {
  return Json{{"n", r.n},
              {"ok", r.ok()},
              {"aba_aba_relations", r.aba_aba_relations},
              {"aba_aba_trivial", r.aba_aba_trivial},
              {"aba_aba_violations", r.aba_aba_violations},
              {"aba_bab_relations", r.aba_bab_relations},
              {"aba_bab_violations", r.aba_bab_violations},
              {"commuting_family", r.commuting_family},
              {"commuting_family_holds", r.commuting_family_holds},
              {"commuting_family_literal_holds", r.commuting_family_literal_holds},
              {"missing_first_exponents", r.missing_first_exponents}};
}

inline Json to_json(const Lemma52Report& r) {
  return Json{{"n", r.n},
              {"ok", r.ok()},
              {"candidates", r.candidates},
              {"solutions", r.solutions},
              {"degenerate_ok", r.degenerate_ok},
              {"trace_bound_ok", r.trace_bound_ok},
              {"max_lhs_trace", r.max_lhs_trace.get_str()},
              {"min_rhs_trace", r.min_rhs_trace.get_str()}};
}

inline Json to_json(const ProbeResult& r) {
  Json basis = Json::array();
  for (const CycloNum& b : r.lattice_basis) basis.push_back(b.str());
  return Json{{"n", r.n},
              {"m", r.m},
              {"d", r.d},
              {"function", r.function},
              {"lattice_rank", r.rank},
              {"lattice_basis", basis},
              {"lattice_enlarged", r.enlarged},
              {"membership_ok", r.membership_ok},
              {"samples", r.samples},
              {"seed", r.seed},
              {"max_residual", r.max_residual},
              {"tolerance", 1e-9},
              {"pass", r.max_residual < 1e-9}};
}

inline Json to_json(const CriterionResult& r) {
  return Json{{"id", r.id},       {"title", r.title},     {"pass", r.pass()},
              {"correct", r.correct}, {"detail", r.detail}, {"seconds", r.seconds},
              {"budget_seconds", r.budget_seconds}};
}

/// Envelope shared by every subcommand; `result` and `timing_ms` are filled in by the caller.
inline Json make_report(const std::string& command, Json inputs, Json parameters) {
  return Json{{"schema", kSchema},
              {"version", kVersion},
              {"command", command},
              {"inputs", std::move(inputs)},
              {"parameters", std::move(parameters)},
              {"result", nullptr}};
}

}  // namespace compositum
