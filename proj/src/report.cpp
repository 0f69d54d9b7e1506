// Copyright 2026 The lindblad-ep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lep/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace lep {

namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json tolerances_json(const Tolerances& t) {
  return json{{"eig_cluster", t.eig_cluster},
              {"psd_clamp", t.psd_clamp},
              {"support_cutoff", t.support_cutoff},
              {"support_mass", t.support_mass},
              {"faithfulness", t.faithfulness},
              {"verdict", t.verdict},
              {"zero_ep", t.zero_ep},
              {"invariant_residual", t.invariant_residual},
              {"null_gap", t.null_gap},
              {"range_match", t.range_match},
              {"real_flag", t.real_flag},
              {"hermiticity", t.hermiticity},
              {"commutation", t.commutation},
              {"rho_diagonal", t.rho_diagonal}};
}

json ep_report_json(const EPReport& r) {
  json per = json::array();
  for (const auto& term : r.per_omega) {
    per.push_back(json{{"omega_index", term.omega_index},
                       {"omega", term.omega},
                       {"gamma_minus", term.gamma_minus},
                       {"gamma_plus", term.gamma_plus},
                       {"nu_minus", term.nu_minus},
                       {"nu_plus", term.nu_plus},
                       {"mu", term.mu},
                       {"term_flux", term.term_flux},
                       {"term_schwarz", term.term_schwarz},
                       {"dropped", term.dropped}});
  }
  json j{{"method", r.method == EpMethod::closed_form ? "closed_form" : "general"},
         {"total", r.total},
         {"per_omega", std::move(per)}};
  if (r.method == EpMethod::general) {
    j["half_difference_total"] = r.half_difference_total;
    j["range_residual"] = r.range_residual;
    j["drift_residual"] = r.drift_residual;
    j["span_residual"] = r.span_residual;
  }
  return j;
}

json equivalence_json(const EquivalenceReport& e) {
  json locals = json::array();
  for (const auto& lb : e.locals) {
    locals.push_back(json{{"omega_index", lb.omega_index},
                          {"omega", lb.omega},
                          {"pass", lb.pass},
                          {"condition_residual", lb.condition_residual},
                          {"sigma_v_residual", lb.sigma_v_residual},
                          {"sigma_h_residual", lb.sigma_h_residual}});
  }
  json violations = json::array();
  for (const auto& w : e.zero_verdict.violations) {
    violations.push_back(json{{"omega_index", w.omega_index},
                              {"omega", w.omega},
                              {"flux_residual", w.flux_residual},
                              {"schwarz_residual", w.schwarz_residual}});
  }
  return json{{"zero_ep", e.zero_ep},
              {"paired_kraus", e.paired_kraus},
              {"condition3", e.condition3},
              {"sqdb_theta", e.sqdb_theta},
              {"consistent", e.consistent},
              {"ep_total", e.ep_total},
              {"paired_kraus_residual", e.paired_kraus_residual},
              {"zero_ep_violations", std::move(violations)},
              {"condition3_locals", std::move(locals)},
              {"sqdb_theta_drift_residual", e.theta.drift_residual},
              {"sqdb_theta_solve_residual", e.theta.witness.solve_residual},
              {"sqdb_theta_unitarity_residual", e.theta.witness.unitarity_residual},
              {"sqdb_theta_structure_residual", e.theta.witness.structure_residual}};
}

json result_json(const AnalysisResult& r) {
  json j;
  j["command"] = r.command;
  j["schema_version"] = "1";
  j["model"] = json::parse(dump_model_file(r.model_echo));
  j["tolerances"] = tolerances_json(r.tol);
  j["spectral"] = json{{"eigenvalues", r.eigenvalues},
                       {"degeneracies", r.degeneracies},
                       {"bohr_frequencies", r.bohr},
                       {"real_coupling", r.real_coupling}};
  if (r.invariant) {
    std::vector<double> diag;
    for (Eigen::Index i = 0; i < r.invariant->state.dim(); ++i) {
      diag.push_back(r.invariant->state.matrix(i, i).real());
    }
    j["invariant_state"] = json{{"diagonal", diag},
                                {"eigen_floor", r.invariant->state.eigen_floor},
                                {"faithful", r.invariant->state.faithful(r.tol.faithfulness)},
                                {"residual", r.invariant->residual},
                                {"h_commutator_residual", r.invariant->h_commutator_residual},
                                {"commutes_with_h", r.invariant->commutes_with_h}};
  }
  if (r.representation) {
    j["special_representation"] = json{{"max_state_trace", r.representation->max_state_trace},
                                       {"gram_sigma_min", r.representation->gram_sigma_min},
                                       {"pass", r.representation->pass()}};
  }
  if (r.moment_list) {
    json moments_out = json::array();
    for (const auto& m : *r.moment_list) {
      moments_out.push_back(json{{"omega_index", m.omega_index},
                                 {"omega", m.omega},
                                 {"nu_minus", m.nu_minus},
                                 {"nu_plus", m.nu_plus},
                                 {"mu", m.mu}});
    }
    j["moments"] = std::move(moments_out);
  }
  json ep;
  if (r.ep_closed) ep["closed_form"] = ep_report_json(*r.ep_closed);
  if (r.ep_general_report) ep["general"] = ep_report_json(*r.ep_general_report);
  if (!ep.is_null()) j["entropy_production"] = std::move(ep);
  json db;
  if (r.sqdb) {
    db["sqdb"] = json{{"pass", r.sqdb->pass},
                      {"solve_residual", r.sqdb->solve_residual},
                      {"unitarity_residual", r.sqdb->unitarity_residual},
                      {"symmetry_residual", r.sqdb->structure_residual}};
  }
  if (r.equivalence) db["equivalence"] = equivalence_json(*r.equivalence);
  if (r.local_global) {
    json locals = json::array();
    for (const auto& l : r.local_global->locals) {
      locals.push_back(json{{"omega_index", l.omega_index},
                            {"omega", l.omega},
                            {"invariance_residual", l.invariance_residual},
                            {"theta_pass", l.theta_pass}});
    }
    db["local_global"] = json{{"hypothesis_ok", r.local_global->hypothesis_ok},
                              {"hypothesis_residual", r.local_global->hypothesis_residual},
                              {"global_pass", r.local_global->global_pass},
                              {"all_locals_pass", r.local_global->all_locals_pass},
                              {"implication_ok", r.local_global->implication_ok},
                              {"locals", std::move(locals)}};
  }
  if (!db.is_null()) j["detailed_balance"] = std::move(db);
  if (r.oracle_section) {
    json grid = json::array();
    for (const auto& row : r.oracle_section->estimate.table) {
      grid.push_back(json{{"t", row.t}, {"entropy", row.entropy}, {"rate", row.rate}});
    }
    j["oracle"] = json{{"grid", std::move(grid)},
                       {"extrapolated", r.oracle_section->estimate.extrapolated},
                       {"uncertainty", r.oracle_section->estimate.uncertainty},
                       {"converged", r.oracle_section->estimate.converged},
                       {"closed_form_total", r.oracle_section->closed_form_total},
                       {"abs_deviation", r.oracle_section->abs_deviation},
                       {"rel_deviation", r.oracle_section->rel_deviation}};
  }
  if (!r.sweep_rows.empty()) {
    json rows = json::array();
    for (const auto& row : r.sweep_rows) {
      rows.push_back(json{{"omega", row.omega},
                          {"gamma_minus", row.gamma_minus},
                          {"gamma_plus", row.gamma_plus},
                          {"nu_minus", row.nu_minus},
                          {"nu_plus", row.nu_plus},
                          {"mu", row.mu},
                          {"ep_term", row.ep_term},
                          {"ep_total", row.ep_total},
                          {"db_pass", row.db_pass}});
    }
    j["sweep"] = std::move(rows);
  }
  j["summary"] = json{{"pass", r.pass},
                      {"inconsistent_verdicts", r.inconsistent_verdicts},
                      {"notes", r.notes}};
  return j;
}

std::string emit_human(const AnalysisResult& r) {
  std::ostringstream out;
  out << "lindblad-ep " << r.command << " report\n";
  out << "dimension: " << r.model_echo.dimension << "\n";
  out << "eigenvalues:";
  for (double e : r.eigenvalues) out << " " << fmt17(e);
  out << "\nbohr frequencies:";
  for (double w : r.bohr) out << " " << fmt17(w);
  out << "\nreal coupling: " << (r.real_coupling ? "yes" : "no") << "\n";
  if (r.invariant) {
    out << "invariant state diagonal:";
    for (Eigen::Index i = 0; i < r.invariant->state.dim(); ++i) {
      out << " " << fmt17(r.invariant->state.matrix(i, i).real());
    }
    out << "\n  eigen floor " << fmt17(r.invariant->state.eigen_floor) << ", residual "
        << fmt17(r.invariant->residual) << ", [rho,H_S] residual "
        << fmt17(r.invariant->h_commutator_residual) << "\n";
  }
  if (r.ep_closed) {
    out << "entropy production (closed form): " << fmt17(r.ep_closed->total) << " nats/time\n";
    for (const auto& term : r.ep_closed->per_omega) {
      out << "  omega " << fmt17(term.omega) << ": flux " << fmt17(term.term_flux)
          << ", schwarz " << fmt17(term.term_schwarz)
          << (term.dropped ? " (dropped: V_omega = 0)" : "") << "\n";
    }
  }
  if (r.ep_general_report) {
    out << "entropy production (general formula): " << fmt17(r.ep_general_report->total)
        << " nats/time (half-difference " << fmt17(r.ep_general_report->half_difference_total)
        << ")\n";
  }
  if (r.equivalence) {
    const auto& e = *r.equivalence;
    out << "detailed balance: zero_ep " << e.zero_ep << ", paired_kraus " << e.paired_kraus
        << ", condition3 " << e.condition3 << ", sqdb_theta " << e.sqdb_theta
        << (e.consistent ? "" : "  ** INCONSISTENT **") << "\n";
  }
  if (r.sqdb) out << "sqdb: " << (r.sqdb->pass ? "pass" : "fail") << "\n";
  if (r.local_global) {
    out << "local/global: global " << (r.local_global->global_pass ? "pass" : "fail")
        << ", all locals " << (r.local_global->all_locals_pass ? "pass" : "fail") << "\n";
  }
  if (r.oracle_section) {
    out << "oracle estimate: " << fmt17(r.oracle_section->estimate.extrapolated)
        << " +- " << fmt17(r.oracle_section->estimate.uncertainty) << " ("
        << (r.oracle_section->estimate.converged ? "converged" : "NOT converged") << ")\n";
    for (const auto& row : r.oracle_section->estimate.table) {
      out << "  t " << fmt17(row.t) << "  S " << fmt17(row.entropy) << "  S/t "
          << fmt17(row.rate) << "\n";
    }
  }
  for (const auto& row : r.sweep_rows) {
    out << "sweep omega " << fmt17(row.omega) << " g- " << fmt17(row.gamma_minus) << " g+ "
        << fmt17(row.gamma_plus) << " ep " << fmt17(row.ep_total) << " db "
        << (row.db_pass ? "pass" : "fail") << "\n";
  }
  for (const auto& note : r.notes) out << "note: " << note << "\n";
  out << "summary: " << (r.pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string emit_csv(const AnalysisResult& r) {
  std::ostringstream out;
  out << "omega,gamma_minus,gamma_plus,nu_minus,nu_plus,mu,ep_term,ep_total,db_pass\n";
  for (const auto& row : r.sweep_rows) {
    out << fmt17(row.omega) << "," << fmt17(row.gamma_minus) << "," << fmt17(row.gamma_plus)
        << "," << fmt17(row.nu_minus) << "," << fmt17(row.nu_plus) << "," << fmt17(row.mu)
        << "," << fmt17(row.ep_term) << "," << fmt17(row.ep_total) << ","
        << (row.db_pass ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text) {
  SweepSpec spec;
  std::istringstream in(text);
  std::string side, index, from, to, steps;
  if (!std::getline(in, side, ':') || !std::getline(in, index, ':') ||
      !std::getline(in, from, ':') || !std::getline(in, to, ':') || !std::getline(in, steps)) {
    throw Error(ErrorCode::ValidationError,
                "grid spec must be <plus|minus>:<omega_index>:<from>:<to>:<steps>");
  }
  if (side == "plus") spec.plus_side = true;
  else if (side == "minus") spec.plus_side = false;
  else throw Error(ErrorCode::ValidationError, "grid side must be 'plus' or 'minus'");
  try {
    spec.omega_index = std::stoi(index);
    spec.from = std::stod(from);
    spec.to = std::stod(to);
    spec.steps = std::stoi(steps);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ValidationError, "grid spec has malformed numbers");
  }
  if (spec.steps < 1) throw Error(ErrorCode::ValidationError, "grid needs at least one step");
  if (!(spec.from > 0.0) || !(spec.to > 0.0)) {
    throw Error(ErrorCode::ValidationError, "grid rates must be strictly positive");
  }
  return spec;
}

namespace {

struct ModelAnalysis {
  SLTModel model;
  std::vector<FrequencyComponent> comps;
  GKSLForm gksl;
  InvariantStateInfo invariant;
};

ModelAnalysis prepare(const ModelFile& file, const Tolerances& tol) {
  ModelAnalysis a{to_model(file, tol), {}, {}, {}};
  a.comps = build_components(a.model);
  a.gksl = build_gksl(a.model);
  a.invariant = invariant_state(a.gksl, a.model.h_system, tol);
  return a;
}

SweepRow sweep_point(const SLTModel& base, const SweepSpec& spec, double value,
                     const Tolerances& tol) {
  SLTModel model = base;
  auto it = model.rates.find(spec.omega_index);
  if (it == model.rates.end()) {
    throw Error(ErrorCode::ValidationError, "sweep omega_index has no rates in the model");
  }
  if (spec.plus_side) it->second.gamma_plus = value;
  else it->second.gamma_minus = value;

  const auto comps = build_components(model);
  const GKSLForm g = build_gksl(model);
  const InvariantStateInfo inv = invariant_state(g, model.h_system, tol);
  const EPReport ep = ep_closed_form(inv.state, model, comps);
  const EquivalenceReport eq = equivalence_suite(model, inv.state, tol.verdict, false);

  SweepRow row;
  row.omega = model.bohr[static_cast<std::size_t>(spec.omega_index)];
  row.gamma_minus = it->second.gamma_minus;
  row.gamma_plus = it->second.gamma_plus;
  for (const auto& term : ep.per_omega) {
    if (term.omega_index == spec.omega_index) {
      row.nu_minus = term.nu_minus;
      row.nu_plus = term.nu_plus;
      row.mu = term.mu;
      row.ep_term = term.total();
    }
  }
  row.ep_total = ep.total;
  row.db_pass = eq.consistent && eq.zero_ep;
  return row;
}

}  // namespace

AnalysisResult run_analysis(const ModelFile& file, const std::string& command,
                            const RunOptions& options) {
  if (command != "analyze" && command != "ep" && command != "check-db" &&
      command != "oracle" && command != "sweep") {
    throw Error(ErrorCode::ValidationError, "unknown command: " + command);
  }
  AnalysisResult result;
  result.command = command;
  result.tol = options.tol;

  const ModelAnalysis a = prepare(file, options.tol);
  result.model_echo = echo_model(a.model);
  result.real_coupling = a.model.real_coupling;
  for (const auto& level : a.model.spectral.levels) {
    result.eigenvalues.push_back(level.eigenvalue);
    result.degeneracies.push_back(
        static_cast<int>(std::lround(level.projection.trace().real())));
  }
  result.bohr = a.model.bohr;
  result.invariant = a.invariant;

  const bool want_ep = command == "analyze" || command == "ep" || command == "oracle";
  const bool want_db = command == "analyze" || command == "check-db";
  const bool want_oracle = command == "analyze" || command == "oracle";

  if (want_ep || want_db) {
    result.representation =
        validate_special_representation(a.gksl.kraus, a.invariant.state.matrix);
    result.moment_list = moments(a.invariant.state, a.comps);
  }

  if (want_ep) {
    if (a.model.real_coupling) {
      result.ep_closed = ep_closed_form(a.invariant.state, a.model, a.comps);
    } else {
      result.notes.push_back("closed-form entropy production skipped: coupling is not real");
    }
    const EntangledState es = build_entangled_state(a.invariant.state, options.tol);
    result.ep_general_report =
        ep_general(a.invariant.state, es, a.gksl, a.comps, options.tol, false);
    if (result.ep_general_report->range_residual > options.tol.range_match) {
      result.notes.push_back(
          "general-formula hypotheses violated (range residual " +
          std::to_string(result.ep_general_report->range_residual) +
          "); the reported value is the formula's face value");
    }
    if (result.ep_general_report->drift_residual >
        1e-8 * std::max(1.0, a.gksl.drift.norm())) {
      result.notes.push_back("general-formula drift condition violated (residual " +
                             std::to_string(result.ep_general_report->drift_residual) + ")");
    }
  }

  if (want_db) {
    result.sqdb = check_sqdb(a.invariant.state, a.gksl.kraus, options.tol.verdict);
    if (a.model.real_coupling) {
      result.equivalence =
          equivalence_suite(a.model, a.invariant.state, options.tol.verdict, false);
      if (!result.equivalence->consistent) {
        result.inconsistent_verdicts = true;
        result.pass = false;
        result.notes.push_back(
            "equivalence suite verdicts disagree; adjust the verdict tolerance");
      }
      try {
        result.local_global =
            check_local_global(a.model, a.invariant.state, options.tol.verdict);
        if (!result.local_global->implication_ok) {
          result.pass = false;
          result.notes.push_back("global/local detailed-balance implication violated");
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::HypothesisViolated) {
          result.notes.push_back(std::string("local/global check skipped: ") + e.what());
        } else {
          throw;
        }
      }
    } else {
      result.notes.push_back("theta-based checks skipped: coupling is not real");
    }
  }

  if (want_oracle) {
    const EntangledState es = build_entangled_state(a.invariant.state, options.tol);
    OracleSection section;
    section.estimate = ep_estimate(a.gksl, es, options.oracle_grid);
    if (a.model.real_coupling) {
      section.closed_form_total = ep_closed_form(a.invariant.state, a.model, a.comps).total;
      section.abs_deviation = std::abs(section.estimate.extrapolated - section.closed_form_total);
      section.rel_deviation =
          section.abs_deviation / std::max(1e-300, std::abs(section.closed_form_total));
    }
    if (!section.estimate.converged) {
      result.notes.push_back("oracle extrapolation did not stabilize");
    }
    result.oracle_section = std::move(section);
  }

  if (command == "sweep") {
    if (!options.sweep) {
      throw Error(ErrorCode::ValidationError, "sweep requires --grid");
    }
    const SweepSpec& spec = *options.sweep;
    for (int i = 0; i < spec.steps; ++i) {
      const double value =
          spec.steps == 1
              ? spec.from
              : spec.from + (spec.to - spec.from) * static_cast<double>(i) /
                                static_cast<double>(spec.steps - 1);
      result.sweep_rows.push_back(sweep_point(a.model, spec, value, options.tol));
    }
  }

  return result;
}

std::string emit_report(const AnalysisResult& result, const std::string& format) {
  if (format == "json") return result_json(result).dump(2) + "\n";
  if (format == "human") return emit_human(result);
  if (format == "csv") {
    if (result.command != "sweep") {
      throw Error(ErrorCode::UnsupportedFormat, "csv output is only defined for sweep");
    }
    return emit_csv(result);
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format: " + format);
}

}  // namespace lep
