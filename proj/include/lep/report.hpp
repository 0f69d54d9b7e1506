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

// Command dispatch and machine-readable reports.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lep/balance.hpp"
#include "lep/dynamics.hpp"
#include "lep/entropy.hpp"
#include "lep/model_io.hpp"
#include "lep/oracle.hpp"
#include "lep/types.hpp"

namespace lep {

struct SweepSpec {
  bool plus_side = true;  // sweep gamma_plus (false: gamma_minus)
  int omega_index = 0;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
};

// "<plus|minus>:<omega_index>:<from>:<to>:<steps>"
SweepSpec parse_sweep_spec(const std::string& text);

struct OracleSection {
  EpEstimate estimate;
  double closed_form_total = 0.0;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
};

struct SweepRow {
  double omega = 0.0;
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  double nu_minus = 0.0;
  double nu_plus = 0.0;
  double mu = 0.0;
  double ep_term = 0.0;
  double ep_total = 0.0;
  bool db_pass = false;
};

struct AnalysisResult {
  std::string command;
  ModelFile model_echo;
  Tolerances tol;
  // spectral summary
  std::vector<double> eigenvalues;
  std::vector<int> degeneracies;
  std::vector<double> bohr;
  bool real_coupling = false;

  std::optional<InvariantStateInfo> invariant;
  std::optional<RepresentationReport> representation;
  std::optional<std::vector<MomentTriple>> moment_list;
  std::optional<EPReport> ep_closed;
  std::optional<EPReport> ep_general_report;
  std::optional<EquivalenceReport> equivalence;
  std::optional<WitnessCheck> sqdb;
  std::optional<LocalGlobalReport> local_global;
  std::optional<OracleSection> oracle_section;
  std::vector<SweepRow> sweep_rows;

  bool pass = true;
  bool inconsistent_verdicts = false;
  std::vector<std::string> notes;
};

struct RunOptions {
  Tolerances tol;
  std::optional<SweepSpec> sweep;
  std::vector<double> oracle_grid = {1e-2, 5e-3, 2e-3, 1e-3};
};

// command: analyze | ep | check-db | oracle | sweep
AnalysisResult run_analysis(const ModelFile& file, const std::string& command,
                            const RunOptions& options);

// format: json | human | csv (csv only for sweep results)
std::string emit_report(const AnalysisResult& result, const std::string& format);

}  // namespace lep
