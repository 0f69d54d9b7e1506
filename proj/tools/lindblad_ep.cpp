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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lep/report.hpp"

namespace {

// LEP_TOL_<NAME> environment overrides, e.g. LEP_TOL_VERDICT=1e-6.
// Precedence: defaults < model-file tolerances < environment < --tol flag.
void apply_env_overrides(lep::Tolerances& tol) {
  static const char* names[] = {"eig_cluster",   "psd_clamp",   "support_cutoff",
                                "support_mass",  "faithfulness", "verdict",
                                "zero_ep",       "invariant_residual", "null_gap",
                                "range_match",   "real_flag",   "hermiticity",
                                "commutation",   "rho_diagonal"};
  std::map<std::string, double> overrides;
  for (const char* name : names) {
    std::string env_name = "LEP_TOL_";
    for (const char* c = name; *c; ++c) env_name += static_cast<char>(std::toupper(*c));
    if (const char* value = std::getenv(env_name.c_str())) {
      overrides[name] = std::atof(value);
    }
  }
  lep::apply_tolerance_overrides(tol, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lindblad-ep: entropy production and quantum detailed balance for "
      "stochastic-limit-type Lindblad generators"};
  app.require_subcommand(1);

  std::string model_path;
  std::string format;
  std::string out_path;
  std::string grid_spec;
  double verdict_tol = -1.0;

  const char* tol_help =
      "verdict tolerance (also settable via LEP_TOL_* environment variables; "
      "this flag wins over the environment, which wins over the model file)";

  std::vector<CLI::App*> commands;
  for (const char* name : {"analyze", "ep", "check-db", "oracle", "sweep"}) {
    CLI::App* cmd = app.add_subcommand(name);
    cmd->add_option("--model", model_path, "model file (JSON)")->required();
    cmd->add_option("--format", format, "output format: json | human | csv (sweep only)");
    cmd->add_option("--tol", verdict_tol, tol_help);
    cmd->add_option("--out", out_path, "write the report to a file instead of stdout");
    if (std::string(name) == "sweep") {
      cmd->add_option("--grid", grid_spec,
                      "rate grid: <plus|minus>:<omega_index>:<from>:<to>:<steps>");
    }
    commands.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  if (format.empty()) format = command == "sweep" ? "csv" : "json";

  try {
    const lep::ModelFile file = lep::load_model_file(model_path);

    lep::RunOptions options;
    lep::apply_tolerance_overrides(options.tol, file.tolerance_overrides);
    apply_env_overrides(options.tol);
    if (verdict_tol > 0.0) options.tol.verdict = verdict_tol;
    if (!grid_spec.empty()) options.sweep = lep::parse_sweep_spec(grid_spec);

    const lep::AnalysisResult result = lep::run_analysis(file, command, options);
    const std::string report = lep::emit_report(result, format);
    if (out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 1;
      }
      out << report;
    }
    if (result.inconsistent_verdicts) return 2;
    return result.pass ? 0 : 1;
  } catch (const lep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == lep::ErrorCode::InconsistentVerdicts ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
