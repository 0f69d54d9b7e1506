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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include <json.hpp>

#include "lep/report.hpp"
#include "testutil.hpp"

using namespace lep;

namespace {

const char* kQubitFile = R"({
  "schema_version": "1",
  "dimension": 2,
  "H_S": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
  "V": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
  "rates": [{"omega_index": 0, "gamma_minus": 1.0, "gamma_plus": 0.5}]
})";

std::string three_level_file(double ratio1, double ratio2) {
  nlohmann::json j;
  j["schema_version"] = "1";
  j["dimension"] = 3;
  auto entry = [](double re) { return nlohmann::json::array({re, 0.0}); };
  nlohmann::json h = nlohmann::json::array();
  nlohmann::json v = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    nlohmann::json hrow = nlohmann::json::array();
    nlohmann::json vrow = nlohmann::json::array();
    for (int c = 0; c < 3; ++c) {
      hrow.push_back(entry(r == c ? static_cast<double>(r) : 0.0));
      vrow.push_back(entry(1.0));
    }
    h.push_back(hrow);
    v.push_back(vrow);
  }
  j["H_S"] = h;
  j["V"] = v;
  j["rates"] = nlohmann::json::array(
      {{{"omega_index", 0}, {"gamma_minus", 1.0}, {"gamma_plus", ratio1}},
       {{"omega_index", 1}, {"gamma_minus", 1.0}, {"gamma_plus", ratio2}}});
  return j.dump();
}

}  // namespace

TEST_CASE("parse_model_file accepts the qubit reference file") {
  const ModelFile file = parse_model_file(kQubitFile);
  CHECK(file.dimension == 2);
  CHECK(file.rates.size() == 1);
  const SLTModel model = to_model(file, {});
  CHECK(model.bohr.size() == 1);
  CHECK(model.real_coupling);
}

TEST_CASE("parse_model_file: syntax errors carry a location") {
  try {
    parse_model_file("{\"dimension\": 2,,}");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("parse_model_file: semantic errors carry a field path") {
  // non-Hermitian H_S
  nlohmann::json j = nlohmann::json::parse(kQubitFile);
  j["H_S"][0][1] = nlohmann::json::array({1.0, 0.0});
  j["H_S"][1][0] = nlohmann::json::array({0.0, 0.0});
  try {
    to_model(parse_model_file(j.dump()), {});
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("H_S") != std::string::npos);
  }

  // non-positive rate
  j = nlohmann::json::parse(kQubitFile);
  j["rates"][0]["gamma_minus"] = 0.0;
  try {
    parse_model_file(j.dump());
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(std::string(e.what()).find("gamma_minus") != std::string::npos);
    CHECK(std::string(e.what()).find("strictly positive") != std::string::npos);
  }

  // rate key out of range
  j = nlohmann::json::parse(kQubitFile);
  j["rates"][0]["omega_index"] = 5;
  CHECK_THROWS_AS(to_model(parse_model_file(j.dump()), {}), Error);
}

TEST_CASE("model echo round-trips field-wise") {
  std::mt19937 rng(191);
  const SLTModel original = test::random_model(rng, 3);
  const ModelFile echo = echo_model(original);
  const std::string text = dump_model_file(echo);
  const SLTModel reparsed = to_model(parse_model_file(text), original.tol);

  CHECK(reparsed.dim == original.dim);
  CHECK((reparsed.h_system - original.h_system).norm() <= 1e-14);
  CHECK((reparsed.coupling - original.coupling).norm() <= 1e-14);
  REQUIRE(reparsed.bohr.size() == original.bohr.size());
  for (std::size_t i = 0; i < original.bohr.size(); ++i) {
    CHECK(reparsed.bohr[i] == doctest::Approx(original.bohr[i]).epsilon(1e-12));
  }
  REQUIRE(reparsed.rates.size() == original.rates.size());
  for (const auto& [idx, rate] : original.rates) {
    CHECK(reparsed.rates.at(idx).gamma_minus == rate.gamma_minus);
    CHECK(reparsed.rates.at(idx).gamma_plus == rate.gamma_plus);
  }
  CHECK(reparsed.real_coupling == original.real_coupling);
}

TEST_CASE("tolerance overrides") {
  Tolerances tol;
  apply_tolerance_overrides(tol, {{"verdict", 1e-6}, {"faithfulness", 1e-7}});
  CHECK(tol.verdict == 1e-6);
  CHECK(tol.faithfulness == 1e-7);
  CHECK_THROWS_AS(apply_tolerance_overrides(tol, {{"no_such_tol", 1.0}}), Error);
  CHECK_THROWS_AS(apply_tolerance_overrides(tol, {{"verdict", -1.0}}), Error);
}

TEST_CASE("run_analysis: ep on the qubit reports zero by both methods") {
  const ModelFile file = parse_model_file(kQubitFile);
  RunOptions options;
  const AnalysisResult result = run_analysis(file, "ep", options);
  REQUIRE(result.ep_closed.has_value());
  REQUIRE(result.ep_general_report.has_value());
  CHECK(std::abs(result.ep_closed->total) <= 1e-9);
  CHECK(std::abs(result.ep_general_report->total) <= 1e-9);
  CHECK(result.pass);
}

TEST_CASE("run_analysis: check-db on the Gibbs ladder passes everything") {
  const ModelFile file = parse_model_file(three_level_file(std::exp(-1.0), std::exp(-2.0)));
  RunOptions options;
  const AnalysisResult result = run_analysis(file, "check-db", options);
  REQUIRE(result.equivalence.has_value());
  CHECK(result.equivalence->consistent);
  CHECK(result.equivalence->zero_ep);
  CHECK(result.equivalence->sqdb_theta);
  REQUIRE(result.sqdb.has_value());
  CHECK(result.sqdb->pass);
  REQUIRE(result.local_global.has_value());
  CHECK(result.local_global->global_pass);
  CHECK(result.pass);
  CHECK_FALSE(result.inconsistent_verdicts);
}

TEST_CASE("run_analysis: sweep emits one row per grid point") {
  const ModelFile file = parse_model_file(three_level_file(0.1, 0.8));
  RunOptions options;
  options.sweep = parse_sweep_spec("plus:0:0.1:1.0:10");
  const AnalysisResult result = run_analysis(file, "sweep", options);
  REQUIRE(result.sweep_rows.size() == 10);
  int balanced_rows = 0;
  for (const auto& row : result.sweep_rows) {
    CHECK(row.ep_total >= -1e-12);
    if (row.db_pass) ++balanced_rows;
    CHECK(row.omega == doctest::Approx(1.0));
  }
  // gamma_plus = gamma_minus e^{-omega} at omega = 1 is not on this grid, and
  // the second frequency stays unbalanced throughout
  CHECK(balanced_rows == 0);

  const std::string csv = emit_report(result, "csv");
  CHECK(csv.rfind("omega,gamma_minus,gamma_plus,nu_minus,nu_plus,mu,ep_term,ep_total,db_pass\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);  // header + 10 rows
}

TEST_CASE("run_analysis: sweep hits the balance point exactly") {
  // Frequencies {1, 1.5, 2.5}; the off-grid rates are tuned to beta = ln 2,
  // so the swept gamma_plus balances exactly at 0.5 and nowhere else.
  const double beta = std::log(2.0);
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(1, 1) = 1.0;
  h(2, 2) = 2.5;
  const SLTModel model = make_model(h, ComplexMatrix::Ones(3, 3),
                                    {{0, RatePair{1.0, 0.9}},
                                     {1, RatePair{1.0, std::exp(-beta * 1.5)}},
                                     {2, RatePair{1.0, std::exp(-beta * 2.5)}}});
  RunOptions options;
  options.sweep = parse_sweep_spec("plus:0:0.1:1.0:10");
  const AnalysisResult result = run_analysis(echo_model(model), "sweep", options);
  REQUIRE(result.sweep_rows.size() == 10);
  int balanced_rows = 0;
  for (const auto& row : result.sweep_rows) {
    CHECK(row.ep_total >= -1e-12);
    const bool zero = row.ep_total <= 1e-9;
    CHECK(zero == row.db_pass);
    if (zero) {
      ++balanced_rows;
      CHECK(row.gamma_plus == doctest::Approx(0.5));
    }
  }
  CHECK(balanced_rows == 1);
}

TEST_CASE("sweep spec parsing") {
  const SweepSpec spec = parse_sweep_spec("minus:1:0.5:2.0:4");
  CHECK_FALSE(spec.plus_side);
  CHECK(spec.omega_index == 1);
  CHECK(spec.from == 0.5);
  CHECK(spec.to == 2.0);
  CHECK(spec.steps == 4);
  CHECK_THROWS_AS(parse_sweep_spec("sideways:0:1:2:3"), Error);
  CHECK_THROWS_AS(parse_sweep_spec("plus:0:1:2"), Error);
  CHECK_THROWS_AS(parse_sweep_spec("plus:0:-1:2:3"), Error);
}

TEST_CASE("reports serialize deterministically and round-trip") {
  const ModelFile file = parse_model_file(kQubitFile);
  RunOptions options;
  const AnalysisResult result = run_analysis(file, "analyze", options);

  const std::string once = emit_report(result, "json");
  const std::string twice = emit_report(result, "json");
  CHECK(once == twice);

  const nlohmann::json parsed = nlohmann::json::parse(once);
  CHECK(parsed.at("command") == "analyze");
  CHECK(parsed.at("summary").at("pass") == true);
  CHECK(parsed.contains("entropy_production"));
  CHECK(parsed.contains("detailed_balance"));
  CHECK(parsed.contains("oracle"));
  CHECK(parsed.at("tolerances").at("verdict") == 1e-8);
  // the model echo inside the report reparses to the same model
  const ModelFile echoed = parse_model_file(parsed.at("model").dump());
  CHECK(echoed.dimension == 2);
  CHECK((to_model(echoed, {}).coupling - to_model(file, {}).coupling).norm() <= 1e-14);

  const std::string human = emit_report(result, "human");
  CHECK(human.find("summary: PASS") != std::string::npos);
  CHECK(emit_report(result, "human") == human);

  CHECK_THROWS_AS(emit_report(result, "yaml"), Error);
  CHECK_THROWS_AS(emit_report(result, "csv"), Error);  // csv is sweep-only
}

TEST_CASE("run_analysis: oracle command cross-validates the closed form") {
  // unequal level spacing, so every frequency comes from a single level pair
  std::mt19937 rng(193);
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(1, 1) = 1.0;
  h(2, 2) = 2.5;
  const SLTModel model = make_model(h, ComplexMatrix::Ones(3, 3),
                                    {{0, RatePair{1.0, 0.3}},
                                     {1, RatePair{0.8, 0.7}},
                                     {2, RatePair{1.2, 0.5}}});
  const ModelFile file = echo_model(model);
  RunOptions options;
  options.oracle_grid = {2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
  const AnalysisResult result = run_analysis(file, "oracle", options);
  REQUIRE(result.oracle_section.has_value());
  CHECK(result.oracle_section->estimate.table.size() == 5);
  CHECK(result.oracle_section->closed_form_total > 1e-3);
  CHECK(result.oracle_section->rel_deviation <= 0.01);
  (void)rng;
}

TEST_CASE("run_analysis rejects unknown commands and missing sweep grids") {
  const ModelFile file = parse_model_file(kQubitFile);
  CHECK_THROWS_AS(run_analysis(file, "frobnicate", {}), Error);
  CHECK_THROWS_AS(run_analysis(file, "sweep", {}), Error);
}
