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

#include "lep/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lep {

namespace {

using nlohmann::json;

[[noreturn]] void fail_validation(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::ValidationError, path + ": " + why);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) fail_validation(path + "." + key, "missing");
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail_validation(path, "expected a number");
  return j.get<double>();
}

int as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail_validation(path, "expected an integer");
  return j.get<int>();
}

ComplexMatrix parse_matrix(const json& j, int d, const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(d)) {
    fail_validation(path, "expected " + std::to_string(d) + " rows");
  }
  ComplexMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) {
      fail_validation(row_path, "expected " + std::to_string(d) + " entries");
    }
    for (int c = 0; c < d; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      const std::string entry_path = row_path + "[" + std::to_string(c) + "]";
      if (!entry.is_array() || entry.size() != 2) {
        fail_validation(entry_path, "expected a [re, im] pair");
      }
      m(r, c) = Complex(as_number(entry[0], entry_path + "[0]"),
                        as_number(entry[1], entry_path + "[1]"));
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ModelFile parse_model_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                std::string(e.what()) + " (byte " + std::to_string(e.byte) + ")");
  }
  if (!j.is_object()) fail_validation("$", "top level must be an object");

  ModelFile file;
  file.schema_version = j.value("schema_version", std::string("1"));
  file.dimension = as_integer(require(j, "dimension", "$"), "$.dimension");
  if (file.dimension < 1) fail_validation("$.dimension", "must be >= 1");
  file.h_system = parse_matrix(require(j, "H_S", "$"), file.dimension, "$.H_S");
  file.coupling = parse_matrix(require(j, "V", "$"), file.dimension, "$.V");

  const json& rates = require(j, "rates", "$");
  if (!rates.is_array()) fail_validation("$.rates", "expected an array");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const std::string path = "$.rates[" + std::to_string(i) + "]";
    const json& entry = rates[i];
    if (!entry.is_object()) fail_validation(path, "expected an object");
    ModelFile::RateEntry r;
    r.omega_index = as_integer(require(entry, "omega_index", path), path + ".omega_index");
    r.gamma_minus = as_number(require(entry, "gamma_minus", path), path + ".gamma_minus");
    r.gamma_plus = as_number(require(entry, "gamma_plus", path), path + ".gamma_plus");
    if (!(r.gamma_minus > 0.0)) fail_validation(path + ".gamma_minus", "rates must be strictly positive");
    if (!(r.gamma_plus > 0.0)) fail_validation(path + ".gamma_plus", "rates must be strictly positive");
    file.rates.push_back(r);
  }

  if (j.contains("H_omega")) {
    const json& hw = j.at("H_omega");
    if (!hw.is_array()) fail_validation("$.H_omega", "expected an array");
    for (std::size_t i = 0; i < hw.size(); ++i) {
      const std::string path = "$.H_omega[" + std::to_string(i) + "]";
      const json& entry = hw[i];
      if (!entry.is_object()) fail_validation(path, "expected an object");
      ModelFile::HOmegaEntry h;
      h.omega_index = as_integer(require(entry, "omega_index", path), path + ".omega_index");
      h.matrix = parse_matrix(require(entry, "matrix", path), file.dimension, path + ".matrix");
      file.h_omega.push_back(std::move(h));
    }
  }

  if (j.contains("tolerances")) {
    const json& tols = j.at("tolerances");
    if (!tols.is_object()) fail_validation("$.tolerances", "expected an object");
    for (const auto& [key, value] : tols.items()) {
      file.tolerance_overrides[key] = as_number(value, "$.tolerances." + key);
    }
  }
  return file;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open model file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_file(buffer.str());
}

std::string dump_model_file(const ModelFile& file) {
  json j;
  j["schema_version"] = file.schema_version;
  j["dimension"] = file.dimension;
  j["H_S"] = matrix_to_json(file.h_system);
  j["V"] = matrix_to_json(file.coupling);
  json rates = json::array();
  for (const auto& r : file.rates) {
    rates.push_back(json{{"omega_index", r.omega_index},
                         {"gamma_minus", r.gamma_minus},
                         {"gamma_plus", r.gamma_plus}});
  }
  j["rates"] = std::move(rates);
  if (!file.h_omega.empty()) {
    json hw = json::array();
    for (const auto& h : file.h_omega) {
      hw.push_back(json{{"omega_index", h.omega_index}, {"matrix", matrix_to_json(h.matrix)}});
    }
    j["H_omega"] = std::move(hw);
  }
  if (!file.tolerance_overrides.empty()) {
    j["tolerances"] = file.tolerance_overrides;
  }
  return j.dump(2) + "\n";
}

void apply_tolerance_overrides(Tolerances& tol,
                               const std::map<std::string, double>& overrides) {
  for (const auto& [name, value] : overrides) {
    if (!(value > 0.0)) {
      throw Error(ErrorCode::ValidationError, "tolerance " + name + " must be positive");
    }
    if (name == "eig_cluster") tol.eig_cluster = value;
    else if (name == "psd_clamp") tol.psd_clamp = value;
    else if (name == "support_cutoff") tol.support_cutoff = value;
    else if (name == "support_mass") tol.support_mass = value;
    else if (name == "faithfulness") tol.faithfulness = value;
    else if (name == "verdict") tol.verdict = value;
    else if (name == "zero_ep") tol.zero_ep = value;
    else if (name == "invariant_residual") tol.invariant_residual = value;
    else if (name == "null_gap") tol.null_gap = value;
    else if (name == "range_match") tol.range_match = value;
    else if (name == "real_flag") tol.real_flag = value;
    else if (name == "hermiticity") tol.hermiticity = value;
    else if (name == "commutation") tol.commutation = value;
    else if (name == "rho_diagonal") tol.rho_diagonal = value;
    else throw Error(ErrorCode::ValidationError, "unknown tolerance name: " + name);
  }
}

SLTModel to_model(const ModelFile& file, const Tolerances& tol) {
  const double scale = std::max(1.0, file.h_system.norm());
  if ((file.h_system - file.h_system.adjoint()).norm() > tol.hermiticity * scale) {
    fail_validation("$.H_S", "not Hermitian");
  }
  std::map<int, RatePair> rates;
  for (std::size_t i = 0; i < file.rates.size(); ++i) {
    const auto& r = file.rates[i];
    if (rates.count(r.omega_index)) {
      fail_validation("$.rates[" + std::to_string(i) + "].omega_index", "duplicate");
    }
    rates[r.omega_index] = RatePair{r.gamma_minus, r.gamma_plus};
  }
  std::map<int, ComplexMatrix> h_omega;
  for (std::size_t i = 0; i < file.h_omega.size(); ++i) {
    const auto& h = file.h_omega[i];
    if (h_omega.count(h.omega_index)) {
      fail_validation("$.H_omega[" + std::to_string(i) + "].omega_index", "duplicate");
    }
    h_omega[h.omega_index] = h.matrix;
  }
  try {
    return make_model(file.h_system, file.coupling, rates, h_omega, tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError || e.code() == ErrorCode::NonHermitian ||
        e.code() == ErrorCode::DimensionMismatch || e.code() == ErrorCode::NonFiniteInput) {
      throw Error(ErrorCode::ValidationError, e.what());
    }
    throw;
  }
}

ModelFile echo_model(const SLTModel& model) {
  ModelFile file;
  file.schema_version = "1";
  file.dimension = static_cast<int>(model.dim);
  file.h_system = model.h_system;
  file.coupling = model.coupling;
  for (const auto& [idx, rate] : model.rates) {
    file.rates.push_back({idx, rate.gamma_minus, rate.gamma_plus});
  }
  for (const auto& [idx, hw] : model.h_omega) {
    file.h_omega.push_back({idx, hw});
  }
  return file;
}

}  // namespace lep
