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

// Model file format: UTF-8 JSON with complex entries as [re, im] pairs and
// rates keyed by position in the sorted Bohr frequency list.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "lep/model.hpp"
#include "lep/types.hpp"

namespace lep {

struct ModelFile {
  std::string schema_version = "1";
  int dimension = 0;
  ComplexMatrix h_system;
  ComplexMatrix coupling;
  struct RateEntry {
    int omega_index;
    double gamma_minus;
    double gamma_plus;
  };
  std::vector<RateEntry> rates;
  struct HOmegaEntry {
    int omega_index;
    ComplexMatrix matrix;
  };
  std::vector<HOmegaEntry> h_omega;
  std::map<std::string, double> tolerance_overrides;
};

// Parse / serialize the file format. Syntax problems raise ParseError with a
// byte position, semantic problems ValidationError with a field path.
ModelFile parse_model_file(const std::string& text);
ModelFile load_model_file(const std::string& path);
std::string dump_model_file(const ModelFile& file);

// Named tolerance overrides ("verdict", "eig_cluster", ...); unknown names
// raise ValidationError.
void apply_tolerance_overrides(Tolerances& tol, const std::map<std::string, double>& overrides);

// Build the validated model; validation failures carry the offending field.
SLTModel to_model(const ModelFile& file, const Tolerances& tol);

// Canonical-basis echo of a validated model, suitable for re-parsing.
ModelFile echo_model(const SLTModel& model);

}  // namespace lep
