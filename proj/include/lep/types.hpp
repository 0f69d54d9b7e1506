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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class ErrorCode {
  NonFiniteInput,
  NonHermitian,
  NotPSD,
  UnknownFrequency,
  MissingRates,
  DimensionMismatch,
  NegativeTime,
  MultipleInvariantStates,
  NotFaithful,
  NotDiagonal,
  ComplexCoupling,
  ZeroMoment,
  RangeMismatch,
  DriftConditionFailed,
  HypothesisViolated,
  NotAState,
  ParseError,
  ValidationError,
  InconsistentVerdicts,
  UnsupportedFormat,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Every tolerance used anywhere in the library, with its default. Reports echo
// the instance actually used so no default is silent.
struct Tolerances {
  double eig_cluster = 1e-10;        // eigenvalue merge gap, scaled by max(1, ||M||)
  double psd_clamp = 1e-10;          // negative-eigenvalue clamp window in psd_sqrt
  double support_cutoff = 1e-12;     // kernel cutoff relative to lambda_max
  double support_mass = 1e-8;        // tolerated state mass outside log support
  double faithfulness = 1e-8;        // smallest eigenvalue threshold, relative to 1/d
  double verdict = 1e-8;             // detailed-balance verdicts (shared)
  double zero_ep = 1e-8;             // per-frequency zero-EP residuals (relative)
  double invariant_residual = 1e-10; // ||L_*(rho)|| acceptance for the steady state
  double null_gap = 1e-9;            // stationary-subspace degeneracy detection
  double range_match = 1e-7;         // support-projection agreement in ep_general
  double real_flag = 1e-12;          // max imaginary part for the real-coupling flag
  double hermiticity = 1e-10;        // relative Hermiticity check
  double commutation = 1e-10;        // [H_omega, H_S] relative residual
  double rho_diagonal = 1e-10;       // off-diagonal mass gate for the entangled state
};

}  // namespace lep
