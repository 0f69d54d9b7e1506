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

// Standard quantum detailed balance checks (with and without the reversing
// operation), the per-frequency balance condition, and the equivalence and
// global/local equivalences tying them to zero entropy production.

#pragma once

#include <optional>
#include <vector>

#include "lep/entropy.hpp"
#include "lep/model.hpp"
#include "lep/types.hpp"

namespace lep {

// Analytic continuation sigma_{-i/2}(x) = rho^{1/2} x rho^{-1/2} of the
// modular group. rho must be faithful.
ComplexMatrix modular_half(const DensityMatrix& rho, const ComplexMatrix& x);

// Witness search for the unitary u in  rho^1/2 f(L_l) = sum_m u_lm L_m rho^1/2,
// where f is adjoint (SQDB) or transpose (SQDB-Theta). Solved by least squares
// over the span of {L_m rho^1/2}; a rank-deficient family is completed by the
// identity on the orthogonal complement before re-testing.
struct WitnessCheck {
  bool pass = false;
  double solve_residual = 0.0;      // max_l relative residual of the linear system
  double unitarity_residual = 0.0;  // ||u u* - 1||
  double structure_residual = 0.0;  // ||u - u^T|| (SQDB) or ||u - u*|| (SQDB-Theta)
  ComplexMatrix witness;            // u, empty when the Kraus list is empty
};

WitnessCheck check_sqdb(const DensityMatrix& rho, const std::vector<ComplexMatrix>& kraus,
                        double tol = 1e-8);

struct ThetaCheck {
  bool pass = false;
  double drift_residual = 0.0;  // ||rho^1/2 G^T - G rho^1/2||, relative
  WitnessCheck witness;
};

ThetaCheck check_sqdb_theta(const DensityMatrix& rho, const ComplexMatrix& drift,
                            const std::vector<ComplexMatrix>& kraus, double tol = 1e-8);

// Per-frequency balance: sqrt(g+) rho^1/2 V_w = sqrt(g-) V_w rho^1/2, plus the
// modular eigenvector relations that follow when it holds.
struct LocalBalance {
  int omega_index = -1;
  double omega = 0.0;
  bool pass = false;
  double condition_residual = 0.0;   // the balance identity, relative
  double sigma_v_residual = 0.0;     // sigma_{-i}(V) - (g-/g+) V
  double sigma_h_residual = 0.0;     // sigma_{-i}(H_w) - H_w
};

std::vector<LocalBalance> check_slt_balance(const DensityMatrix& rho,
                                            const std::vector<FrequencyComponent>& comps,
                                            double tol = 1e-8);

// The four equivalent conditions, evaluated independently with one shared
// tolerance. They must agree; a disagreement is a tolerance problem that the
// caller surfaces (strict mode throws InconsistentVerdicts).
struct EquivalenceReport {
  bool zero_ep = false;
  bool paired_kraus = false;
  bool condition3 = false;
  bool sqdb_theta = false;
  bool consistent = false;
  double ep_total = 0.0;
  double paired_kraus_residual = 0.0;
  ZeroEpVerdict zero_verdict;
  std::vector<LocalBalance> locals;
  ThetaCheck theta;
};

EquivalenceReport equivalence_suite(const SLTModel& model, const DensityMatrix& rho,
                                    double tol = 1e-8, bool strict = true);

// Global/local equivalence: the full semigroup satisfies SQDB-Theta iff every
// per-frequency semigroup leaves rho invariant and satisfies it too. Requires
// each H_omega to lie in span{V*V, VV*} (or vanish).
struct LocalGlobalReport {
  bool hypothesis_ok = false;
  double hypothesis_residual = 0.0;
  bool global_pass = false;
  struct LocalResult {
    int omega_index;
    double omega;
    double invariance_residual;  // ||L_{w*}(rho)||
    bool theta_pass;
  };
  std::vector<LocalResult> locals;
  bool all_locals_pass = false;
  bool implication_ok = false;  // global <=> all locals
};

LocalGlobalReport check_local_global(const SLTModel& model, const DensityMatrix& rho,
                                     double tol = 1e-8);

}  // namespace lep
