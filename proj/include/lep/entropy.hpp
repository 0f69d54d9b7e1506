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

// Entropy production of the stationary dynamics, by the closed per-frequency
// formula and by the general trace formula on the doubled space, together with
// the entangled reference state and second-order moment data both rest on.

#pragma once

#include <vector>

#include "lep/dynamics.hpp"
#include "lep/model.hpp"
#include "lep/types.hpp"

namespace lep {

// Purification-style reference state D = |r><r| on h (x) h with
// r = sum_j rho_j^{1/2} e_j (x) e_j, built in the canonical basis where the
// stationary state is diagonal.
struct EntangledState {
  Eigen::Index dim = 0;   // d; r lives in C^{d^2}
  ComplexVector r;
  ComplexMatrix density;  // D = |r><r|
};

EntangledState build_entangled_state(const DensityMatrix& rho, const Tolerances& tol = {});

// Forward / backward completely positive maps evaluated at X:
//   forward:  sum_w  g-_w (1 (x) V_w)   X (1 (x) V_w^*) + g+_w (1 (x) V_w^*) X (1 (x) V_w)
//   backward: sum_w  g-_w (V_w (x) 1)   X (V_w^* (x) 1) + g+_w (V_w^* (x) 1) X (V_w (x) 1)
ComplexMatrix phi_forward(const std::vector<FrequencyComponent>& comps, const ComplexMatrix& x);
ComplexMatrix phi_backward(const std::vector<FrequencyComponent>& comps, const ComplexMatrix& x);

// Second-order moments of one frequency component in the stationary state.
struct MomentTriple {
  int omega_index = -1;
  double omega = 0.0;
  double nu_minus = 0.0;  // tr(rho V* V)
  double nu_plus = 0.0;   // tr(rho V V*)
  double mu = 0.0;        // tr(rho^1/2 V* rho^1/2 V); non-negative by Cauchy-Schwarz
};

MomentTriple moments(const DensityMatrix& rho, const FrequencyComponent& comp);
std::vector<MomentTriple> moments(const DensityMatrix& rho,
                                  const std::vector<FrequencyComponent>& comps);

// Residuals of the two scalar-product identities on the doubled space:
//   <(Y (x) 1) r, (1 (x) X) r> = tr((rho^1/2 theta Y* theta)* X rho^1/2)
//   <(1 (x) Y) r, (1 (x) X) r> = tr(rho Y* X)
struct ScalarProductResiduals {
  double mixed = 0.0;
  double second_factor = 0.0;
};

ScalarProductResiduals check_scalar_product_lemma(const DensityMatrix& rho,
                                                  const ComplexMatrix& x,
                                                  const ComplexMatrix& y);

enum class EpMethod { closed_form, general };

struct PerOmegaTerm {
  int omega_index = -1;
  double omega = 0.0;
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  double nu_minus = 0.0;
  double nu_plus = 0.0;
  double mu = 0.0;
  double term_flux = 0.0;     // (g-n- - g+n+) log(g-n- / g+n+)
  double term_schwarz = 0.0;  // (g-n- + g+n+) log(n+n- / mu^2)
  bool dropped = false;       // V_omega vanished; contributes nothing

  double total() const { return term_flux + term_schwarz; }
};

struct EPReport {
  double total = 0.0;  // nats per unit time; +inf when a log argument underflows
  std::vector<PerOmegaTerm> per_omega;  // filled by the closed form
  EpMethod method = EpMethod::closed_form;
  // general-method diagnostics
  double half_difference_total = 0.0;  // 1/2 tr[(F - B)(log F - log B)]
  double range_residual = 0.0;         // support-projection disagreement
  double drift_residual = 0.0;         // ||rho^1/2 G^T - G rho^1/2||
  double span_residual = 0.0;          // {L rho^1/2} vs {rho^1/2 L^T} span gap
};

// Closed-form entropy production. Requires real coupling matrices.
EPReport ep_closed_form(const DensityMatrix& rho, const SLTModel& model,
                        const std::vector<FrequencyComponent>& comps);

// General formula tr[F (log F - log B)] with F, B the forward/backward maps at
// the entangled state, logarithms taken on the symmetrized common support.
// With enforce_hypotheses the drift and range conditions validating the
// formula are preconditions (DriftConditionFailed / RangeMismatch); without it
// the formula's face value is reported in the full space with the residuals
// recorded, which is meaningful only as a diagnostic when the ranges disagree.
EPReport ep_general(const DensityMatrix& rho, const EntangledState& entangled,
                    const GKSLForm& g, const std::vector<FrequencyComponent>& comps,
                    const Tolerances& tol = {}, bool enforce_hypotheses = true);

// Zero-EP characterization: every frequency must balance the rate flux and
// saturate the Schwarz bound.
struct ZeroEpVerdict {
  bool zero = false;
  struct Witness {
    int omega_index;
    double omega;
    double flux_residual;     // |g-n- - g+n+|, relative
    double schwarz_residual;  // |n-n+ - mu^2|, relative
  };
  std::vector<Witness> violations;
};

ZeroEpVerdict is_zero_ep(const std::vector<MomentTriple>& mom,
                         const std::map<int, RatePair>& rates, double tol = 1e-8);

}  // namespace lep
