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

// Builds the semigroup family from user data: Bohr frequencies of the system
// Hamiltonian, frequency components of the coupling operator, per-frequency
// generators, and the paired-Kraus GKSL representation.

#pragma once

#include <map>
#include <vector>

#include "lep/matcore.hpp"
#include "lep/types.hpp"

namespace lep {

struct RatePair {
  double gamma_minus = 0.0;  // damping rate for V_omega
  double gamma_plus = 0.0;   // excitation rate for V_omega^dagger
};

// User model in the canonical basis: the eigenbasis of the system Hamiltonian,
// ordered by ascending energy. A model supplied with a non-diagonal
// Hamiltonian is rotated here on construction; everything downstream (the
// transpose map, the conjugation, reports) refers to this basis.
struct SLTModel {
  Eigen::Index dim = 0;
  ComplexMatrix h_system;   // diagonal in the canonical basis
  ComplexMatrix coupling;   // V in the canonical basis
  SpectralData spectral;    // levels of h_system
  std::vector<double> bohr; // positive eigenvalue differences, ascending
  // Rates and optional Hamiltonian perturbations are keyed by position in
  // `bohr` rather than by the floating-point frequency.
  std::map<int, RatePair> rates;
  std::map<int, ComplexMatrix> h_omega;
  bool real_coupling = false;  // V and all H_omega real in the canonical basis
  Tolerances tol;
};

SLTModel make_model(const ComplexMatrix& h_system, const ComplexMatrix& coupling,
                    const std::map<int, RatePair>& rates,
                    const std::map<int, ComplexMatrix>& h_omega = {},
                    const Tolerances& tol = {});

// Deduplicated positive differences of the spectral levels, ascending.
std::vector<double> bohr_frequencies(const SpectralData& spec);

// V_omega = sum over level pairs with eps_n - eps_m = omega of P_m V P_n.
// omega is matched against the level differences within spec.tol_used.
ComplexMatrix eigenoperator(const ComplexMatrix& v, const SpectralData& spec, double omega);

// One Bohr frequency worth of generator data.
struct FrequencyComponent {
  int omega_index = -1;
  double omega = 0.0;
  ComplexMatrix v_omega;
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  ComplexMatrix h_omega;
  ComplexMatrix drift;  // G_omega = -1/2 (g- V*V + g+ V V*) - i H_omega
};

FrequencyComponent build_component(const SLTModel& model, int omega_index);
std::vector<FrequencyComponent> build_components(const SLTModel& model);

// Special GKSL representation with the per-frequency Kraus pairing
//   L_{2l-1} = sqrt(gamma_plus)  V_omega^dagger,
//   L_{2l}   = sqrt(gamma_minus) V_omega,
// frequencies taken in ascending order.
struct GKSLForm {
  ComplexMatrix hamiltonian;         // H = sum_omega H_omega
  ComplexMatrix drift;               // G = sum_omega G_omega
  std::vector<ComplexMatrix> kraus;  // (L_1, ..., L_2b)
  Eigen::Index b = 0;                // number of contributing frequencies
};

GKSLForm build_gksl(const SLTModel& model);

// Diagnostics for the special-representation requirements: tr(rho L_l) = 0 and
// linear independence of the Kraus family.
struct RepresentationReport {
  double max_state_trace = 0.0;  // max_l |tr(rho L_l)|
  double gram_sigma_min = 0.0;   // smallest singular value of the HS Gram matrix
  bool traceless_ok = false;
  bool independent_ok = false;
  bool pass() const { return traceless_ok && independent_ok; }
};

RepresentationReport validate_special_representation(const std::vector<ComplexMatrix>& kraus,
                                                     const ComplexMatrix& rho,
                                                     double tol = 1e-10);

}  // namespace lep
