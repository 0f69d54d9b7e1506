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

// Brute-force validation path: forward/backward two-point states on the
// doubled space, quantum relative entropy, and the entropy production as a
// right-derivative at t = 0, extrapolated from a small-t grid.

#pragma once

#include <vector>

#include "lep/dynamics.hpp"
#include "lep/entropy.hpp"
#include "lep/model.hpp"
#include "lep/types.hpp"

namespace lep {

// The semigroup conjugated by the reversing operation (transpose in the
// canonical basis): Kraus operators conjugated, Hamiltonian negated-conjugated.
GKSLForm theta_conjugate(const GKSLForm& g);

struct TwoPointStates {
  double t = 0.0;
  ComplexMatrix forward;   // (id (x) T_{*t})(D)
  ComplexMatrix backward;  // ((Theta T Theta)_{*t} (x) id)(D)
};

TwoPointStates two_point_states(const GKSLForm& g, const EntangledState& entangled, double t);

// S(sigma || tau) with logarithms on the numerical supports; +infinity when
// sigma carries more than support_mass outside the support of tau.
double relative_entropy(const ComplexMatrix& sigma, const ComplexMatrix& tau,
                        double cutoff = 1e-12, double support_mass = 1e-8);

struct EpEstimate {
  struct Row {
    double t;
    double entropy;  // S(forward_t, backward_t)
    double rate;     // entropy / t
  };
  std::vector<Row> table;
  double extrapolated = 0.0;
  double uncertainty = 0.0;
  bool converged = false;
};

// Default grid {1e-2, 5e-3, 2e-3, 1e-3}; smaller times are rounding-dominated
// because S(t) enters the quadratic regime of nearly identical states.
EpEstimate ep_estimate(const GKSLForm& g, const EntangledState& entangled,
                       std::vector<double> t_grid = {1e-2, 5e-3, 2e-3, 1e-3});

}  // namespace lep
