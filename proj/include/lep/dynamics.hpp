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

// Generator evaluation, semigroup propagation, and the faithful invariant
// state of the Schrodinger-picture dynamics.

#pragma once

#include <vector>

#include "lep/model.hpp"
#include "lep/types.hpp"

namespace lep {

enum class Direction { heisenberg, schrodinger };

struct DensityMatrix {
  ComplexMatrix matrix;
  double eigen_floor = 0.0;  // smallest eigenvalue found before clamping

  Eigen::Index dim() const { return matrix.rows(); }
  // Faithful when the smallest eigenvalue clears threshold/d.
  bool faithful(double threshold = 1e-8) const {
    return eigen_floor >= threshold / static_cast<double>(std::max<Eigen::Index>(dim(), 1));
  }
};

// Wrap a Hermitian unit-trace matrix, recording its eigenvalue floor.
DensityMatrix as_density(const ComplexMatrix& m, const Tolerances& tol = {});

// L(x) (Heisenberg) or L_*(x) (Schrodinger) evaluated directly.
ComplexMatrix apply_generator(const GKSLForm& g, const ComplexMatrix& x, Direction dir);

// d^2 x d^2 matrix of the generator in the column-stacking convention.
struct Superoperator {
  Eigen::Index dim = 0;  // operator side length d; mat is d^2 x d^2
  ComplexMatrix mat;

  ComplexMatrix apply(const ComplexMatrix& x) const;
};

Superoperator generator_matrix(const GKSLForm& g, Direction dir);

// e^{tL} X (or the predual). t must be non-negative.
ComplexMatrix propagate(const GKSLForm& g, const ComplexMatrix& x, double t, Direction dir);

// Choi matrix of the map represented by s (PSD iff the map is CP).
ComplexMatrix choi_matrix(const Superoperator& s);

struct InvariantStateInfo {
  DensityMatrix state;
  double residual = 0.0;                // ||L_*(rho)||_F
  double h_commutator_residual = 0.0;   // ||[rho, H_S]||_F
  bool commutes_with_h = false;
};

// Nullspace of the Schrodinger generator matrix: eigenvector of the eigenvalue
// nearest zero, Hermitized, clamped, and normalized. A degenerate stationary
// subspace raises MultipleInvariantStates; a non-faithful state NotFaithful.
InvariantStateInfo invariant_state(const GKSLForm& g, const ComplexMatrix& h_system,
                                   const Tolerances& tol = {});

}  // namespace lep
