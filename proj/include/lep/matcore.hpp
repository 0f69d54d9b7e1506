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

// Dense complex linear-algebra primitives with explicit tolerance behavior.
//
// Conventions used throughout the library:
//   * vec() stacks columns (Eigen's native layout), so vec(A X B) =
//     kron(B^T, A) vec(X).
//   * kron(a, b)[i*db + k] = a[i] * b[k] for vectors; likewise for matrices.
//   * all logarithms are natural; entropies are in nats.

#pragma once

#include <vector>

#include "lep/types.hpp"

namespace lep {

struct SpectralLevel {
  double eigenvalue;
  ComplexMatrix projection;
};

// Eigenvalues of a Hermitian matrix, clustered into exactly-degenerate levels
// with orthogonal spectral projections.
struct SpectralData {
  std::vector<SpectralLevel> levels;  // eigenvalues strictly increasing
  double tol_used = 0.0;
  Eigen::Index dim = 0;

  ComplexMatrix reconstruct() const;  // sum_n eps_n P_n
};

// Hermitian eigendecomposition with eigenvalue clustering. Eigenvalues whose
// gap is <= tol are merged into one level (projection = sum). A non-positive
// tol selects the default 1e-10 * max(1, ||M||_F).
SpectralData herm_eig(const ComplexMatrix& m, double tol = -1.0);

// Square root of a PSD Hermitian matrix. Eigenvalues in [-clamp*scale, 0) are
// clamped to zero; anything more negative raises NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, double clamp = 1e-10);

struct SupportLog {
  ComplexMatrix log;      // log applied on the retained eigenspaces, 0 on the kernel
  ComplexMatrix support;  // projection onto the retained eigenspaces
  Eigen::Index rank = 0;
};

// Logarithm of a PSD matrix restricted to its numerical range. Eigenvalues
// <= cutoff * lambda_max are treated as kernel.
SupportLog log_on_support(const ComplexMatrix& m, double cutoff = 1e-12);

// Matrix exponential (any square complex matrix).
ComplexMatrix expm(const ComplexMatrix& m);

// --- small helpers shared by the rest of the library ---

ComplexMatrix hermitize(const ComplexMatrix& m);  // (m + m^dagger)/2
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d);
bool all_finite(const ComplexMatrix& m);

}  // namespace lep
