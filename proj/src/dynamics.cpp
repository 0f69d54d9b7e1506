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

#include "lep/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lep {

namespace {

const Complex kI{0.0, 1.0};

void check_dim(const GKSLForm& g, const ComplexMatrix& x) {
  if (x.rows() != x.cols() || x.rows() != g.hamiltonian.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not match the generator dimension");
  }
}

}  // namespace

DensityMatrix as_density(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::NotAState, "as_density: matrix must be square");
  }
  const double herm_res = (m - m.adjoint()).norm();
  if (herm_res > 1e-10 * std::max(1.0, m.norm())) {
    throw Error(ErrorCode::NotAState, "as_density: matrix is not Hermitian");
  }
  const double trace_res = std::abs(m.trace() - Complex{1.0, 0.0});
  if (trace_res > 1e-8) {
    throw Error(ErrorCode::NotAState, "as_density: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitize(m));
  DensityMatrix out;
  out.matrix = hermitize(m);
  out.eigen_floor = eig.eigenvalues().minCoeff();
  if (out.eigen_floor < -1e-10) {
    throw Error(ErrorCode::NotAState, "as_density: matrix has a negative eigenvalue");
  }
  (void)tol;
  return out;
}

ComplexMatrix apply_generator(const GKSLForm& g, const ComplexMatrix& x, Direction dir) {
  check_dim(g, x);
  const ComplexMatrix& h = g.hamiltonian;
  ComplexMatrix out;
  if (dir == Direction::heisenberg) {
    out = kI * (h * x - x * h);
    for (const auto& l : g.kraus) {
      const ComplexMatrix ll = l.adjoint() * l;
      out += l.adjoint() * x * l - 0.5 * (ll * x + x * ll);
    }
  } else {
    out = -kI * (h * x - x * h);
    for (const auto& l : g.kraus) {
      const ComplexMatrix ll = l.adjoint() * l;
      out += l * x * l.adjoint() - 0.5 * (ll * x + x * ll);
    }
  }
  return out;
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim || x.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "Superoperator::apply: dimension mismatch");
  }
  return unvec(ComplexVector(mat * vec(x)), dim);
}

Superoperator generator_matrix(const GKSLForm& g, Direction dir) {
  const Eigen::Index d = g.hamiltonian.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  Superoperator s;
  s.dim = d;
  // vec(A X B) = kron(B^T, A) vec(X)
  const ComplexMatrix commutator =
      kron(id, g.hamiltonian) - kron(g.hamiltonian.transpose(), id);
  s.mat = (dir == Direction::heisenberg ? kI : -kI) * commutator;
  for (const auto& l : g.kraus) {
    const ComplexMatrix ll = l.adjoint() * l;
    const ComplexMatrix anticomm = 0.5 * (kron(id, ll) + kron(ll.transpose(), id));
    if (dir == Direction::heisenberg) {
      s.mat += kron(l.transpose(), l.adjoint()) - anticomm;
    } else {
      s.mat += kron(l.conjugate(), l) - anticomm;
    }
  }
  return s;
}

ComplexMatrix propagate(const GKSLForm& g, const ComplexMatrix& x, double t, Direction dir) {
  check_dim(g, x);
  if (t < 0.0) {
    throw Error(ErrorCode::NegativeTime, "propagate: t must be non-negative");
  }
  if (t == 0.0) return x;
  const Superoperator s = generator_matrix(g, dir);
  return unvec(ComplexVector(expm(t * s.mat) * vec(x)), s.dim);
}

ComplexMatrix choi_matrix(const Superoperator& s) {
  const Eigen::Index d = s.dim;
  ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = s.apply(unit);
    }
  }
  return choi;
}

InvariantStateInfo invariant_state(const GKSLForm& g, const ComplexMatrix& h_system,
                                   const Tolerances& tol) {
  const Superoperator s = generator_matrix(g, Direction::schrodinger);
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(s.mat);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFiniteInput, "invariant_state: eigensolver failed");
  }
  const ComplexVector& values = eig.eigenvalues();
  double spectral_scale = 1.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    spectral_scale = std::max(spectral_scale, std::abs(values[i]));
  }
  Eigen::Index near_zero = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) <= tol.null_gap * spectral_scale) ++near_zero;
  }
  if (near_zero > 1) {
    throw Error(ErrorCode::MultipleInvariantStates,
                "invariant_state: stationary subspace has dimension " + std::to_string(near_zero));
  }

  // The null vector itself comes from an SVD: the smallest right singular
  // vector minimizes ||M v|| exactly, where an eigenvector of a non-normal M
  // can be poorly conditioned.
  Eigen::JacobiSVD<ComplexMatrix> svd(s.mat, Eigen::ComputeThinV);
  ComplexMatrix rho = unvec(ComplexVector(svd.matrixV().col(s.mat.cols() - 1)), s.dim);
  rho = hermitize(rho);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-8 * rho.norm()) {
    throw Error(ErrorCode::MultipleInvariantStates,
                "invariant_state: null vector is traceless; stationary structure is degenerate");
  }
  rho /= tr;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> rho_eig(rho);
  const RealVector lambda = rho_eig.eigenvalues();
  const double floor = lambda.minCoeff();
  RealVector clamped = lambda.cwiseMax(0.0);
  ComplexMatrix cleaned =
      rho_eig.eigenvectors() * clamped.asDiagonal() * rho_eig.eigenvectors().adjoint();
  cleaned /= cleaned.trace().real();

  InvariantStateInfo info;
  info.state.matrix = cleaned;
  info.state.eigen_floor = floor;
  info.residual = s.apply(cleaned).norm();
  if (info.residual > std::max(tol.invariant_residual, 1e-13 * spectral_scale)) {
    throw Error(ErrorCode::MultipleInvariantStates,
                "invariant_state: residual " + std::to_string(info.residual) +
                    " exceeds tolerance; nullspace is ill-determined");
  }
  info.h_commutator_residual = (cleaned * h_system - h_system * cleaned).norm();
  info.commutes_with_h = info.h_commutator_residual <= 1e-8 * std::max(1.0, h_system.norm());
  if (!info.state.faithful(tol.faithfulness)) {
    throw Error(ErrorCode::NotFaithful,
                "invariant_state: smallest eigenvalue " + std::to_string(floor) +
                    " is below the faithfulness threshold; reduction by the recurrent "
                    "projection is not supported");
  }
  return info;
}

}  // namespace lep
