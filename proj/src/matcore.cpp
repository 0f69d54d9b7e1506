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

#include "lep/matcore.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace lep {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::UnknownFrequency: return "UnknownFrequency";
    case ErrorCode::MissingRates: return "MissingRates";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::MultipleInvariantStates: return "MultipleInvariantStates";
    case ErrorCode::NotFaithful: return "NotFaithful";
    case ErrorCode::NotDiagonal: return "NotDiagonal";
    case ErrorCode::ComplexCoupling: return "ComplexCoupling";
    case ErrorCode::ZeroMoment: return "ZeroMoment";
    case ErrorCode::RangeMismatch: return "RangeMismatch";
    case ErrorCode::DriftConditionFailed: return "DriftConditionFailed";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NotAState: return "NotAState";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InconsistentVerdicts: return "InconsistentVerdicts";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
  }
  return "Unknown";
}

ComplexMatrix SpectralData::reconstruct() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& level : levels) out += level.eigenvalue * level.projection;
  return out;
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexVector vec(const ComplexMatrix& m) {
  return ComplexVector(Eigen::Map<const ComplexVector>(m.data(), m.size()));
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d) {
  if (v.size() != d * d) {
    throw Error(ErrorCode::DimensionMismatch, "unvec: vector size is not d^2");
  }
  return ComplexMatrix(Eigen::Map<const ComplexMatrix>(v.data(), d, d));
}

SpectralData herm_eig(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "herm_eig: matrix must be square, d >= 1");
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::NonFiniteInput, "herm_eig: entries must be finite");
  }
  const double scale = std::max(1.0, m.norm());
  const double eff_tol = tol > 0.0 ? tol : 1e-10 * scale;
  if ((m - m.adjoint()).norm() > eff_tol * scale) {
    throw Error(ErrorCode::NonHermitian, "herm_eig: ||M - M*|| exceeds tolerance");
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFiniteInput, "herm_eig: eigensolver failed");
  }
  const RealVector& values = solver.eigenvalues();  // ascending
  const ComplexMatrix& vectors = solver.eigenvectors();

  SpectralData out;
  out.dim = m.rows();
  out.tol_used = eff_tol;

  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values[i] - values[i - 1] > eff_tol) {
      const Eigen::Index count = i - start;
      ComplexMatrix block = vectors.middleCols(start, count);
      SpectralLevel level;
      level.eigenvalue = values.segment(start, count).mean();
      level.projection = block * block.adjoint();
      out.levels.push_back(std::move(level));
      start = i;
    }
  }
  return out;
}

namespace {

struct HermEigPair {
  RealVector values;
  ComplexMatrix vectors;
};

HermEigPair psd_eigs(const ComplexMatrix& m, const char* caller) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(caller) + ": matrix must be square");
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::NonFiniteInput, std::string(caller) + ": entries must be finite");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFiniteInput, std::string(caller) + ": eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix& m, double clamp) {
  auto [values, vectors] = psd_eigs(m, "psd_sqrt");
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  RealVector roots(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -clamp * scale) {
      throw Error(ErrorCode::NotPSD, "psd_sqrt: significantly negative eigenvalue");
    }
    roots[i] = std::sqrt(std::max(values[i], 0.0));
  }
  return vectors * roots.asDiagonal() * vectors.adjoint();
}

SupportLog log_on_support(const ComplexMatrix& m, double cutoff) {
  if (cutoff <= 0.0) {
    throw Error(ErrorCode::ValidationError, "log_on_support: cutoff must be positive");
  }
  auto [values, vectors] = psd_eigs(m, "log_on_support");
  const double lambda_max = values.maxCoeff();
  const double abs_scale = std::max(values.cwiseAbs().maxCoeff(), 0.0);
  const double kernel_edge = cutoff * std::max(lambda_max, 0.0);
  const double neg_tol = std::max(kernel_edge, 1e-12 * std::max(1.0, abs_scale));
  SupportLog out;
  out.log = ComplexMatrix::Zero(m.rows(), m.cols());
  out.support = ComplexMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -neg_tol) {
      throw Error(ErrorCode::NotPSD, "log_on_support: negative eigenvalue");
    }
    if (values[i] <= kernel_edge) continue;
    const ComplexMatrix rank1 = vectors.col(i) * vectors.col(i).adjoint();
    out.log += std::log(values[i]) * rank1;
    out.support += rank1;
    ++out.rank;
  }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "expm: matrix must be square");
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::NonFiniteInput, "expm: entries must be finite");
  }
  return m.exp();
}

}  // namespace lep
