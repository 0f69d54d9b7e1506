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

#include "lep/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lep {

namespace {

constexpr double kLogFloor = 1e-300;  // below this a log argument counts as 0

// Drops the frequency entirely: a vanished V_omega contributes nothing to the
// generator, so it cannot contribute to the entropy production either.
bool component_vanishes(const MomentTriple& m) {
  return m.nu_minus < 1e-18 && m.nu_plus < 1e-18;
}

ComplexMatrix identity_like(const std::vector<FrequencyComponent>& comps) {
  const Eigen::Index d = comps.front().v_omega.rows();
  return ComplexMatrix::Identity(d, d);
}

}  // namespace

EntangledState build_entangled_state(const DensityMatrix& rho, const Tolerances& tol) {
  if (!rho.faithful(tol.faithfulness)) {
    throw Error(ErrorCode::NotFaithful, "build_entangled_state: state is not faithful");
  }
  ComplexMatrix off = rho.matrix;
  off.diagonal().setZero();
  if (off.norm() > tol.rho_diagonal) {
    throw Error(ErrorCode::NotDiagonal,
                "build_entangled_state: state has off-diagonal mass in the canonical basis");
  }
  const Eigen::Index d = rho.dim();
  EntangledState out;
  out.dim = d;
  out.r = ComplexVector::Zero(d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.r[j * d + j] = std::sqrt(std::max(rho.matrix(j, j).real(), 0.0));
  }
  out.density = out.r * out.r.adjoint();
  return out;
}

ComplexMatrix phi_forward(const std::vector<FrequencyComponent>& comps, const ComplexMatrix& x) {
  if (comps.empty()) return ComplexMatrix::Zero(x.rows(), x.cols());
  const ComplexMatrix id = identity_like(comps);
  if (x.rows() != id.rows() * id.rows() || x.cols() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "phi_forward: X must act on h (x) h");
  }
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& comp : comps) {
    const ComplexMatrix a = kron(id, comp.v_omega);
    out += comp.gamma_minus * a * x * a.adjoint() + comp.gamma_plus * a.adjoint() * x * a;
  }
  return out;
}

ComplexMatrix phi_backward(const std::vector<FrequencyComponent>& comps, const ComplexMatrix& x) {
  if (comps.empty()) return ComplexMatrix::Zero(x.rows(), x.cols());
  const ComplexMatrix id = identity_like(comps);
  if (x.rows() != id.rows() * id.rows() || x.cols() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "phi_backward: X must act on h (x) h");
  }
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& comp : comps) {
    const ComplexMatrix a = kron(comp.v_omega, id);
    out += comp.gamma_minus * a * x * a.adjoint() + comp.gamma_plus * a.adjoint() * x * a;
  }
  return out;
}

MomentTriple moments(const DensityMatrix& rho, const FrequencyComponent& comp) {
  MomentTriple m;
  m.omega_index = comp.omega_index;
  m.omega = comp.omega;
  const ComplexMatrix& v = comp.v_omega;
  const ComplexMatrix sqrt_rho = psd_sqrt(rho.matrix);
  m.nu_minus = (rho.matrix * v.adjoint() * v).trace().real();
  m.nu_plus = (rho.matrix * v * v.adjoint()).trace().real();
  m.mu = (sqrt_rho * v.adjoint() * sqrt_rho * v).trace().real();
  return m;
}

std::vector<MomentTriple> moments(const DensityMatrix& rho,
                                  const std::vector<FrequencyComponent>& comps) {
  std::vector<MomentTriple> out;
  out.reserve(comps.size());
  for (const auto& comp : comps) out.push_back(moments(rho, comp));
  return out;
}

ScalarProductResiduals check_scalar_product_lemma(const DensityMatrix& rho,
                                                  const ComplexMatrix& x,
                                                  const ComplexMatrix& y) {
  const EntangledState es = build_entangled_state(rho);
  const Eigen::Index d = es.dim;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix sqrt_rho = psd_sqrt(rho.matrix);

  const ComplexVector lhs_left = kron(y, id) * es.r;
  const ComplexVector rhs_slot = kron(id, x) * es.r;
  const Complex lhs1 = lhs_left.dot(rhs_slot);  // conjugates the first argument
  // theta Y* theta is the entrywise conjugate of Y*, i.e. Y^T.
  const Complex rhs1 = (y.conjugate() * sqrt_rho * x * sqrt_rho).trace();

  const ComplexVector lhs_second = kron(id, y) * es.r;
  const Complex lhs2 = lhs_second.dot(rhs_slot);
  const Complex rhs2 = (rho.matrix * y.adjoint() * x).trace();

  return {std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2)};
}

EPReport ep_closed_form(const DensityMatrix& rho, const SLTModel& model,
                        const std::vector<FrequencyComponent>& comps) {
  if (!model.real_coupling) {
    throw Error(ErrorCode::ComplexCoupling,
                "ep_closed_form: requires real V_omega and H_omega in the canonical basis");
  }
  EPReport report;
  report.method = EpMethod::closed_form;
  bool infinite = false;
  for (const auto& comp : comps) {
    const MomentTriple m = moments(rho, comp);
    PerOmegaTerm term;
    term.omega_index = comp.omega_index;
    term.omega = comp.omega;
    term.gamma_minus = comp.gamma_minus;
    term.gamma_plus = comp.gamma_plus;
    term.nu_minus = m.nu_minus;
    term.nu_plus = m.nu_plus;
    term.mu = m.mu;
    if (component_vanishes(m)) {
      term.dropped = true;
      report.per_omega.push_back(term);
      continue;
    }
    const double a = comp.gamma_minus * m.nu_minus;
    const double b = comp.gamma_plus * m.nu_plus;
    const double schwarz = m.nu_plus * m.nu_minus;
    const double mu2 = m.mu * m.mu;
    if (a < kLogFloor || b < kLogFloor || schwarz < kLogFloor || mu2 < kLogFloor) {
      infinite = true;
      term.term_flux = std::numeric_limits<double>::infinity();
      report.per_omega.push_back(term);
      continue;
    }
    term.term_flux = (a - b) * std::log(a / b);
    term.term_schwarz = (a + b) * std::log(schwarz / mu2);
    report.per_omega.push_back(term);
  }
  if (infinite) {
    report.total = std::numeric_limits<double>::infinity();
    return report;
  }
  report.total = 0.0;
  for (const auto& term : report.per_omega) report.total += term.total();
  return report;
}

namespace {

// Span of the columns as an orthogonal projection, rank cut at the largest
// singular value times 1e-10.
ComplexMatrix column_span_projection(const ComplexMatrix& columns) {
  if (columns.cols() == 0) return ComplexMatrix::Zero(columns.rows(), columns.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(columns, Eigen::ComputeThinU);
  const double cut = 1e-10 * svd.singularValues().maxCoeff();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > cut) ++rank;
  }
  const ComplexMatrix u = svd.matrixU().leftCols(rank);
  return u * u.adjoint();
}

}  // namespace

EPReport ep_general(const DensityMatrix& rho, const EntangledState& entangled,
                    const GKSLForm& g, const std::vector<FrequencyComponent>& comps,
                    const Tolerances& tol, bool enforce_hypotheses) {
  EPReport report;
  report.method = EpMethod::general;

  const ComplexMatrix sqrt_rho = psd_sqrt(rho.matrix);
  report.drift_residual = (sqrt_rho * g.drift.transpose() - g.drift * sqrt_rho).norm();
  if (enforce_hypotheses && report.drift_residual > 1e-8 * std::max(1.0, g.drift.norm())) {
    throw Error(ErrorCode::DriftConditionFailed,
                "ep_general: rho^1/2 G^T != G rho^1/2 (residual " +
                    std::to_string(report.drift_residual) + ")");
  }

  // Hypothesis 2 diagnostic: the Kraus spans against their transposes.
  const Eigen::Index d = rho.dim();
  if (!g.kraus.empty()) {
    ComplexMatrix left(d * d, static_cast<Eigen::Index>(g.kraus.size()));
    ComplexMatrix right(d * d, static_cast<Eigen::Index>(g.kraus.size()));
    for (std::size_t l = 0; l < g.kraus.size(); ++l) {
      left.col(static_cast<Eigen::Index>(l)) = vec(g.kraus[l] * sqrt_rho);
      right.col(static_cast<Eigen::Index>(l)) = vec(sqrt_rho * g.kraus[l].transpose());
    }
    report.span_residual =
        (column_span_projection(left) - column_span_projection(right)).norm();
  }

  const ComplexMatrix forward = hermitize(phi_forward(comps, entangled.density));
  const ComplexMatrix backward = hermitize(phi_backward(comps, entangled.density));
  if (forward.norm() < 1e-30 && backward.norm() < 1e-30) {
    return report;  // no dissipative part, no entropy production
  }

  SupportLog forward_log = log_on_support(forward, tol.support_cutoff);
  SupportLog backward_log = log_on_support(backward, tol.support_cutoff);
  report.range_residual = (forward_log.support - backward_log.support).norm();
  if (report.range_residual > tol.range_match) {
    if (enforce_hypotheses) {
      throw Error(ErrorCode::RangeMismatch,
                  "ep_general: ranges of the forward and backward maps differ (residual " +
                      std::to_string(report.range_residual) + ")");
    }
    // Hypotheses violated: report the face value of the trace formula with
    // each logarithm on its own support; only a diagnostic in this regime.
    const ComplexMatrix log_diff = forward_log.log - backward_log.log;
    report.total = (forward * log_diff).trace().real();
    report.half_difference_total = 0.5 * ((forward - backward) * log_diff).trace().real();
    return report;
  }

  // Symmetrized common support, then logarithms of the projected maps.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> common_eig(
      hermitize(0.5 * (forward_log.support + backward_log.support)));
  ComplexMatrix common = ComplexMatrix::Zero(forward.rows(), forward.cols());
  for (Eigen::Index i = 0; i < common_eig.eigenvalues().size(); ++i) {
    if (common_eig.eigenvalues()[i] > 0.5) {
      common += common_eig.eigenvectors().col(i) * common_eig.eigenvectors().col(i).adjoint();
    }
  }
  const ComplexMatrix f_proj = hermitize(common * forward * common);
  const ComplexMatrix b_proj = hermitize(common * backward * common);
  const SupportLog lf = log_on_support(f_proj, tol.support_cutoff);
  const SupportLog lb = log_on_support(b_proj, tol.support_cutoff);
  const ComplexMatrix log_diff = lf.log - lb.log;
  report.total = (f_proj * log_diff).trace().real();
  report.half_difference_total = 0.5 * ((f_proj - b_proj) * log_diff).trace().real();
  return report;
}

ZeroEpVerdict is_zero_ep(const std::vector<MomentTriple>& mom,
                         const std::map<int, RatePair>& rates, double tol) {
  ZeroEpVerdict verdict;
  verdict.zero = true;
  for (const auto& m : mom) {
    if (component_vanishes(m)) continue;
    const auto it = rates.find(m.omega_index);
    if (it == rates.end()) {
      throw Error(ErrorCode::MissingRates,
                  "is_zero_ep: no rates for omega_index " + std::to_string(m.omega_index));
    }
    const double a = it->second.gamma_minus * m.nu_minus;
    const double b = it->second.gamma_plus * m.nu_plus;
    const double flux = std::abs(a - b) / std::max(1.0, a + b);
    const double schwarz =
        std::abs(m.nu_minus * m.nu_plus - m.mu * m.mu) / std::max(1.0, m.nu_minus * m.nu_plus);
    if (flux > tol || schwarz > tol) {
      verdict.zero = false;
      verdict.violations.push_back({m.omega_index, m.omega, flux, schwarz});
    }
  }
  return verdict;
}

}  // namespace lep
