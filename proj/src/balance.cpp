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

#include "lep/balance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lep/dynamics.hpp"

namespace lep {

namespace {

struct RootPair {
  ComplexMatrix sqrt;
  ComplexMatrix inv_sqrt;
};

RootPair faithful_roots(const DensityMatrix& rho) {
  if (!rho.faithful()) {
    throw Error(ErrorCode::NotFaithful, "state is not faithful");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitize(rho.matrix));
  RealVector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  RootPair out;
  out.sqrt = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
  out.inv_sqrt =
      eig.eigenvectors() * roots.cwiseInverse().asDiagonal() * eig.eigenvectors().adjoint();
  return out;
}

enum class WitnessKind { adjoint, transpose };

WitnessCheck solve_witness(const DensityMatrix& rho, const std::vector<ComplexMatrix>& kraus,
                           WitnessKind kind, double tol) {
  WitnessCheck check;
  if (kraus.empty()) {
    check.pass = true;  // vacuous
    return check;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(kraus.size());
  const Eigen::Index d = rho.dim();
  const ComplexMatrix sqrt_rho = psd_sqrt(rho.matrix);

  ComplexMatrix span(d * d, n);      // columns vec(L_m rho^1/2)
  ComplexMatrix targets(d * d, n);   // column l: vec(rho^1/2 f(L_l))
  for (Eigen::Index m = 0; m < n; ++m) {
    const ComplexMatrix& l = kraus[static_cast<std::size_t>(m)];
    span.col(m) = vec(l * sqrt_rho);
    targets.col(m) =
        vec(kind == WitnessKind::adjoint ? ComplexMatrix(sqrt_rho * l.adjoint())
                                         : ComplexMatrix(sqrt_rho * l.transpose()));
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(span, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_max = svd.singularValues().maxCoeff();
  const double rank_cut = 1e-12 * std::max(1.0, sigma_max);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > rank_cut) ++rank;
  }

  // Minimal-norm least squares for each row of u: span * u_row = target_l.
  ComplexMatrix u(n, n);
  double max_residual = 0.0;
  for (Eigen::Index l = 0; l < n; ++l) {
    ComplexVector coeff = ComplexVector::Zero(n);
    for (Eigen::Index k = 0; k < rank; ++k) {
      const Complex projected = svd.matrixU().col(k).dot(targets.col(l));
      coeff += (projected / svd.singularValues()[k]) * svd.matrixV().col(k);
    }
    const double res = (span * coeff - targets.col(l)).norm();
    max_residual = std::max(res / std::max(1.0, targets.col(l).norm()), max_residual);
    u.row(l) = coeff.transpose();
  }

  if (rank < n) {
    // Under-determined family: extend by the identity on the orthogonal
    // complement of the span coordinates, then judge the completed witness.
    ComplexMatrix null_proj = ComplexMatrix::Identity(n, n);
    null_proj -= svd.matrixV().leftCols(rank) * svd.matrixV().leftCols(rank).adjoint();
    u += null_proj;
  }

  check.solve_residual = max_residual;
  check.unitarity_residual = (u * u.adjoint() - ComplexMatrix::Identity(n, n)).norm();
  check.structure_residual = kind == WitnessKind::adjoint ? (u - u.transpose()).norm()
                                                          : (u - u.adjoint()).norm();
  check.witness = std::move(u);
  check.pass = check.solve_residual <= tol && check.unitarity_residual <= tol &&
               check.structure_residual <= tol;
  return check;
}

}  // namespace

ComplexMatrix modular_half(const DensityMatrix& rho, const ComplexMatrix& x) {
  if (x.rows() != rho.dim() || x.cols() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "modular_half: dimension mismatch");
  }
  const RootPair roots = faithful_roots(rho);
  return roots.sqrt * x * roots.inv_sqrt;
}

WitnessCheck check_sqdb(const DensityMatrix& rho, const std::vector<ComplexMatrix>& kraus,
                        double tol) {
  return solve_witness(rho, kraus, WitnessKind::adjoint, tol);
}

ThetaCheck check_sqdb_theta(const DensityMatrix& rho, const ComplexMatrix& drift,
                            const std::vector<ComplexMatrix>& kraus, double tol) {
  ThetaCheck check;
  const ComplexMatrix sqrt_rho = psd_sqrt(rho.matrix);
  check.drift_residual = (sqrt_rho * drift.transpose() - drift * sqrt_rho).norm() /
                         std::max(1.0, drift.norm());
  check.witness = solve_witness(rho, kraus, WitnessKind::transpose, tol);
  check.pass = check.drift_residual <= tol && check.witness.pass;
  return check;
}

std::vector<LocalBalance> check_slt_balance(const DensityMatrix& rho,
                                            const std::vector<FrequencyComponent>& comps,
                                            double tol) {
  const RootPair roots = faithful_roots(rho);
  const ComplexMatrix rho_inv = roots.inv_sqrt * roots.inv_sqrt;
  std::vector<LocalBalance> out;
  out.reserve(comps.size());
  for (const auto& comp : comps) {
    LocalBalance lb;
    lb.omega_index = comp.omega_index;
    lb.omega = comp.omega;
    const ComplexMatrix& v = comp.v_omega;
    const double scale = std::max(1.0, v.norm());
    lb.condition_residual = (std::sqrt(comp.gamma_plus) * roots.sqrt * v -
                             std::sqrt(comp.gamma_minus) * v * roots.sqrt)
                                .norm() /
                            scale;
    lb.pass = lb.condition_residual <= tol;
    const double ratio = comp.gamma_minus / comp.gamma_plus;
    lb.sigma_v_residual =
        (rho.matrix * v * rho_inv - ratio * v).norm() / std::max(1.0, ratio * v.norm());
    lb.sigma_h_residual = (rho.matrix * comp.h_omega * rho_inv - comp.h_omega).norm() /
                          std::max(1.0, comp.h_omega.norm());
    out.push_back(std::move(lb));
  }
  return out;
}

EquivalenceReport equivalence_suite(const SLTModel& model, const DensityMatrix& rho, double tol,
                                    bool strict) {
  if (!model.real_coupling) {
    throw Error(ErrorCode::ComplexCoupling,
                "equivalence_suite: requires real V_omega and H_omega");
  }
  const auto comps = build_components(model);
  const GKSLForm g = build_gksl(model);
  const ComplexMatrix sqrt_rho = psd_sqrt(rho.matrix);

  EquivalenceReport report;
  report.zero_verdict = is_zero_ep(moments(rho, comps), model.rates, tol);
  report.zero_ep = report.zero_verdict.zero;
  report.ep_total = ep_closed_form(rho, model, comps).total;

  for (Eigen::Index pair = 0; pair < g.b; ++pair) {
    const ComplexMatrix& l_odd = g.kraus[static_cast<std::size_t>(2 * pair)];
    const ComplexMatrix& l_even = g.kraus[static_cast<std::size_t>(2 * pair + 1)];
    const double res = (sqrt_rho * l_odd.adjoint() - l_even * sqrt_rho).norm() /
                       std::max(1.0, l_even.norm());
    report.paired_kraus_residual = std::max(report.paired_kraus_residual, res);
  }
  report.paired_kraus = report.paired_kraus_residual <= tol;

  report.locals = check_slt_balance(rho, comps, tol);
  report.condition3 = std::all_of(report.locals.begin(), report.locals.end(),
                                  [](const LocalBalance& lb) { return lb.pass; });

  report.theta = check_sqdb_theta(rho, g.drift, g.kraus, tol);
  report.sqdb_theta = report.theta.pass;

  report.consistent = report.zero_ep == report.paired_kraus &&
                      report.zero_ep == report.condition3 &&
                      report.zero_ep == report.sqdb_theta;
  if (!report.consistent && strict) {
    std::ostringstream msg;
    msg << "equivalence_suite: verdicts disagree at tolerance " << tol << " (zero_ep "
        << report.zero_ep << ", paired_kraus " << report.paired_kraus << ", condition3 "
        << report.condition3 << ", sqdb_theta " << report.sqdb_theta << ")";
    throw Error(ErrorCode::InconsistentVerdicts, msg.str());
  }
  return report;
}

LocalGlobalReport check_local_global(const SLTModel& model, const DensityMatrix& rho,
                                     double tol) {
  if (!model.real_coupling) {
    throw Error(ErrorCode::ComplexCoupling, "check_local_global: requires real coupling");
  }
  const auto comps = build_components(model);
  const GKSLForm g = build_gksl(model);

  LocalGlobalReport report;
  report.hypothesis_ok = true;
  for (const auto& comp : comps) {
    if (comp.h_omega.norm() < 1e-14) continue;
    // Least-squares fit of H_omega onto span{V*V, VV*}.
    ComplexMatrix basis(model.dim * model.dim, 2);
    basis.col(0) = vec(ComplexMatrix(comp.v_omega.adjoint() * comp.v_omega));
    basis.col(1) = vec(ComplexMatrix(comp.v_omega * comp.v_omega.adjoint()));
    const ComplexVector target = vec(comp.h_omega);
    const ComplexVector fit = basis.colPivHouseholderQr().solve(target);
    const double res = (basis * fit - target).norm() / std::max(1.0, comp.h_omega.norm());
    report.hypothesis_residual = std::max(report.hypothesis_residual, res);
    if (res > tol) report.hypothesis_ok = false;
  }
  if (!report.hypothesis_ok) {
    throw Error(ErrorCode::HypothesisViolated,
                "check_local_global: some H_omega lies outside span{V*V, VV*}");
  }

  report.global_pass = check_sqdb_theta(rho, g.drift, g.kraus, tol).pass;

  report.all_locals_pass = true;
  for (const auto& comp : comps) {
    GKSLForm local;
    local.hamiltonian = comp.h_omega;
    local.drift = comp.drift;
    local.kraus = {std::sqrt(comp.gamma_plus) * comp.v_omega.adjoint(),
                   std::sqrt(comp.gamma_minus) * comp.v_omega};
    local.b = 1;
    LocalGlobalReport::LocalResult result;
    result.omega_index = comp.omega_index;
    result.omega = comp.omega;
    result.invariance_residual = apply_generator(local, rho.matrix, Direction::schrodinger).norm();
    result.theta_pass = check_sqdb_theta(rho, local.drift, local.kraus, tol).pass;
    if (!(result.theta_pass && result.invariance_residual <= tol)) {
      report.all_locals_pass = false;
    }
    report.locals.push_back(std::move(result));
  }
  report.implication_ok = report.global_pass == report.all_locals_pass;
  return report;
}

}  // namespace lep
