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

#include "lep/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lep {

namespace {

const Complex kI{0.0, 1.0};

bool nearly_diagonal(const ComplexMatrix& m, double tol) {
  ComplexMatrix off = m;
  off.diagonal().setZero();
  return off.norm() <= tol * std::max(1.0, m.norm());
}

double max_imag(const ComplexMatrix& m) {
  return m.imag().cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<double> bohr_frequencies(const SpectralData& spec) {
  std::vector<double> diffs;
  for (std::size_t n = 0; n < spec.levels.size(); ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      diffs.push_back(spec.levels[n].eigenvalue - spec.levels[m].eigenvalue);
    }
  }
  std::sort(diffs.begin(), diffs.end());
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= diffs.size(); ++i) {
    if (i == diffs.size() || diffs[i] - diffs[i - 1] > spec.tol_used) {
      double sum = 0.0;
      for (std::size_t k = start; k < i; ++k) sum += diffs[k];
      out.push_back(sum / static_cast<double>(i - start));
      start = i;
    }
  }
  return out;
}

ComplexMatrix eigenoperator(const ComplexMatrix& v, const SpectralData& spec, double omega) {
  if (v.rows() != spec.dim || v.cols() != spec.dim) {
    throw Error(ErrorCode::DimensionMismatch, "eigenoperator: V does not match spectral data");
  }
  ComplexMatrix out = ComplexMatrix::Zero(spec.dim, spec.dim);
  bool matched = false;
  for (std::size_t n = 0; n < spec.levels.size(); ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      const double diff = spec.levels[n].eigenvalue - spec.levels[m].eigenvalue;
      if (std::abs(diff - omega) <= spec.tol_used) {
        out += spec.levels[m].projection * v * spec.levels[n].projection;
        matched = true;
      }
    }
  }
  if (!matched) {
    throw Error(ErrorCode::UnknownFrequency,
                "eigenoperator: omega " + std::to_string(omega) + " matches no level difference");
  }
  return out;
}

SLTModel make_model(const ComplexMatrix& h_system, const ComplexMatrix& coupling,
                    const std::map<int, RatePair>& rates,
                    const std::map<int, ComplexMatrix>& h_omega, const Tolerances& tol) {
  const Eigen::Index d = h_system.rows();
  if (d < 1 || h_system.cols() != d) {
    throw Error(ErrorCode::ValidationError, "make_model: H_S must be square, d >= 1");
  }
  if (coupling.rows() != d || coupling.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch, "make_model: V must match the dimension of H_S");
  }
  if (!all_finite(h_system) || !all_finite(coupling)) {
    throw Error(ErrorCode::NonFiniteInput, "make_model: entries must be finite");
  }
  const double h_scale = std::max(1.0, h_system.norm());
  if ((h_system - h_system.adjoint()).norm() > tol.hermiticity * h_scale) {
    throw Error(ErrorCode::NonHermitian, "make_model: H_S is not Hermitian");
  }

  SLTModel model;
  model.dim = d;
  model.tol = tol;

  // Rotate into the canonical basis. A numerically diagonal Hamiltonian with
  // ascending diagonal is kept as-is so that file round-trips are stable.
  SpectralData spec = herm_eig(h_system, tol.eig_cluster * h_scale);
  const bool diagonal_input = nearly_diagonal(h_system, 1e-13);
  bool ascending = true;
  if (diagonal_input) {
    for (Eigen::Index i = 1; i < d; ++i) {
      if (h_system(i, i).real() < h_system(i - 1, i - 1).real()) ascending = false;
    }
  }
  const bool rotate = !(diagonal_input && ascending);
  ComplexMatrix basis;
  if (rotate) {
    basis.resize(d, d);  // columns: eigenvectors, ascending energy
    Eigen::Index col = 0;
    for (const auto& level : spec.levels) {
      // Recover an orthonormal frame of the eigenspace from its projection.
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> proj_eig(level.projection);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (proj_eig.eigenvalues()[i] > 0.5) basis.col(col++) = proj_eig.eigenvectors().col(i);
      }
    }
    ComplexMatrix h_rot = basis.adjoint() * h_system * basis;
    model.h_system = ComplexMatrix::Zero(d, d);
    model.h_system.diagonal() = h_rot.diagonal().real().cast<Complex>();
    model.coupling = basis.adjoint() * coupling * basis;
    model.spectral = herm_eig(model.h_system, spec.tol_used);
  } else {
    model.h_system = ComplexMatrix::Zero(d, d);
    model.h_system.diagonal() = h_system.diagonal().real().cast<Complex>();
    model.coupling = coupling;
    model.spectral = std::move(spec);
  }
  model.bohr = bohr_frequencies(model.spectral);

  const int n_bohr = static_cast<int>(model.bohr.size());
  for (const auto& [idx, rate] : rates) {
    if (idx < 0 || idx >= n_bohr) {
      throw Error(ErrorCode::ValidationError,
                  "make_model: rates omega_index " + std::to_string(idx) +
                      " outside the Bohr frequency list (size " + std::to_string(n_bohr) + ")");
    }
    if (!(rate.gamma_minus > 0.0) || !(rate.gamma_plus > 0.0)) {
      throw Error(ErrorCode::ValidationError, "make_model: rates must be strictly positive");
    }
  }
  model.rates = rates;

  for (const auto& [idx, hw_raw] : h_omega) {
    if (rates.find(idx) == rates.end()) {
      throw Error(ErrorCode::ValidationError,
                  "make_model: H_omega given for omega_index " + std::to_string(idx) +
                      " which has no rates");
    }
    if (hw_raw.rows() != d || hw_raw.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "make_model: H_omega dimension mismatch");
    }
    ComplexMatrix hw = rotate ? ComplexMatrix(basis.adjoint() * hw_raw * basis) : hw_raw;
    const double hw_scale = hw.norm();
    if ((hw - hw.adjoint()).norm() > tol.hermiticity * std::max(1.0, hw_scale)) {
      throw Error(ErrorCode::NonHermitian, "make_model: H_omega is not Hermitian");
    }
    const ComplexMatrix comm = hw * model.h_system - model.h_system * hw;
    if (comm.norm() > tol.commutation * std::max(1e-30, hw_scale) * std::max(1.0, h_scale)) {
      throw Error(ErrorCode::ValidationError, "make_model: H_omega does not commute with H_S");
    }
    model.h_omega.emplace(idx, std::move(hw));
  }

  double imag_mass = max_imag(model.coupling);
  for (const auto& [idx, hw] : model.h_omega) imag_mass = std::max(imag_mass, max_imag(hw));
  model.real_coupling = imag_mass <= tol.real_flag;

  return model;
}

FrequencyComponent build_component(const SLTModel& model, int omega_index) {
  if (omega_index < 0 || omega_index >= static_cast<int>(model.bohr.size())) {
    throw Error(ErrorCode::UnknownFrequency,
                "build_component: omega_index " + std::to_string(omega_index) + " out of range");
  }
  const auto rate_it = model.rates.find(omega_index);
  if (rate_it == model.rates.end()) {
    throw Error(ErrorCode::MissingRates,
                "build_component: no rates for omega_index " + std::to_string(omega_index));
  }
  FrequencyComponent comp;
  comp.omega_index = omega_index;
  comp.omega = model.bohr[static_cast<std::size_t>(omega_index)];
  comp.v_omega = eigenoperator(model.coupling, model.spectral, comp.omega);
  comp.gamma_minus = rate_it->second.gamma_minus;
  comp.gamma_plus = rate_it->second.gamma_plus;
  const auto hw_it = model.h_omega.find(omega_index);
  comp.h_omega = hw_it != model.h_omega.end()
                     ? hw_it->second
                     : ComplexMatrix::Zero(model.dim, model.dim);
  comp.drift = -0.5 * (comp.gamma_minus * comp.v_omega.adjoint() * comp.v_omega +
                       comp.gamma_plus * comp.v_omega * comp.v_omega.adjoint()) -
               kI * comp.h_omega;
  return comp;
}

std::vector<FrequencyComponent> build_components(const SLTModel& model) {
  std::vector<FrequencyComponent> out;
  out.reserve(model.rates.size());
  for (const auto& [idx, rate] : model.rates) out.push_back(build_component(model, idx));
  return out;
}

GKSLForm build_gksl(const SLTModel& model) {
  GKSLForm form;
  form.hamiltonian = ComplexMatrix::Zero(model.dim, model.dim);
  form.drift = ComplexMatrix::Zero(model.dim, model.dim);
  for (const auto& comp : build_components(model)) {
    form.hamiltonian += comp.h_omega;
    form.drift += comp.drift;
    form.kraus.push_back(std::sqrt(comp.gamma_plus) * comp.v_omega.adjoint());
    form.kraus.push_back(std::sqrt(comp.gamma_minus) * comp.v_omega);
    ++form.b;
  }
  return form;
}

RepresentationReport validate_special_representation(const std::vector<ComplexMatrix>& kraus,
                                                     const ComplexMatrix& rho, double tol) {
  RepresentationReport report;
  if (kraus.empty()) {
    report.traceless_ok = true;
    report.independent_ok = true;
    report.gram_sigma_min = 0.0;
    return report;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(kraus.size());
  ComplexMatrix gram(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    report.max_state_trace =
        std::max(report.max_state_trace, std::abs((rho * kraus[static_cast<std::size_t>(l)]).trace()));
    for (Eigen::Index m = 0; m < n; ++m) {
      gram(l, m) = (kraus[static_cast<std::size_t>(l)].adjoint() *
                    kraus[static_cast<std::size_t>(m)])
                       .trace();
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> gram_eig(hermitize(gram));
  report.gram_sigma_min = gram_eig.eigenvalues().minCoeff();
  report.traceless_ok = report.max_state_trace <= tol;
  report.independent_ok = report.gram_sigma_min >= tol;
  return report;
}

}  // namespace lep
