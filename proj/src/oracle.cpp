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

#include "lep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lep {

namespace {

// Apply the d^2 x d^2 map E to the second tensor factor of the d^2 x d^2
// operator omega on h (x) h. With the kron index convention (i, j) -> i*d + j,
// the (i, k) spectator pair addresses the contiguous block (i*d, k*d).
ComplexMatrix apply_second_factor(const ComplexMatrix& e, const ComplexMatrix& omega,
                                  Eigen::Index d) {
  ComplexMatrix out(omega.rows(), omega.cols());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const ComplexMatrix block = omega.block(i * d, k * d, d, d);
      out.block(i * d, k * d, d, d) = unvec(ComplexVector(e * vec(block)), d);
    }
  }
  return out;
}

ComplexMatrix apply_first_factor(const ComplexMatrix& e, const ComplexMatrix& omega,
                                 Eigen::Index d) {
  ComplexMatrix out(omega.rows(), omega.cols());
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = 0; l < d; ++l) {
      ComplexMatrix gathered(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
          gathered(i, k) = omega(i * d + j, k * d + l);
        }
      }
      const ComplexMatrix mapped = unvec(ComplexVector(e * vec(gathered)), d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
          out(i * d + j, k * d + l) = mapped(i, k);
        }
      }
    }
  }
  return out;
}

}  // namespace

GKSLForm theta_conjugate(const GKSLForm& g) {
  GKSLForm out;
  out.hamiltonian = -g.hamiltonian.conjugate();
  out.drift = g.drift.conjugate();
  out.kraus.reserve(g.kraus.size());
  for (const auto& l : g.kraus) out.kraus.push_back(l.conjugate());
  out.b = g.b;
  return out;
}

TwoPointStates two_point_states(const GKSLForm& g, const EntangledState& entangled, double t) {
  if (t < 0.0) {
    throw Error(ErrorCode::NegativeTime, "two_point_states: t must be non-negative");
  }
  const Eigen::Index d = entangled.dim;
  TwoPointStates out;
  out.t = t;
  if (t == 0.0) {
    out.forward = entangled.density;
    out.backward = entangled.density;
    return out;
  }
  const ComplexMatrix forward_map =
      expm(t * generator_matrix(g, Direction::schrodinger).mat);
  const ComplexMatrix backward_map =
      expm(t * generator_matrix(theta_conjugate(g), Direction::schrodinger).mat);
  out.forward = hermitize(apply_second_factor(forward_map, entangled.density, d));
  out.backward = hermitize(apply_first_factor(backward_map, entangled.density, d));
  return out;
}

double relative_entropy(const ComplexMatrix& sigma, const ComplexMatrix& tau, double cutoff,
                        double support_mass) {
  if (sigma.rows() != tau.rows() || sigma.cols() != tau.cols() || sigma.rows() != sigma.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "relative_entropy: dimension mismatch");
  }
  if (std::abs(sigma.trace() - Complex{1.0, 0.0}) > 1e-8 ||
      std::abs(tau.trace() - Complex{1.0, 0.0}) > 1e-8) {
    throw Error(ErrorCode::NotAState, "relative_entropy: arguments must have unit trace");
  }
  const SupportLog tau_log = log_on_support(tau, cutoff);
  const Eigen::Index n = sigma.rows();
  const ComplexMatrix outside = ComplexMatrix::Identity(n, n) - tau_log.support;
  const double escaped = (outside * sigma * outside).trace().real();
  if (escaped > support_mass) {
    return std::numeric_limits<double>::infinity();
  }
  const SupportLog sigma_log = log_on_support(sigma, cutoff);
  return ((sigma * sigma_log.log).trace() - (sigma * tau_log.log).trace()).real();
}

EpEstimate ep_estimate(const GKSLForm& g, const EntangledState& entangled,
                       std::vector<double> t_grid) {
  if (t_grid.empty()) {
    throw Error(ErrorCode::ValidationError, "ep_estimate: empty time grid");
  }
  std::sort(t_grid.begin(), t_grid.end(), std::greater<>());
  for (double t : t_grid) {
    if (!(t > 0.0)) {
      throw Error(ErrorCode::ValidationError, "ep_estimate: grid times must be positive");
    }
  }

  EpEstimate est;
  for (double t : t_grid) {
    const TwoPointStates tps = two_point_states(g, entangled, t);
    const double s = relative_entropy(tps.forward, tps.backward);
    est.table.push_back({t, s, s / t});
  }

  const auto finite = [](double x) { return std::isfinite(x); };
  for (const auto& row : est.table) {
    if (!finite(row.rate)) {
      est.extrapolated = row.rate;
      est.converged = false;
      return est;
    }
  }

  // Two-point Richardson steps assuming rate(t) = ep + c1 t + O(t^2), then a
  // quadratic fit through the last three points when available.
  std::vector<double> linear;
  for (std::size_t i = 0; i + 1 < est.table.size(); ++i) {
    const auto& a = est.table[i];
    const auto& b = est.table[i + 1];
    linear.push_back((a.t * b.rate - b.t * a.rate) / (a.t - b.t));
  }
  double value = linear.empty() ? est.table.back().rate : linear.back();
  if (est.table.size() >= 3) {
    const std::size_t k = est.table.size();
    const double t_ref = est.table[k - 3].t;
    Eigen::Matrix3d vander;
    Eigen::Vector3d rhs;
    for (int i = 0; i < 3; ++i) {
      const double scaled = est.table[k - 3 + static_cast<std::size_t>(i)].t / t_ref;
      vander(i, 0) = 1.0;
      vander(i, 1) = scaled;
      vander(i, 2) = scaled * scaled;
      rhs(i) = est.table[k - 3 + static_cast<std::size_t>(i)].rate;
    }
    const Eigen::Vector3d fit = vander.colPivHouseholderQr().solve(rhs);
    value = fit(0);
  }
  est.extrapolated = value;
  est.uncertainty = linear.size() >= 2
                        ? std::abs(linear.back() - linear[linear.size() - 2])
                        : std::abs(value - est.table.back().rate);
  est.uncertainty = std::max(est.uncertainty, 1e-12);
  // Stabilizing when the Richardson corrections stopped growing.
  est.converged = true;
  for (std::size_t i = 1; i < linear.size(); ++i) {
    const double prev = std::abs(linear[i - 1] - est.table[i].rate);
    const double curr = std::abs(linear[i] - est.table[i + 1].rate);
    if (curr > prev + 1e-9 && curr > 1e-9 + 0.05 * std::abs(value)) {
      est.converged = false;
    }
  }
  return est;
}

}  // namespace lep
