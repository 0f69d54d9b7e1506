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

// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lep/balance.hpp"
#include "lep/dynamics.hpp"
#include "lep/entropy.hpp"
#include "lep/oracle.hpp"
#include "testutil.hpp"

using namespace lep;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

struct PreparedModel {
  SLTModel model;
  std::vector<FrequencyComponent> comps;
  GKSLForm gksl;
  DensityMatrix rho;
  EntangledState entangled;
};

PreparedModel prepare(const SLTModel& model) {
  PreparedModel p{model, build_components(model), build_gksl(model), {}, {}};
  p.rho = invariant_state(p.gksl, model.h_system).state;
  p.entangled = build_entangled_state(p.rho);
  return p;
}

const std::vector<double> kOracleGrid = {2e-3, 1e-3, 5e-4, 2e-4, 1e-4};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// True when every frequency component is supported on a single level pair, so
// the per-frequency collinearity of the proof applies unconditionally.
bool nondegenerate_bohr(const PreparedModel& p) {
  for (const auto& comp : p.comps) {
    int pairs = 0;
    for (std::size_t n = 0; n < p.model.spectral.levels.size(); ++n) {
      for (std::size_t m = 0; m < n; ++m) {
        const double diff = p.model.spectral.levels[n].eigenvalue -
                            p.model.spectral.levels[m].eigenvalue;
        if (std::abs(diff - comp.omega) <= p.model.spectral.tol_used) ++pairs;
      }
    }
    if (pairs != 1) return false;
  }
  return true;
}

}  // namespace

int main() {
  // --- model sets -----------------------------------------------------------
  std::vector<PreparedModel> set_a;  // criterion 1: 50 models, d in {2,3,4}
  {
    std::mt19937 rng(20240101);
    for (int i = 0; i < 50; ++i) set_a.push_back(prepare(test::random_model(rng, 2 + i % 3)));
  }
  std::vector<PreparedModel> set_b;  // criterion 2: 20 models, d <= 3
  {
    std::mt19937 rng(20240202);
    for (int i = 0; i < 20; ++i) set_b.push_back(prepare(test::random_model(rng, 2 + i % 2)));
  }
  const PreparedModel qubit = prepare(test::qubit_model());
  const PreparedModel gibbs = prepare(test::gibbs_three_level());
  const PreparedModel mismatched = prepare(test::mismatched_three_level());

  std::vector<const PreparedModel*> all_models;
  for (const auto& p : set_a) all_models.push_back(&p);
  for (const auto& p : set_b) all_models.push_back(&p);
  all_models.push_back(&qubit);
  all_models.push_back(&gibbs);
  all_models.push_back(&mismatched);

  // --- criterion 1: formula agreement --------------------------------------
  {
    bool pass = true;
    double worst = 0.0;
    for (const auto& p : set_a) {
      const double closed = ep_closed_form(p.rho, p.model, p.comps).total;
      const double general = ep_general(p.rho, p.entangled, p.gksl, p.comps).total;
      const double dev = std::abs(closed - general);
      const double bound = std::max(1e-8, 1e-6 * std::abs(closed));
      worst = std::max(worst, dev);
      if (dev > bound) pass = false;
    }
    report(1, "formula agreement on 50 random models", pass,
           "max |closed - general| = " + fmt(worst) +
               ", bound max(1e-8, 1e-6 rel)");
  }

  // --- criterion 2: oracle validation ---------------------------------------
  {
    bool pass = true;
    double worst_rel = 0.0;
    for (const auto& p : set_b) {
      const double closed = ep_closed_form(p.rho, p.model, p.comps).total;
      const double estimate = ep_estimate(p.gksl, p.entangled, kOracleGrid).extrapolated;
      const double dev = std::abs(estimate - closed);
      if (dev > std::max(1e-6, 0.01 * std::abs(closed))) pass = false;
      if (std::abs(closed) > 1e-6) worst_rel = std::max(worst_rel, dev / std::abs(closed));
    }
    report(2, "oracle matches the closed form on 20 random models", pass,
           "worst relative deviation = " + fmt(worst_rel) + ", bound 1% (1e-6 abs near zero)");
  }

  // --- criterion 3: zero-EP characterization --------------------------------
  {
    bool pass = true;
    int checked = 0;
    for (const auto& p : set_a) {
      const double closed = ep_closed_form(p.rho, p.model, p.comps).total;
      const bool verdict = is_zero_ep(moments(p.rho, p.comps), p.model.rates).zero;
      if (verdict != (closed <= 1e-9)) pass = false;
      ++checked;
    }
    for (const auto& p : set_b) {
      const double closed = ep_closed_form(p.rho, p.model, p.comps).total;
      const bool verdict = is_zero_ep(moments(p.rho, p.comps), p.model.rates).zero;
      if (verdict != (closed <= 1e-9)) pass = false;
      ++checked;
    }
    report(3, "is_zero_ep verdict equals (closed form <= 1e-9)", pass,
           std::to_string(checked) + " models checked");
  }

  // --- criterion 4: four-way equivalence -------------------------------------
  {
    bool pass = true;
    int checked = 0;
    for (const auto& p : set_a) {
      if (!equivalence_suite(p.model, p.rho, 1e-8, false).consistent) pass = false;
      ++checked;
    }
    for (const auto& p : set_b) {
      if (!equivalence_suite(p.model, p.rho, 1e-8, false).consistent) pass = false;
      ++checked;
    }
    report(4, "four equivalent conditions agree on every model", pass,
           std::to_string(checked) + " models, shared tolerance 1e-8");
  }

  // --- criterion 5: detailed-balance construction ---------------------------
  {
    bool pass = true;
    std::string detail;
    double z = 0.0;
    for (int i = 0; i < 3; ++i) z += std::exp(-static_cast<double>(i));
    double gibbs_dev = 0.0;
    for (int i = 0; i < 3; ++i) {
      gibbs_dev = std::max(gibbs_dev, std::abs(gibbs.rho.matrix(i, i).real() -
                                               std::exp(-static_cast<double>(i)) / z));
    }
    if (gibbs_dev > 1e-8) pass = false;
    const double closed = ep_closed_form(gibbs.rho, gibbs.model, gibbs.comps).total;
    const double general = ep_general(gibbs.rho, gibbs.entangled, gibbs.gksl, gibbs.comps).total;
    const double oracle =
        ep_estimate(gibbs.gksl, gibbs.entangled, {1e-2, 5e-3, 2e-3, 1e-3}).extrapolated;
    if (std::abs(closed) > 1e-9 || std::abs(general) > 1e-9 || std::abs(oracle) > 1e-9) {
      pass = false;
    }
    const EquivalenceReport eq = equivalence_suite(gibbs.model, gibbs.rho, 1e-8, false);
    const bool db_ok = eq.consistent && eq.zero_ep && eq.paired_kraus && eq.condition3 &&
                       eq.sqdb_theta &&
                       check_sqdb(gibbs.rho, gibbs.gksl.kraus, 1e-8).pass;
    if (!db_ok) pass = false;
    report(5, "Gibbs-tuned ladder reaches equilibrium", pass,
           "state deviation " + fmt(gibbs_dev) + ", EP {" + fmt(closed) + ", " + fmt(general) +
               ", " + fmt(oracle) + "}, all DB checks " + (db_ok ? "pass" : "FAIL"));
  }

  // --- criterion 6: non-equilibrium witness ---------------------------------
  {
    bool pass = true;
    const double closed = ep_closed_form(mismatched.rho, mismatched.model, mismatched.comps).total;
    // The equally spaced ladder violates the general-formula range hypothesis
    // (documented); its face value still witnesses the non-equilibrium.
    const EPReport general = ep_general(mismatched.rho, mismatched.entangled, mismatched.gksl,
                                        mismatched.comps, {}, false);
    const double oracle =
        ep_estimate(mismatched.gksl, mismatched.entangled, kOracleGrid).extrapolated;
    if (!(closed > 1e-3) || !(general.total > 1e-3) || !(oracle > 1e-3)) pass = false;
    const EquivalenceReport eq = equivalence_suite(mismatched.model, mismatched.rho, 1e-8, false);
    const bool all_fail = eq.consistent && !eq.zero_ep && !eq.paired_kraus && !eq.condition3 &&
                          !eq.sqdb_theta &&
                          !check_sqdb(mismatched.rho, mismatched.gksl.kraus, 1e-8).pass;
    if (!all_fail) pass = false;
    report(6, "mismatched ladder witnesses non-equilibrium", pass,
           "EP {closed " + fmt(closed) + ", general face value " + fmt(general.total) +
               " at range residual " + fmt(general.range_residual) + ", oracle " + fmt(oracle) +
               "} all > 1e-3, every DB check fails: " + (all_fail ? "yes" : "NO"));
  }

  // --- criterion 7: lemma suite ----------------------------------------------
  {
    bool pass = true;
    double worst = 0.0;
    std::mt19937 rng(20240707);
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 3);
      ComplexMatrix raw = test::random_complex(rng, d);
      ComplexMatrix rho_m = raw * raw.adjoint();
      ComplexMatrix diag = ComplexMatrix::Zero(d, d);
      diag.diagonal() = rho_m.diagonal();
      diag /= diag.trace().real();
      const DensityMatrix rho = as_density(diag);
      const ComplexMatrix x = test::random_complex(rng, d);
      const ComplexMatrix y = test::random_complex(rng, d);
      const ScalarProductResiduals res = check_scalar_product_lemma(rho, x, y);
      worst = std::max({worst, res.mixed, res.second_factor});
      if (res.mixed > 1e-10 || res.second_factor > 1e-10) pass = false;
    }
    // orthogonality across all Bohr pairs of 20 random real models
    double worst_cross = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const PreparedModel p = prepare(test::random_model(rng, 2 + trial % 3));
      const ComplexMatrix id = ComplexMatrix::Identity(p.model.dim, p.model.dim);
      for (std::size_t a = 0; a < p.comps.size(); ++a) {
        const ComplexVector va = kron(id, p.comps[a].v_omega) * p.entangled.r;
        const ComplexVector wa = kron(p.comps[a].v_omega, id) * p.entangled.r;
        for (std::size_t b = 0; b < p.comps.size(); ++b) {
          const ComplexVector vb = kron(id, p.comps[b].v_omega) * p.entangled.r;
          worst_cross = std::max(worst_cross, std::abs(wa.dot(vb)));
          if (a != b) worst_cross = std::max(worst_cross, std::abs(va.dot(vb)));
        }
      }
    }
    if (worst_cross > 1e-10) pass = false;
    report(7, "scalar-product lemma and orthogonality corollary", pass,
           "worst identity residual " + fmt(worst) + ", worst cross product " +
               fmt(worst_cross) + ", bound 1e-10");
  }

  // --- criterion 8: structural proof facts -----------------------------------
  {
    bool pass = true;
    double worst_block = 0.0;
    double worst_schwarz = 0.0;
    int covered = 0;
    for (const auto* p : all_models) {
      const auto mom = moments(p->rho, p->comps);
      for (const auto& m : mom) {
        worst_schwarz = std::max(worst_schwarz, m.mu * m.mu - m.nu_plus * m.nu_minus);
      }
      // the block/collinearity facts of the closed-form proof hold whenever
      // each frequency lives on a single level pair (the degenerate ladder
      // away from a geometric state is the documented exception)
      if (!nondegenerate_bohr(*p) && p != &gibbs) continue;
      ++covered;
      const ComplexMatrix id = ComplexMatrix::Identity(p->model.dim, p->model.dim);
      const Eigen::Index cols = 2 * static_cast<Eigen::Index>(p->comps.size());
      if (cols == 0) continue;
      ComplexMatrix basis(p->model.dim * p->model.dim, cols);
      RealVector weights(cols);
      for (std::size_t i = 0; i < p->comps.size(); ++i) {
        const ComplexVector u = kron(id, p->comps[i].v_omega) * p->entangled.r;
        const ComplexVector w =
            kron(id, ComplexMatrix(p->comps[i].v_omega.adjoint())) * p->entangled.r;
        basis.col(2 * static_cast<Eigen::Index>(i)) = u / u.norm();
        basis.col(2 * static_cast<Eigen::Index>(i) + 1) = w / w.norm();
        weights[2 * static_cast<Eigen::Index>(i)] = p->comps[i].gamma_minus * mom[i].nu_minus;
        weights[2 * static_cast<Eigen::Index>(i) + 1] = p->comps[i].gamma_plus * mom[i].nu_plus;
        const ComplexVector left = kron(p->comps[i].v_omega, id) * p->entangled.r;
        const double collin = (left - (mom[i].mu / mom[i].nu_plus) * w).norm();
        worst_block = std::max(worst_block, collin);
      }
      const ComplexMatrix forward = phi_forward(p->comps, p->entangled.density);
      const ComplexMatrix rebuilt =
          basis * weights.cast<Complex>().asDiagonal() * basis.adjoint();
      worst_block = std::max(
          worst_block,
          (basis.adjoint() * basis - ComplexMatrix::Identity(cols, cols)).norm());
      worst_block = std::max(worst_block, (forward - rebuilt).norm());
    }
    if (worst_block > 1e-10 || worst_schwarz > 1e-12) pass = false;
    report(8, "block diagonality, collinearity, Schwarz bound", pass,
           "worst structure residual " + fmt(worst_block) + " on " + std::to_string(covered) +
               " models, worst Schwarz excess " + fmt(worst_schwarz));
  }

  // --- criterion 9: global/local equivalence ---------------------------------
  {
    bool pass = true;
    std::mt19937 rng(20240909);
    int balanced_pass = 0;
    int unbalanced_fail = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const bool balanced = trial < 10;
      // unbalanced draws need a cycle to break detailed balance: d >= 3
      const int d = balanced ? 2 + trial % 3 : 3 + trial % 2;
      const PreparedModel p =
          prepare(test::random_model(rng, d, balanced ? 0.4 + 0.1 * trial : -1.0));
      const LocalGlobalReport lg = check_local_global(p.model, p.rho, 1e-8);
      if (!lg.implication_ok) pass = false;
      if (balanced) {
        if (!lg.global_pass) pass = false;
        for (const auto& local : lg.locals) {
          if (local.invariance_residual > 1e-8 || !local.theta_pass) pass = false;
        }
        if (lg.global_pass) ++balanced_pass;
      } else {
        if (lg.global_pass || lg.all_locals_pass) pass = false;
        if (!lg.global_pass) ++unbalanced_fail;
      }
    }
    report(9, "global SQDB-Theta iff all local semigroups balance", pass,
           std::to_string(balanced_pass) + "/10 balanced pass, " +
               std::to_string(unbalanced_fail) + "/10 unbalanced fail, residuals <= 1e-8");
  }

  // --- criterion 10: dynamics sanity ------------------------------------------
  {
    bool pass = true;
    double worst_trace = 0.0;
    double worst_choi = 0.0;
    double worst_semigroup = 0.0;
    double worst_comm = 0.0;
    double worst_invariance = 0.0;
    std::mt19937 rng(20241010);
    for (const auto* p : all_models) {
      const Eigen::Index d = p->model.dim;
      const Superoperator generator = generator_matrix(p->gksl, Direction::schrodinger);
      // trace preservation and positivity on a random state
      ComplexMatrix raw = test::random_complex(rng, d);
      ComplexMatrix state = raw * raw.adjoint();
      state /= state.trace().real();
      const ComplexMatrix evolved = propagate(p->gksl, state, 0.7, Direction::schrodinger);
      worst_trace = std::max(worst_trace, std::abs(evolved.trace().real() - 1.0));
      // Choi positivity of the propagated map
      for (double t : {0.01, 0.1, 1.0}) {
        Superoperator map;
        map.dim = generator.dim;
        map.mat = expm(t * generator.mat);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitize(choi_matrix(map)));
        worst_choi = std::min(worst_choi, eig.eigenvalues().minCoeff());
      }
      // semigroup property
      const ComplexMatrix x = test::random_complex(rng, d);
      const ComplexMatrix joint = propagate(p->gksl, x, 0.9, Direction::schrodinger);
      const ComplexMatrix stepped = propagate(
          p->gksl, propagate(p->gksl, x, 0.5, Direction::schrodinger), 0.4,
          Direction::schrodinger);
      worst_semigroup =
          std::max(worst_semigroup, (joint - stepped).norm() / std::max(1.0, joint.norm()));
      // invariant state: commutation and stationarity under the flow
      worst_comm = std::max(
          worst_comm, (p->rho.matrix * p->model.h_system - p->model.h_system * p->rho.matrix)
                          .norm());
      for (double t : {0.1, 1.0, 10.0}) {
        const ComplexMatrix settled =
            propagate(p->gksl, p->rho.matrix, t, Direction::schrodinger);
        worst_invariance = std::max(worst_invariance, (settled - p->rho.matrix).norm());
      }
    }
    if (worst_trace > 1e-10 || worst_choi < -1e-9 || worst_semigroup > 1e-9 ||
        worst_comm > 1e-8 || worst_invariance > 1e-8) {
      pass = false;
    }
    report(10, "trace, Choi positivity, semigroup law, stationarity", pass,
           "trace " + fmt(worst_trace) + ", choi floor " + fmt(worst_choi) + ", semigroup " +
               fmt(worst_semigroup) + ", [rho,H] " + fmt(worst_comm) + ", invariance " +
               fmt(worst_invariance));
  }

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  }
  return g_failures;
}
