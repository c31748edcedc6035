/* Copyright 2026 The Qclprobe Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "qcl/critical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qcl/errors.hpp"
#include "qcl/rng.hpp"

namespace qcl {

double dcp_residual(const ControlTask& task, const PropagationResult& prop) {
  const ComplexMatrix z = commutator(task.rho0, prop.observable_final);
  double sup = 0.0;
  for (const ComplexMatrix& v : prop.dipoles) {
    sup = std::max(sup, std::abs(trace_product(z, v)));
  }
  return sup;
}

double dcp_residual(const ControlTask& task, const ControlField& field) {
  return dcp_residual(task, propagate(task, field));
}

double kcp_residual(const ControlTask& task, const PropagationResult& prop) {
  return commutator(task.rho0, prop.observable_final).norm();
}

double kcp_residual(const ControlTask& task, const ControlField& field) {
  const ComplexMatrix u = final_unitary(task.system, field);
  return commutator(task.rho0, (u.adjoint() * task.O * u).eval()).norm();
}

std::string to_string(CriticalLabel label) {
  switch (label) {
    case CriticalLabel::NOT_CRITICAL: return "NOT_CRITICAL";
    case CriticalLabel::DCP: return "DCP";
    case CriticalLabel::KCP: return "KCP";
    case CriticalLabel::DCP_NOT_KCP: return "DCP_NOT_KCP";
    case CriticalLabel::NEG_SEMIDEFINITE: return "NEG_SEMIDEFINITE";
    case CriticalLabel::POS_SEMIDEFINITE: return "POS_SEMIDEFINITE";
    case CriticalLabel::INDEFINITE: return "INDEFINITE";
    case CriticalLabel::SECOND_ORDER_TRAP_CANDIDATE:
      return "SECOND_ORDER_TRAP_CANDIDATE";
    case CriticalLabel::GLOBAL_MAX_CANDIDATE: return "GLOBAL_MAX_CANDIDATE";
    case CriticalLabel::GLOBAL_MIN_CANDIDATE: return "GLOBAL_MIN_CANDIDATE";
  }
  return "UNKNOWN";
}

bool Classification::has(CriticalLabel l) const {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

Classification classify(const ControlTask& task, const ControlField& field,
                        const CriticalPointTolerances& tol) {
  const PropagationResult prop = propagate(task, field);

  Classification out;
  out.objective = objective(task, prop);
  out.bounds = kinematic_bounds(task);
  out.dcp_residual = dcp_residual(task, prop);
  out.kcp_residual = kcp_residual(task, prop);

  const HessianMatrix hess = hessian_kernel(task, prop);
  const RealMatrix scaled = hess.dt * hess.dt * hess.entries;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(scaled,
                                                   Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("classify: Hessian eigensolve failed");
  }
  out.hessian_eigenvalues = solver.eigenvalues();

  const bool dcp = out.dcp_residual <= tol.grad;
  const bool kcp = out.kcp_residual <= tol.kcp;
  const double slack = tol.hess * std::max(1.0, scaled.norm());
  const double min_eig = out.hessian_eigenvalues(0);
  const double max_eig =
      out.hessian_eigenvalues(out.hessian_eigenvalues.size() - 1);
  const bool neg = max_eig <= slack;
  const bool pos = min_eig >= -slack;
  const double tol_j = 1e-6 * (out.bounds.Jmax - out.bounds.Jmin);

  if (!dcp) out.labels.push_back(CriticalLabel::NOT_CRITICAL);
  if (dcp) out.labels.push_back(CriticalLabel::DCP);
  if (kcp) out.labels.push_back(CriticalLabel::KCP);
  if (dcp && !kcp) out.labels.push_back(CriticalLabel::DCP_NOT_KCP);
  if (neg) out.labels.push_back(CriticalLabel::NEG_SEMIDEFINITE);
  if (pos) out.labels.push_back(CriticalLabel::POS_SEMIDEFINITE);
  if (!neg && !pos) out.labels.push_back(CriticalLabel::INDEFINITE);
  if (dcp && neg && out.objective < out.bounds.Jmax - tol_j) {
    out.labels.push_back(CriticalLabel::SECOND_ORDER_TRAP_CANDIDATE);
  }
  if (dcp && out.objective >= out.bounds.Jmax - tol_j) {
    out.labels.push_back(CriticalLabel::GLOBAL_MAX_CANDIDATE);
  }
  if (dcp && out.objective <= out.bounds.Jmin + tol_j) {
    out.labels.push_back(CriticalLabel::GLOBAL_MIN_CANDIDATE);
  }
  return out;
}

TrapCertificate trap_certificate(const ControlTask& task, double eps0) {
  const int n = task.n();
  const ComplexMatrix dressed_h = task.system.H0 - task.system.mu * eps0;
  const SpectralPair dressed = spectral_decompose(dressed_h);

  for (int i = 0; i + 1 < n; ++i) {
    if (dressed.values(i + 1) - dressed.values(i) <= 1e-10) {
      throw ValidationError(
          "DEGENERATE_DRESSED_SPECTRUM: dressed levels " + std::to_string(i) +
          " and " + std::to_string(i + 1) + " are separated by " +
          std::to_string(dressed.values(i + 1) - dressed.values(i)) +
          "; the certificate needs a non-degenerate static Hamiltonian");
    }
  }

  const ComplexMatrix obs_dressed =
      dressed.vectors.adjoint() * task.O * dressed.vectors;
  const ComplexMatrix mu_dressed =
      dressed.vectors.adjoint() * task.system.mu * dressed.vectors;

  RealVector lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = obs_dressed(i, i).real();

  // Dressed states re-indexed by observable weight, largest first.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lambda(a) > lambda(b); });

  RealVector overlaps(n);
  for (int i = 0; i < n; ++i) {
    overlaps(i) =
        (dressed.vectors.col(i).adjoint() * task.rho0 * dressed.vectors.col(i))(0)
            .real();
  }
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (overlaps(i) > overlaps(best)) best = i;
  }
  int k = 0;  // 1-based position of the initial state in the descending order
  for (int i = 0; i < n; ++i) {
    if (order[i] == best) { k = i + 1; break; }
  }

  TrapCertificate cert;
  cert.k = k;
  cert.rho_overlap = overlaps(best);
  cert.lambdas.resize(n);
  for (int i = 0; i < n; ++i) cert.lambdas(i) = lambda(order[i]);

  const double obs_offdiag =
      (obs_dressed - obs_dressed.diagonal().asDiagonal().toDenseMatrix()).norm();
  bool strictly_descending = true;
  for (int i = 0; i + 1 < n; ++i) {
    if (cert.lambdas(i) - cert.lambdas(i + 1) <= 1e-10) strictly_descending = false;
  }
  cert.lambda_ordering_ok =
      obs_offdiag <= 1e-10 * std::max(1.0, task.O.norm()) && strictly_descending;

  cert.max_coupling_above = 0.0;
  for (int i = 0; i + 1 < k; ++i) {  // positions strictly above k in the order
    cert.max_coupling_above = std::max(
        cert.max_coupling_above, std::abs(mu_dressed(order[i], order[k - 1])));
  }
  cert.mu_zero_block_ok = cert.max_coupling_above <= 1e-12;

  cert.k_interior_ok = cert.rho_overlap >= 1.0 - 1e-10 && k > 1 && k < n;
  cert.holds =
      cert.lambda_ordering_ok && cert.mu_zero_block_ok && cert.k_interior_ok;
  return cert;
}

TrapCheckReport second_order_trap_numeric(const ControlTask& task,
                                          const ControlField& field, int probes,
                                          uint64_t seed,
                                          const CriticalPointTolerances& tol) {
  const PropagationResult prop = propagate(task, field);

  TrapCheckReport report;
  report.probes = probes;
  report.dcp_residual = dcp_residual(task, prop);
  report.kcp_residual = kcp_residual(task, prop);
  report.dcp_ok = report.dcp_residual <= tol.grad;
  report.kcp_ok = report.kcp_residual <= tol.kcp;

  const HessianMatrix hess = hessian_kernel(task, prop);
  const RealMatrix scaled = hess.dt * hess.dt * hess.entries;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(scaled,
                                                   Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("trap check: Hessian eigensolve failed");
  }
  report.min_eigenvalue = solver.eigenvalues()(0);
  report.max_eigenvalue = solver.eigenvalues()(solver.eigenvalues().size() - 1);
  report.hessian_ok =
      report.max_eigenvalue <= tol.hess * std::max(1.0, scaled.norm());

  if (report.kcp_ok) {
    SpectralFormEvaluator eval(task, prop, tol.kcp);
    double max_hplus = 0.0;
    double max_hminus = 0.0;
    for (int p = 0; p < probes; ++p) {
      Rng rng(seed + static_cast<uint64_t>(p));
      RealVector f(field.M);
      for (int m = 0; m < field.M; ++m) f(m) = rng.uniform(-1.0, 1.0);
      const SpectralForm sf = eval.evaluate(f);
      max_hplus = std::max(max_hplus, sf.h_plus);
      max_hminus = std::max(max_hminus, sf.h_minus);
    }
    report.max_hplus = max_hplus;
    report.max_hminus = max_hminus;
    report.hplus_ok = max_hplus <= 1e-10;
  } else {
    // Without simultaneous diagonalizability the level-resolved form is
    // undefined; the probe results would be meaningless.
    report.max_hplus = std::numeric_limits<double>::quiet_NaN();
    report.max_hminus = std::numeric_limits<double>::quiet_NaN();
    report.hplus_ok = false;
  }

  report.holds =
      report.dcp_ok && report.kcp_ok && report.hplus_ok && report.hessian_ok;
  return report;
}

}  // namespace qcl
