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
#pragma once

#include <string>
#include <vector>

#include "qcl/landscape.hpp"

namespace qcl {

// sup_m |Tr{[rho0, O_T] V(t_m*)}| : the gradient sup-norm on the grid.
double dcp_residual(const ControlTask& task, const ControlField& field);
double dcp_residual(const ControlTask& task, const PropagationResult& prop);

// ||[rho0, O_T]||_F with O_T = U(T)^dagger O U(T).  Zero iff the pair is
// simultaneously diagonalizable, which kills the gradient for every control,
// not just this one.
double kcp_residual(const ControlTask& task, const ControlField& field);
double kcp_residual(const ControlTask& task, const PropagationResult& prop);

struct CriticalPointTolerances {
  double grad = 1e-10;  // on dcp_residual
  double kcp = 1e-8;    // on kcp_residual
  double hess = 1e-9;   // relative slack for eigenvalue sign calls
};

enum class CriticalLabel {
  NOT_CRITICAL,
  DCP,
  KCP,
  DCP_NOT_KCP,
  NEG_SEMIDEFINITE,
  POS_SEMIDEFINITE,
  INDEFINITE,
  SECOND_ORDER_TRAP_CANDIDATE,
  GLOBAL_MAX_CANDIDATE,
  GLOBAL_MIN_CANDIDATE,
};

std::string to_string(CriticalLabel label);

struct Classification {
  std::vector<CriticalLabel> labels;   // deterministic order, no duplicates
  double dcp_residual;
  double kcp_residual;
  double objective;
  KinematicBounds bounds;
  RealVector hessian_eigenvalues;      // ascending, of dt^2 * kernel matrix
  bool has(CriticalLabel l) const;
};

// Labels a field against the tolerances: criticality (dynamical and
// kinematic), the sign of the second-variation matrix, and whether J sits at
// a kinematic extreme.  Hessian semidefinite calls allow slack
// tol.hess * max(1, ||dt^2 H||_F).
Classification classify(const ControlTask& task, const ControlField& field,
                        const CriticalPointTolerances& tol = {});

// Second-order trap certificate for the static field eps(t) = eps0, checked
// on the dressed Hamiltonian H0 - mu eps0 with spectrum |d_1>,...,|d_n>
// (throws ValidationError on a degenerate dressed spectrum).  Orders dressed
// states by lambda_i = <d_i|O|d_i> descending and locates rho0 = |d_k><d_k|
// in that order.  Holds iff
//   - O is diagonal in the dressed basis with strictly decreasing lambda,
//   - <d_i| mu |d_k> = 0 for all i < k (no coupling toward larger lambda),
//   - rho0 is exactly the k-th dressed projector with 1 < k < n.
struct TrapCertificate {
  bool holds;
  int k;                       // 1-based position in the descending order
  bool lambda_ordering_ok;
  bool mu_zero_block_ok;
  bool k_interior_ok;
  RealVector lambdas;          // descending
  double max_coupling_above;   // sup_{i<k} |<d_i|mu|d_k>|
  double rho_overlap;          // <d_k| rho0 |d_k>
};

TrapCertificate trap_certificate(const ControlTask& task, double eps0);

// Numerical cross-check that a field is a second-order trap: gradient and
// commutator residuals within tolerance, h_plus(f) vanishing over seeded
// random probe directions, and no positive Hessian eigenvalue beyond slack.
struct TrapCheckReport {
  bool dcp_ok;
  bool kcp_ok;
  bool hplus_ok;
  bool hessian_ok;
  bool holds;                 // conjunction of the above
  double dcp_residual;
  double kcp_residual;
  double max_hplus;           // NaN when kcp fails (spectral route undefined)
  double max_hminus;          // NaN when kcp fails
  double max_eigenvalue;
  double min_eigenvalue;
  int probes;
};

TrapCheckReport second_order_trap_numeric(const ControlTask& task,
                                          const ControlField& field,
                                          int probes = 32, uint64_t seed = 0,
                                          const CriticalPointTolerances& tol = {});

}  // namespace qcl
