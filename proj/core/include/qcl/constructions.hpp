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

#include <vector>

#include "qcl/critical.hpp"

namespace qcl {

// Three-level ladder with a forbidden 1<->2 transition: the textbook
// second-order trap.  Levels h = (0, 1, 2.5); dipole couples 1<->3 and 2<->3
// only; rho0 = |1><1|, O = diag(1, 2, 0).  The static field eps = 0 sits at
// J = 1 while Jmax = 2.
ControlTask build_lambda(double horizon = 5.0);

// General trap instance from a prescribed dressed-state structure.  Dressed
// states d_1..d_n of H0 - mu eps0 are indexed by ascending energy;
// lambdas_descending[i] is assigned to d_{i+1}, rho0 = |d_k><d_k| (k 1-based
// in the same indexing), O = sum_i lambda_i |d_i><d_i|.  Requires
// <d_i|mu|d_k> = 0 for every i < k (ValidationError listing violations),
// 1 < k < n, and strictly decreasing lambdas.  By construction
// trap_certificate(task, eps0).holds.
ControlTask build_trap_instance(const QuantumSystem& system, double eps0, int k,
                                const RealVector& lambdas_descending,
                                double horizon);

// Parameters for an observable making eps = const a critical point of the
// dynamical landscape while [rho0, O_T] != 0.
struct DcpInstanceParams {
  int i = 1;            // 1-based dressed-state indices, i != j
  int j = 2;
  double psi = 0.0;     // phase of the rho0 superposition
  double phi = 1.2;     // phase of the observable eigenvector
  double horizon = 1.0;
  double eps0 = 0.0;    // the static field the instance is critical at
  int rank_extra = 0;   // extra observable weight on the orthogonal complement
};

struct DcpInstance {
  ControlTask task;
  ControlField field;          // the constant field eps0
  double alpha;                // psi - phi (mod 2 pi), must avoid multiples of pi
  double predicted_objective;  // (1 + cos alpha) / 2
  Complex predicted_z;         // the surviving off-diagonal of [rho0, O_T]
};

// Builds rho0 = |psi><psi| and O from |phi> on two dressed states of
// H0 - mu eps0, with O conjugated back to t = 0 through the free evolution so
// the constant field eps0 is exactly critical.  ValidationError when alpha is
// a multiple of pi (the commutator would vanish), when the two dressed states
// have unequal diagonal dipole elements, or when the extra-rank block leaks
// onto span{d_i, d_j}.
DcpInstance build_dcp_not_kcp(const QuantumSystem& system,
                              const DcpInstanceParams& params, int grid = 128);

// n-level chain with unit nearest-neighbour couplings and linear spectrum,
// pre-dressed so that H0 - mu eps0 is exactly diagonal in floating point.
QuantumSystem standard_chain_system(int n, double eps0 = 0.0);

// Dimension of the dynamical Lie algebra generated by {i H0, i mu} inside
// u(n), by bracket closure with Gram-Schmidt over the real span.  The pair is
// controllable iff the dimension is n^2 (or n^2 - 1 when traceless drift and
// drive generate only su(n)).
struct LieRankReport {
  int dimension;
  int ambient_dim;   // n^2
  bool controllable;
  int brackets_evaluated;
};

LieRankReport lie_algebra_rank(const QuantumSystem& system);

}  // namespace qcl
