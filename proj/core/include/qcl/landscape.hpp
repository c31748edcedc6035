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

#include "qcl/propagator.hpp"

namespace qcl {

// First variation of J for dynamics dU/dt = -i (H0 - mu eps) U:
//   dJ/deps(t) = i Tr{ [rho0, O_T] V(t) },   V(t) = U(t)^dagger mu U(t),
// sampled at interval midpoints.  Each trace is real up to round-off; the
// imaginary residual is checked against 1e-11.
struct GradientVector {
  RealVector samples;  // g(t_m*), length M
  double dt;

  double sup_norm() const { return samples.size() ? samples.cwiseAbs().maxCoeff() : 0.0; }
};

GradientVector gradient_kernel(const ControlTask& task, const ControlField& field);
GradientVector gradient_kernel(const ControlTask& task, const PropagationResult& prop);

// Exact derivative dJ/deps_m of the discretized objective, via the spectral
// divided-difference derivative of each interval exponential.  Agrees with
// dt * gradient_kernel up to the midpoint-rule error and with central finite
// differences to the FD truncation error.
RealVector gradient_discrete(const ControlTask& task, const ControlField& field);

// Second variation kernel on the midpoint grid:
//   H(t1,t2) = Tr{ O_T [ 2 V(t1) rho0 V(t2) - C[V(t1)V(t2)] rho0
//                        - rho0 A[V(t1)V(t2)] ] }
// with C placing the later time leftmost, A the earlier time leftmost, and
// V(t)^2 for both orderings on the diagonal.  Entries are symmetrized (the
// two index orders are complex conjugates; the real part is the quadratic
// form that feeds the second derivative).
struct HessianMatrix {
  RealMatrix entries;  // M x M, symmetric
  double dt;
};

HessianMatrix hessian_kernel(const ControlTask& task, const ControlField& field);
HessianMatrix hessian_kernel(const ControlTask& task, const PropagationResult& prop);

// h(f) = sum_{m,k} f_m f_k H_{mk} dt^2: the second derivative of J along
// direction f (d^2/ds^2 J(eps + s f) at s = 0, up to discretization).
double quadratic_form(const HessianMatrix& hess, const RealVector& f);

// Orthonormal basis that diagonalizes rho0 exactly and O_T within each
// degenerate eigenspace of rho0.  Off-block residuals of O_T (bounded by the
// commutator residual) are dropped.
struct CommonEigenbasis {
  ComplexMatrix vectors;     // columns
  RealVector rho_weights;    // omega_k = <phi_k| rho0 |phi_k>
  RealVector obs_values;     // lambda_k = <phi_k| O_T |phi_k>
};

CommonEigenbasis common_eigenbasis(const ComplexMatrix& rho0, const ComplexMatrix& obs,
                                   double cluster_tol = 1e-8);

// Spectral quadratic form at a kinematic critical point.  With the smeared
// dipole V_f = sum_m f(t_m*) V(t_m*) dt and the common eigenbasis above,
//   h      = 2 sum_{k,i} omega_k (lambda_i - lambda_k) |<phi_k|V_f|phi_i>|^2
//   h_plus = the sum restricted to lambda_i > lambda_k   (>= 0)
//   h_minus= 2 sum_{lambda_k > lambda_i} omega_k (lambda_k - lambda_i) |...|^2
// so h = h_plus - h_minus and h equals quadratic_form(hessian_kernel, f)
// exactly when [rho0, O_T] = 0.  The prefactor 2 normalizes the sum to the
// full second derivative along f, matching the kernel route.
struct SpectralForm {
  double h;
  double h_plus;
  double h_minus;
};

// Precondition: ||[rho0, O_T]||_F <= kcp_tol, else ValidationError.
SpectralForm spectral_form(const ControlTask& task, const ControlField& field,
                           const RealVector& f, double kcp_tol = 1e-8);

// Amortizes the basis construction across many probe directions f.
class SpectralFormEvaluator {
 public:
  SpectralFormEvaluator(const ControlTask& task, const PropagationResult& prop,
                        double kcp_tol = 1e-8);

  SpectralForm evaluate(const RealVector& f) const;
  double kcp_residual() const { return kcp_residual_; }

 private:
  CommonEigenbasis basis_;
  std::vector<ComplexMatrix> dipoles_in_basis_;
  double dt_;
  double kcp_residual_;
};

// Finite-difference references (central differences on the discrete
// objective).  Oracles for the analytic routes; O(M) and O(M^2) propagations.
RealVector fd_gradient(const ControlTask& task, const ControlField& field,
                       double step = 1e-5);
RealMatrix fd_hessian(const ControlTask& task, const ControlField& field,
                      double step = 1e-3);
// (J(eps + s f) - 2 J(eps) + J(eps - s f)) / s^2.
double fd_directional_second(const ControlTask& task, const ControlField& field,
                             const RealVector& f, double step = 1e-3);

// Rank of the real-linear span of {V(t_m*)} inside the n^2-dimensional real
// space of Hermitian matrices; the locally reachable directions of the
// end-point map.  Coordinates: diagonal entries, then sqrt(2) Re / sqrt(2) Im
// of each upper off-diagonal entry.  Rank counts singular values above
// 1e-10 x largest.
struct JacobianReport {
  int rank;
  int full_dim;               // n^2
  RealVector singular_values;
  RealMatrix entry_sup;       // sup_m |V_m(a,b)|, detects absent couplings
};

JacobianReport jacobian_span(const ControlTask& task, const ControlField& field);
int jacobian_rank(const ControlTask& task, const ControlField& field);

}  // namespace qcl
