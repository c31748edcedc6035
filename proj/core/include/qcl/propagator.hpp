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

#include "qcl/system.hpp"

namespace qcl {

// Exact propagation of a piecewise-constant control.
//
// Grid conventions (0-based interval index m, dt = T/M):
//   boundary[m]  = U(m dt),               m = 0..M   (boundary[0] = I)
//   midpoint[m]  = U((m + 1/2) dt)        exact half-step inside interval m
//   dipoles[m]   = V(t_m*) = midpoint[m]^dagger mu midpoint[m]
//   observable_final = U(T)^dagger O U(T)
//
// Midpoint unitaries are exact for the piecewise-constant field, not an
// interpolation: within interval m the generator is constant.
struct PropagationResult {
  std::vector<ComplexMatrix> boundary;
  std::vector<ComplexMatrix> midpoint;
  std::vector<ComplexMatrix> dipoles;
  ComplexMatrix final_unitary;
  ComplexMatrix observable_final;
  double T;
  int M;
  double dt;
};

PropagationResult propagate(const ControlTask& task, const ControlField& field);

// Only the final unitary; used by objective evaluations in line searches.
ComplexMatrix final_unitary(const QuantumSystem& system, const ControlField& field);

// J = Tr[U(T) rho0 U(T)^dagger O].  The trace must be real; an imaginary
// residual above 1e-11 (relative to max(1, |J|)) raises NumericalError.
double objective(const ControlTask& task, const ControlField& field);
double objective(const ControlTask& task, const PropagationResult& prop);

}  // namespace qcl
