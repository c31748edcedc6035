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
#include "qcl/propagator.hpp"

#include <cmath>

#include "qcl/errors.hpp"

namespace qcl {
namespace {

double real_or_throw(Complex z, const char* what) {
  const double scale = std::max(1.0, std::abs(z));
  if (std::abs(z.imag()) > 1e-11 * scale) {
    throw NumericalError(std::string(what) + ": trace has imaginary part " +
                         std::to_string(z.imag()));
  }
  return z.real();
}

}  // namespace

PropagationResult propagate(const ControlTask& task, const ControlField& field) {
  const QuantumSystem& sys = task.system;
  const int n = sys.n;
  const int m_count = field.M;
  const double dt = field.dt();

  PropagationResult out;
  out.T = field.T;
  out.M = m_count;
  out.dt = dt;
  out.boundary.resize(m_count + 1);
  out.midpoint.resize(m_count);
  out.dipoles.resize(m_count);
  out.boundary[0] = ComplexMatrix::Identity(n, n);

  for (int m = 0; m < m_count; ++m) {
    const ComplexMatrix h = sys.H0 - sys.mu * field.values(m);
    // One spectral decomposition per interval serves both half steps, so
    // boundary[m+1] = half * (half * boundary[m]) composes exactly.
    const SpectralPair spec = spectral_decompose(h);
    const ComplexMatrix half = expm_from_spectrum(spec, dt / 2.0);
    out.midpoint[m] = half * out.boundary[m];
    out.boundary[m + 1] = half * out.midpoint[m];
    out.dipoles[m] = out.midpoint[m].adjoint() * sys.mu * out.midpoint[m];
    // V(t) is mu in the Heisenberg picture; enforce Hermiticity exactly so
    // the quadratic forms built from it stay real.
    out.dipoles[m] = ((out.dipoles[m] + out.dipoles[m].adjoint()) / 2.0).eval();
  }

  out.final_unitary = out.boundary[m_count];
  ComplexMatrix obs = out.final_unitary.adjoint() * task.O * out.final_unitary;
  out.observable_final = (obs + obs.adjoint()) / 2.0;
  return out;
}

ComplexMatrix final_unitary(const QuantumSystem& system, const ControlField& field) {
  const int n = system.n;
  const double dt = field.dt();
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  for (int m = 0; m < field.M; ++m) {
    u = expm_generator(system.H0 - system.mu * field.values(m), dt) * u;
  }
  return u;
}

double objective(const ControlTask& task, const ControlField& field) {
  const ComplexMatrix u = final_unitary(task.system, field);
  const ComplexMatrix rho_final = u * task.rho0 * u.adjoint();
  return real_or_throw(trace_product(rho_final, task.O), "objective");
}

double objective(const ControlTask& task, const PropagationResult& prop) {
  return real_or_throw(trace_product(task.rho0, prop.observable_final), "objective");
}

}  // namespace qcl
