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

#include <nlohmann/json.hpp>

#include "qcl/matrix.hpp"

namespace qcl {

// n-level system with drift Hamiltonian H0 and dipole coupling mu, evolving
// under dU/dt = -i (H0 - mu eps(t)) U.  hbar = 1 throughout.
struct QuantumSystem {
  int n;
  ComplexMatrix H0;
  ComplexMatrix mu;

  QuantumSystem(ComplexMatrix h0, ComplexMatrix dipole);
};

// Piecewise-constant control on M uniform intervals over [0, T].
// values[m] is the amplitude on ((m)dt, (m+1)dt], 0-based.
struct ControlField {
  double T;
  int M;
  RealVector values;

  ControlField(double horizon, int intervals, RealVector vals);

  double dt() const { return T / M; }
  // Midpoint of interval m (0-based): (m + 1/2) dt.
  double midpoint(int m) const { return (m + 0.5) * dt(); }

  static ControlField zero(double horizon, int intervals);
  static ControlField constant(double horizon, int intervals, double value);
  // Samples a continuous envelope at interval midpoints.
  template <typename F>
  static ControlField from_envelope(double horizon, int intervals, F&& f) {
    RealVector v(intervals);
    const double dt = horizon / intervals;
    for (int m = 0; m < intervals; ++m) v[m] = f((m + 0.5) * dt);
    return ControlField(horizon, intervals, std::move(v));
  }
};

// Control problem: maximize J(eps) = Tr[U(T) rho0 U(T)^dagger O].
// Template tags: "lambda", "trap", "dcp_not_kcp", "custom".
struct ControlTask {
  QuantumSystem system;
  ComplexMatrix rho0;
  ComplexMatrix O;
  double T;
  std::string template_tag;

  ControlTask(QuantumSystem sys, ComplexMatrix rho, ComplexMatrix obs,
              double horizon, std::string tag = "custom");

  int n() const { return system.n; }
};

// Range of J over all unitaries: the classical rearrangement pairing of the
// spectra of rho0 and O.  Jmax pairs both sorted descending; Jmin pairs
// descending weights with ascending observable eigenvalues.
struct KinematicBounds {
  double Jmin;
  double Jmax;
};

KinematicBounds kinematic_bounds(const ControlTask& task);

// JSON file formats (complex entries as [re, im], matrices row-major):
//   task:  {"n", "H0", "mu", "rho0", "O", "T", "template"?}
//   field: {"T", "M", "values"}
// Writers emit 17-significant-digit floats so a save/load round trip is
// bit-identical.
ControlTask load_task(const std::string& path);
void save_task(const ControlTask& task, const std::string& path);
ControlField load_field(const std::string& path);
void save_field(const ControlField& field, const std::string& path);

nlohmann::ordered_json task_to_json(const ControlTask& task);
ControlTask task_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json field_to_json(const ControlField& field);
ControlField field_from_json(const nlohmann::ordered_json& j);

}  // namespace qcl
