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
#include "qcl/system.hpp"

#include <algorithm>
#include <cmath>

#include "qcl/errors.hpp"
#include "qcl/report.hpp"

namespace qcl {
namespace {

Json matrix_to_json(const ComplexMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      row.push_back(Json::array({a(r, c).real(), a(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(n) +
                          " rows");
  }
  ComplexMatrix a(n, n);
  for (int r = 0; r < n; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ValidationError(std::string(what) + ": row " + std::to_string(r) +
                            " must have " + std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) {
      const Json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ValidationError(std::string(what) +
                              ": entries must be [re, im] number pairs");
      }
      a(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return a;
}

void validate_density(const ComplexMatrix& rho) {
  require_hermitian(rho, "rho0", 1e-10);
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw ValidationError("rho0: density matrix trace must be 1, got " +
                          std::to_string(tr));
  }
  const SpectralPair spec = spectral_decompose((rho + rho.adjoint()) / 2.0);
  if (spec.values.minCoeff() < -1e-10) {
    throw ValidationError("rho0: density matrix must be positive semi-definite "
                          "(smallest eigenvalue " +
                          std::to_string(spec.values.minCoeff()) + ")");
  }
}

void validate_template(const ControlTask& task) {
  const std::string& tag = task.template_tag;
  if (tag == "custom" || tag == "trap") return;
  if (tag == "lambda") {
    if (task.n() != 3) {
      throw ValidationError("template lambda: dimension must be 3");
    }
    if (std::abs(task.system.mu(0, 1)) > 1e-12) {
      throw ValidationError("template lambda: transition 1<->2 must be forbidden");
    }
    if (std::abs(task.system.mu(0, 2)) == 0.0 || std::abs(task.system.mu(1, 2)) == 0.0) {
      throw ValidationError("template lambda: transitions 1<->3 and 2<->3 must couple");
    }
    return;
  }
  if (tag == "dcp_not_kcp") {
    const ComplexMatrix& rho = task.rho0;
    if ((rho * rho - rho).norm() > 1e-10) {
      throw ValidationError("template dcp_not_kcp: rho0 must be a pure state");
    }
    return;
  }
  throw ValidationError("unknown task template \"" + tag + "\"");
}

}  // namespace

QuantumSystem::QuantumSystem(ComplexMatrix h0, ComplexMatrix dipole)
    : n(static_cast<int>(h0.rows())), H0(std::move(h0)), mu(std::move(dipole)) {
  require_hermitian(H0, "H0");
  require_hermitian(mu, "mu");
  if (mu.rows() != H0.rows()) {
    throw ValidationError("mu: dimension " + std::to_string(mu.rows()) +
                          " does not match H0 dimension " + std::to_string(H0.rows()));
  }
}

ControlField::ControlField(double horizon, int intervals, RealVector vals)
    : T(horizon), M(intervals), values(std::move(vals)) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ValidationError("field: horizon T must be positive and finite");
  }
  if (M < 1) {
    throw ValidationError("field: M must be at least 1");
  }
  if (static_cast<int>(values.size()) != M) {
    throw ValidationError("field: values length " + std::to_string(values.size()) +
                          " must equal M = " + std::to_string(M));
  }
  if (!values.allFinite()) {
    throw ValidationError("field: values must be finite");
  }
}

ControlField ControlField::zero(double horizon, int intervals) {
  if (intervals < 1) throw ValidationError("field: M must be at least 1");
  return ControlField(horizon, intervals, RealVector::Zero(intervals));
}

ControlField ControlField::constant(double horizon, int intervals, double value) {
  if (intervals < 1) throw ValidationError("field: M must be at least 1");
  return ControlField(horizon, intervals, RealVector::Constant(intervals, value));
}

ControlTask::ControlTask(QuantumSystem sys, ComplexMatrix rho, ComplexMatrix obs,
                         double horizon, std::string tag)
    : system(std::move(sys)),
      rho0(std::move(rho)),
      O(std::move(obs)),
      T(horizon),
      template_tag(std::move(tag)) {
  if (rho0.rows() != system.n || O.rows() != system.n) {
    throw ValidationError("task: rho0/O dimension must match the system dimension " +
                          std::to_string(system.n));
  }
  validate_density(rho0);
  require_hermitian(O, "O", 1e-10);
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ValidationError("task: horizon T must be positive and finite");
  }
  validate_template(*this);
}

KinematicBounds kinematic_bounds(const ControlTask& task) {
  RealVector omega = spectral_decompose(task.rho0).values;
  RealVector lambda = spectral_decompose(task.O).values;
  std::sort(omega.data(), omega.data() + omega.size(), std::greater<double>());
  RealVector lambda_desc = lambda;
  std::sort(lambda_desc.data(), lambda_desc.data() + lambda_desc.size(),
            std::greater<double>());
  RealVector lambda_asc = lambda;
  std::sort(lambda_asc.data(), lambda_asc.data() + lambda_asc.size());
  KinematicBounds b{0.0, 0.0};
  for (Eigen::Index i = 0; i < omega.size(); ++i) {
    b.Jmax += omega(i) * lambda_desc(i);
    b.Jmin += omega(i) * lambda_asc(i);
  }
  return b;
}

Json task_to_json(const ControlTask& task) {
  Json j = Json::object();
  j["n"] = task.n();
  j["H0"] = matrix_to_json(task.system.H0);
  j["mu"] = matrix_to_json(task.system.mu);
  j["rho0"] = matrix_to_json(task.rho0);
  j["O"] = matrix_to_json(task.O);
  j["T"] = task.T;
  j["template"] = task.template_tag;
  return j;
}

ControlTask task_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("task: expected a JSON object");
  for (const char* key : {"n", "H0", "mu", "rho0", "O", "T"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("task: missing field \"") + key + "\"");
    }
  }
  if (!j["n"].is_number_integer()) throw ValidationError("task: n must be an integer");
  const int n = j["n"].get<int>();
  if (n < kMinDimension || n > kMaxDimension) {
    throw ValidationError("task: dimension " + std::to_string(n) +
                          " outside supported range [" + std::to_string(kMinDimension) +
                          ", " + std::to_string(kMaxDimension) + "]");
  }
  if (!j["T"].is_number()) throw ValidationError("task: T must be a number");
  std::string tag = j.contains("template") ? j["template"].get<std::string>() : "custom";
  QuantumSystem system(matrix_from_json(j["H0"], n, "H0"),
                       matrix_from_json(j["mu"], n, "mu"));
  return ControlTask(std::move(system), matrix_from_json(j["rho0"], n, "rho0"),
                     matrix_from_json(j["O"], n, "O"), j["T"].get<double>(),
                     std::move(tag));
}

Json field_to_json(const ControlField& field) {
  Json j = Json::object();
  j["T"] = field.T;
  j["M"] = field.M;
  Json vals = Json::array();
  for (int m = 0; m < field.M; ++m) vals.push_back(field.values(m));
  j["values"] = std::move(vals);
  return j;
}

ControlField field_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("field: expected a JSON object");
  for (const char* key : {"T", "M", "values"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("field: missing field \"") + key + "\"");
    }
  }
  const int m = j["M"].get<int>();
  const Json& vals = j["values"];
  if (!vals.is_array() || static_cast<int>(vals.size()) != m) {
    throw ValidationError("field: values length must equal M = " + std::to_string(m));
  }
  RealVector v(m);
  for (int i = 0; i < m; ++i) v(i) = vals[i].get<double>();
  return ControlField(j["T"].get<double>(), m, std::move(v));
}

ControlTask load_task(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("task file " + path + ": " + e.what());
  }
  return task_from_json(j);
}

void save_task(const ControlTask& task, const std::string& path) {
  write_text_atomic(path, dump_json(task_to_json(task)) + "\n");
}

ControlField load_field(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("field file " + path + ": " + e.what());
  }
  return field_from_json(j);
}

void save_field(const ControlField& field, const std::string& path) {
  write_text_atomic(path, dump_json(field_to_json(field)) + "\n");
}

}  // namespace qcl
