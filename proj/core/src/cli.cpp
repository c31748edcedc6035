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
#include "qcl/cli.hpp"

#include <CLI11.hpp>
#include <ostream>
#include <sstream>

#include "qcl/constructions.hpp"
#include "qcl/errors.hpp"
#include "qcl/optimizer.hpp"
#include "qcl/report.hpp"

namespace qcl::cli {
namespace {

constexpr const char* kToolVersion = "0.1.0";

Json cmat_json(const ComplexMatrix& a) {
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

Json rmat_json(const RealMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json rvec_json(const RealVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

struct Options {
  std::string task_path;
  std::string field_spec = "zero";
  int grid = 128;
  bool grid_set = false;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
  double tol_grad = 1e-10;
  double tol_kcp = 1e-8;
  double tol_hess = 1e-9;

  double horizon = 5.0;
  double eps0 = 0.0;
  int n = 4;
  int k = 2;
  std::string lambdas_csv;
  int di = 1;
  int dj = 2;
  double psi = 0.0;
  double phi = 1.2;
  int rank_extra = 0;
  std::string task_out;
  std::string field_out;

  int iters = 500;
  double grad_stop = 1e-9;
  double j_stop = 0.0;
  bool j_stop_set = false;
  double initial_step = 1.0;
  bool discrete = false;
  int starts = 20;
  double amplitude = 0.5;
  double delta = 0.05;
  int probes = 32;
  bool check_fd = false;
};

struct Context {
  const Options& o;
  RunManifest manifest;
  std::ostream& out;
};

ControlTask load_task_input(const Options& o, RunManifest& manifest) {
  if (o.task_path.empty()) throw ValidationError("--task is required");
  ControlTask task = load_task(o.task_path);
  manifest.inputs.push_back(o.task_path);
  return task;
}

ControlField resolve_field(const Options& o, const ControlTask& task,
                           RunManifest& manifest) {
  if (o.field_spec == "zero") {
    return ControlField::zero(task.T, o.grid);
  }
  if (o.field_spec.rfind("const:", 0) == 0) {
    double value = 0.0;
    try {
      size_t used = 0;
      const std::string num = o.field_spec.substr(6);
      value = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
      throw ValidationError("--field const: expected a number, got \"" +
                            o.field_spec + "\"");
    }
    return ControlField::constant(task.T, o.grid, value);
  }
  ControlField field = load_field(o.field_spec);
  manifest.inputs.push_back(o.field_spec);
  if (o.grid_set && o.grid != field.M) {
    throw ValidationError("--grid " + std::to_string(o.grid) +
                          " conflicts with the field file (M = " +
                          std::to_string(field.M) + ")");
  }
  if (std::abs(field.T - task.T) > 1e-12 * std::max(1.0, std::abs(task.T))) {
    throw ValidationError("field horizon " + std::to_string(field.T) +
                          " does not match task horizon " + std::to_string(task.T));
  }
  return field;
}

void require_json_format(const Options& o) {
  if (o.format != "json") {
    throw ValidationError("--format csv is not available for this subcommand");
  }
}

int emit_report(Context& ctx, Json report) {
  if (!ctx.o.out_path.empty()) ctx.manifest.outputs.push_back(ctx.o.out_path);
  report["manifest"] = ctx.manifest.to_json();
  const std::string text = dump_json(report) + "\n";
  if (ctx.o.out_path.empty()) {
    ctx.out << text;
  } else {
    write_text_atomic(ctx.o.out_path, text);
  }
  return 0;
}

// Table goes to --out as CSV; the summary report (with manifest) to stdout.
int emit_csv(Context& ctx, const std::string& table, Json summary) {
  if (ctx.o.out_path.empty()) {
    throw ValidationError("--format csv requires --out for the table");
  }
  write_text_atomic(ctx.o.out_path, table);
  ctx.manifest.outputs.push_back(ctx.o.out_path);
  summary["manifest"] = ctx.manifest.to_json();
  ctx.out << dump_json(summary) << "\n";
  return 0;
}

std::string indexed_csv(const char* header, const RealVector& values) {
  std::string csv = std::string(header) + "\n";
  for (int i = 0; i < values.size(); ++i) {
    csv += std::to_string(i) + "," + format_double(values(i)) + "\n";
  }
  return csv;
}

RealVector parse_lambdas(const Options& o) {
  if (o.lambdas_csv.empty()) {
    RealVector v(o.n);
    for (int i = 0; i < o.n; ++i) v(i) = static_cast<double>(o.n - i);
    return v;
  }
  std::vector<double> vals;
  std::stringstream ss(o.lambdas_csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--lambdas: expected comma-separated numbers, got \"" +
                            o.lambdas_csv + "\"");
    }
  }
  RealVector v(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v(static_cast<int>(i)) = vals[i];
  return v;
}

// All-to-all unit couplings except from the initial dressed state to the
// states carrying larger observable weight, pre-dressed like the chain so
// H0 - mu eps0 is exactly diagonal.
QuantumSystem default_trap_system(int n, int k, double eps0) {
  if (n < kMinDimension || n > kMaxDimension) {
    throw ValidationError("--n outside supported dimension range");
  }
  if (k <= 1 || k >= n) {
    throw ValidationError("--k must be interior, 1 < k < n");
  }
  ComplexMatrix mu = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (b == k - 1 && a < k - 1) continue;  // forbidden escape transitions
      mu(a, b) = 1.0;
      mu(b, a) = 1.0;
    }
  }
  ComplexMatrix h0 = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) h0(a, a) = static_cast<double>(a);
  h0 += eps0 * mu;
  return QuantumSystem(std::move(h0), std::move(mu));
}

int run_build_lambda(Context& ctx) {
  require_json_format(ctx.o);
  ctx.manifest.parameters["horizon"] = ctx.o.horizon;
  return emit_report(ctx, task_to_json(build_lambda(ctx.o.horizon)));
}

int run_build_trap(Context& ctx) {
  require_json_format(ctx.o);
  const RealVector lambdas = parse_lambdas(ctx.o);
  const QuantumSystem system = default_trap_system(ctx.o.n, ctx.o.k, ctx.o.eps0);
  const ControlTask task =
      build_trap_instance(system, ctx.o.eps0, ctx.o.k, lambdas, ctx.o.horizon);
  ctx.manifest.parameters["n"] = ctx.o.n;
  ctx.manifest.parameters["k"] = ctx.o.k;
  ctx.manifest.parameters["eps0"] = ctx.o.eps0;
  ctx.manifest.parameters["horizon"] = ctx.o.horizon;
  ctx.manifest.parameters["lambdas"] = rvec_json(lambdas);
  return emit_report(ctx, task_to_json(task));
}

int run_build_dcp(Context& ctx) {
  require_json_format(ctx.o);
  DcpInstanceParams params;
  params.i = ctx.o.di;
  params.j = ctx.o.dj;
  params.psi = ctx.o.psi;
  params.phi = ctx.o.phi;
  params.horizon = ctx.o.horizon;
  params.eps0 = ctx.o.eps0;
  params.rank_extra = ctx.o.rank_extra;
  const QuantumSystem system = standard_chain_system(ctx.o.n, ctx.o.eps0);
  const DcpInstance inst = build_dcp_not_kcp(system, params, ctx.o.grid);

  ctx.manifest.parameters["n"] = ctx.o.n;
  ctx.manifest.parameters["i"] = params.i;
  ctx.manifest.parameters["j"] = params.j;
  ctx.manifest.parameters["psi"] = params.psi;
  ctx.manifest.parameters["phi"] = params.phi;
  ctx.manifest.parameters["eps0"] = params.eps0;
  ctx.manifest.parameters["horizon"] = params.horizon;
  ctx.manifest.parameters["rank_extra"] = params.rank_extra;
  ctx.manifest.parameters["grid"] = ctx.o.grid;

  if (!ctx.o.task_out.empty()) {
    save_task(inst.task, ctx.o.task_out);
    ctx.manifest.outputs.push_back(ctx.o.task_out);
  }
  if (!ctx.o.field_out.empty()) {
    save_field(inst.field, ctx.o.field_out);
    ctx.manifest.outputs.push_back(ctx.o.field_out);
  }

  Json report = Json::object();
  report["task"] = task_to_json(inst.task);
  report["field"] = field_to_json(inst.field);
  report["alpha"] = inst.alpha;
  report["predicted_objective"] = inst.predicted_objective;
  report["predicted_z"] =
      Json::array({inst.predicted_z.real(), inst.predicted_z.imag()});
  report["predicted_z_abs"] = std::abs(inst.predicted_z);
  return emit_report(ctx, std::move(report));
}

int run_propagate(Context& ctx) {
  require_json_format(ctx.o);
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const ControlField field = resolve_field(ctx.o, task, ctx.manifest);
  const PropagationResult prop = propagate(task, field);
  ctx.manifest.parameters["grid"] = field.M;
  Json report = Json::object();
  report["T"] = prop.T;
  report["M"] = prop.M;
  report["dt"] = prop.dt;
  report["objective"] = objective(task, prop);
  report["unitarity_residual"] = unitarity_residual(prop.final_unitary);
  report["final_unitary"] = cmat_json(prop.final_unitary);
  report["observable_final"] = cmat_json(prop.observable_final);
  return emit_report(ctx, std::move(report));
}

int run_grad(Context& ctx) {
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const ControlField field = resolve_field(ctx.o, task, ctx.manifest);
  const PropagationResult prop = propagate(task, field);
  const GradientVector kernel = gradient_kernel(task, prop);
  const RealVector discrete = gradient_discrete(task, field);
  ctx.manifest.parameters["grid"] = field.M;
  ctx.manifest.parameters["check_fd"] = ctx.o.check_fd;

  RealVector fd;
  Json fd_block = Json::object();
  if (ctx.o.check_fd) {
    fd = fd_gradient(task, field);
    const RealVector scaled_kernel = kernel.dt * kernel.samples;
    const double denom = std::max(fd.norm(), 1e-300);
    fd_block["fd_sup"] = fd.size() ? fd.cwiseAbs().maxCoeff() : 0.0;
    fd_block["rel_error_discrete_vs_fd"] = (discrete - fd).norm() / denom;
    fd_block["rel_error_kernel_dt_vs_fd"] = (scaled_kernel - fd).norm() / denom;
  }

  if (ctx.o.format == "csv") {
    std::string csv = ctx.o.check_fd ? "m,midpoint,kernel,discrete,fd\n"
                                     : "m,midpoint,kernel,discrete\n";
    for (int m = 0; m < field.M; ++m) {
      csv += std::to_string(m) + "," + format_double(field.midpoint(m)) + "," +
             format_double(kernel.samples(m)) + "," +
             format_double(discrete(m));
      if (ctx.o.check_fd) csv += "," + format_double(fd(m));
      csv += "\n";
    }
    Json summary = Json::object();
    summary["T"] = prop.T;
    summary["M"] = prop.M;
    summary["dt"] = prop.dt;
    summary["kernel_sup"] = kernel.sup_norm();
    summary["discrete_sup"] =
        discrete.size() ? discrete.cwiseAbs().maxCoeff() : 0.0;
    if (ctx.o.check_fd) summary["fd_comparison"] = std::move(fd_block);
    return emit_csv(ctx, csv, std::move(summary));
  }

  Json report = Json::object();
  report["T"] = prop.T;
  report["M"] = prop.M;
  report["dt"] = prop.dt;
  Json mid = Json::array();
  for (int m = 0; m < field.M; ++m) mid.push_back(field.midpoint(m));
  report["midpoints"] = std::move(mid);
  report["kernel"] = rvec_json(kernel.samples);
  report["kernel_sup"] = kernel.sup_norm();
  report["discrete"] = rvec_json(discrete);
  report["discrete_sup"] =
      discrete.size() ? discrete.cwiseAbs().maxCoeff() : 0.0;
  if (ctx.o.check_fd) {
    report["fd"] = rvec_json(fd);
    report["fd_comparison"] = std::move(fd_block);
  }
  return emit_report(ctx, std::move(report));
}

int run_hess(Context& ctx) {
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const ControlField field = resolve_field(ctx.o, task, ctx.manifest);
  const HessianMatrix hess = hessian_kernel(task, field);
  const RealMatrix scaled = hess.dt * hess.dt * hess.entries;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(scaled, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hess: eigensolve failed");
  }
  ctx.manifest.parameters["grid"] = field.M;

  if (ctx.o.format == "csv") {
    // Dense M x M kernel samples, one grid row per line.
    std::string csv;
    for (int r = 0; r < field.M; ++r) {
      for (int c = 0; c < field.M; ++c) {
        if (c) csv += ",";
        csv += format_double(hess.entries(r, c));
      }
      csv += "\n";
    }
    Json summary = Json::object();
    summary["T"] = field.T;
    summary["M"] = field.M;
    summary["dt"] = hess.dt;
    summary["eigenvalues"] = rvec_json(solver.eigenvalues());
    return emit_csv(ctx, csv, std::move(summary));
  }

  Json report = Json::object();
  report["T"] = field.T;
  report["M"] = field.M;
  report["dt"] = hess.dt;
  report["eigenvalues"] = rvec_json(solver.eigenvalues());
  report["entries"] = rmat_json(hess.entries);
  return emit_report(ctx, std::move(report));
}

int run_classify(Context& ctx) {
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const ControlField field = resolve_field(ctx.o, task, ctx.manifest);
  CriticalPointTolerances tol;
  tol.grad = ctx.o.tol_grad;
  tol.kcp = ctx.o.tol_kcp;
  tol.hess = ctx.o.tol_hess;
  const Classification cls = classify(task, field, tol);
  ctx.manifest.parameters["grid"] = field.M;
  ctx.manifest.parameters["tol_grad"] = tol.grad;
  ctx.manifest.parameters["tol_kcp"] = tol.kcp;
  ctx.manifest.parameters["tol_hess"] = tol.hess;
  Json labels = Json::array();
  for (CriticalLabel l : cls.labels) labels.push_back(to_string(l));
  Json report = Json::object();
  report["labels"] = std::move(labels);
  report["objective"] = cls.objective;
  report["Jmin"] = cls.bounds.Jmin;
  report["Jmax"] = cls.bounds.Jmax;
  report["dcp_residual"] = cls.dcp_residual;
  report["kcp_residual"] = cls.kcp_residual;
  report["hessian_eigenvalues"] = rvec_json(cls.hessian_eigenvalues);
  if (ctx.o.format == "csv") {
    return emit_csv(ctx, indexed_csv("index,eigenvalue", cls.hessian_eigenvalues),
                    std::move(report));
  }
  return emit_report(ctx, std::move(report));
}

int run_trap_cert(Context& ctx) {
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const TrapCertificate cert = trap_certificate(task, ctx.o.eps0);
  ctx.manifest.parameters["eps0"] = ctx.o.eps0;
  Json report = Json::object();
  report["holds"] = cert.holds;
  report["k"] = cert.k;
  report["lambda_ordering_ok"] = cert.lambda_ordering_ok;
  report["mu_zero_block_ok"] = cert.mu_zero_block_ok;
  report["k_interior_ok"] = cert.k_interior_ok;
  report["lambdas"] = rvec_json(cert.lambdas);
  report["max_coupling_above"] = cert.max_coupling_above;
  report["rho_overlap"] = cert.rho_overlap;
  if (ctx.o.format == "csv") {
    return emit_csv(ctx, indexed_csv("index,lambda", cert.lambdas),
                    std::move(report));
  }
  return emit_report(ctx, std::move(report));
}

int run_trap_check(Context& ctx) {
  require_json_format(ctx.o);
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const ControlField field = resolve_field(ctx.o, task, ctx.manifest);
  CriticalPointTolerances tol;
  tol.grad = ctx.o.tol_grad;
  tol.kcp = ctx.o.tol_kcp;
  tol.hess = ctx.o.tol_hess;
  const TrapCheckReport check =
      second_order_trap_numeric(task, field, ctx.o.probes, ctx.o.seed, tol);
  ctx.manifest.parameters["grid"] = field.M;
  ctx.manifest.parameters["probes"] = ctx.o.probes;
  ctx.manifest.parameters["seed"] = ctx.o.seed;
  ctx.manifest.parameters["tol_grad"] = tol.grad;
  ctx.manifest.parameters["tol_kcp"] = tol.kcp;
  ctx.manifest.parameters["tol_hess"] = tol.hess;
  Json report = Json::object();
  report["holds"] = check.holds;
  report["dcp_ok"] = check.dcp_ok;
  report["kcp_ok"] = check.kcp_ok;
  report["hplus_ok"] = check.hplus_ok;
  report["hessian_ok"] = check.hessian_ok;
  report["dcp_residual"] = check.dcp_residual;
  report["kcp_residual"] = check.kcp_residual;
  report["max_hplus"] = check.max_hplus;
  report["max_hminus"] = check.max_hminus;
  report["max_eigenvalue"] = check.max_eigenvalue;
  report["min_eigenvalue"] = check.min_eigenvalue;
  report["probes"] = check.probes;
  return emit_report(ctx, std::move(report));
}

int run_jacobian(Context& ctx) {
  require_json_format(ctx.o);
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const ControlField field = resolve_field(ctx.o, task, ctx.manifest);
  const JacobianReport jac = jacobian_span(task, field);
  ctx.manifest.parameters["grid"] = field.M;
  Json report = Json::object();
  report["rank"] = jac.rank;
  report["full_dim"] = jac.full_dim;
  report["singular_values"] = rvec_json(jac.singular_values);
  report["entry_sup"] = rmat_json(jac.entry_sup);
  return emit_report(ctx, std::move(report));
}

int run_controllability(Context& ctx) {
  require_json_format(ctx.o);
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const LieRankReport lie = lie_algebra_rank(task.system);
  Json report = Json::object();
  report["dimension"] = lie.dimension;
  report["ambient_dim"] = lie.ambient_dim;
  report["controllable"] = lie.controllable;
  report["brackets_evaluated"] = lie.brackets_evaluated;
  return emit_report(ctx, std::move(report));
}

Json trajectory_json(const std::vector<IterationRecord>& records) {
  Json arr = Json::array();
  for (const IterationRecord& r : records) {
    Json row = Json::object();
    row["iter"] = r.iter;
    row["J"] = r.objective;
    row["grad_norm"] = r.grad_norm;
    row["step"] = r.step;
    arr.push_back(std::move(row));
  }
  return arr;
}

std::string trajectory_csv(const std::vector<IterationRecord>& records) {
  std::string csv = "iter,J,grad_norm,step\n";
  for (const IterationRecord& r : records) {
    csv += std::to_string(r.iter) + "," + format_double(r.objective) + "," +
           format_double(r.grad_norm) + "," + format_double(r.step) + "\n";
  }
  return csv;
}

AscentConfig ascent_config_from(const Options& o) {
  AscentConfig config;
  config.max_iters = o.iters;
  config.grad_stop = o.grad_stop;
  if (o.j_stop_set) config.j_stop = o.j_stop;
  config.initial_step = o.initial_step;
  config.discrete_gradient = o.discrete;
  config.seed = o.seed;
  return config;
}

int run_optimize(Context& ctx) {
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const ControlField start = resolve_field(ctx.o, task, ctx.manifest);
  const AscentConfig config = ascent_config_from(ctx.o);
  const AscentResult result = gradient_ascent(task, start, config);

  ctx.manifest.parameters["grid"] = start.M;
  ctx.manifest.parameters["iters"] = config.max_iters;
  ctx.manifest.parameters["grad_stop"] = config.grad_stop;
  ctx.manifest.parameters["initial_step"] = config.initial_step;
  ctx.manifest.parameters["discrete"] = config.discrete_gradient;
  if (config.j_stop) ctx.manifest.parameters["j_stop"] = *config.j_stop;

  if (ctx.o.format == "csv") {
    Json summary = Json::object();
    summary["objective"] = result.objective;
    summary["reason"] = to_string(result.reason);
    summary["iterations"] = result.iterations;
    return emit_csv(ctx, trajectory_csv(result.trajectory), std::move(summary));
  }

  Json report = Json::object();
  report["objective"] = result.objective;
  report["reason"] = to_string(result.reason);
  report["iterations"] = result.iterations;
  report["trajectory"] = trajectory_json(result.trajectory);
  report["field"] = field_to_json(result.field);
  return emit_report(ctx, std::move(report));
}

int run_multistart(Context& ctx) {
  require_json_format(ctx.o);
  const ControlTask task = load_task_input(ctx.o, ctx.manifest);
  const AscentConfig config = ascent_config_from(ctx.o);
  const MultistartResult result = multistart(task, ctx.o.starts, ctx.o.amplitude,
                                             ctx.o.grid, config, ctx.o.delta);

  ctx.manifest.parameters["starts"] = ctx.o.starts;
  ctx.manifest.parameters["amplitude"] = ctx.o.amplitude;
  ctx.manifest.parameters["grid"] = ctx.o.grid;
  ctx.manifest.parameters["seed"] = ctx.o.seed;
  ctx.manifest.parameters["iters"] = config.max_iters;
  ctx.manifest.parameters["delta"] = ctx.o.delta;
  ctx.manifest.parameters["discrete"] = config.discrete_gradient;
  if (config.j_stop) ctx.manifest.parameters["j_stop"] = *config.j_stop;

  Json runs = Json::array();
  for (size_t i = 0; i < result.runs.size(); ++i) {
    const AscentResult& r = result.runs[i];
    Json row = Json::object();
    row["start"] = static_cast<int>(i);
    row["seed"] = ctx.o.seed + i;
    row["objective"] = r.objective;
    row["reason"] = to_string(r.reason);
    row["iterations"] = r.iterations;
    runs.push_back(std::move(row));
  }
  Json report = Json::object();
  report["threshold"] = result.threshold;
  report["success_fraction"] = result.success_fraction;
  report["best_index"] = result.best_index;
  report["best_objective"] = result.best_objective;
  report["runs"] = std::move(runs);
  report["best_field"] = field_to_json(result.runs[result.best_index].field);
  return emit_report(ctx, std::move(report));
}

void add_output_options(CLI::App* sc, Options& o) {
  sc->add_option("--out", o.out_path, "Write the report here (default: stdout)");
  sc->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

CLI::Option* add_field_options(CLI::App* sc, Options& o) {
  sc->add_option("--task", o.task_path, "Task JSON file")->required();
  sc->add_option("--field", o.field_spec,
                 "Field JSON file, \"zero\", or \"const:VALUE\"")
      ->capture_default_str();
  return sc->add_option("--grid", o.grid,
                        "Number of control intervals for zero/const fields")
      ->capture_default_str();
}

void add_tolerance_options(CLI::App* sc, Options& o) {
  sc->add_option("--tol-grad", o.tol_grad, "Gradient-residual tolerance")
      ->capture_default_str();
  sc->add_option("--tol-kcp", o.tol_kcp, "Commutator-residual tolerance")
      ->capture_default_str();
  sc->add_option("--tol-hess", o.tol_hess, "Hessian semidefiniteness slack")
      ->capture_default_str();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Options o;
  CLI::App app{"Quantum control landscape toolkit"};
  app.name("probe");
  app.require_subcommand(1);

  CLI::App* build = app.add_subcommand("build", "Construct benchmark tasks");
  build->require_subcommand(1);
  CLI::App* b_lambda =
      build->add_subcommand("lambda", "Three-level trap instance");
  b_lambda->add_option("--horizon", o.horizon, "Control horizon T")
      ->capture_default_str();
  add_output_options(b_lambda, o);

  CLI::App* b_trap = build->add_subcommand(
      "trap", "Second-order trap instance from a dressed-state prescription");
  b_trap->add_option("--n", o.n, "Hilbert space dimension")->capture_default_str();
  b_trap->add_option("--k", o.k, "Initial dressed state (1-based, interior)")
      ->capture_default_str();
  b_trap->add_option("--eps0", o.eps0, "Static field the trap sits at")
      ->capture_default_str();
  b_trap->add_option("--horizon", o.horizon, "Control horizon T")
      ->capture_default_str();
  b_trap->add_option("--lambdas", o.lambdas_csv,
                     "Observable weights, descending (default: n, n-1, ...)");
  add_output_options(b_trap, o);

  CLI::App* b_dcp = build->add_subcommand(
      "dcp-not-kcp", "Constant-field critical point that is not kinematic");
  b_dcp->add_option("--n", o.n, "Chain dimension")->capture_default_str();
  b_dcp->add_option("--i", o.di, "First dressed index (1-based)")
      ->capture_default_str();
  b_dcp->add_option("--j", o.dj, "Second dressed index (1-based)")
      ->capture_default_str();
  b_dcp->add_option("--psi", o.psi, "Initial-state phase")->capture_default_str();
  b_dcp->add_option("--phi", o.phi, "Observable phase")->capture_default_str();
  b_dcp->add_option("--eps0", o.eps0, "Static field value")->capture_default_str();
  b_dcp->add_option("--horizon", o.horizon, "Control horizon T")
      ->capture_default_str();
  b_dcp->add_option("--rank-extra", o.rank_extra,
                    "Observable weights on the orthogonal complement")
      ->capture_default_str();
  b_dcp->add_option("--grid", o.grid, "Intervals of the emitted field")
      ->capture_default_str();
  b_dcp->add_option("--task-out", o.task_out, "Also write a loadable task file");
  b_dcp->add_option("--field-out", o.field_out, "Also write a loadable field file");
  add_output_options(b_dcp, o);

  CLI::App* propagate_cmd =
      app.add_subcommand("propagate", "Propagate a field and report U(T)");
  CLI::Option* grid_opt_propagate = add_field_options(propagate_cmd, o);
  add_output_options(propagate_cmd, o);

  CLI::App* grad_cmd =
      app.add_subcommand("grad", "Gradient kernel and discrete gradient");
  CLI::Option* grid_opt_grad = add_field_options(grad_cmd, o);
  grad_cmd->add_flag("--check-fd", o.check_fd,
                     "Compare against a finite-difference gradient");
  add_output_options(grad_cmd, o);

  CLI::App* hess_cmd = app.add_subcommand("hess", "Second-variation kernel");
  CLI::Option* grid_opt_hess = add_field_options(hess_cmd, o);
  add_output_options(hess_cmd, o);

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Critical-point classification");
  CLI::Option* grid_opt_classify = add_field_options(classify_cmd, o);
  add_tolerance_options(classify_cmd, o);
  add_output_options(classify_cmd, o);

  CLI::App* cert_cmd = app.add_subcommand(
      "trap-cert", "Structural trap certificate for a static field");
  cert_cmd->add_option("--task", o.task_path, "Task JSON file")->required();
  cert_cmd->add_option("--eps0", o.eps0, "Static field value")
      ->capture_default_str();
  add_output_options(cert_cmd, o);

  CLI::App* check_cmd = app.add_subcommand(
      "trap-check", "Numerical second-order trap verification");
  CLI::Option* grid_opt_check = add_field_options(check_cmd, o);
  check_cmd->add_option("--probes", o.probes, "Random probe directions")
      ->capture_default_str();
  check_cmd->add_option("--seed", o.seed, "Probe RNG seed")->capture_default_str();
  add_tolerance_options(check_cmd, o);
  add_output_options(check_cmd, o);

  CLI::App* jac_cmd = app.add_subcommand(
      "jacobian-rank", "Rank of the reachable variation span");
  CLI::Option* grid_opt_jac = add_field_options(jac_cmd, o);
  add_output_options(jac_cmd, o);

  CLI::App* lie_cmd = app.add_subcommand(
      "controllability", "Dynamical Lie algebra dimension");
  lie_cmd->add_option("--task", o.task_path, "Task JSON file")->required();
  add_output_options(lie_cmd, o);

  CLI::App* opt_cmd = app.add_subcommand("optimize", "Gradient ascent");
  CLI::Option* grid_opt_optimize = add_field_options(opt_cmd, o);
  opt_cmd->add_option("--iters", o.iters, "Iteration budget")->capture_default_str();
  opt_cmd->add_option("--grad-stop", o.grad_stop, "Gradient sup-norm stop")
      ->capture_default_str();
  CLI::Option* jstop_opt =
      opt_cmd->add_option("--j-stop", o.j_stop, "Stop once J reaches this value");
  opt_cmd->add_option("--step", o.initial_step, "Initial line-search step")
      ->capture_default_str();
  opt_cmd->add_flag("--discrete", o.discrete,
                    "Use the exact discrete gradient as the ascent direction");
  add_output_options(opt_cmd, o);

  CLI::App* multi_cmd =
      app.add_subcommand("multistart", "Random-start ascent ensemble");
  multi_cmd->add_option("--task", o.task_path, "Task JSON file")->required();
  multi_cmd->add_option("--starts", o.starts, "Number of starts")
      ->capture_default_str();
  multi_cmd->add_option("--amplitude", o.amplitude,
                        "Uniform amplitude of the random initial fields")
      ->capture_default_str();
  CLI::Option* grid_opt_multi =
      multi_cmd->add_option("--grid", o.grid, "Control intervals")
          ->capture_default_str();
  multi_cmd->add_option("--seed", o.seed, "Base seed; start i uses seed + i")
      ->capture_default_str();
  multi_cmd->add_option("--iters", o.iters, "Iteration budget per start")
      ->capture_default_str();
  multi_cmd->add_option("--grad-stop", o.grad_stop, "Gradient sup-norm stop")
      ->capture_default_str();
  CLI::Option* jstop_multi = multi_cmd->add_option(
      "--j-stop", o.j_stop, "Success threshold (default: Jmax - delta)");
  multi_cmd->add_option("--delta", o.delta, "Gap below Jmax for the threshold")
      ->capture_default_str();
  multi_cmd->add_option("--step", o.initial_step, "Initial line-search step")
      ->capture_default_str();
  multi_cmd->add_flag("--discrete", o.discrete,
                      "Use the exact discrete gradient as the ascent direction");
  add_output_options(multi_cmd, o);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("probe");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  o.grid_set = (grid_opt_propagate->count() + grid_opt_grad->count() +
                grid_opt_hess->count() + grid_opt_classify->count() +
                grid_opt_check->count() + grid_opt_jac->count() +
                grid_opt_optimize->count() + grid_opt_multi->count()) > 0;
  o.j_stop_set = (jstop_opt->count() + jstop_multi->count()) > 0;

  RunManifest manifest;
  manifest.command = "probe";
  for (const std::string& a : args) manifest.command += " " + a;
  manifest.tool_version = kToolVersion;
  Context ctx{o, std::move(manifest), out};

  try {
    if (b_lambda->parsed()) return run_build_lambda(ctx);
    if (b_trap->parsed()) return run_build_trap(ctx);
    if (b_dcp->parsed()) return run_build_dcp(ctx);
    if (propagate_cmd->parsed()) return run_propagate(ctx);
    if (grad_cmd->parsed()) return run_grad(ctx);
    if (hess_cmd->parsed()) return run_hess(ctx);
    if (classify_cmd->parsed()) return run_classify(ctx);
    if (cert_cmd->parsed()) return run_trap_cert(ctx);
    if (check_cmd->parsed()) return run_trap_check(ctx);
    if (jac_cmd->parsed()) return run_jacobian(ctx);
    if (lie_cmd->parsed()) return run_controllability(ctx);
    if (opt_cmd->parsed()) return run_optimize(ctx);
    if (multi_cmd->parsed()) return run_multistart(ctx);
    err << "error: no subcommand selected\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qcl::cli
