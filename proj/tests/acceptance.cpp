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
//
// End-to-end acceptance checks for the toolkit.  Each criterion prints one
// PASS/FAIL line; the process exit code is the number of failures.  All
// tolerances are pinned here, next to the check they gate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qcl/constructions.hpp"
#include "qcl/optimizer.hpp"
#include "qcl/rng.hpp"

using namespace qcl;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

ControlTask ladder_with_state(int level) {
  const ControlTask base = build_lambda();
  ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
  rho(level, level) = 1.0;
  return ControlTask(base.system, rho, base.O, base.T);
}

RealVector max_min_eigs(const ControlTask& task, const ControlField& field) {
  const HessianMatrix hess = hessian_kernel(task, field);
  const RealMatrix scaled = hess.dt * hess.dt * hess.entries;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(scaled,
                                                   Eigen::EigenvaluesOnly);
  RealVector out(3);
  out << solver.eigenvalues()(0),
      solver.eigenvalues()(solver.eigenvalues().size() - 1), scaled.norm();
  return out;  // (min, max, frobenius)
}

double rel_l2(const RealVector& got, const RealVector& want) {
  return (got - want).norm() / want.norm();
}

// Random control problem q = 0..9: dimension cycles through 2, 3, 4.
ControlTask random_benchmark_task(int q) {
  const int n = 2 + (q % 3);
  const std::uint64_t base = 1000 + 10 * static_cast<std::uint64_t>(q);
  const ComplexMatrix h0 = random_hermitian(n, base);
  const ComplexMatrix mu = random_hermitian(n, base + 1);
  const ComplexMatrix r = random_hermitian(n, base + 2);
  ComplexMatrix rho = r * r;
  rho /= rho.trace();
  rho = 0.5 * (rho + ComplexMatrix(rho.adjoint()));
  return ControlTask(QuantumSystem(h0, mu), rho, random_hermitian(n, base + 3),
                     1.0);
}

// Smooth band-limited envelope with coefficients drawn from one seed, so the
// same curve can be sampled on any grid.
struct FourierEnvelope {
  double a0;
  double a[3];
  double b[3];
  double period;

  FourierEnvelope(std::uint64_t seed, double t_period) : period(t_period) {
    Rng rng(seed);
    a0 = rng.uniform(-0.5, 0.5);
    for (int h = 0; h < 3; ++h) {
      a[h] = rng.uniform(-0.5, 0.5);
      b[h] = rng.uniform(-0.5, 0.5);
    }
  }

  double operator()(double t) const {
    double v = a0;
    for (int h = 0; h < 3; ++h) {
      const double w = 2.0 * M_PI * (h + 1) * t / period;
      v += a[h] * std::cos(w) + b[h] * std::sin(w);
    }
    return v;
  }
};

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const ControlTask task = build_lambda();
  bool pass = true;
  std::string detail;

  for (int m : {64, 128, 256}) {
    const ControlField zero = ControlField::zero(task.T, m);
    const double j = objective(task, zero);
    const double grad_sup = gradient_kernel(task, zero).sup_norm();
    const RealVector eigs = max_min_eigs(task, zero);
    // 100 seeded random probe directions per grid.
    const TrapCheckReport check = second_order_trap_numeric(task, zero, 100, 0);

    const bool ok = std::abs(j - 1.0) <= 1e-12 && grad_sup <= 1e-12 &&
                    eigs(1) <= 1e-9 * eigs(2) && check.max_hplus <= 1e-10 &&
                    check.hplus_ok;
    pass = pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "[M=%d |J-1|=%.1e grad=%.1e maxeig=%.1e h+=%.1e] ",
                  m, std::abs(j - 1.0), grad_sup, eigs(1), check.max_hplus);
    detail += buf;
  }

  const TrapCertificate cert = trap_certificate(task, 0.0);
  pass = pass && cert.holds;
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 10.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "cert=%d %.1fs (budget 10s)", cert.holds ? 1 : 0,
                elapsed);
  report(1, pass, "ladder trap at zero field: " + detail + buf);
}

void criterion_2() {
  const ControlField zero = ControlField::zero(5.0, 128);

  const RealVector top = max_min_eigs(ladder_with_state(1), zero);
  const bool max_ok = top(1) <= 1e-9 * top(2);  // all eigenvalues <= slack

  const RealVector bottom = max_min_eigs(ladder_with_state(2), zero);
  const bool min_ok = bottom(0) >= -1e-9 * bottom(2);

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "top state maxeig=%.2e (<= %.1e), bottom state mineig=%.2e "
                "(>= -%.1e) at M=128",
                top(1), 1e-9 * top(2), bottom(0), 1e-9 * bottom(2));
  report(2, max_ok && min_ok, std::string("kinematic extrema curvature: ") + buf);
}

void criterion_3() {
  bool pass = true;
  std::string detail;
  for (double eps0 : {0.0, 0.3}) {
    DcpInstanceParams params;
    params.psi = M_PI / 2.0;
    params.phi = 0.0;
    params.eps0 = eps0;
    const DcpInstance inst =
        build_dcp_not_kcp(standard_chain_system(2, eps0), params, 128);

    const double j = objective(inst.task, inst.field);
    const double grad_sup = gradient_kernel(inst.task, inst.field).sup_norm();
    const double kcp = kcp_residual(inst.task, inst.field);
    const Classification cls = classify(inst.task, inst.field);

    const bool ok = std::abs(j - 0.5) <= 1e-12 && grad_sup <= 1e-12 &&
                    kcp >= 0.35 && cls.has(CriticalLabel::DCP_NOT_KCP);
    pass = pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "[eps0=%.1f |J-0.5|=%.1e grad=%.1e kcp=%.3f labeled=%d] ",
                  eps0, std::abs(j - 0.5), grad_sup, kcp,
                  cls.has(CriticalLabel::DCP_NOT_KCP) ? 1 : 0);
    detail += buf;
  }
  report(3, pass, "critical-but-not-kinematic pair at alpha = pi/2: " + detail);
}

void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  double worst_fd = 0.0, worst_kernel = 0.0, worst_quad = 0.0;

  for (int q = 0; q < 10; ++q) {
    const ControlTask task = random_benchmark_task(q);
    const FourierEnvelope envelope(2000 + q, task.T);
    const FourierEnvelope direction(3000 + q, task.T);

    for (int m : {64, 128, 256}) {
      const ControlField field =
          ControlField::from_envelope(task.T, m, envelope);
      const RealVector f =
          ControlField::from_envelope(task.T, m, direction).values;
      const RealVector discrete = gradient_discrete(task, field);

      if (m == 64) {
        const RealVector fd = fd_gradient(task, field);
        const double rel = rel_l2(discrete, fd);
        worst_fd = std::max(worst_fd, rel);
        pass = pass && rel <= 1e-6;
      }

      const GradientVector kernel = gradient_kernel(task, field);
      const double rel_kernel = rel_l2(kernel.dt * kernel.samples, discrete);
      worst_kernel = std::max(worst_kernel, rel_kernel * m);  // in units of 1/M
      pass = pass && rel_kernel <= 3.0 / m;

      const double quad = quadratic_form(hessian_kernel(task, field), f);
      const double fd2 = fd_directional_second(task, field, f);
      const double rel_quad = std::abs(quad - fd2) / std::abs(fd2);
      worst_quad = std::max(worst_quad, rel_quad * m);
      pass = pass && rel_quad <= 5.0 / m;
    }
  }

  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 120.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "10 random tasks, M in {64,128,256}: discrete-vs-FD rel<=%.1e "
                "(tol 1e-6), kernel gap<=%.2f/M (tol 3/M), quadratic form "
                "gap<=%.2f/M (tol 5/M), %.1fs (budget 120s)",
                worst_fd, worst_kernel, worst_quad, elapsed);
  report(4, pass, buf);
}

void criterion_5() {
  bool pass = true;
  std::string detail;

  const ControlTask pure = build_lambda();
  ComplexMatrix mixed_rho = ComplexMatrix::Zero(3, 3);
  mixed_rho(0, 0) = 0.6;
  mixed_rho(1, 1) = 0.3;
  mixed_rho(2, 2) = 0.1;
  const ControlTask mixed(pure.system, mixed_rho, pure.O, pure.T);

  int which = 0;
  for (const ControlTask* task : {&pure, &mixed}) {
    ++which;
    for (int m : {128, 256, 512}) {
      const ControlField zero = ControlField::zero(task->T, m);
      const PropagationResult prop = propagate(*task, zero);
      const SpectralFormEvaluator eval(*task, prop);
      const HessianMatrix hess = hessian_kernel(*task, prop);

      Rng rng(4000 + static_cast<std::uint64_t>(m));
      RealVector f(m);
      for (int i = 0; i < m; ++i) f(i) = rng.uniform(-1.0, 1.0);

      const double h = eval.evaluate(f).h;
      const double qf = quadratic_form(hess, f);
      const double rel = std::abs(h - qf) / std::abs(qf);
      pass = pass && rel <= 2.0 / m;
      char buf[80];
      std::snprintf(buf, sizeof buf, "[%s M=%d rel=%.1e<=%.1e] ",
                    which == 1 ? "pure" : "mixed", m, rel, 2.0 / m);
      detail += buf;
    }
  }
  report(5, pass, "spectral vs kernel second variation at commuting pairs: " +
                      detail);
}

void criterion_6() {
  const ControlTask lambda = build_lambda();
  const JacobianReport jac =
      jacobian_span(lambda, ControlField::zero(lambda.T, 64));
  const bool ladder_ok =
      jac.rank < jac.full_dim && jac.rank == 4 && jac.entry_sup(0, 1) <= 1e-15;

  ComplexMatrix h0 = ComplexMatrix::Zero(2, 2);
  h0(1, 1) = 1.0;
  ComplexMatrix mu(2, 2);
  mu << 0.0, 1.0, 1.0, 0.0;
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  const ControlTask two(QuantumSystem(h0, mu), rho, random_hermitian(2, 60),
                        2.0 * M_PI);
  const JacobianReport jac2 = jacobian_span(two, ControlField::zero(two.T, 16));
  const bool two_ok = jac2.rank == 2 && jac2.full_dim == 4;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "ladder rank %d of %d with dead 1<->2 coordinate (sup %.1e); "
                "two-level rank %d of %d",
                jac.rank, jac.full_dim, jac.entry_sup(0, 1), jac2.rank,
                jac2.full_dim);
  report(6, ladder_ok && two_ok, buf);
}

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const ControlTask task = build_lambda();

  const AscentResult at_trap =
      gradient_ascent(task, ControlField::zero(task.T, 128));
  const bool trap_ok =
      at_trap.reason == StopReason::GRAD_STOP && at_trap.iterations == 0;

  AscentConfig config;
  config.max_iters = 2000;
  config.seed = 0;
  const MultistartResult multi = multistart(task, 20, 0.5, 128, config, 0.05);

  std::printf("REPORT criterion 7: per-seed multistart table "
              "(threshold %.2f)\n", multi.threshold);
  std::printf("REPORT   seed    J_final  iters  reason\n");
  for (size_t i = 0; i < multi.runs.size(); ++i) {
    std::printf("REPORT   %4zu  %9.6f  %5d  %s\n", i, multi.runs[i].objective,
                multi.runs[i].iterations,
                to_string(multi.runs[i].reason).c_str());
  }

  const bool success_ok = multi.success_fraction >= 0.8;
  const double elapsed = seconds_since(t0);
  const bool pass = trap_ok && success_ok && elapsed < 300.0;

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "zero-field start stops at iteration 0 (%s); 20 random starts "
                "reach J>=%.2f in %.0f%% of runs (need 80%%), %.1fs (budget "
                "300s)",
                to_string(at_trap.reason).c_str(), multi.threshold,
                100.0 * multi.success_fraction, elapsed);
  report(7, pass, buf);

  // Comparative experiment, reported but not gated: starts inside the trap's
  // numerical basin barely move, while amplitude-0.5 starts escape above.
  AscentConfig near_cfg;
  near_cfg.max_iters = 300;
  near_cfg.seed = 0;
  const MultistartResult near =
      multistart(task, 20, 1e-8, 128, near_cfg, 0.05);
  int it_min = near.runs[0].iterations, it_max = 0;
  double it_sum = 0.0;
  for (const AscentResult& r : near.runs) {
    it_min = std::min(it_min, r.iterations);
    it_max = std::max(it_max, r.iterations);
    it_sum += r.iterations;
  }
  std::printf("REPORT criterion 7 (near-trap, amplitude 1e-8, not gated): "
              "success fraction %.2f, best J %.12f, iterations "
              "min/mean/max %d/%.1f/%d\n",
              near.success_fraction, near.best_objective, it_min,
              it_sum / near.runs.size(), it_max);
  std::fflush(stdout);
}

void criterion_8() {
  const ControlTask lambda = build_lambda();
  const LieRankReport full = lie_algebra_rank(lambda.system);
  const bool full_ok = full.dimension == 9 && full.controllable;

  const QuantumSystem dead(lambda.system.H0, ComplexMatrix::Zero(3, 3));
  const LieRankReport one = lie_algebra_rank(dead);
  const bool one_ok = one.dimension == 1 && !one.controllable;

  char buf[120];
  std::snprintf(buf, sizeof buf,
                "ladder generates dimension %d of %d; dead drive dimension %d",
                full.dimension, full.ambient_dim, one.dimension);
  report(8, full_ok && one_ok, buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
