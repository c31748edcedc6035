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
#include "qcl/optimizer.hpp"

#include <cmath>

#include "qcl/errors.hpp"
#include "qcl/parallel.hpp"
#include "qcl/rng.hpp"

namespace qcl {
namespace {

// Ascent direction ~ dJ/deps (per interval): the exact discrete gradient, or
// the kernel samples scaled by dt (midpoint quadrature of the same thing).
RealVector ascent_direction(const ControlTask& task, const ControlField& field,
                            const AscentConfig& config) {
  if (config.discrete_gradient) return gradient_discrete(task, field);
  const GradientVector g = gradient_kernel(task, field);
  return g.dt * g.samples;
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GRAD_STOP: return "GRAD_STOP";
    case StopReason::TARGET_REACHED: return "TARGET_REACHED";
    case StopReason::MAX_ITERS: return "MAX_ITERS";
    case StopReason::LINE_SEARCH_FAILED: return "LINE_SEARCH_FAILED";
  }
  return "UNKNOWN";
}

AscentResult gradient_ascent(const ControlTask& task, const ControlField& start,
                             const AscentConfig& config) {
  if (config.max_iters < 0) {
    throw ValidationError("ascent: max_iters must be non-negative");
  }
  if (std::abs(start.T - task.T) > 1e-12 * std::max(1.0, task.T)) {
    throw ValidationError("ascent: field horizon does not match the task horizon");
  }

  ControlField field = start;
  const double dt = field.dt();
  double j = objective(task, field);
  RealVector dir = ascent_direction(task, field, config);
  double grad_norm = dir.size() ? dir.cwiseAbs().maxCoeff() / dt : 0.0;

  AscentResult result{field, j, StopReason::MAX_ITERS, 0, {}};
  result.trajectory.push_back({0, j, grad_norm, 0.0});

  auto finish = [&](StopReason reason, int iters) {
    result.field = field;
    result.objective = j;
    result.reason = reason;
    result.iterations = iters;
    return result;
  };

  if (config.j_stop && j >= *config.j_stop) {
    return finish(StopReason::TARGET_REACHED, 0);
  }
  if (grad_norm <= config.grad_stop) return finish(StopReason::GRAD_STOP, 0);

  double step = config.initial_step;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const double slope = dir.squaredNorm();
    double alpha = step;
    bool accepted = false;
    double j_trial = j;
    ControlField trial = field;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
      trial.values = field.values + alpha * dir;
      j_trial = objective(task, trial);
      if (j_trial >= j + config.armijo_c * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= config.backtrack;
    }
    if (!accepted) return finish(StopReason::LINE_SEARCH_FAILED, iter - 1);

    field = trial;
    j = j_trial;
    step = 2.0 * alpha;  // carry the accepted step forward, re-opened upward
    dir = ascent_direction(task, field, config);
    grad_norm = dir.cwiseAbs().maxCoeff() / dt;
    result.trajectory.push_back({iter, j, grad_norm, alpha});

    if (config.j_stop && j >= *config.j_stop) {
      return finish(StopReason::TARGET_REACHED, iter);
    }
    if (grad_norm <= config.grad_stop) return finish(StopReason::GRAD_STOP, iter);
  }
  return finish(StopReason::MAX_ITERS, config.max_iters);
}

MultistartResult multistart(const ControlTask& task, int n_starts, double amplitude,
                            int grid_M, const AscentConfig& config, double delta) {
  if (n_starts < 1) throw ValidationError("multistart: need at least one start");
  if (amplitude < 0.0) throw ValidationError("multistart: amplitude must be >= 0");
  if (grid_M < 1) throw ValidationError("multistart: grid must have at least 1 interval");

  const KinematicBounds bounds = kinematic_bounds(task);
  const double threshold = config.j_stop ? *config.j_stop : bounds.Jmax - delta;
  AscentConfig run_config = config;
  run_config.j_stop = threshold;

  MultistartResult out;
  out.threshold = threshold;
  out.runs.resize(n_starts,
                  AscentResult{ControlField::zero(task.T, grid_M), 0.0,
                               StopReason::MAX_ITERS, 0, {}});
  parallel_for(0, n_starts, [&](int i) {
    Rng rng(config.seed + static_cast<uint64_t>(i));
    RealVector values(grid_M);
    for (int m = 0; m < grid_M; ++m) values(m) = rng.uniform(-amplitude, amplitude);
    out.runs[i] =
        gradient_ascent(task, ControlField(task.T, grid_M, std::move(values)),
                        run_config);
  });

  out.best_index = 0;
  int successes = 0;
  for (int i = 0; i < n_starts; ++i) {
    if (out.runs[i].objective > out.runs[out.best_index].objective) {
      out.best_index = i;
    }
    if (out.runs[i].objective >= threshold) ++successes;
  }
  out.best_objective = out.runs[out.best_index].objective;
  out.success_fraction = static_cast<double>(successes) / n_starts;
  return out;
}

}  // namespace qcl
