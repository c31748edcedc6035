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

#include <optional>
#include <string>
#include <vector>

#include "qcl/landscape.hpp"

namespace qcl {

enum class StopReason {
  GRAD_STOP,           // sup-norm of the gradient below grad_stop
  TARGET_REACHED,      // J >= J_stop
  MAX_ITERS,
  LINE_SEARCH_FAILED,  // backtracking exhausted without sufficient increase
};

std::string to_string(StopReason reason);

struct AscentConfig {
  int max_iters = 500;
  double grad_stop = 1e-9;            // on sup_m |g_m|
  std::optional<double> j_stop;       // absent: run to grad_stop / max_iters
  double initial_step = 1.0;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  bool discrete_gradient = false;     // true: exact dJ/deps_m; false: kernel
  uint64_t seed = 0;                  // consumed by multistart only
};

struct IterationRecord {
  int iter;
  double objective;
  double grad_norm;  // sup-norm
  double step;       // accepted step length (0 at iter 0)
};

struct AscentResult {
  ControlField field;
  double objective;
  StopReason reason;
  int iterations;
  std::vector<IterationRecord> trajectory;  // one record per accepted iterate
};

// Steepest ascent with Armijo backtracking.  The search direction is the
// discrete gradient (dt * kernel samples, or the exact discrete gradient when
// configured); a step is accepted when
//   J(eps + a d) >= J(eps) + c a ||d||^2,
// the accepted step seeds the next iteration doubled.  The objective is
// non-decreasing along the returned trajectory.
AscentResult gradient_ascent(const ControlTask& task, const ControlField& start,
                             const AscentConfig& config = {});

struct MultistartResult {
  std::vector<AscentResult> runs;      // index i used seed config.seed + i
  int best_index;
  double best_objective;
  double success_fraction;             // fraction with J >= threshold
  double threshold;                    // Jmax - delta unless j_stop given
};

// Independent ascents from uniform random fields on [-amplitude, amplitude],
// start i seeded with config.seed + i; deterministic for fixed inputs and
// independent of thread schedule.  The success threshold is config.j_stop
// when set, else Jmax - delta.
MultistartResult multistart(const ControlTask& task, int n_starts,
                            double amplitude, int grid_M,
                            const AscentConfig& config = {},
                            double delta = 0.05);

}  // namespace qcl
