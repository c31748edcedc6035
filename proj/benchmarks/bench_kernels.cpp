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
#include <benchmark/benchmark.h>

#include "qcl/constructions.hpp"
#include "qcl/optimizer.hpp"
#include "qcl/rng.hpp"

namespace {

qcl::ControlField random_field(double horizon, int intervals, std::uint64_t seed) {
  qcl::Rng rng(seed);
  qcl::RealVector v(intervals);
  for (int m = 0; m < intervals; ++m) v(m) = rng.uniform(-0.5, 0.5);
  return qcl::ControlField(horizon, intervals, std::move(v));
}

void BM_Propagate(benchmark::State& state) {
  const qcl::ControlTask task = qcl::build_lambda();
  const qcl::ControlField field =
      random_field(task.T, static_cast<int>(state.range(0)), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcl::propagate(task, field));
  }
}
BENCHMARK(BM_Propagate)->Arg(128)->Arg(512);

void BM_Objective(benchmark::State& state) {
  const qcl::ControlTask task = qcl::build_lambda();
  const qcl::ControlField field =
      random_field(task.T, static_cast<int>(state.range(0)), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcl::objective(task, field));
  }
}
BENCHMARK(BM_Objective)->Arg(128)->Arg(512);

void BM_GradientDiscrete(benchmark::State& state) {
  const qcl::ControlTask task = qcl::build_lambda();
  const qcl::ControlField field =
      random_field(task.T, static_cast<int>(state.range(0)), 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcl::gradient_discrete(task, field));
  }
}
BENCHMARK(BM_GradientDiscrete)->Arg(128)->Arg(512);

void BM_HessianKernel(benchmark::State& state) {
  const qcl::ControlTask task = qcl::build_lambda();
  const qcl::ControlField field =
      random_field(task.T, static_cast<int>(state.range(0)), 17);
  const qcl::PropagationResult prop = qcl::propagate(task, field);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcl::hessian_kernel(task, prop));
  }
}
BENCHMARK(BM_HessianKernel)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
