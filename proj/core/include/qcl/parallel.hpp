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

#include <functional>

namespace qcl {

// Worker count for a loop of `work_items` independent items: hardware
// concurrency capped by the PROBE_THREADS environment variable (if set)
// and by the number of items.
int thread_budget(int work_items);

// Runs body(i) for i in [begin, end) on up to thread_budget() threads.
// Each index is processed exactly once and writes only its own slot, so
// results are identical for any schedule and thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& body);

}  // namespace qcl
