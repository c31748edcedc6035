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

#include <iosfwd>
#include <string>
#include <vector>

namespace qcl::cli {

// Parses and runs one `probe` invocation.  `args` excludes the program name.
// Returns the process exit code: 0 success, 1 invalid input or usage, 2
// numerical failure.  All report output goes to --out (or `out` for stdout);
// diagnostics and errors go to `err`.  In-process entry point used by both
// main() and the tests.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace qcl::cli
