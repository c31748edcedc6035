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

namespace qcl {

using Json = nlohmann::ordered_json;

// Provenance block embedded in every emitted report.  Deliberately carries no
// timestamps or host identifiers: two runs of the same command over the same
// inputs must produce byte-identical files.
struct RunManifest {
  std::string command;                     // argv joined with spaces
  std::string tool_version;                // fixed per release
  std::vector<std::string> inputs;         // paths read
  Json parameters = Json::object();        // resolved numeric/flag settings
  std::vector<std::string> outputs;        // paths written

  Json to_json() const;
};

// Serializes with insertion order preserved and doubles printed with 17
// significant digits, enough for exact double round-trips, so reports are
// byte-stable across runs and platforms.
std::string dump_json(const Json& value, int indent = 2);

// Doubles as above; NaN and infinities become null (JSON has no spelling for
// them).
std::string format_double(double value);

// Writes via a sibling ".tmp" file and rename, so readers never observe a
// truncated report.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

}  // namespace qcl
