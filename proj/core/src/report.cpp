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
#include "qcl/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcl/errors.hpp"

namespace qcl {

Json RunManifest::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["inputs"] = inputs;
  j["parameters"] = parameters;
  j["outputs"] = outputs;
  return j;
}

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

void dump_rec(const Json& v, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (v.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(v.get<long long>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(v.get<unsigned long long>());
      break;
    case Json::value_t::number_float:
      // Fixed 17-significant-digit formatting: exact double round trip and a
      // byte-stable file independent of locale or library version.
      out += format_double(v.get<double>());
      break;
    case Json::value_t::string:
      out += Json(v.get<std::string>()).dump();
      break;
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (size_t i = 0; i < v.size(); ++i) {
        out += pad_in;
        dump_rec(v[i], out, indent, depth + 1);
        if (i + 1 < v.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      break;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out += pad_in + Json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, depth + 1);
        if (i + 1 < v.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      break;
    }
    default:
      out += "null";
      break;
  }
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump_rec(value, out, indent, 0);
  return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write file: " + tmp);
    f << content;
    f.flush();
    if (!f) throw ValidationError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw ValidationError("cannot move " + tmp + " into place: " + ec.message());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace qcl
