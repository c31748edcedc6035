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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/cli.hpp"
#include "qcl/report.hpp"
#include "qcl/system.hpp"

using namespace qcl;
using Json = nlohmann::ordered_json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

Json payload(const std::string& text) {
  Json j = Json::parse(text);
  REQUIRE(j.contains("manifest"));
  j.erase("manifest");
  return j;
}

// Fixture files shared by the cases below; rebuilt per test for isolation.
struct LambdaFiles {
  std::string task = "cli_lambda_task.json";

  LambdaFiles() {
    const CliRun r = run({"build", "lambda", "--out", task});
    REQUIRE(r.code == 0);
  }
  ~LambdaFiles() { std::remove(task.c_str()); }
};

}  // namespace

TEST_CASE("argument errors exit with code 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"nonsense"}).code == 1);
  CHECK(run({"classify"}).code == 1);  // --task is required
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"classify", "--help"}).code == 0);

  const CliRun missing = run({"classify", "--task", "no_such_file.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);

  const CliRun bad_format =
      run({"classify", "--task", "x.json", "--format", "xml"});
  CHECK(bad_format.code == 1);
}

TEST_CASE("built benchmark task round trips through the loader") {
  const CliRun r = run({"build", "lambda"});
  REQUIRE(r.code == 0);
  const ControlTask task = task_from_json(Json::parse(r.out));
  CHECK(task.n() == 3);
  CHECK(task.T == 5.0);
  CHECK(task.template_tag == "lambda");

  // The emitted report embeds its manifest.
  const Json j = Json::parse(r.out);
  REQUIRE(j.contains("manifest"));
  CHECK(j["manifest"]["command"].get<std::string>().rfind("probe build lambda",
                                                          0) == 0);
  CHECK(j["manifest"]["tool_version"] == "0.1.0");
}

TEST_CASE("classification pipeline labels the trap") {
  LambdaFiles files;
  const CliRun r =
      run({"classify", "--task", files.task, "--field", "zero", "--grid", "64"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  bool found = false;
  for (const auto& label : j["labels"]) {
    if (label == "SECOND_ORDER_TRAP_CANDIDATE") found = true;
  }
  CHECK(found);
  CHECK(j["objective"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["Jmax"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("reports are byte-deterministic") {
  LambdaFiles files;
  const std::vector<std::string> cmd = {"hess",   "--task", files.task,
                                        "--field", "zero",  "--grid", "24"};
  const CliRun a = run(cmd);
  const CliRun b = run(cmd);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  // Writing to a file produces the same payload as stdout.
  const std::string out_path = "cli_hess_report.json";
  std::vector<std::string> to_file = cmd;
  to_file.push_back("--out");
  to_file.push_back(out_path);
  REQUIRE(run(to_file).code == 0);
  const Json from_file = Json::parse(read_text(out_path));
  Json lhs = payload(a.out);
  Json rhs = from_file;
  rhs.erase("manifest");
  CHECK(dump_json(lhs) == dump_json(rhs));
  std::remove(out_path.c_str());
}

TEST_CASE("zero shorthand equals an explicit all-zeros field file") {
  LambdaFiles files;
  const std::string field_path = "cli_zero_field.json";
  save_field(ControlField::zero(5.0, 16), field_path);

  const CliRun shorthand =
      run({"grad", "--task", files.task, "--field", "zero", "--grid", "16"});
  const CliRun explicit_file =
      run({"grad", "--task", files.task, "--field", field_path});
  REQUIRE(shorthand.code == 0);
  REQUIRE(explicit_file.code == 0);
  // The manifests record different command lines; everything computed from
  // the inputs is identical to the byte.
  CHECK(dump_json(payload(shorthand.out)) ==
        dump_json(payload(explicit_file.out)));
  std::remove(field_path.c_str());
}

TEST_CASE("grid flag must agree with an explicit field file") {
  LambdaFiles files;
  const std::string field_path = "cli_grid_field.json";
  save_field(ControlField::zero(5.0, 16), field_path);

  CHECK(run({"grad", "--task", files.task, "--field", field_path, "--grid",
             "16"}).code == 0);
  const CliRun conflict = run(
      {"grad", "--task", files.task, "--field", field_path, "--grid", "32"});
  CHECK(conflict.code == 1);
  CHECK(conflict.err.find("--grid") != std::string::npos);
  std::remove(field_path.c_str());
}

TEST_CASE("constant field shorthand parses strictly") {
  LambdaFiles files;
  CHECK(run({"propagate", "--task", files.task, "--field", "const:0.25",
             "--grid", "8"}).code == 0);
  CHECK(run({"propagate", "--task", files.task, "--field", "const:xyz",
             "--grid", "8"}).code == 1);
  CHECK(run({"propagate", "--task", files.task, "--field", "const:0.25zzz",
             "--grid", "8"}).code == 1);
}

TEST_CASE("gradient report carries both routes and the FD check") {
  LambdaFiles files;
  const CliRun r = run({"grad", "--task", files.task, "--field", "const:0.2",
                        "--grid", "12", "--check-fd"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["kernel"].size() == 12);
  CHECK(j["discrete"].size() == 12);
  CHECK(j["fd"].size() == 12);
  CHECK(j["fd_comparison"]["rel_error_discrete_vs_fd"].get<double>() <= 1e-6);
  CHECK(j["fd_comparison"]["rel_error_kernel_dt_vs_fd"].get<double>() <=
        3.0 / 12.0);
}

TEST_CASE("trajectory export writes the documented CSV schema") {
  LambdaFiles files;
  const std::string csv_path = "cli_traj.csv";
  const CliRun r = run({"optimize", "--task", files.task, "--field", "const:0.3",
                        "--grid", "16", "--iters", "5", "--format", "csv",
                        "--out", csv_path});
  REQUIRE(r.code == 0);

  const std::string csv = read_text(csv_path);
  CHECK(csv.rfind("iter,J,grad_norm,step\n", 0) == 0);
  const Json summary = Json::parse(r.out);
  CHECK(summary.contains("objective"));
  CHECK(summary.contains("manifest"));
  std::remove(csv_path.c_str());

  // CSV is a file format: it needs a destination.
  CHECK(run({"optimize", "--task", files.task, "--grid", "16", "--iters", "2",
             "--format", "csv"}).code == 1);
  // And not every report has a tabular form.
  CHECK(run({"propagate", "--task", files.task, "--grid", "8", "--format",
             "csv", "--out", "x.csv"}).code == 1);
}

TEST_CASE("matrix-valued CSV export for the second variation") {
  LambdaFiles files;
  const std::string csv_path = "cli_hess.csv";
  const CliRun r = run({"hess", "--task", files.task, "--field", "zero",
                        "--grid", "10", "--format", "csv", "--out", csv_path});
  REQUIRE(r.code == 0);
  const std::string csv = read_text(csv_path);
  int lines = 0, commas_first_line = 0;
  for (size_t i = 0; i < csv.size(); ++i) {
    if (csv[i] == '\n') ++lines;
    if (csv[i] == ',' && lines == 0) ++commas_first_line;
  }
  CHECK(lines == 10);
  CHECK(commas_first_line == 9);
  const Json summary = Json::parse(r.out);
  CHECK(summary["eigenvalues"].size() == 10);
  std::remove(csv_path.c_str());
}

TEST_CASE("structure subcommands report the ladder fingerprints") {
  LambdaFiles files;

  const CliRun cert = run({"trap-cert", "--task", files.task});
  REQUIRE(cert.code == 0);
  const Json jc = Json::parse(cert.out);
  CHECK(jc["holds"] == true);
  CHECK(jc["k"] == 2);

  const CliRun check = run({"trap-check", "--task", files.task, "--field",
                            "zero", "--grid", "32", "--probes", "8"});
  REQUIRE(check.code == 0);
  CHECK(Json::parse(check.out)["holds"] == true);

  const CliRun jac = run(
      {"jacobian-rank", "--task", files.task, "--field", "zero", "--grid", "32"});
  REQUIRE(jac.code == 0);
  const Json jj = Json::parse(jac.out);
  CHECK(jj["rank"] == 4);
  CHECK(jj["full_dim"] == 9);

  const CliRun lie = run({"controllability", "--task", files.task});
  REQUIRE(lie.code == 0);
  const Json jl = Json::parse(lie.out);
  CHECK(jl["dimension"] == 9);
  CHECK(jl["controllable"] == true);
}

TEST_CASE("constructed critical instance files feed back into classify") {
  const std::string task_path = "cli_dcp_task.json";
  const std::string field_path = "cli_dcp_field.json";
  const CliRun built =
      run({"build", "dcp-not-kcp", "--n", "2", "--task-out", task_path,
           "--field-out", field_path});
  REQUIRE(built.code == 0);
  const Json report = Json::parse(built.out);
  CHECK(report["predicted_objective"].get<double>() ==
        doctest::Approx((1.0 + std::cos(1.2)) / 2.0).epsilon(1e-12));

  const CliRun cls =
      run({"classify", "--task", task_path, "--field", field_path});
  REQUIRE(cls.code == 0);
  const Json cls_report = Json::parse(cls.out);
  bool found = false;
  for (const auto& label : cls_report["labels"]) {
    if (label == "DCP_NOT_KCP") found = true;
  }
  CHECK(found);
  std::remove(task_path.c_str());
  std::remove(field_path.c_str());
}

TEST_CASE("multistart summary enumerates every run") {
  LambdaFiles files;
  const CliRun r =
      run({"multistart", "--task", files.task, "--starts", "2", "--grid", "16",
           "--iters", "60", "--amplitude", "0.5", "--seed", "3"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["runs"].size() == 2);
  CHECK(j["threshold"].get<double>() == doctest::Approx(1.95).epsilon(1e-12));
  CHECK(j["runs"][0]["seed"] == 3);
  CHECK(j["runs"][1]["seed"] == 4);
  const double frac = j["success_fraction"].get<double>();
  CHECK(frac >= 0.0);
  CHECK(frac <= 1.0);
  // The best field is itself a loadable field document.
  const ControlField best = field_from_json(j["best_field"]);
  CHECK(best.M == 16);
}
