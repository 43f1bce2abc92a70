// Copyright 2026 The eicic Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "eicic/cli.hpp"
#include "eicic/io.hpp"

namespace fs = std::filesystem;
using eicic::cli::run;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("eicic_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_spec(const fs::path& path) {
  std::ofstream(path) << "macro_count = 2\npico_count = 1\nue_count = 12\n"
                         "area_width_km = 0.8\narea_height_km = 0.8\n";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("a missing seed is a usage error") {
  const Result r = call({"oracle-check", "--trials", "1"});
  CHECK(r.status == eicic::cli::kUsage);
  CHECK(r.err.rfind("error: usage: ", 0) == 0);
}

TEST_CASE("unknown commands and schemes are usage errors") {
  CHECK(call({"frobnicate", "--seed", "1"}).status == eicic::cli::kUsage);
  const fs::path dir = scratch("scheme");
  write_spec(dir / "s.toml");
  const Result r = call({"evaluate", "--spec", (dir / "s.toml").string(), "--scheme", "best",
                         "--seed", "1", "--out-dir", dir.string()});
  CHECK(r.status == eicic::cli::kUsage);
}

TEST_CASE("unreadable inputs are config errors") {
  const fs::path dir = scratch("config");
  const Result r = call({"solve", "--instance", (dir / "none.json").string(), "--seed", "1"});
  CHECK(r.status == eicic::cli::kConfig);
  CHECK(r.err.rfind("error: config: ", 0) == 0);
  std::ofstream(dir / "bad.toml") << "macro_count = 2\nwhatever = 1\n";
  CHECK(call({"generate", "--spec", (dir / "bad.toml").string(), "--seed", "1"}).status ==
        eicic::cli::kConfig);
}

TEST_CASE("oversized oracle instances are size errors") {
  const fs::path dir = scratch("size");
  const Result r = call({"oracle-check", "--trials", "1", "--max-ues", "40", "--max-macros", "3",
                         "--max-picos", "3", "--seed", "2", "--out-dir", dir.string()});
  CHECK(r.status == eicic::cli::kSize);
  CHECK(r.err.rfind("error: size: ", 0) == 0);
}

TEST_CASE("generate then solve") {
  const fs::path dir = scratch("solve");
  write_spec(dir / "s.toml");
  REQUIRE(call({"generate", "--spec", (dir / "s.toml").string(), "--seed", "4", "--out-dir",
                (dir / "g").string()})
              .status == 0);
  CHECK(fs::exists(dir / "g" / "geometry.csv"));
  const Result r = call({"solve", "--instance", (dir / "g" / "instance.json").string(), "--seed",
                         "7", "--epsilon", "0.05", "--max-iterations", "20000", "--trace",
                         "--out-dir", (dir / "s").string()});
  REQUIRE(r.status == 0);
  for (const char* f : {"allocation.json", "allocation.csv", "bias.json", "pattern.json",
                        "solve.json", "trace.csv"}) {
    CHECK(fs::exists(dir / "s" / f));
  }
  const auto pattern = eicic::io::read_json(dir / "s" / "pattern.json");
  CHECK(pattern["schema"] == eicic::io::kPatternSchema);
}

TEST_CASE("nsf overrides the scenario file") {
  const fs::path dir = scratch("nsf");
  write_spec(dir / "s.toml");
  REQUIRE(call({"generate", "--spec", (dir / "s.toml").string(), "--seed", "4", "--nsf", "10",
                "--out-dir", dir.string()})
              .status == 0);
  CHECK(eicic::io::read_json(dir / "instance.json")["n_sf"] == 10);
}

TEST_CASE("oracle check prints its verdict") {
  const fs::path dir = scratch("oracle");
  const Result r = call({"oracle-check", "--trials", "3", "--seed", "1", "--max-iterations",
                         "20000", "--out-dir", dir.string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("approximation factor 2.2 holds 3/3") != std::string::npos);
  CHECK(r.out.find("max gap ") != std::string::npos);
  CHECK(r.out.find("verdict PASS") != std::string::npos);
  CHECK(fs::exists(dir / "oracle_check.json"));
}

TEST_CASE("evaluate from an instance and help") {
  const fs::path dir = scratch("evaluate");
  write_spec(dir / "s.toml");
  REQUIRE(call({"generate", "--spec", (dir / "s.toml").string(), "--seed", "5", "--out-dir",
                dir.string()})
              .status == 0);
  const Result r = call({"evaluate", "--instance", (dir / "instance.json").string(), "--seed",
                         "5", "--max-iterations", "20000", "--out-dir", (dir / "e").string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("no-pico") != std::string::npos);
  CHECK(fs::exists(dir / "e" / "summary.json"));
  const Result both = call({"evaluate", "--instance", (dir / "instance.json").string(), "--spec",
                            (dir / "s.toml").string(), "--seed", "5"});
  CHECK(both.status == eicic::cli::kUsage);
  const Result help = call({"--help"});
  CHECK(help.status == 0);
  CHECK(help.out.find("oracle-check") != std::string::npos);
}

}  // TEST_SUITE
