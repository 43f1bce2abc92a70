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

// Serialization: versioned JSON for instances and results, CSV exports, and
// scenario specs from TOML-style or JSON config files.

#ifndef EICIC_IO_HPP
#define EICIC_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "eicic/bias.hpp"
#include "eicic/model.hpp"
#include "eicic/scenario.hpp"
#include "eicic/solver.hpp"

namespace eicic::io {

using Json = nlohmann::json;

inline constexpr const char* kInstanceSchema = "eicic.instance/1";
inline constexpr const char* kAllocationSchema = "eicic.allocation/1";
inline constexpr const char* kBiasSchema = "eicic.bias/1";
inline constexpr const char* kPatternSchema = "eicic.pattern/1";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json instance_to_json(const NetworkInstance& instance);
// Validates the result; malformed documents throw IoError.
NetworkInstance instance_from_json(const Json& doc);

// -inf utilities are written as null and read back as -inf.
Json allocation_to_json(const Allocation& allocation);
Allocation allocation_from_json(const Json& doc);

Json bias_to_json(const bias::BiasAssignment& assignment);
Json pattern_to_json(const bias::AbsPattern& pattern);

// Flat table: ue, association, x, y_abs, y_nonabs, throughput.
void write_allocation_csv(std::ostream& out, const Allocation& allocation);

// ue_id, x, y, best_macro, best_pico, sinr_macro_db, sinr_pico_abs_db,
// sinr_pico_nonabs_db. Missing pico entries are empty fields.
void write_geometry_csv(std::ostream& out, const scenario::Snapshot& snapshot);

// iteration, dual_cost, averaged_primal_utility.
void write_trace_csv(std::ostream& out, const std::vector<solver::TracePoint>& trace);

// Spec keys mirror the ScenarioSpec fields. Nested blocks are [pathloss],
// [rate] and [hotspots]; hotspots, explicit sites and MCS tables are given as
// parallel arrays (hotspots.x, hotspots.y, hotspots.radius_m, ...). Unknown
// keys are rejected.
scenario::ScenarioSpec spec_from_toml(std::istream& in);
scenario::ScenarioSpec spec_from_json(const Json& doc);
// Picks the parser from the extension: .json is JSON, anything else TOML.
scenario::ScenarioSpec read_spec(const std::filesystem::path& path);
Json spec_to_json(const scenario::ScenarioSpec& spec);

Json read_json(const std::filesystem::path& path);
// Two-space indented dump followed by a newline.
void write_json(const std::filesystem::path& path, const Json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace eicic::io

#endif  // EICIC_IO_HPP
