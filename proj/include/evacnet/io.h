// Copyright 2026 The evacnet Authors.
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

// JSON instance and placement formats. See docs/formats.md.

#ifndef EVACNET_IO_H_
#define EVACNET_IO_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "evacnet/evacuation.h"
#include "evacnet/scenarios.h"
#include "evacnet/tree.h"

namespace evacnet {

inline constexpr std::string_view kFormatVersion = "evacnet/1";

// Malformed JSON or a field of the wrong type.
class ParseError : public EvacError {
 public:
  using EvacError::EvacError;
};

// Well-formed input that describes an invalid instance.
class ValidationError : public EvacError {
 public:
  using EvacError::EvacError;
};

struct Instance {
  Tree tree;
  IntervalProfile profile;
  std::optional<Scenario> scenario;
};

Instance parse_instance(std::string_view text);
// Reads `path`, or stdin for "-".
Instance load_instance(const std::string& path);
std::string read_text(const std::string& path);

nlohmann::ordered_json instance_to_json(const Instance& instance);

// Rounds to 12 significant digits, the precision reports are printed with.
double round_offset(double value);
// Shortest decimal text of `value` after rounding to 12 significant digits.
std::string format_number(double value);

// "3" is vertex 3; "e2:1.5" is the point 1.5 from the first endpoint of
// edge 2.
SinkLocation parse_sink(const Tree& tree, std::string_view text);
// Comma separated weights, one per vertex.
Scenario parse_scenario(std::string_view text, int n);
// Comma separated integers; empty text gives an empty list.
std::vector<int> parse_int_list(std::string_view text);

nlohmann::ordered_json sink_to_json(const SinkLocation& x);
nlohmann::ordered_json placement_to_json(const Placement& placement);
nlohmann::ordered_json scenario_to_json(const Scenario& s);

// Accepts a placement object or any object holding one under "placement".
Placement placement_from_json(const Tree& tree, const nlohmann::json& json);

}  // namespace evacnet

#endif  // EVACNET_IO_H_
