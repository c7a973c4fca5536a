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

#include "evacnet/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <utility>

namespace evacnet {
namespace {

using nlohmann::json;

const json& Field(const json& object, const std::string& key,
                  const std::string& path) {
  if (!object.is_object()) throw ParseError(path + ": expected an object");
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(path + ": missing field '" + key + "'");
  }
  return *it;
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double Number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path + ": expected a number");
  return value.get<double>();
}

int Integer(const json& value, const std::string& path) {
  const double x = Number(value, path);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ParseError(path + ": expected an integer");
  }
  return static_cast<int>(x);
}

const json& Array(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path + ": expected an array");
  return value;
}

double ParseDouble(std::string_view text, std::string_view what) {
  const std::string copy(text);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() ||
      !std::isfinite(value)) {
    throw InvalidInputError("bad " + std::string(what) + " '" + copy + "'");
  }
  return value;
}

int ParseInt(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidInputError("bad " + std::string(what) + " '" +
                            std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> SplitCommas(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const size_t comma = text.find(',');
    std::string_view part = text.substr(0, comma);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    parts.push_back(part);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return parts;
}

std::string LineColumn(std::string_view text, size_t byte) {
  size_t line = 1;
  size_t column = 1;
  for (size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(LineColumn(text, e.byte) + ": malformed JSON");
  }
  if (!root.is_object()) throw ParseError("top level: expected an object");

  const json& version = Field(root, "version", "");
  if (!version.is_string()) throw ParseError("version: expected a string");
  if (version.get<std::string>() != kFormatVersion) {
    throw ValidationError("version: unsupported '" +
                          version.get<std::string>() + "', expected '" +
                          std::string(kFormatVersion) + "'");
  }
  const double capacity = Number(Field(root, "capacity", ""), "capacity");
  if (!(capacity > 0)) throw ValidationError("capacity: must be positive");

  const json& vertices = Array(Field(root, "vertices", ""), "vertices");
  const int n = static_cast<int>(vertices.size());
  if (n == 0) throw ValidationError("vertices: need at least one vertex");
  std::vector<double> lo(n);
  std::vector<double> hi(n);
  std::vector<int> seen(n, -1);
  for (int i = 0; i < n; ++i) {
    const std::string path = "vertices[" + std::to_string(i) + "]";
    const json& record = vertices[i];
    const int id = Integer(Field(record, "id", path), Join(path, "id"));
    const double l = Number(Field(record, "lo", path), Join(path, "lo"));
    const double h = Number(Field(record, "hi", path), Join(path, "hi"));
    if (id < 0 || id >= n) {
      throw ValidationError(Join(path, "id") + ": must be in [0, " +
                            std::to_string(n - 1) + "]");
    }
    if (seen[id] >= 0) {
      throw ValidationError(Join(path, "id") + ": duplicate of vertices[" +
                            std::to_string(seen[id]) + "]");
    }
    seen[id] = i;
    if (l < 0) throw ValidationError(Join(path, "lo") + ": must be >= 0");
    if (l > h) throw ValidationError(path + ": lo exceeds hi");
    lo[id] = l;
    hi[id] = h;
  }

  const json& edge_list = Array(Field(root, "edges", ""), "edges");
  std::vector<Edge> edges;
  std::map<std::pair<int, int>, size_t> pairs;
  for (size_t i = 0; i < edge_list.size(); ++i) {
    const std::string path = "edges[" + std::to_string(i) + "]";
    const json& record = edge_list[i];
    Edge e;
    e.u = Integer(Field(record, "u", path), Join(path, "u"));
    e.v = Integer(Field(record, "v", path), Join(path, "v"));
    e.length = Number(Field(record, "length", path), Join(path, "length"));
    for (auto [end, name] : {std::pair{e.u, "u"}, std::pair{e.v, "v"}}) {
      if (end < 0 || end >= n) {
        throw ValidationError(Join(path, name) + ": no such vertex");
      }
    }
    if (e.u == e.v) throw ValidationError(path + ": self-loop");
    if (!(e.length > 0)) {
      throw ValidationError(Join(path, "length") + ": must be positive");
    }
    auto [it, fresh] =
        pairs.emplace(std::minmax(e.u, e.v), i);
    if (!fresh) {
      throw ValidationError(path + ": duplicate of edges[" +
                            std::to_string(it->second) + "]");
    }
    edges.push_back(e);
  }

  std::optional<Tree> tree;
  try {
    tree = Tree::Build(n, std::move(edges), capacity);
  } catch (const EvacError& e) {
    throw ValidationError(std::string("edges: ") + e.what());
  }

  std::optional<Scenario> scenario;
  if (auto it = root.find("scenario"); it != root.end() && !it->is_null()) {
    const json& list = Array(*it, "scenario");
    if (static_cast<int>(list.size()) != n) {
      throw ValidationError("scenario: expected " + std::to_string(n) +
                            " weights, got " + std::to_string(list.size()));
    }
    std::vector<double> w(n);
    for (int v = 0; v < n; ++v) {
      const std::string path = "scenario[" + std::to_string(v) + "]";
      w[v] = Number(list[v], path);
      if (w[v] < 0) throw ValidationError(path + ": must be >= 0");
    }
    scenario = Scenario(std::move(w));
  }
  return {std::move(*tree), IntervalProfile(std::move(lo), std::move(hi)),
          std::move(scenario)};
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin),
            std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Instance load_instance(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return parse_instance(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

nlohmann::ordered_json instance_to_json(const Instance& instance) {
  nlohmann::ordered_json out;
  out["version"] = kFormatVersion;
  out["capacity"] = instance.tree.capacity();
  out["vertices"] = nlohmann::ordered_json::array();
  for (VertexId v = 0; v < instance.tree.num_vertices(); ++v) {
    out["vertices"].push_back(
        {{"id", v}, {"lo", instance.profile.lo(v)}, {"hi", instance.profile.hi(v)}});
  }
  out["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : instance.tree.edges()) {
    out["edges"].push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  }
  if (instance.scenario) out["scenario"] = scenario_to_json(*instance.scenario);
  return out;
}

double round_offset(double value) {
  return std::strtod(format_number(value).c_str(), nullptr);
}

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value + 0.0);
  return buffer;
}

SinkLocation parse_sink(const Tree& tree, std::string_view text) {
  if (!text.empty() && (text.front() == 'e' || text.front() == 'E')) {
    const size_t sep = text.find_first_of(":@");
    if (sep == std::string_view::npos) {
      throw InvalidInputError("edge sink '" + std::string(text) +
                              "' needs an offset, as in e2:1.5");
    }
    const EdgeId e = ParseInt(text.substr(1, sep - 1), "edge id");
    if (e < 0 || e >= tree.num_edges()) {
      throw InvalidInputError("edge id " + std::to_string(e) + " out of range");
    }
    return SinkLocation::OnEdge(tree, e,
                                ParseDouble(text.substr(sep + 1), "offset"));
  }
  if (!text.empty() && (text.front() == 'v' || text.front() == 'V')) {
    text.remove_prefix(1);
  }
  const VertexId v = ParseInt(text, "vertex id");
  tree.CheckVertex(v);
  return SinkLocation::AtVertex(v);
}

Scenario parse_scenario(std::string_view text, int n) {
  std::vector<double> w;
  for (std::string_view part : SplitCommas(text)) {
    w.push_back(ParseDouble(part, "weight"));
  }
  if (static_cast<int>(w.size()) != n) {
    throw InvalidInputError("scenario needs " + std::to_string(n) +
                            " weights, got " + std::to_string(w.size()));
  }
  return Scenario(std::move(w));
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) return out;
  for (std::string_view part : SplitCommas(text)) {
    out.push_back(ParseInt(part, "integer"));
  }
  return out;
}

nlohmann::ordered_json sink_to_json(const SinkLocation& x) {
  if (x.is_vertex()) return {{"vertex", x.vertex()}};
  return {{"edge", x.edge()}, {"offset", round_offset(x.offset())}};
}

nlohmann::ordered_json placement_to_json(const Placement& placement) {
  nlohmann::ordered_json out;
  out["cut_edges"] = placement.partition.cut_edges;
  out["sinks"] = nlohmann::ordered_json::array();
  for (const SinkLocation& x : placement.sinks) {
    out["sinks"].push_back(sink_to_json(x));
  }
  out["blocks"] = nlohmann::ordered_json::array();
  for (const Block& block : placement.partition.blocks) {
    out["blocks"].push_back(block.vector());
  }
  return out;
}

nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  auto out = nlohmann::ordered_json::array();
  for (double w : s.weights()) out.push_back(w);
  return out;
}

Placement placement_from_json(const Tree& tree, const nlohmann::json& root) {
  if (root.is_object() && root.contains("placement")) {
    return placement_from_json(tree, root["placement"]);
  }
  const json& cut_list = Array(Field(root, "cut_edges", "placement"),
                               "placement.cut_edges");
  std::vector<EdgeId> cuts;
  for (size_t i = 0; i < cut_list.size(); ++i) {
    cuts.push_back(
        Integer(cut_list[i], "placement.cut_edges[" + std::to_string(i) + "]"));
  }
  const json& sink_list =
      Array(Field(root, "sinks", "placement"), "placement.sinks");
  std::vector<SinkLocation> sinks;
  for (size_t i = 0; i < sink_list.size(); ++i) {
    const std::string path = "placement.sinks[" + std::to_string(i) + "]";
    const json& record = sink_list[i];
    if (!record.is_object()) throw ParseError(path + ": expected an object");
    if (record.contains("vertex")) {
      const VertexId v = Integer(record["vertex"], Join(path, "vertex"));
      tree.CheckVertex(v);
      sinks.push_back(SinkLocation::AtVertex(v));
    } else {
      const EdgeId e = Integer(Field(record, "edge", path), Join(path, "edge"));
      const double t =
          Number(Field(record, "offset", path), Join(path, "offset"));
      if (e < 0 || e >= tree.num_edges()) {
        throw ValidationError(Join(path, "edge") + ": no such edge");
      }
      sinks.push_back(SinkLocation::OnEdge(tree, e, t));
    }
  }
  return MakePlacement(tree, std::move(cuts), std::move(sinks));
}

}  // namespace evacnet
