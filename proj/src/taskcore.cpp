// Copyright 2026 The lengthgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lengthgen/taskcore.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "lengthgen/errors.hpp"

namespace lengthgen {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kParity:
      return "parity";
    case TaskKind::kCoinflip:
      return "coinflip";
    case TaskKind::kBoolprog:
      return "boolprog";
  }
  return "unknown";
}

TaskKind parse_task_kind(std::string_view name) {
  if (name == "parity") return TaskKind::kParity;
  if (name == "coinflip") return TaskKind::kCoinflip;
  if (name == "boolprog") return TaskKind::kBoolprog;
  throw DatasetError("unknown task '" + std::string(name) + "'");
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"num_steps", "num_tokens", "num_ones", "num_ops",
                                                 "graph_depth"};
  return names;
}

std::optional<std::int64_t> metric_value(const LengthMetrics& m, std::string_view name) {
  if (name == "num_steps") return m.num_steps;
  if (name == "num_tokens") return m.num_tokens;
  if (name == "num_ones") return m.num_ones;
  if (name == "num_ops") return m.num_ops;
  if (name == "graph_depth") return m.graph_depth;
  return std::nullopt;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(SeedSpec master, std::uint64_t index) {
  // mix64 is a bijection and index*odd + c is injective mod 2^64.
  return mix64(mix64(master.master_seed) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::int64_t count_tokens(std::string_view text) {
  std::int64_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

void check_record(const TaskInstance& inst) {
  const auto fail = [&](const std::string& what) {
    throw DatasetError("record '" + inst.id + "': " + what);
  };
  if (inst.id.empty()) fail("empty id");
  const LengthMetrics& m = inst.metrics;
  if (m.num_steps < 0 || m.num_tokens < 0) fail("negative metric");
  switch (inst.task) {
    case TaskKind::kParity:
    case TaskKind::kCoinflip:
      if (!m.num_ones) fail("missing num_ones");
      if (m.num_ops || m.graph_depth) fail("num_ops/graph_depth not allowed for parity tasks");
      if (*m.num_ones < 0 || *m.num_ones > m.num_steps) fail("num_ones out of range");
      if (inst.answer != "0" && inst.answer != "1") fail("answer must be \"0\" or \"1\"");
      break;
    case TaskKind::kBoolprog:
      if (!m.num_ops) fail("missing num_ops");
      if (!m.graph_depth) fail("missing graph_depth");
      if (m.num_ones) fail("num_ones not allowed for boolprog");
      if (*m.graph_depth < 0 || *m.graph_depth > *m.num_ops) fail("graph_depth out of range");
      if (inst.answer != "True" && inst.answer != "False")
        fail("answer must be \"True\" or \"False\"");
      break;
  }
}

namespace {

ordered_json to_json(const TaskInstance& inst) {
  ordered_json metrics = ordered_json::object();
  metrics["num_steps"] = inst.metrics.num_steps;
  metrics["num_tokens"] = inst.metrics.num_tokens;
  if (inst.metrics.num_ones) metrics["num_ones"] = *inst.metrics.num_ones;
  if (inst.metrics.num_ops) metrics["num_ops"] = *inst.metrics.num_ops;
  if (inst.metrics.graph_depth) metrics["graph_depth"] = *inst.metrics.graph_depth;

  ordered_json j = ordered_json::object();
  j["id"] = inst.id;
  j["task"] = std::string(to_string(inst.task));
  j["split"] = inst.split;
  j["input_text"] = inst.input_text;
  j["scratchpad_target"] = inst.scratchpad_target;
  j["answer"] = inst.answer;
  j["metrics"] = std::move(metrics);
  j["seed"] = inst.seed;
  return j;
}

const char* const kRecordKeys[] = {"id",     "task",    "split", "input_text", "scratchpad_target",
                                   "answer", "metrics", "seed"};

std::int64_t get_int(const ordered_json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw DatasetError(std::string("metric '") + key + "' is not an integer");
  return v.get<std::int64_t>();
}

TaskInstance from_json(const ordered_json& j) {
  if (!j.is_object()) throw DatasetError("record is not an object");
  for (const char* key : kRecordKeys) {
    if (!j.contains(key)) throw DatasetError(std::string("missing key '") + key + "'");
  }
  if (j.size() != std::size(kRecordKeys)) throw DatasetError("unexpected extra keys");

  TaskInstance inst;
  inst.id = j.at("id").get<std::string>();
  inst.task = parse_task_kind(j.at("task").get<std::string>());
  inst.split = j.at("split").get<std::string>();
  inst.input_text = j.at("input_text").get<std::string>();
  inst.scratchpad_target = j.at("scratchpad_target").get<std::string>();
  inst.answer = j.at("answer").get<std::string>();
  if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
    throw DatasetError("seed is not an integer");
  inst.seed = j.at("seed").get<std::uint64_t>();

  const auto& m = j.at("metrics");
  if (!m.is_object()) throw DatasetError("metrics is not an object");
  for (const auto& [key, value] : m.items()) {
    bool known = false;
    for (const auto& name : metric_names()) known = known || name == key;
    if (!known) throw DatasetError("unknown metric '" + key + "'");
  }
  if (!m.contains("num_steps") || !m.contains("num_tokens"))
    throw DatasetError("metrics require num_steps and num_tokens");
  inst.metrics.num_steps = get_int(m, "num_steps");
  inst.metrics.num_tokens = get_int(m, "num_tokens");
  if (m.contains("num_ones")) inst.metrics.num_ones = get_int(m, "num_ones");
  if (m.contains("num_ops")) inst.metrics.num_ops = get_int(m, "num_ops");
  if (m.contains("graph_depth")) inst.metrics.graph_depth = get_int(m, "graph_depth");
  check_record(inst);
  return inst;
}

}  // namespace

std::string instance_to_json(const TaskInstance& instance) {
  check_record(instance);
  try {
    return to_json(instance).dump();
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError("record '" + instance.id + "' cannot be serialized: " + e.what());
  }
}

TaskInstance instance_from_json(std::string_view line) {
  try {
    return from_json(ordered_json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(e.what());
  }
}

std::size_t write_dataset(std::span<const TaskInstance> instances, std::ostream& out) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> lines;
  lines.reserve(instances.size());
  // Everything is validated before the first byte is written.
  for (const auto& inst : instances) {
    if (!seen.insert(inst.id).second) throw DatasetError("duplicate id '" + inst.id + "'");
    lines.push_back(instance_to_json(inst));
  }
  for (const auto& line : lines) out << line << '\n';
  if (!out) throw DatasetError("write failed");
  return lines.size();
}

std::size_t write_dataset_file(std::span<const TaskInstance> instances, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot open '" + path + "' for writing");
  return write_dataset(instances, out);
}

std::vector<TaskInstance> read_dataset(std::istream& in) {
  std::vector<TaskInstance> result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      if (line.empty()) throw DatasetError("empty line");
      TaskInstance inst = instance_from_json(line);
      if (!seen.insert(inst.id).second) throw DatasetError("duplicate id '" + inst.id + "'");
      result.push_back(std::move(inst));
    } catch (const DatasetError& e) {
      throw DatasetError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return result;
}

std::vector<TaskInstance> read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open '" + path + "'");
  return read_dataset(in);
}

}  // namespace lengthgen
