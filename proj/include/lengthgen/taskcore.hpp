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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lengthgen {

enum class TaskKind { kParity, kCoinflip, kBoolprog };

std::string_view to_string(TaskKind kind);
// Throws DatasetError on an unknown name.
TaskKind parse_task_kind(std::string_view name);

// Length measures attached to every instance. Fields that do not apply to a
// task are left empty and omitted from serialized records.
struct LengthMetrics {
  std::int64_t num_steps = 0;
  std::int64_t num_tokens = 0;
  std::optional<std::int64_t> num_ones;     // parity / coinflip
  std::optional<std::int64_t> num_ops;      // boolprog
  std::optional<std::int64_t> graph_depth;  // boolprog

  friend bool operator==(const LengthMetrics&, const LengthMetrics&) = default;
};

// Names accepted wherever a metric is selected by name (grouping, CLI).
const std::vector<std::string>& metric_names();
std::optional<std::int64_t> metric_value(const LengthMetrics& metrics, std::string_view name);

struct TaskInstance {
  std::string id;
  TaskKind task = TaskKind::kParity;
  std::string split;
  std::string input_text;
  std::string scratchpad_target;
  std::string answer;  // "0"/"1" for parity-family tasks, "True"/"False" for boolprog
  LengthMetrics metrics;
  std::uint64_t seed = 0;

  friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
};

// Counter-based per-instance seed. For a fixed master seed the map
// index -> seed is a bijection on 64-bit integers, so seeds never collide.
std::uint64_t derive_seed(SeedSpec master, std::uint64_t index);

// FNV-1a; stable hash for string keys (request ids) that feed derive_seed.
std::uint64_t stable_hash(std::string_view text);

// Whitespace-delimited token count.
std::int64_t count_tokens(std::string_view text);

// Schema check for one record: metric presence per task and answer token.
// Throws DatasetError describing the first violation.
void check_record(const TaskInstance& instance);

// One JSON object per line, fixed key order. Throws DatasetError on a
// duplicate id or a record that cannot be serialized.
std::size_t write_dataset(std::span<const TaskInstance> instances, std::ostream& out);
std::size_t write_dataset_file(std::span<const TaskInstance> instances, const std::string& path);

std::string instance_to_json(const TaskInstance& instance);
TaskInstance instance_from_json(std::string_view line);

// Order-preserving. Throws DatasetError("line N: ...") on the first bad line.
std::vector<TaskInstance> read_dataset(std::istream& in);
std::vector<TaskInstance> read_dataset_file(const std::string& path);

}  // namespace lengthgen
