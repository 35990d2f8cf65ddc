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

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lengthgen/adapters.hpp"
#include "lengthgen/taskcore.hpp"

namespace lengthgen::harness {

enum class PromptStyle { kDirect, kScratchpad };

std::string_view to_string(PromptStyle style);
PromptStyle parse_style(std::string_view name);

// Blocks (header, exemplars, query) are joined by a blank line.
inline constexpr std::string_view kBlockSeparator = "\n\n";

struct PromptSpec {
  PromptStyle style = PromptStyle::kScratchpad;
  std::size_t shots = 0;
  std::vector<std::size_t> exemplar_lengths;  // shots entries
  std::string separator = "\n";              // between an input and its target
  std::optional<std::string> instruction_header;
};

// Answer as it appears in text: coin-flip uses yes (parity 0) / no (parity 1).
std::string surface_answer(TaskKind task, std::string_view canonical_answer);

// header, then "input + separator + target" per exemplar, then
// "query input + separator". Throws ConfigError on a task mismatch, a shot
// count that disagrees with PromptSpec, or a scratchpad exemplar without target.
std::string build_prompt(const PromptSpec& spec, std::span<const TaskInstance> exemplars,
                         const TaskInstance& query);

// Solved exemplars shaped like `like` (same task, padding width, program
// split), one per requested length.
std::vector<TaskInstance> make_exemplars(const TaskInstance& like,
                                         std::span<const std::size_t> lengths, std::uint64_t seed);

struct ParsedCompletion {
  std::optional<std::string> answer;  // canonical token
  std::vector<std::string> steps;     // canonical state tokens
};

// Total on arbitrary text. Scratchpad style reads states until the first
// line/token outside the task grammar; the answer is the last state read (or
// the first answer token when no state was read).
ParsedCompletion parse_completion(std::string_view text, TaskKind task, PromptStyle style);

struct EvalRecord {
  std::string instance_id;
  TaskKind task = TaskKind::kParity;
  std::string split;
  PromptStyle style = PromptStyle::kScratchpad;
  std::string prompt_text;
  std::string raw_completion;
  std::optional<std::string> parsed_answer;
  std::vector<bool> step_correct;
  bool final_correct = false;
  bool scored = false;
  std::string error;  // transport failure cause when unscored
  LengthMetrics metrics;

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

// Scores one completion against the instance's oracle trace (positional).
EvalRecord score_completion(const TaskInstance& instance, std::string prompt,
                            std::string completion, PromptStyle style);

struct EvalOptions {
  std::size_t parallelism = 1;
  int retries = 2;
  // 0 derives a budget from the oracle target length.
  std::int64_t max_tokens = 0;
  std::vector<std::string> stop = {std::string(kBlockSeparator)};
  double temperature = 0.0;
  const std::atomic<bool>* cancel = nullptr;
};

struct EvalRun {
  std::vector<EvalRecord> records;  // dataset order; only finished instances
  bool aborted = false;
  std::string abort_reason;
};

// Records come back in dataset order whatever the completion order. Adapter
// failures that survive the retries leave the record unscored, except an
// unavailable adapter, which aborts the run.
EvalRun run_eval(std::span<const TaskInstance> dataset, adapters::ModelAdapter& adapter,
                 const PromptSpec& spec, std::span<const TaskInstance> exemplars,
                 const EvalOptions& options = {});

// Results file: one record per line, plus a trailing marker line when the run
// was aborted.
std::string record_to_json(const EvalRecord& record);
EvalRecord record_from_json(std::string_view line);
void write_results(const EvalRun& run, std::ostream& out);
EvalRun read_results(std::istream& in);

struct AccuracyRow {
  std::int64_t value = 0;
  std::size_t n = 0;
  double final_acc = 0.0;
  std::optional<double> step_acc;  // absent for direct-style rows
  // prefix[k-1]: share of records whose first k steps are all correct,
  // for k up to the shortest trace in the row.
  std::vector<double> prefix;
  double mean_steps = 0.0;
};

struct AccuracyTable {
  std::string metric;
  std::vector<AccuracyRow> rows;  // ascending metric value
};

// Groups scored records by a LengthMetrics field. Throws ConfigError naming
// the available metrics when the metric is unknown or missing on a record.
AccuracyTable accuracy_by(std::span<const EvalRecord> records, std::string_view metric);

void write_table_csv(const AccuracyTable& table, std::ostream& out);

enum class FitModel { kPrefixGeometric, kParityClosedForm };
std::string_view to_string(FitModel model);
FitModel parse_fit_model(std::string_view name);

struct StepErrorFit {
  double epsilon_hat = 0.0;
  double residual = 0.0;  // root-mean-square error over fitted points
  FitModel model = FitModel::kPrefixGeometric;
};

// Least squares in accuracy space over rows with n >= 30 (at least 3 needed).
StepErrorFit fit_step_error(const AccuracyTable& table, FitModel model);

double parity_closed_form(double epsilon, double n);
double prefix_closed_form(double epsilon, double k);

struct Mismatch {
  std::string id;
  std::string field;
  std::string detail;
};

struct ValidationReport {
  std::size_t checked = 0;
  std::vector<Mismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Re-runs each task oracle from input_text (or, for shuffled programs, from
// the original program carried in scratchpad_target).
ValidationReport validate(std::span<const TaskInstance> dataset);

struct Solution {
  TaskKind task = TaskKind::kParity;
  std::string answer;  // surface form (yes/no for coin flips)
  std::string trace;
};

// Oracle answer and scratchpad for one rendered instance; the task is
// recognized from the text. Throws ParseError / SemanticError.
Solution solve_text(std::string_view text);

// SVG line chart: one series per (label, table) pair.
void write_chart_svg(std::span<const std::pair<std::string, AccuracyTable>> series,
                     std::ostream& out);

}  // namespace lengthgen::harness
