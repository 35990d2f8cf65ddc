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

#include <algorithm>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "lengthgen/errors.hpp"
#include "lengthgen/harness.hpp"

namespace lengthgen::harness {

using json = nlohmann::ordered_json;

EvalRecord score_completion(const TaskInstance& instance, std::string prompt, std::string completion,
                            PromptStyle style) {
  EvalRecord r;
  r.instance_id = instance.id;
  r.task = instance.task;
  r.split = instance.split;
  r.style = style;
  r.prompt_text = std::move(prompt);
  r.raw_completion = std::move(completion);
  r.metrics = instance.metrics;
  r.scored = true;

  const ParsedCompletion parsed = parse_completion(r.raw_completion, instance.task, style);
  r.parsed_answer = parsed.answer;
  r.final_correct = parsed.answer && *parsed.answer == instance.answer;
  if (style == PromptStyle::kScratchpad) {
    const auto expected =
        parse_completion(instance.scratchpad_target, instance.task, PromptStyle::kScratchpad).steps;
    const std::size_t n = std::min(expected.size(), parsed.steps.size());
    for (std::size_t i = 0; i < n; ++i) r.step_correct.push_back(parsed.steps[i] == expected[i]);
  }
  return r;
}

namespace {

std::int64_t token_budget(const TaskInstance& inst, PromptStyle style) {
  if (style == PromptStyle::kDirect) return 16;
  return 2 * count_tokens(inst.scratchpad_target) + 16;
}

}  // namespace

EvalRun run_eval(std::span<const TaskInstance> dataset, adapters::ModelAdapter& adapter,
                 const PromptSpec& spec, std::span<const TaskInstance> exemplars,
                 const EvalOptions& options) {
  using adapters::AdapterError;
  const std::size_t n = dataset.size();
  std::vector<std::optional<EvalRecord>> slots(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex mu;
  std::string abort_reason;
  std::exception_ptr failure;

  const auto worker = [&] {
    for (;;) {
      if (abort.load() || (options.cancel && options.cancel->load())) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const TaskInstance& inst = dataset[i];
      try {
        adapters::CompletionRequest req;
        req.id = inst.id;
        req.prompt = build_prompt(spec, exemplars, inst);
        req.max_tokens = options.max_tokens > 0 ? options.max_tokens : token_budget(inst, spec.style);
        req.stop = options.stop;
        req.temperature = options.temperature;
        for (int attempt = 0;; ++attempt) {
          try {
            auto resp = adapter.complete(req);
            slots[i] = score_completion(inst, req.prompt, std::move(resp.completion), spec.style);
            break;
          } catch (const AdapterError& e) {
            if (e.retryable() && attempt < options.retries) continue;
            if (e.kind() == AdapterError::Kind::kUnavailable) {
              std::lock_guard lock(mu);
              if (!abort.exchange(true)) abort_reason = e.what();
              return;
            }
            EvalRecord r;
            r.instance_id = inst.id;
            r.task = inst.task;
            r.split = inst.split;
            r.style = spec.style;
            r.prompt_text = req.prompt;
            r.metrics = inst.metrics;
            r.scored = false;
            r.error = e.what();
            slots[i] = std::move(r);
            break;
          }
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        abort.store(true);
        return;
      }
    }
  };

  const std::size_t threads =
      std::max<std::size_t>(1, std::min({options.parallelism, adapter.parallelism(), n == 0 ? 1 : n}));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  EvalRun run;
  for (auto& slot : slots) {
    if (slot) run.records.push_back(std::move(*slot));
  }
  if (abort.load()) {
    run.aborted = true;
    run.abort_reason = abort_reason;
  } else if (run.records.size() != n) {
    run.aborted = true;
    run.abort_reason = "cancelled";
  }
  return run;
}

std::string record_to_json(const EvalRecord& r) {
  json metrics = json::object();
  metrics["num_steps"] = r.metrics.num_steps;
  metrics["num_tokens"] = r.metrics.num_tokens;
  if (r.metrics.num_ones) metrics["num_ones"] = *r.metrics.num_ones;
  if (r.metrics.num_ops) metrics["num_ops"] = *r.metrics.num_ops;
  if (r.metrics.graph_depth) metrics["graph_depth"] = *r.metrics.graph_depth;

  json j = json::object();
  j["instance_id"] = r.instance_id;
  j["task"] = std::string(to_string(r.task));
  j["split"] = r.split;
  j["style"] = std::string(to_string(r.style));
  j["prompt_text"] = r.prompt_text;
  j["raw_completion"] = r.raw_completion;
  j["parsed_answer"] = r.parsed_answer ? json(*r.parsed_answer) : json(nullptr);
  j["step_correct"] = r.step_correct;
  j["final_correct"] = r.final_correct;
  j["scored"] = r.scored;
  j["error"] = r.error;
  j["metrics"] = std::move(metrics);
  // Completions are arbitrary model output; invalid UTF-8 is replaced.
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

EvalRecord record_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    EvalRecord r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.task = parse_task_kind(j.at("task").get<std::string>());
    r.split = j.at("split").get<std::string>();
    r.style = parse_style(j.at("style").get<std::string>());
    r.prompt_text = j.at("prompt_text").get<std::string>();
    r.raw_completion = j.at("raw_completion").get<std::string>();
    if (!j.at("parsed_answer").is_null()) r.parsed_answer = j.at("parsed_answer").get<std::string>();
    r.step_correct = j.at("step_correct").get<std::vector<bool>>();
    r.final_correct = j.at("final_correct").get<bool>();
    r.scored = j.at("scored").get<bool>();
    r.error = j.value("error", std::string());
    const auto& m = j.at("metrics");
    r.metrics.num_steps = m.at("num_steps").get<std::int64_t>();
    r.metrics.num_tokens = m.at("num_tokens").get<std::int64_t>();
    if (m.contains("num_ones")) r.metrics.num_ones = m.at("num_ones").get<std::int64_t>();
    if (m.contains("num_ops")) r.metrics.num_ops = m.at("num_ops").get<std::int64_t>();
    if (m.contains("graph_depth")) r.metrics.graph_depth = m.at("graph_depth").get<std::int64_t>();
    if (r.final_correct && !r.scored) throw DatasetError("final_correct set on an unscored record");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(e.what());
  }
}

void write_results(const EvalRun& run, std::ostream& out) {
  for (const auto& r : run.records) out << record_to_json(r) << '\n';
  if (run.aborted) {
    json marker = json::object();
    marker["partial"] = true;
    marker["reason"] = run.abort_reason;
    out << marker.dump() << '\n';
  }
}

EvalRun read_results(std::istream& in) {
  EvalRun run;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      if (line.starts_with("{\"partial\"")) {
        const json j = json::parse(line);
        run.aborted = true;
        run.abort_reason = j.value("reason", std::string());
        continue;
      }
      run.records.push_back(record_from_json(line));
    } catch (const std::exception& e) {
      throw DatasetError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return run;
}

}  // namespace lengthgen::harness
