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

#include "lengthgen/boolprog.hpp"
#include "lengthgen/errors.hpp"
#include "lengthgen/harness.hpp"
#include "lengthgen/parity.hpp"
#include "text_util.hpp"

namespace lengthgen::harness {

namespace {

struct Expected {
  std::string target;
  std::string answer;
  LengthMetrics metrics;
};

Expected expect_parity(const TaskInstance& inst) {
  Expected e;
  parity::BitString bits;
  if (inst.task == TaskKind::kCoinflip) {
    bits = parity::parse_coinflip(inst.input_text);
    e.target = parity::coinflip_target_text(parity::make_scratchpad(bits).states);
  } else {
    const auto parsed = parity::parse_symbolic_input(inst.input_text);
    bits = parsed.bits;
    if (parsed.padded) {
      const auto padded = parity::make_padded_at(bits, bits.size() + parsed.left_pad + parsed.right_pad,
                                                 parsed.left_pad);
      e.target = parity::padded_target_text(padded);
    } else {
      e.target = parity::symbolic_target_text(parity::make_scratchpad(bits).states);
    }
  }
  e.answer = parity::parity_oracle(bits) ? "1" : "0";
  e.metrics.num_steps = static_cast<std::int64_t>(bits.size());
  e.metrics.num_tokens = count_tokens(inst.input_text);
  e.metrics.num_ones = static_cast<std::int64_t>(std::count(bits.begin(), bits.end(), 1));
  return e;
}

std::vector<std::string> sorted_lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto line : detail::split_lines(text)) out.emplace_back(line);
  std::sort(out.begin(), out.end());
  return out;
}

Expected expect_boolprog(const TaskInstance& inst, std::vector<Mismatch>& mismatches) {
  const bool shuffled = inst.split.find("shuffled") != std::string::npos;
  // Shuffled text is not required to compute the label; the original program
  // travels in the scratchpad target.
  const auto program = boolprog::parse_program(
      shuffled ? boolprog::strip_comments(inst.scratchpad_target) : inst.input_text);
  if (shuffled && sorted_lines(inst.input_text) != sorted_lines(boolprog::render_program(program)))
    mismatches.push_back({inst.id, "input_text", "shuffled lines are not a permutation of the source program"});
  Expected e;
  e.target = boolprog::scratchpad_annotate(program);
  e.answer = boolprog::exec_program(program).answer ? "True" : "False";
  e.metrics.num_steps = static_cast<std::int64_t>(program.ops.size());
  e.metrics.num_tokens = count_tokens(inst.input_text);
  e.metrics.num_ops = static_cast<std::int64_t>(boolprog::num_ops(program));
  e.metrics.graph_depth = static_cast<std::int64_t>(boolprog::comp_graph_depth(program));
  return e;
}

}  // namespace

ValidationReport validate(std::span<const TaskInstance> dataset) {
  ValidationReport report;
  for (const auto& inst : dataset) {
    ++report.checked;
    Expected e;
    try {
      e = inst.task == TaskKind::kBoolprog ? expect_boolprog(inst, report.mismatches) : expect_parity(inst);
    } catch (const Error& err) {
      report.mismatches.push_back({inst.id, "input_text", err.what()});
      continue;
    }
    if (inst.answer != e.answer)
      report.mismatches.push_back({inst.id, "answer", "stored " + inst.answer + ", oracle " + e.answer});
    if (inst.scratchpad_target != e.target)
      report.mismatches.push_back({inst.id, "scratchpad_target", "differs from the oracle trace"});
    if (inst.metrics != e.metrics) report.mismatches.push_back({inst.id, "metrics", "differ from recomputed metrics"});
  }
  return report;
}

Solution solve_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError(0, "empty instance");
  const std::string_view body = text.substr(first);

  Solution s;
  if (body.starts_with(parity::kPrefix)) {
    const auto parsed = parity::parse_symbolic_input(body);
    const auto pad = parity::make_scratchpad(parsed.bits);
    s.answer = pad.answer ? "1" : "0";
    s.trace = parsed.padded ? parity::padded_target_text(parity::make_padded_at(
                                  parsed.bits, parsed.bits.size() + parsed.left_pad + parsed.right_pad, parsed.left_pad))
                            : parity::symbolic_target_text(pad.states);
  } else if (body.starts_with(parity::kCoinPreamble)) {
    s.task = TaskKind::kCoinflip;
    const auto bits = parity::parse_coinflip(body);
    const auto pad = parity::make_scratchpad(bits);
    s.answer = surface_answer(TaskKind::kCoinflip, pad.answer ? "1" : "0");
    s.trace = parity::coinflip_target_text(pad.states);
  } else {
    s.task = TaskKind::kBoolprog;
    const auto program = boolprog::parse_program(body);
    s.answer = boolprog::exec_program(program).answer ? "True" : "False";
    s.trace = boolprog::scratchpad_annotate(program);
  }
  return s;
}

}  // namespace lengthgen::harness
