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

#include <cctype>

#include "lengthgen/boolprog.hpp"
#include "lengthgen/errors.hpp"
#include "lengthgen/harness.hpp"
#include "lengthgen/parity.hpp"
#include "lengthgen/rng.hpp"
#include "text_util.hpp"

namespace lengthgen::harness {

std::string_view to_string(PromptStyle style) {
  return style == PromptStyle::kDirect ? "direct" : "scratchpad";
}

PromptStyle parse_style(std::string_view name) {
  if (name == "direct") return PromptStyle::kDirect;
  if (name == "scratchpad") return PromptStyle::kScratchpad;
  throw ConfigError("unknown prompt style '" + std::string(name) + "' (direct, scratchpad)");
}

std::string surface_answer(TaskKind task, std::string_view answer) {
  if (task == TaskKind::kCoinflip) return answer == "1" ? "no" : "yes";
  return std::string(answer);
}

std::string build_prompt(const PromptSpec& spec, std::span<const TaskInstance> exemplars,
                         const TaskInstance& query) {
  if (spec.shots != spec.exemplar_lengths.size())
    throw ConfigError("prompt spec has " + std::to_string(spec.shots) + " shots but " +
                      std::to_string(spec.exemplar_lengths.size()) + " exemplar lengths");
  if (exemplars.size() != spec.shots)
    throw ConfigError("prompt spec wants " + std::to_string(spec.shots) + " exemplars, got " +
                      std::to_string(exemplars.size()));
  std::string out;
  const auto append_block = [&](const std::string& block) {
    if (!out.empty()) out += kBlockSeparator;
    out += block;
  };
  if (spec.instruction_header && !spec.instruction_header->empty()) append_block(*spec.instruction_header);
  for (const auto& ex : exemplars) {
    if (ex.task != query.task)
      throw ConfigError("exemplar '" + ex.id + "' is a " + std::string(to_string(ex.task)) +
                        " instance but the query is " + std::string(to_string(query.task)));
    if (spec.style == PromptStyle::kScratchpad) {
      if (ex.scratchpad_target.empty())
        throw ConfigError("exemplar '" + ex.id + "' has no scratchpad target");
      append_block(ex.input_text + spec.separator + ex.scratchpad_target);
    } else {
      append_block(ex.input_text + spec.separator + surface_answer(ex.task, ex.answer));
    }
  }
  append_block(query.input_text + spec.separator);
  return out;
}

std::vector<TaskInstance> make_exemplars(const TaskInstance& like, std::span<const std::size_t> lengths,
                                         std::uint64_t seed) {
  std::vector<TaskInstance> out;
  const std::uint64_t stream = derive_seed({seed}, ~std::uint64_t{0});
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const std::uint64_t s = derive_seed({stream}, i);
    const std::size_t len = lengths[i];
    const std::string id = "exemplar-" + std::to_string(i);
    if (len == 0) throw ConfigError("exemplar lengths must be positive");
    if (like.task == TaskKind::kBoolprog) {
      boolprog::GenConfig cfg;
      cfg.split = boolprog::parse_program(like.input_text).split;
      if (like.split.find("diverse") != std::string::npos) cfg.split = boolprog::Split::kDiverse;
      cfg.min_ops = cfg.max_ops = len;
      const auto program = boolprog::gen_program(cfg, s);
      const bool shuffled = like.split.find("shuffled") != std::string::npos;
      out.push_back(shuffled ? boolprog::shuffle_ops(program, derive_seed({s}, 1), id, like.split)
                             : boolprog::make_boolprog_instance(program, id, like.split, s));
      continue;
    }
    Rng rng(s);
    parity::BitString bits(len);
    for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    if (like.task == TaskKind::kCoinflip) {
      out.push_back(parity::make_parity_instance(bits, parity::ParityFormat::kCoinflip, id, like.split, s));
      continue;
    }
    const auto parsed = parity::parse_symbolic_input(like.input_text);
    if (parsed.padded) {
      const std::size_t width = parsed.bits.size() + parsed.left_pad + parsed.right_pad;
      if (len > width) throw ConfigError("exemplar length exceeds the padded width");
      out.push_back(parity::make_parity_instance(bits, parity::ParityFormat::kPadded, id, like.split, s, width));
    } else {
      out.push_back(parity::make_parity_instance(bits, parity::ParityFormat::kSymbolic, id, like.split, s));
    }
  }
  return out;
}

namespace {

std::optional<std::string> direct_answer(std::string_view text, TaskKind task) {
  const auto tokens = detail::split_ws(text);
  if (tokens.empty()) return std::nullopt;
  std::string tok(tokens.front());
  while (!tok.empty() && (tok.back() == '.' || tok.back() == ',' || tok.back() == '!')) tok.pop_back();
  switch (task) {
    case TaskKind::kParity:
      if (tok == "0" || tok == "1") return tok;
      return std::nullopt;
    case TaskKind::kCoinflip: {
      for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (tok == "yes") return "0";
      if (tok == "no") return "1";
      return std::nullopt;
    }
    case TaskKind::kBoolprog:
      if (tok == "True" || tok == "False") return tok;
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::string> coin_state(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0) return std::nullopt;
  const std::string_view rest = line.substr(i);
  if (rest == ". The coin is heads up.") return "0";
  if (rest == ". The coin is tails up.") return "1";
  return std::nullopt;
}

bool is_print_line(std::string_view line) {
  return line.size() == 8 && line.starts_with("print(") && line.back() == ')' && line[6] >= 'a' &&
         line[6] <= 'z';
}

}  // namespace

ParsedCompletion parse_completion(std::string_view text, TaskKind task, PromptStyle style) {
  ParsedCompletion out;
  if (style == PromptStyle::kDirect) {
    out.answer = direct_answer(text, task);
    return out;
  }
  std::optional<std::string> printed;
  switch (task) {
    case TaskKind::kParity:
      for (auto tok : detail::split_ws(text)) {
        if (tok == parity::kPadToken) continue;
        if (tok != "0" && tok != "1") break;
        out.steps.emplace_back(tok);
      }
      break;
    case TaskKind::kCoinflip:
      for (auto raw : detail::split_lines(text)) {
        const auto line = detail::trim(raw);
        if (line.empty()) continue;
        auto state = coin_state(line);
        if (!state) break;
        out.steps.push_back(*state);
      }
      break;
    case TaskKind::kBoolprog: {
      bool awaiting_comment = false;
      bool after_print = false;
      for (auto raw : detail::split_lines(text)) {
        const auto line = detail::trim(raw);
        if (line.empty()) continue;
        if (auto comment = boolprog::parse_comment_line(line)) {
          if (after_print) {
            printed = comment->second ? "True" : "False";
            break;
          }
          if (!awaiting_comment) break;
          out.steps.emplace_back(comment->second ? "True" : "False");
          awaiting_comment = false;
          continue;
        }
        if (after_print) break;
        if (is_print_line(line)) {
          after_print = true;
          continue;
        }
        if (!boolprog::parse_op_line(line)) break;
        awaiting_comment = true;
      }
      break;
    }
  }
  if (printed) {
    out.answer = printed;
  } else if (!out.steps.empty()) {
    out.answer = out.steps.back();
  } else {
    out.answer = direct_answer(text, task);
  }
  return out;
}

}  // namespace lengthgen::harness
