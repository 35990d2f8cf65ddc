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

#include "lengthgen/parity.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>

#include "lengthgen/errors.hpp"
#include "text_util.hpp"

namespace lengthgen::parity {

namespace {

std::string bit_token(std::uint8_t b) { return b ? "1" : "0"; }

std::string instance_id(TaskKind task, const std::string& split, std::size_t index) {
  std::ostringstream os;
  os << to_string(task) << '-' << split << '-' << std::setw(6) << std::setfill('0') << index;
  return os.str();
}

}  // namespace

std::uint8_t parity_oracle(std::span<const std::uint8_t> bits) {
  std::uint8_t p = 0;
  for (auto b : bits) p ^= (b & 1);
  return p;
}

ParityScratchpad make_scratchpad(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw Error("make_scratchpad: empty bit string");
  ParityScratchpad pad;
  pad.states.reserve(bits.size());
  std::uint8_t state = 0;
  for (auto b : bits) {
    state ^= (b & 1);
    pad.states.push_back(state);
  }
  pad.answer = state;
  return pad;
}

PaddedScratchpad make_padded_at(std::span<const std::uint8_t> bits, std::size_t total_width,
                                std::size_t left_pad) {
  if (total_width < bits.size())
    throw ConfigError("padded width " + std::to_string(total_width) + " is shorter than " +
                      std::to_string(bits.size()) + " bits");
  if (left_pad > total_width - bits.size()) throw ConfigError("left padding exceeds slack");
  const ParityScratchpad pad = make_scratchpad(bits);
  PaddedScratchpad out;
  out.total_width = total_width;
  out.left_pad = left_pad;
  out.right_pad = total_width - bits.size() - left_pad;
  out.padded_input_tokens.assign(total_width, std::string(kPadToken));
  out.padded_state_tokens.assign(total_width, std::string(kPadToken));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out.padded_input_tokens[left_pad + i] = bit_token(bits[i]);
    out.padded_state_tokens[left_pad + i] = bit_token(pad.states[i]);
  }
  return out;
}

PaddedScratchpad make_padded(std::span<const std::uint8_t> bits, std::size_t total_width,
                             std::uint64_t seed) {
  if (total_width < bits.size())
    throw ConfigError("padded width " + std::to_string(total_width) + " is shorter than " +
                      std::to_string(bits.size()) + " bits");
  Rng rng(seed);
  const auto slack = static_cast<std::int64_t>(total_width - bits.size());
  return make_padded_at(bits, total_width, static_cast<std::size_t>(rng.uniform_int(0, slack)));
}

MaskedStepView make_masked_step(std::span<const std::uint8_t> bits,
                                const ParityScratchpad& scratchpad, std::size_t step_index,
                                MaskMode mode) {
  if (step_index >= bits.size())
    throw Error("step index " + std::to_string(step_index) + " out of range for " +
                std::to_string(bits.size()) + " bits");
  if (scratchpad.states != make_scratchpad(bits).states)
    throw Error("scratchpad does not belong to the given bits");

  MaskedStepView view;
  view.step_index = step_index;
  view.mode = mode;
  const bool mask_input = mode == MaskMode::kMaskInput || mode == MaskMode::kMaskBoth;
  const bool mask_states = mode == MaskMode::kMaskScratchpad || mode == MaskMode::kMaskBoth;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    view.masked_input_tokens.push_back(mask_input && i != step_index ? std::string(kMaskToken)
                                                                     : bit_token(bits[i]));
  }
  for (std::size_t i = 0; i < step_index; ++i) {
    view.masked_prior_states.push_back(mask_states && i + 1 != step_index
                                           ? std::string(kMaskToken)
                                           : bit_token(scratchpad.states[i]));
  }
  return view;
}

const std::vector<std::string>& given_names() {
  static const std::vector<std::string> names = {
      "Ada",    "Bo",     "Carlos", "Dana",  "Elif",   "Farid", "Grace", "Hiro",  "Ines",
      "Jamal",  "Kira",   "Liam",   "Mei",   "Nadia",  "Omar",  "Priya", "Quinn", "Rosa",
      "Sven",   "Tariq",  "Uma",    "Viktor", "Wen",   "Ximena", "Yusuf", "Zoe",  "Amara",
      "Bruno",  "Chloe",  "Diego",  "Emma",  "Felix",  "Gita",  "Hugo",  "Ivan",  "Julia",
      "Kenji",  "Lena",   "Mateo",  "Nora",  "Oscar",  "Paula", "Rafael", "Sara", "Tomas",
      "Valeria"};
  return names;
}

std::vector<std::string> draw_names(std::size_t count, Rng& rng) {
  const auto& pool = given_names();
  std::vector<std::string> out;
  out.reserve(count);
  std::int64_t previous = -1;
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t pick;
    if (previous < 0) {
      pick = rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1);
    } else {
      // Draw from the pool minus the previous name.
      pick = rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 2);
      if (pick >= previous) ++pick;
    }
    out.push_back(pool[static_cast<std::size_t>(pick)]);
    previous = pick;
  }
  return out;
}

std::string render_coinflip(std::span<const std::uint8_t> bits,
                            std::span<const std::string> names) {
  if (bits.empty()) throw Error("render_coinflip: empty bit string");
  if (names.size() != bits.size()) throw Error("render_coinflip: need one name per step");
  std::string out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(bits.size() - i) + ". Then " + names[i] +
           (bits[i] ? " flips." : " doesn't flip.");
  }
  return out;
}

std::string render_coinflip(std::span<const std::uint8_t> bits, std::uint64_t seed) {
  Rng rng(seed);
  const auto names = draw_names(bits.size(), rng);
  return render_coinflip(bits, names);
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string symbolic_input_text(std::span<const std::uint8_t> bits) {
  std::string out(kPrefix);
  for (auto b : bits) out += ' ' + bit_token(b);
  out += ' ';
  out += kSuffix;
  return out;
}

std::string symbolic_target_text(std::span<const std::uint8_t> states) {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += ' ';
    out += bit_token(states[i]);
  }
  return out;
}

std::string padded_input_text(const PaddedScratchpad& padded) {
  return std::string(kPrefix) + ' ' + join_tokens(padded.padded_input_tokens) + ' ' +
         std::string(kSuffix);
}

std::string padded_target_text(const PaddedScratchpad& padded) {
  return join_tokens(padded.padded_state_tokens);
}

std::string coinflip_input_text(std::span<const std::uint8_t> bits, std::uint64_t seed) {
  return std::string(kCoinPreamble) + '\n' + render_coinflip(bits, seed) + '\n' +
         std::string(kCoinQuestion);
}

std::string coinflip_target_text(std::span<const std::uint8_t> states) {
  std::string out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(states.size() - i) + ". The coin is " +
           (states[i] ? "tails" : "heads") + " up.";
  }
  return out;
}

ParsedParityInput parse_symbolic_input(std::string_view text) {
  const auto tokens = detail::split_ws(text);
  if (tokens.size() < 4 || tokens[0] != ">" || tokens[1] != ">" || tokens[2] != ">" ||
      tokens.back() != kSuffix)
    throw ParseError(0, "parity input must look like '> > > b1 .. bn =='");
  ParsedParityInput out;
  std::size_t i = 3;
  const std::size_t end = tokens.size() - 1;
  while (i < end && tokens[i] == kPadToken) ++out.left_pad, ++i;
  while (i < end && (tokens[i] == "0" || tokens[i] == "1")) out.bits.push_back(tokens[i++] == "1");
  while (i < end && tokens[i] == kPadToken) ++out.right_pad, ++i;
  if (i != end) throw ParseError(0, "unexpected token '" + std::string(tokens[i]) + "' in parity input");
  if (out.bits.empty()) throw ParseError(0, "parity input has no bits");
  out.padded = out.left_pad + out.right_pad > 0;
  return out;
}

BitString parse_coinflip(std::string_view text) {
  auto lines = detail::split_lines(text);
  std::size_t first = 0;
  std::size_t last = lines.size();
  if (first < last && lines[first] == kCoinPreamble) ++first;
  if (first < last && lines[last - 1] == kCoinQuestion) --last;
  if (first == last) throw ParseError(0, "coin-flip text has no steps");
  BitString bits;
  const std::size_t n = last - first;
  for (std::size_t k = first; k < last; ++k) {
    const std::string_view line = lines[k];
    const std::size_t line_no = k + 1;
    const auto dot = line.find(". Then ");
    if (dot == std::string_view::npos) throw ParseError(line_no, "not a coin-flip step");
    std::size_t id = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + dot, id);
    if (ec != std::errc() || ptr != line.data() + dot) throw ParseError(line_no, "bad step id");
    if (id != n - (k - first)) throw ParseError(line_no, "step ids must count down to 1");
    const std::string_view rest = line.substr(dot + 7);
    const auto space = rest.find(' ');
    if (space == 0 || space == std::string_view::npos) throw ParseError(line_no, "missing name");
    const std::string_view verb = rest.substr(space + 1);
    if (verb == "flips.") {
      bits.push_back(1);
    } else if (verb == "doesn't flip.") {
      bits.push_back(0);
    } else {
      throw ParseError(line_no, "expected 'flips.' or \"doesn't flip.\"");
    }
  }
  return bits;
}

TaskInstance make_parity_instance(std::span<const std::uint8_t> bits, ParityFormat format,
                                  std::string id, std::string split, std::uint64_t seed,
                                  std::size_t pad_width) {
  const ParityScratchpad pad = make_scratchpad(bits);
  TaskInstance inst;
  inst.id = std::move(id);
  inst.split = std::move(split);
  inst.seed = seed;
  inst.answer = bit_token(pad.answer);
  switch (format) {
    case ParityFormat::kSymbolic:
      inst.task = TaskKind::kParity;
      inst.input_text = symbolic_input_text(bits);
      inst.scratchpad_target = symbolic_target_text(pad.states);
      break;
    case ParityFormat::kPadded: {
      inst.task = TaskKind::kParity;
      const auto padded =
          make_padded(bits, pad_width == 0 ? bits.size() : pad_width, derive_seed({seed}, 1));
      inst.input_text = padded_input_text(padded);
      inst.scratchpad_target = padded_target_text(padded);
      break;
    }
    case ParityFormat::kCoinflip:
      inst.task = TaskKind::kCoinflip;
      inst.input_text = coinflip_input_text(bits, derive_seed({seed}, 2));
      inst.scratchpad_target = coinflip_target_text(pad.states);
      break;
  }
  inst.metrics.num_steps = static_cast<std::int64_t>(bits.size());
  inst.metrics.num_tokens = count_tokens(inst.input_text);
  std::int64_t ones = 0;
  for (auto b : bits) ones += b;
  inst.metrics.num_ones = ones;
  return inst;
}

namespace {

TaskKind task_of(ParityFormat f) {
  return f == ParityFormat::kCoinflip ? TaskKind::kCoinflip : TaskKind::kParity;
}

std::string split_label(const ParityGenOptions& options, const char* base) {
  if (!options.split.empty()) return options.split;
  std::string s = base;
  if (options.format == ParityFormat::kPadded) s += "-padded";
  return s;
}

}  // namespace

std::vector<TaskInstance> gen_varied_bits(std::size_t min_len, std::size_t max_len,
                                          std::size_t count, std::uint64_t seed,
                                          const ParityGenOptions& options) {
  if (min_len < 1) throw ConfigError("min_len must be at least 1");
  if (min_len > max_len)
    throw ConfigError("min_len " + std::to_string(min_len) + " exceeds max_len " +
                      std::to_string(max_len));
  const std::size_t width = options.pad_width == 0 ? max_len : options.pad_width;
  if (options.format == ParityFormat::kPadded && width < max_len)
    throw ConfigError("pad width " + std::to_string(width) + " is shorter than max_len");
  const std::string split = split_label(options, "varied-bits");
  std::vector<TaskInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed({seed}, i);
    Rng rng(s);
    const auto n = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(min_len),
                                                            static_cast<std::int64_t>(max_len)));
    BitString bits(n);
    for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    out.push_back(make_parity_instance(bits, options.format,
                                       instance_id(task_of(options.format), split, i), split, s,
                                       width));
  }
  return out;
}

std::vector<TaskInstance> gen_varied_ones(std::size_t total_bits, std::size_t min_ones,
                                          std::size_t max_ones, std::size_t count,
                                          std::uint64_t seed, const ParityGenOptions& options) {
  if (total_bits < 1) throw ConfigError("total_bits must be at least 1");
  if (min_ones > max_ones)
    throw ConfigError("min_ones " + std::to_string(min_ones) + " exceeds max_ones " +
                      std::to_string(max_ones));
  if (max_ones > total_bits)
    throw ConfigError("max_ones " + std::to_string(max_ones) + " exceeds total_bits " +
                      std::to_string(total_bits));
  const std::size_t width = options.pad_width == 0 ? total_bits : options.pad_width;
  if (options.format == ParityFormat::kPadded && width < total_bits)
    throw ConfigError("pad width " + std::to_string(width) + " is shorter than total_bits");
  const std::string split = split_label(options, "varied-ones");
  std::vector<TaskInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed({seed}, i);
    Rng rng(s);
    const auto ones = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(min_ones), static_cast<std::int64_t>(max_ones)));
    BitString bits(total_bits, 0);
    for (std::size_t k = 0; k < ones; ++k) bits[k] = 1;
    rng.shuffle(bits);
    out.push_back(make_parity_instance(bits, options.format,
                                       instance_id(task_of(options.format), split, i), split, s,
                                       width));
  }
  return out;
}

}  // namespace lengthgen::parity
