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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lengthgen/rng.hpp"
#include "lengthgen/taskcore.hpp"

namespace lengthgen::parity {

// Each element is 0 or 1.
using BitString = std::vector<std::uint8_t>;

inline constexpr std::string_view kPrefix = "> > >";
inline constexpr std::string_view kSuffix = "==";
inline constexpr std::string_view kPadToken = "_";
inline constexpr std::string_view kMaskToken = "x";
inline constexpr std::string_view kCoinPreamble = "A coin is heads up.";
inline constexpr std::string_view kCoinQuestion = "Is the coin still heads up?";

// Running parity state after each bit; answer is the final state.
struct ParityScratchpad {
  BitString states;
  std::uint8_t answer = 0;
};

// Input and state rows share the same left/right padding, so bit i and state i
// sit at the same index in their rows.
struct PaddedScratchpad {
  std::vector<std::string> padded_input_tokens;
  std::vector<std::string> padded_state_tokens;
  std::size_t left_pad = 0;
  std::size_t right_pad = 0;
  std::size_t total_width = 0;
};

enum class MaskMode { kNone, kMaskInput, kMaskScratchpad, kMaskBoth };

struct MaskedStepView {
  std::size_t step_index = 0;
  std::vector<std::string> masked_input_tokens;
  std::vector<std::string> masked_prior_states;
  MaskMode mode = MaskMode::kNone;
};

enum class ParityFormat { kSymbolic, kPadded, kCoinflip };

struct ParityGenOptions {
  ParityFormat format = ParityFormat::kSymbolic;
  // Padded format only; 0 means "the longest length the generator can emit".
  std::size_t pad_width = 0;
  // Overrides the default split label ("varied-bits" / "varied-ones").
  std::string split;
};

std::uint8_t parity_oracle(std::span<const std::uint8_t> bits);

// Throws lengthgen::Error on empty input.
ParityScratchpad make_scratchpad(std::span<const std::uint8_t> bits);

// left_pad ~ U[0, total_width - |bits|]. Throws ConfigError if total_width < |bits|.
PaddedScratchpad make_padded(std::span<const std::uint8_t> bits, std::size_t total_width,
                             std::uint64_t seed);
PaddedScratchpad make_padded_at(std::span<const std::uint8_t> bits, std::size_t total_width,
                                std::size_t left_pad);

// Prior states are scratchpad.states[0, step_index). Throws on out-of-range
// step or a scratchpad that does not belong to bits.
MaskedStepView make_masked_step(std::span<const std::uint8_t> bits,
                                const ParityScratchpad& scratchpad, std::size_t step_index,
                                MaskMode mode);

// Numbered step lines only, ids counting down from |bits| to 1.
std::string render_coinflip(std::span<const std::uint8_t> bits,
                            std::span<const std::string> names);
std::string render_coinflip(std::span<const std::uint8_t> bits, std::uint64_t seed);

const std::vector<std::string>& given_names();
// Uniform draws from given_names() with no name used twice in a row.
std::vector<std::string> draw_names(std::size_t count, Rng& rng);

std::string join_tokens(std::span<const std::string> tokens);

std::string symbolic_input_text(std::span<const std::uint8_t> bits);
std::string symbolic_target_text(std::span<const std::uint8_t> states);
std::string padded_input_text(const PaddedScratchpad& padded);
std::string padded_target_text(const PaddedScratchpad& padded);
std::string coinflip_input_text(std::span<const std::uint8_t> bits, std::uint64_t seed);
std::string coinflip_target_text(std::span<const std::uint8_t> states);

// Bits recovered from a rendered input, with padding when present.
struct ParsedParityInput {
  BitString bits;
  std::size_t left_pad = 0;
  std::size_t right_pad = 0;
  bool padded = false;
};

// "> > > b1 .. bn ==" (optionally padded). Throws ParseError.
ParsedParityInput parse_symbolic_input(std::string_view text);
// Full coin-flip text (preamble, numbered steps, question) or the bare step lines.
BitString parse_coinflip(std::string_view text);

// Builds a complete instance (input, target, answer, metrics) from bits.
TaskInstance make_parity_instance(std::span<const std::uint8_t> bits, ParityFormat format,
                                  std::string id, std::string split, std::uint64_t seed,
                                  std::size_t pad_width = 0);

// Lengths uniform on [min_len, max_len], bits i.i.d. fair.
std::vector<TaskInstance> gen_varied_bits(std::size_t min_len, std::size_t max_len,
                                          std::size_t count, std::uint64_t seed,
                                          const ParityGenOptions& options = {});

// Exactly total_bits bits; number of ones uniform on [min_ones, max_ones],
// positions uniformly shuffled.
std::vector<TaskInstance> gen_varied_ones(std::size_t total_bits, std::size_t min_ones,
                                          std::size_t max_ones, std::size_t count,
                                          std::uint64_t seed, const ParityGenOptions& options = {});

}  // namespace lengthgen::parity
