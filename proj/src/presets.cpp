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

#include "lengthgen/presets.hpp"

#include "lengthgen/errors.hpp"

namespace lengthgen {

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"broad-train", false, "varied bits, lengths 3-20",
       {{"split", "varied-bits"}, {"min-len", "3"}, {"max-len", "20"}}},
      {"broad-eval", false, "varied bits, lengths 3-40",
       {{"split", "varied-bits"}, {"min-len", "3"}, {"max-len", "40"}}},
      {"main-train", false, "varied bits, lengths 10-21",
       {{"split", "varied-bits"}, {"min-len", "10"}, {"max-len", "21"}}},
      {"main-eval", false, "varied bits, lengths 3-40",
       {{"split", "varied-bits"}, {"min-len", "3"}, {"max-len", "40"}}},
      {"ones-train", false, "30 bits, 10-20 ones",
       {{"split", "varied-ones"}, {"total-bits", "30"}, {"min-ones", "10"}, {"max-ones", "20"}}},
      {"ones-eval", false, "30 bits, 1-30 ones",
       {{"split", "varied-ones"}, {"total-bits", "30"}, {"min-ones", "1"}, {"max-ones", "30"}}},
      {"chain", true, "chain-like pool, 8-30 ops, 4-8 variables",
       {{"split", "chain-like"}, {"min-ops", "8"}, {"max-ops", "30"}, {"min-vars", "4"}, {"max-vars", "8"}}},
      {"diverse", true, "diverse pool, 16-32 ops, 4-8 variables",
       {{"split", "diverse"}, {"min-ops", "16"}, {"max-ops", "32"}, {"min-vars", "4"}, {"max-vars", "8"}}},
      {"main-train", true, "chain-like pool, 3-11 ops",
       {{"split", "chain-like"}, {"min-ops", "3"}, {"max-ops", "11"}, {"min-vars", "4"}, {"max-vars", "8"}}},
      {"main-eval", true, "chain-like pool, 3-19 ops",
       {{"split", "chain-like"}, {"min-ops", "3"}, {"max-ops", "19"}, {"min-vars", "4"}, {"max-vars", "8"}}},
  };
  return all;
}

const Preset& find_preset(TaskKind task, std::string_view name) {
  const bool want_boolprog = task == TaskKind::kBoolprog;
  const std::string family = want_boolprog ? "boolprog-" : "parity-";
  if (name.starts_with(family)) name.remove_prefix(family.size());
  std::string valid;
  for (const auto& p : presets()) {
    if (p.boolprog != want_boolprog) continue;
    if (p.name == name) return p;
    valid += (valid.empty() ? "" : ", ") + p.name;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' for " + std::string(to_string(task)) +
                    " (available: " + valid + ")");
}

}  // namespace lengthgen
