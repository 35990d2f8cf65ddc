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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lengthgen/taskcore.hpp"

namespace lengthgen {

// Named generation settings. values are (option name, value) pairs using the
// CLI option names, applied only to options the user left unset.
struct Preset {
  std::string name;
  bool boolprog = false;  // otherwise parity / coinflip
  std::string description;
  std::vector<std::pair<std::string, std::string>> values;
};

const std::vector<Preset>& presets();

// Accepts the bare name ("broad-train") or the family-qualified one
// ("parity-broad-train"). Throws ConfigError listing valid names.
const Preset& find_preset(TaskKind task, std::string_view name);

}  // namespace lengthgen
