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

// Stand-in model process for the subprocess protocol. Reads one request object
// per stdin line, writes one response object per stdout line.
//
//   --mode echo       completion = last prompt line
//   --mode perfect    built-in perfect solver
//   --mode reverse    buffers --batch requests and answers them in reverse order
//   --mode malformed  answers the first request with a non-JSON line
//   --mode exit       exits after --after requests without answering the next
//   --mode silent     reads requests and never answers

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lengthgen/adapters.hpp"

using namespace lengthgen::adapters;

int main(int argc, char** argv) {
  CLI::App app{"protocol stub model"};
  std::string mode = "echo";
  std::size_t batch = 8;
  std::size_t after = 1;
  app.add_option("--mode", mode)->check(CLI::IsMember({"echo", "perfect", "reverse", "malformed", "exit", "silent"}));
  app.add_option("--batch", batch);
  app.add_option("--after", after);
  CLI11_PARSE(app, argc, argv);

  std::ios::sync_with_stdio(false);
  EchoAdapter echo;
  SolverAdapter perfect(SolverConfig{});
  std::vector<CompletionRequest> pending;
  std::size_t seen = 0;
  std::string line;

  const auto answer = [&](const CompletionRequest& req) {
    const auto resp = mode == "perfect" ? perfect.complete(req) : echo.complete(req);
    std::cout << response_to_json(resp) << '\n' << std::flush;
  };

  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    const auto req = request_from_json(line);
    ++seen;
    if (mode == "silent") continue;
    if (mode == "malformed") {
      std::cout << "this is not json\n" << std::flush;
      continue;
    }
    if (mode == "exit" && seen > after) return 0;
    if (mode == "reverse") {
      pending.push_back(req);
      if (pending.size() < batch) continue;
      for (auto it = pending.rbegin(); it != pending.rend(); ++it) answer(*it);
      pending.clear();
      continue;
    }
    answer(req);
  }
  for (auto it = pending.rbegin(); it != pending.rend(); ++it) answer(*it);
  return 0;
}
