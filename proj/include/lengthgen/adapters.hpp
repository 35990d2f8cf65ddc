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

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lengthgen/boolprog.hpp"
#include "lengthgen/errors.hpp"
#include "lengthgen/parity.hpp"
#include "lengthgen/taskcore.hpp"

namespace lengthgen::adapters {

struct CompletionRequest {
  std::string id;
  std::string prompt;
  std::int64_t max_tokens = 256;
  std::vector<std::string> stop;
  double temperature = 0.0;  // 0 = greedy
};

struct CompletionResponse {
  std::string id;
  std::string completion;
};

// Wire format: one JSON object per line.
std::string request_to_json(const CompletionRequest& request);
CompletionRequest request_from_json(std::string_view line);
std::string response_to_json(const CompletionResponse& response);
// Throws AdapterError(kProtocol) naming the line.
CompletionResponse response_from_json(std::string_view line);

class AdapterError : public Error {
 public:
  enum class Kind { kUnavailable, kTimeout, kProtocol, kTransport };
  AdapterError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }
  bool retryable() const { return kind_ != Kind::kProtocol; }

 private:
  Kind kind_;
};

// Completion contract every evaluated model satisfies. complete() may be
// called concurrently by up to parallelism() threads.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
  virtual std::size_t parallelism() const { return 1; }
  virtual std::string name() const = 0;
};

// Cuts a completion at the first stop string, then keeps at most max_tokens
// whitespace-delimited tokens.
std::string apply_limits(std::string completion, const CompletionRequest& request);

// Marker emitted by built-in solvers on prompts they cannot read.
inline constexpr std::string_view kRefusal = "<unsupported prompt>";

// ---- built-in solvers -----------------------------------------------------

enum class SolverKind { kPerfectSequential, kCountShortcut, kNoisyStepwise };

struct SolverConfig {
  SolverKind kind = SolverKind::kPerfectSequential;
  double epsilon = 0.0;                   // noisy_stepwise
  std::vector<std::int64_t> trained_counts;  // count_shortcut, sorted ascending
  std::uint64_t seed = 0;
  // Emit only the answer token instead of the scratchpad.
  bool direct = false;

  static SolverConfig count_range(std::int64_t lo, std::int64_t hi);
};

// The query instance recovered from a prompt: the last block after any
// few-shot exemplars.
struct ParsedQuery {
  TaskKind task = TaskKind::kParity;
  parity::ParsedParityInput parity;  // parity and coinflip (bits only)
  boolprog::Program program;         // boolprog
};

std::string_view query_block(std::string_view prompt);
std::optional<ParsedQuery> parse_query(std::string_view prompt);

std::string solve_perfect_sequential(std::string_view prompt, bool direct = false);
std::string solve_count_shortcut(std::string_view prompt, const std::vector<std::int64_t>& trained_counts);
std::string solve_noisy_stepwise(std::string_view prompt, double epsilon, std::uint64_t seed,
                                 bool direct = false);

// Nearest trained count, ties toward the smaller one.
std::int64_t nearest_count(std::int64_t ones, const std::vector<std::int64_t>& trained_counts);

class SolverAdapter : public ModelAdapter {
 public:
  explicit SolverAdapter(SolverConfig config);
  CompletionResponse complete(const CompletionRequest& request) override;
  std::size_t parallelism() const override { return 1024; }
  std::string name() const override;
  const SolverConfig& config() const { return config_; }

 private:
  SolverConfig config_;
};

// Returns the last line of the prompt.
class EchoAdapter : public ModelAdapter {
 public:
  CompletionResponse complete(const CompletionRequest& request) override;
  std::size_t parallelism() const override { return 1024; }
  std::string name() const override { return "echo"; }
};

// ---- transports -----------------------------------------------------------

struct TransportOptions {
  std::size_t parallelism = 1;
  std::chrono::milliseconds timeout{30000};
};

// Child process speaking JSON lines on stdin/stdout. The command is run via
// /bin/sh -c. Responses are matched to requests by id.
std::unique_ptr<ModelAdapter> subprocess_adapter(const std::string& command,
                                                 const TransportOptions& options = {});

// POSTs the request object to endpoint ("http://host:port/path").
std::unique_ptr<ModelAdapter> http_adapter(const std::string& endpoint,
                                           const std::map<std::string, std::string>& headers = {},
                                           const TransportOptions& options = {});

struct AdapterSpecOptions {
  std::uint64_t seed = 0;
  bool direct = false;
  TransportOptions transport;
  // Overrides the endpoint of an "http" spec when set.
  std::optional<std::string> endpoint_override;
  std::map<std::string, std::string> http_headers;
};

// Builds an adapter from a CLI-style spec:
//   perfect | shortcut:LO-HI | noisy:eps=E[,seed=S] | echo
//   subprocess:<shell command> | http:<url>
// Throws ConfigError on an unknown spec.
std::unique_ptr<ModelAdapter> make_adapter(std::string_view spec, const AdapterSpecOptions& options = {});

}  // namespace lengthgen::adapters
