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
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "lengthgen/adapters.hpp"
#include "lengthgen/rng.hpp"
#include "text_util.hpp"

namespace lengthgen::adapters {

using json = nlohmann::ordered_json;

std::string request_to_json(const CompletionRequest& r) {
  json j = json::object();
  j["id"] = r.id;
  j["prompt"] = r.prompt;
  j["max_tokens"] = r.max_tokens;
  j["stop"] = r.stop;
  j["temperature"] = r.temperature;
  return j.dump();
}

CompletionRequest request_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    CompletionRequest r;
    r.id = j.at("id").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.max_tokens = j.value("max_tokens", std::int64_t{256});
    if (j.contains("stop") && !j.at("stop").is_null()) r.stop = j.at("stop").get<std::vector<std::string>>();
    r.temperature = j.value("temperature", 0.0);
    if (r.max_tokens < 1) throw AdapterError(AdapterError::Kind::kProtocol, "max_tokens must be >= 1");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw AdapterError(AdapterError::Kind::kProtocol,
                       "malformed request line '" + std::string(line) + "': " + e.what());
  }
}

std::string response_to_json(const CompletionResponse& r) {
  json j = json::object();
  j["id"] = r.id;
  j["completion"] = r.completion;
  return j.dump();
}

CompletionResponse response_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    return {j.at("id").get<std::string>(), j.at("completion").get<std::string>()};
  } catch (const nlohmann::json::exception&) {
    throw AdapterError(AdapterError::Kind::kProtocol,
                       "malformed response line '" + std::string(line) + "'");
  }
}

std::string apply_limits(std::string completion, const CompletionRequest& request) {
  std::size_t cut = completion.size();
  for (const auto& s : request.stop) {
    if (s.empty()) continue;
    const auto pos = completion.find(s);
    if (pos != std::string::npos) cut = std::min(cut, pos);
  }
  completion.resize(cut);
  // Keep text up to the end of the max_tokens-th token.
  std::int64_t tokens = 0;
  bool in_token = false;
  for (std::size_t i = 0; i < completion.size(); ++i) {
    const char c = completion[i];
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!space && !in_token && ++tokens > request.max_tokens) {
      completion.resize(i);
      while (!completion.empty() && (completion.back() == ' ' || completion.back() == '\n' ||
                                     completion.back() == '\t' || completion.back() == '\r'))
        completion.pop_back();
      break;
    }
    in_token = !space;
  }
  return completion;
}

SolverConfig SolverConfig::count_range(std::int64_t lo, std::int64_t hi) {
  SolverConfig c;
  c.kind = SolverKind::kCountShortcut;
  for (std::int64_t k = lo; k <= hi; ++k) c.trained_counts.push_back(k);
  return c;
}

std::string_view query_block(std::string_view prompt) {
  const auto pos = prompt.rfind("\n\n");
  return detail::trim(pos == std::string_view::npos ? prompt : prompt.substr(pos + 2));
}

std::optional<ParsedQuery> parse_query(std::string_view prompt) {
  const std::string_view block = query_block(prompt);
  ParsedQuery q;
  try {
    if (block.starts_with(parity::kPrefix)) {
      q.task = TaskKind::kParity;
      q.parity = parity::parse_symbolic_input(block);
    } else if (block.starts_with(parity::kCoinPreamble)) {
      q.task = TaskKind::kCoinflip;
      q.parity.bits = parity::parse_coinflip(block);
    } else {
      q.task = TaskKind::kBoolprog;
      q.program = boolprog::parse_program(block);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return q;
}

namespace {

std::string parity_states_text(const ParsedQuery& q, const parity::BitString& states) {
  if (q.task == TaskKind::kCoinflip) return parity::coinflip_target_text(states);
  std::vector<std::string> tokens(q.parity.left_pad, std::string(parity::kPadToken));
  for (auto s : states) tokens.push_back(s ? "1" : "0");
  for (std::size_t i = 0; i < q.parity.right_pad; ++i) tokens.emplace_back(parity::kPadToken);
  return parity::join_tokens(tokens);
}

std::string parity_answer_text(TaskKind task, std::uint8_t answer) {
  if (task == TaskKind::kCoinflip) return answer ? "no" : "yes";
  return answer ? "1" : "0";
}

}  // namespace

std::string solve_perfect_sequential(std::string_view prompt, bool direct) {
  const auto q = parse_query(prompt);
  if (!q) return std::string(kRefusal);
  if (q->task == TaskKind::kBoolprog) {
    if (direct) return boolprog::exec_program(q->program).answer ? "True" : "False";
    return boolprog::scratchpad_annotate(q->program);
  }
  const auto pad = parity::make_scratchpad(q->parity.bits);
  if (direct) return parity_answer_text(q->task, pad.answer);
  return parity_states_text(*q, pad.states);
}

std::int64_t nearest_count(std::int64_t ones, const std::vector<std::int64_t>& trained) {
  if (trained.empty()) return ones;
  std::int64_t best = trained.front();
  for (auto c : trained) {
    const auto d = std::llabs(c - ones);
    const auto bd = std::llabs(best - ones);
    if (d < bd || (d == bd && c < best)) best = c;
  }
  return best;
}

std::string solve_count_shortcut(std::string_view prompt, const std::vector<std::int64_t>& trained) {
  const auto q = parse_query(prompt);
  if (!q || q->task == TaskKind::kBoolprog) return std::string(kRefusal);
  std::int64_t ones = 0;
  for (auto b : q->parity.bits) ones += b;
  const auto memorized = nearest_count(ones, trained);
  return parity_answer_text(q->task, static_cast<std::uint8_t>(memorized & 1));
}

std::string solve_noisy_stepwise(std::string_view prompt, double epsilon, std::uint64_t seed,
                                 bool direct) {
  const auto q = parse_query(prompt);
  if (!q) return std::string(kRefusal);
  Rng rng(seed);
  if (q->task == TaskKind::kBoolprog) {
    boolprog::Environment env;
    std::vector<bool> values;
    for (const auto& op : q->program.ops) {
      bool v = boolprog::eval_op(op, env);
      if (rng.bernoulli(epsilon)) v = !v;
      env.set(op.target, v);
      values.push_back(v);
    }
    if (direct) return env.get(q->program.query_var) ? "True" : "False";
    return boolprog::annotate_with_values(q->program, values);
  }
  parity::BitString states;
  std::uint8_t state = 0;
  for (auto b : q->parity.bits) {
    state ^= b;
    if (rng.bernoulli(epsilon)) state ^= 1;
    states.push_back(state);
  }
  if (direct) return parity_answer_text(q->task, state);
  return parity_states_text(*q, states);
}

SolverAdapter::SolverAdapter(SolverConfig config) : config_(std::move(config)) {
  if (config_.epsilon < 0.0 || config_.epsilon > 0.5)
    throw ConfigError("epsilon must lie in [0, 0.5]");
  std::sort(config_.trained_counts.begin(), config_.trained_counts.end());
}

CompletionResponse SolverAdapter::complete(const CompletionRequest& request) {
  std::string text;
  switch (config_.kind) {
    case SolverKind::kPerfectSequential:
      text = solve_perfect_sequential(request.prompt, config_.direct);
      break;
    case SolverKind::kCountShortcut:
      text = solve_count_shortcut(request.prompt, config_.trained_counts);
      break;
    case SolverKind::kNoisyStepwise:
      text = solve_noisy_stepwise(request.prompt, config_.epsilon,
                                  derive_seed({config_.seed}, stable_hash(request.id)),
                                  config_.direct);
      break;
  }
  return {request.id, apply_limits(std::move(text), request)};
}

std::string SolverAdapter::name() const {
  switch (config_.kind) {
    case SolverKind::kPerfectSequential:
      return "perfect";
    case SolverKind::kCountShortcut:
      return "shortcut";
    case SolverKind::kNoisyStepwise: {
      std::ostringstream os;
      os << "noisy(eps=" << config_.epsilon << ")";
      return os.str();
    }
  }
  return "solver";
}

CompletionResponse EchoAdapter::complete(const CompletionRequest& request) {
  const auto lines = detail::split_lines(detail::trim(request.prompt));
  std::string last = lines.empty() ? std::string() : std::string(lines.back());
  return {request.id, apply_limits(std::move(last), request)};
}

namespace {

double parse_double(std::string_view s, std::string_view what) {
  char* end = nullptr;
  const std::string tmp(s);
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size())
    throw ConfigError("bad " + std::string(what) + " '" + tmp + "'");
  return v;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::unique_ptr<ModelAdapter> make_adapter(std::string_view spec, const AdapterSpecOptions& options) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  if (kind == "perfect" || kind == "perfect_sequential") {
    SolverConfig c;
    c.direct = options.direct;
    return std::make_unique<SolverAdapter>(c);
  }
  if (kind == "shortcut" || kind == "count_shortcut") {
    std::int64_t lo = 10, hi = 20;
    if (!arg.empty()) {
      const auto dash = arg.find('-');
      if (dash == std::string_view::npos) throw ConfigError("shortcut range must be LO-HI");
      lo = parse_int(arg.substr(0, dash), "shortcut range");
      hi = parse_int(arg.substr(dash + 1), "shortcut range");
      if (lo > hi) throw ConfigError("shortcut range LO exceeds HI");
    }
    SolverConfig c = SolverConfig::count_range(lo, hi);
    c.direct = true;
    return std::make_unique<SolverAdapter>(c);
  }
  if (kind == "noisy" || kind == "noisy_stepwise") {
    SolverConfig c;
    c.kind = SolverKind::kNoisyStepwise;
    c.seed = options.seed;
    c.direct = options.direct;
    std::string_view rest = arg;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      const std::string_view key = eq == std::string_view::npos ? "eps" : item.substr(0, eq);
      const std::string_view value = eq == std::string_view::npos ? item : item.substr(eq + 1);
      if (key == "eps" || key == "epsilon") {
        c.epsilon = parse_double(value, "epsilon");
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(value, "seed"));
      } else {
        throw ConfigError("unknown noisy option '" + std::string(key) + "'");
      }
    }
    return std::make_unique<SolverAdapter>(c);
  }
  if (kind == "echo") return std::make_unique<EchoAdapter>();
  if (kind == "subprocess") {
    if (arg.empty()) throw ConfigError("subprocess adapter needs a command");
    return subprocess_adapter(std::string(arg), options.transport);
  }
  if (kind == "http" || kind == "https") {
    std::string endpoint = kind == "https" ? std::string(spec) : std::string(arg);
    if (endpoint.starts_with("//")) endpoint = "http:" + endpoint;
    if (options.endpoint_override) endpoint = *options.endpoint_override;
    if (endpoint.empty()) throw ConfigError("http adapter needs an endpoint");
    return http_adapter(endpoint, options.http_headers, options.transport);
  }
  throw ConfigError("unknown adapter '" + std::string(spec) +
                    "' (expected perfect, shortcut:LO-HI, noisy:eps=E, echo, subprocess:CMD, http:URL)");
}

}  // namespace lengthgen::adapters
