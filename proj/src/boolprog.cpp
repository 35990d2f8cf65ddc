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

#include "lengthgen/boolprog.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "lengthgen/errors.hpp"
#include "lengthgen/rng.hpp"
#include "text_util.hpp"

namespace lengthgen::boolprog {

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kInit: return "Init";
    case OpKind::kAndVar: return "AndVar";
    case OpKind::kOrVar: return "OrVar";
    case OpKind::kXorVar: return "XorVar";
    case OpKind::kNot: return "Not";
    case OpKind::kAndConst: return "AndConst";
    case OpKind::kOrConst: return "OrConst";
    case OpKind::kXorConst: return "XorConst";
    case OpKind::kCondAssignConst: return "CondAssignConst";
    case OpKind::kAssignVar: return "AssignVar";
    case OpKind::kCondAssignVar: return "CondAssignVar";
  }
  return "?";
}

std::string_view to_string(Split split) {
  return split == Split::kChainLike ? "chain-like" : "diverse";
}

Split parse_split(std::string_view name) {
  if (name == "chain-like" || name == "chain_like" || name == "chain") return Split::kChainLike;
  if (name == "diverse") return Split::kDiverse;
  throw ConfigError("unknown boolprog split '" + std::string(name) + "'");
}

const std::vector<OpKind>& op_pool(Split split) {
  static const std::vector<OpKind> chain = {OpKind::kAndVar, OpKind::kOrVar, OpKind::kXorVar,
                                            OpKind::kNot};
  static const std::vector<OpKind> diverse = {
      OpKind::kAndVar,   OpKind::kOrVar,    OpKind::kXorVar,          OpKind::kNot,
      OpKind::kAndConst, OpKind::kOrConst,  OpKind::kXorConst,        OpKind::kCondAssignConst,
      OpKind::kAssignVar, OpKind::kCondAssignVar};
  return split == Split::kChainLike ? chain : diverse;
}

std::vector<std::pair<char, bool>> Environment::entries() const {
  std::vector<std::pair<char, bool>> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i]) out.emplace_back(static_cast<char>('a' + i), *values_[i]);
  }
  return out;
}

namespace {

bool is_var(std::string_view tok) { return tok.size() == 1 && tok[0] >= 'a' && tok[0] <= 'z'; }

std::optional<bool> as_literal(std::string_view tok) {
  if (tok == "True") return true;
  if (tok == "False") return false;
  return std::nullopt;
}

const char* lit(bool v) { return v ? "True" : "False"; }

bool needs_other_var(OpKind k) {
  switch (k) {
    case OpKind::kAndVar:
    case OpKind::kOrVar:
    case OpKind::kXorVar:
    case OpKind::kCondAssignConst:
    case OpKind::kAssignVar:
    case OpKind::kCondAssignVar:
      return true;
    default:
      return false;
  }
}

// Variables read by op, in the order they appear in the rendered line.
std::vector<char> reads_in_text_order(const Operation& op) {
  switch (op.kind) {
    case OpKind::kInit: return {};
    case OpKind::kAndVar:
    case OpKind::kOrVar:
    case OpKind::kXorVar: return {op.target, op.source};
    case OpKind::kNot:
    case OpKind::kAndConst:
    case OpKind::kOrConst:
    case OpKind::kXorConst: return {op.target};
    case OpKind::kCondAssignConst: return {op.condition, op.target};
    case OpKind::kAssignVar: return {op.source};
    case OpKind::kCondAssignVar: return {op.source, op.condition, op.target};
  }
  return {};
}

}  // namespace

bool eval_op(const Operation& op, const Environment& env) {
  const auto t = [&] { return env.get(op.target); };
  switch (op.kind) {
    case OpKind::kInit: return op.literal;
    case OpKind::kAndVar: return t() && env.get(op.source);
    case OpKind::kOrVar: return t() || env.get(op.source);
    case OpKind::kXorVar: return t() != env.get(op.source);
    case OpKind::kNot: return !t();
    case OpKind::kAndConst: return t() && op.literal;
    case OpKind::kOrConst: return t() || op.literal;
    case OpKind::kXorConst: return t() != op.literal;
    case OpKind::kCondAssignConst: return env.get(op.condition) ? op.literal : t();
    case OpKind::kAssignVar: return env.get(op.source);
    case OpKind::kCondAssignVar: return env.get(op.condition) ? env.get(op.source) : t();
  }
  return false;
}

namespace {

std::size_t op_depth(const Operation& op, const std::array<std::size_t, 26>& depth) {
  if (op.kind == OpKind::kInit) return 0;
  std::size_t d = 0;
  for (char v : reads_in_text_order(op)) d = std::max(d, depth[static_cast<std::size_t>(v - 'a')]);
  return d + 1;
}

Operation draw_op(OpKind kind, char target, const std::vector<char>& vars, Rng& rng) {
  const auto other = [&] {
    char v;
    do {
      v = vars[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(vars.size()) - 1))];
    } while (v == target);
    return v;
  };
  switch (kind) {
    case OpKind::kAndVar:
    case OpKind::kOrVar:
    case OpKind::kXorVar: return Operation::with_var(kind, target, other());
    case OpKind::kNot: return Operation::negate(target);
    case OpKind::kAndConst:
    case OpKind::kOrConst:
    case OpKind::kXorConst: return Operation::with_const(kind, target, rng.bernoulli(0.5));
    case OpKind::kCondAssignConst: {
      const bool value = rng.bernoulli(0.5);
      return Operation::cond_const(target, value, other());
    }
    case OpKind::kAssignVar: return Operation::assign(target, other());
    case OpKind::kCondAssignVar: {
      const char source = other();
      return Operation::cond_var(target, source, other());
    }
    case OpKind::kInit: break;
  }
  return Operation::init(target, rng.bernoulli(0.5));
}

// Every operation over vars drawn from kinds whose depth stays within cap.
std::vector<Operation> feasible_ops(const std::vector<OpKind>& kinds, const std::vector<char>& vars,
                                    const std::array<std::size_t, 26>& depth, std::size_t cap) {
  std::vector<Operation> out;
  const auto keep = [&](const Operation& op) {
    if (op_depth(op, depth) <= cap) out.push_back(op);
  };
  for (OpKind k : kinds) {
    for (char t : vars) {
      switch (k) {
        case OpKind::kNot: keep(Operation::negate(t)); break;
        case OpKind::kAndConst:
        case OpKind::kOrConst:
        case OpKind::kXorConst:
          for (bool b : {false, true}) keep(Operation::with_const(k, t, b));
          break;
        default:
          for (char w : vars) {
            if (w == t) continue;
            if (k == OpKind::kCondAssignConst) {
              for (bool b : {false, true}) keep(Operation::cond_const(t, b, w));
            } else if (k == OpKind::kCondAssignVar) {
              for (char c : vars) {
                if (c != t) keep(Operation::cond_var(t, w, c));
              }
            } else if (k == OpKind::kAssignVar) {
              keep(Operation::assign(t, w));
            } else {
              keep(Operation::with_var(k, t, w));
            }
          }
      }
    }
  }
  return out;
}

std::optional<Program> try_generate(const GenConfig& cfg, Rng& rng) {
  const auto n_ops = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(cfg.min_ops), static_cast<std::int64_t>(cfg.max_ops)));
  const auto n_vars = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(cfg.min_vars), static_cast<std::int64_t>(cfg.max_vars)));

  std::vector<char> alphabet;
  for (char c = 'a'; c <= 'z'; ++c) alphabet.push_back(c);
  rng.shuffle(alphabet);
  std::vector<char> vars(alphabet.begin(), alphabet.begin() + static_cast<std::ptrdiff_t>(n_vars));

  std::vector<OpKind> kinds;
  for (OpKind k : op_pool(cfg.split)) {
    if (n_vars >= 2 || !needs_other_var(k)) kinds.push_back(k);
  }

  Program p;
  p.split = cfg.split;
  for (char v : vars) p.ops.push_back(Operation::init(v, rng.bernoulli(0.5)));

  const bool has_assign = std::find(kinds.begin(), kinds.end(), OpKind::kAssignVar) != kinds.end();
  // Whether `remaining` more ops fit under the cap from this state. Repeated
  // negation reaches the sum of slack exactly; "t = w" with w below the cap
  // can repeat forever.
  const auto can_finish = [&](const std::array<std::size_t, 26>& d, std::size_t remaining) {
    const std::size_t cap = *cfg.max_depth;
    std::size_t slack = 0;
    for (char v : vars) {
      const std::size_t dv = d[static_cast<std::size_t>(v - 'a')];
      if (dv < cap && has_assign) return true;
      slack += cap - std::min(dv, cap);
    }
    return remaining <= slack;
  };
  const auto admissible = [&](const Operation& op, const std::array<std::size_t, 26>& d, std::size_t remaining) {
    if (!cfg.max_depth) return true;
    if (op_depth(op, d) > *cfg.max_depth) return false;
    auto next = d;
    next[static_cast<std::size_t>(op.target - 'a')] = op_depth(op, d);
    return can_finish(next, remaining);
  };

  std::array<std::size_t, 26> depth{};
  if (cfg.max_depth && !can_finish(depth, n_ops)) return std::nullopt;
  for (std::size_t i = 0; i < n_ops; ++i) {
    const std::size_t remaining = n_ops - i - 1;
    std::optional<Operation> chosen;
    for (int tries = 0; tries < 64 && !chosen; ++tries) {
      const OpKind kind = kinds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1))];
      const char target = vars[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n_vars) - 1))];
      Operation op = draw_op(kind, target, vars, rng);
      if (admissible(op, depth, remaining)) chosen = op;
    }
    if (!chosen) {
      auto options = feasible_ops(kinds, vars, depth, *cfg.max_depth);
      std::erase_if(options, [&](const Operation& op) { return !admissible(op, depth, remaining); });
      if (options.empty()) return std::nullopt;
      chosen = options[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(options.size()) - 1))];
    }
    depth[static_cast<std::size_t>(chosen->target - 'a')] = op_depth(*chosen, depth);
    p.ops.push_back(*chosen);
  }
  p.query_var = p.ops.back().target;
  return p;
}

}  // namespace

Program gen_program(const GenConfig& cfg, std::uint64_t seed) {
  if (cfg.min_vars < 1) throw ConfigError("min_vars must be at least 1");
  if (cfg.max_vars > 26) throw ConfigError("max_vars cannot exceed 26 single-letter names");
  if (cfg.min_vars > cfg.max_vars) throw ConfigError("min_vars exceeds max_vars");
  if (cfg.min_ops > cfg.max_ops) throw ConfigError("min_ops exceeds max_ops");
  if (cfg.max_depth && *cfg.max_depth == 0 && cfg.min_ops > 0)
    throw ConfigError("a depth cap of 0 admits no operations");
  // Ops that read their own target raise its depth by one, so a pool without
  // plain assignment fits at most vars * cap of them.
  const bool reads_target_only = cfg.split == Split::kChainLike || cfg.max_vars < 2;
  if (cfg.max_depth && reads_target_only && cfg.min_ops > cfg.max_vars * *cfg.max_depth)
    throw ConfigError("min_ops exceeds what max_vars variables can absorb under the depth cap");

  constexpr int kAttempts = 32;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed({seed}, static_cast<std::uint64_t>(attempt)));
    if (auto p = try_generate(cfg, rng)) return *p;
  }
  throw ConfigError("could not satisfy the depth cap after " + std::to_string(kAttempts) +
                    " attempts");
}

std::string render_op(const Operation& op) {
  const std::string t(1, op.target);
  const std::string w(1, op.source);
  const std::string c(1, op.condition);
  switch (op.kind) {
    case OpKind::kInit: return t + " = " + lit(op.literal);
    case OpKind::kAndVar: return t + " = " + t + " and " + w;
    case OpKind::kOrVar: return t + " = " + t + " or " + w;
    case OpKind::kXorVar: return t + " = " + t + " != " + w;
    case OpKind::kNot: return t + " = not " + t;
    case OpKind::kAndConst: return t + " = " + t + " and " + lit(op.literal);
    case OpKind::kOrConst: return t + " = " + t + " or " + lit(op.literal);
    case OpKind::kXorConst: return t + " = " + t + " != " + lit(op.literal);
    case OpKind::kCondAssignConst: return t + " = " + lit(op.literal) + " if " + c + " else " + t;
    case OpKind::kAssignVar: return t + " = " + w;
    case OpKind::kCondAssignVar: return t + " = " + w + " if " + c + " else " + t;
  }
  return {};
}

std::string render_program(const Program& p) {
  std::string out;
  for (const auto& op : p.ops) out += render_op(op) + '\n';
  out += "print(";
  out += p.query_var;
  out += ')';
  return out;
}

std::optional<Operation> parse_op_line(std::string_view line) {
  const auto toks = detail::split_ws(line);
  // Exact single-space layout only.
  std::size_t expected_len = toks.empty() ? 0 : toks.size() - 1;
  for (auto t : toks) expected_len += t.size();
  if (expected_len != line.size()) return std::nullopt;
  if (toks.size() < 3 || !is_var(toks[0]) || toks[1] != "=") return std::nullopt;
  const char t = toks[0][0];

  if (toks.size() == 3) {
    if (auto b = as_literal(toks[2])) return Operation::init(t, *b);
    if (is_var(toks[2]) && toks[2][0] != t) return Operation::assign(t, toks[2][0]);
    return std::nullopt;
  }
  if (toks.size() == 4) {
    if (toks[2] == "not" && is_var(toks[3]) && toks[3][0] == t) return Operation::negate(t);
    return std::nullopt;
  }
  if (toks.size() == 5) {
    OpKind var_kind, const_kind;
    if (toks[3] == "and") {
      var_kind = OpKind::kAndVar, const_kind = OpKind::kAndConst;
    } else if (toks[3] == "or") {
      var_kind = OpKind::kOrVar, const_kind = OpKind::kOrConst;
    } else if (toks[3] == "!=") {
      var_kind = OpKind::kXorVar, const_kind = OpKind::kXorConst;
    } else {
      return std::nullopt;
    }
    const auto lhs = toks[2];
    const auto rhs = toks[4];
    if (is_var(lhs) && lhs[0] == t) {
      if (auto b = as_literal(rhs)) return Operation::with_const(const_kind, t, *b);
      if (is_var(rhs) && rhs[0] != t) return Operation::with_var(var_kind, t, rhs[0]);
      return std::nullopt;
    }
    // Commuted in-place form, e.g. "a = b and a".
    if (is_var(rhs) && rhs[0] == t && is_var(lhs)) {
      Operation op = Operation::with_var(var_kind, t, lhs[0]);
      return op;
    }
    return std::nullopt;
  }
  if (toks.size() == 7 && toks[3] == "if" && toks[5] == "else" && is_var(toks[4]) &&
      is_var(toks[6]) && toks[6][0] == t) {
    const char c = toks[4][0];
    if (auto b = as_literal(toks[2])) return Operation::cond_const(t, *b, c);
    if (is_var(toks[2])) return Operation::cond_var(t, toks[2][0], c);
  }
  return std::nullopt;
}

std::optional<std::pair<char, bool>> parse_comment_line(std::string_view line) {
  if (line.size() < 9 || line.substr(0, 2) != "# ") return std::nullopt;
  const auto toks = detail::split_ws(line.substr(2));
  if (toks.size() != 3 || !is_var(toks[0]) || toks[1] != "=") return std::nullopt;
  auto b = as_literal(toks[2]);
  if (!b) return std::nullopt;
  if (line != "# " + std::string(1, toks[0][0]) + " = " + lit(*b)) return std::nullopt;
  return std::make_pair(toks[0][0], *b);
}

std::string strip_comments(std::string_view text) {
  std::string out;
  for (auto line : detail::split_lines(text)) {
    if (!line.empty() && line[0] == '#') continue;
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

namespace {

// Uses in the order they occur on the line; the commuted form reads the
// left operand first.
std::vector<char> uses_for_line(const Operation& op, std::string_view line) {
  auto reads = reads_in_text_order(op);
  const auto toks = detail::split_ws(line);
  if (toks.size() == 5 && is_var(toks[2]) && toks[2][0] != op.target) {
    reads = {toks[2][0], toks[4][0]};
  }
  if (op.kind == OpKind::kAssignVar) reads.push_back(op.target);
  return reads;
}

}  // namespace

Program parse_program(std::string_view text) {
  const auto lines = detail::split_lines(text);
  Program p;
  std::array<bool, 26> initialized{};
  bool printed = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = lines[i];
    if (printed) throw ParseError(line_no, "text after print(...)");
    if (line.size() == 8 && line.substr(0, 6) == "print(" && line.back() == ')' &&
        is_var(line.substr(6, 1))) {
      const char q = line[6];
      if (!initialized[static_cast<std::size_t>(q - 'a')]) throw SemanticError(line_no, q);
      p.query_var = q;
      printed = true;
      continue;
    }
    auto op = parse_op_line(line);
    if (!op) throw ParseError(line_no, "unrecognized line '" + std::string(line) + "'");
    for (char v : uses_for_line(*op, line)) {
      if (!initialized[static_cast<std::size_t>(v - 'a')]) throw SemanticError(line_no, v);
    }
    initialized[static_cast<std::size_t>(op->target - 'a')] = true;
    p.ops.push_back(*op);
  }
  if (!printed) throw ParseError(lines.size(), "missing final print(<var>) line");
  if (p.ops.empty()) throw ParseError(1, "program has no assignments");
  p.split = Split::kChainLike;
  const auto& chain = op_pool(Split::kChainLike);
  for (const auto& op : p.ops) {
    if (op.kind != OpKind::kInit && std::find(chain.begin(), chain.end(), op.kind) == chain.end())
      p.split = Split::kDiverse;
  }
  return p;
}

void check_semantics(const Program& p) {
  std::array<bool, 26> initialized{};
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    const auto& op = p.ops[i];
    auto reads = reads_in_text_order(op);
    if (op.kind == OpKind::kAssignVar) reads.push_back(op.target);
    for (char v : reads) {
      if (!initialized[static_cast<std::size_t>(v - 'a')]) throw SemanticError(i + 1, v);
    }
    initialized[static_cast<std::size_t>(op.target - 'a')] = true;
  }
  if (!initialized[static_cast<std::size_t>(p.query_var - 'a')])
    throw SemanticError(p.ops.size() + 1, p.query_var);
}

ExecResult exec_program(const Program& p) {
  ExecResult r;
  r.step_values.reserve(p.ops.size());
  for (const auto& op : p.ops) {
    const bool value = eval_op(op, r.env);
    r.env.set(op.target, value);
    r.step_values.push_back(value);
  }
  r.answer = r.env.get(p.query_var);
  return r;
}

std::size_t num_ops(const Program& p) {
  return static_cast<std::size_t>(std::count_if(
      p.ops.begin(), p.ops.end(), [](const Operation& op) { return op.kind != OpKind::kInit; }));
}

DepGraph build_dep_graph(const Program& p) {
  DepGraph g;
  std::array<std::optional<std::size_t>, 26> current{};
  std::array<std::size_t, 26> versions{};
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    const auto& op = p.ops[i];
    DepNode node;
    node.variable = op.target;
    node.op_index = i;
    for (char v : reads_in_text_order(op)) {
      const auto& src = current[static_cast<std::size_t>(v - 'a')];
      if (src && std::find(node.inputs.begin(), node.inputs.end(), *src) == node.inputs.end())
        node.inputs.push_back(*src);
    }
    auto& ver = versions[static_cast<std::size_t>(op.target - 'a')];
    node.version = ver++;
    current[static_cast<std::size_t>(op.target - 'a')] = i;
    g.nodes.push_back(std::move(node));
  }
  g.query_node = current[static_cast<std::size_t>(p.query_var - 'a')].value();
  return g;
}

std::size_t comp_graph_depth(const Program& p) {
  std::array<std::size_t, 26> depth{};
  for (const auto& op : p.ops) depth[static_cast<std::size_t>(op.target - 'a')] = op_depth(op, depth);
  return depth[static_cast<std::size_t>(p.query_var - 'a')];
}

std::vector<bool> on_query_chain(const Program& p) {
  const DepGraph g = build_dep_graph(p);
  std::vector<bool> mark(p.ops.size(), false);
  std::vector<std::size_t> stack = {g.query_node};
  while (!stack.empty()) {
    const std::size_t n = stack.back();
    stack.pop_back();
    if (mark[n]) continue;
    mark[n] = true;
    for (auto in : g.nodes[n].inputs) stack.push_back(in);
  }
  return mark;
}

double chain_fraction(const Program& p) {
  const auto mark = on_query_chain(p);
  std::size_t ops = 0, on = 0;
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    if (p.ops[i].kind == OpKind::kInit) continue;
    ++ops;
    on += mark[i] ? 1 : 0;
  }
  return ops == 0 ? 0.0 : static_cast<double>(on) / static_cast<double>(ops);
}

std::string annotate_with_values(const Program& p, const std::vector<bool>& values) {
  if (values.size() != p.ops.size()) throw Error("annotate_with_values: one value per op required");
  std::string out;
  std::optional<bool> printed;
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    out += render_op(p.ops[i]);
    out += "\n# ";
    out += p.ops[i].target;
    out += " = ";
    out += lit(values[i]);
    out += '\n';
    if (p.ops[i].target == p.query_var) printed = values[i];
  }
  out += "print(";
  out += p.query_var;
  out += ")\n# ";
  out += p.query_var;
  out += " = ";
  out += lit(printed.value_or(false));
  return out;
}

std::string scratchpad_annotate(const Program& p) {
  return annotate_with_values(p, exec_program(p).step_values);
}

namespace {

LengthMetrics program_metrics(const Program& p, const std::string& input_text) {
  LengthMetrics m;
  m.num_steps = static_cast<std::int64_t>(p.ops.size());
  m.num_tokens = count_tokens(input_text);
  m.num_ops = static_cast<std::int64_t>(num_ops(p));
  m.graph_depth = static_cast<std::int64_t>(comp_graph_depth(p));
  return m;
}

}  // namespace

TaskInstance make_boolprog_instance(const Program& p, std::string id, std::string split,
                                    std::uint64_t seed) {
  TaskInstance inst;
  inst.id = std::move(id);
  inst.task = TaskKind::kBoolprog;
  inst.split = std::move(split);
  inst.input_text = render_program(p);
  inst.scratchpad_target = scratchpad_annotate(p);
  inst.answer = lit(exec_program(p).answer);
  inst.metrics = program_metrics(p, inst.input_text);
  inst.seed = seed;
  return inst;
}

TaskInstance shuffle_ops(const Program& p, std::uint64_t seed, std::string id, std::string split) {
  TaskInstance inst = make_boolprog_instance(p, std::move(id), std::move(split), seed);
  std::vector<std::string> fixed, moving;
  for (const auto& op : p.ops) {
    (op.kind == OpKind::kInit ? fixed : moving).push_back(render_op(op));
  }
  Rng rng(seed);
  rng.shuffle(moving);
  std::string text;
  for (const auto& line : fixed) text += line + '\n';
  for (const auto& line : moving) text += line + '\n';
  text += "print(";
  text += p.query_var;
  text += ')';
  inst.input_text = std::move(text);
  return inst;
}

std::vector<TaskInstance> gen_boolprog(const GenConfig& config, std::size_t count,
                                       std::uint64_t seed, const BoolprogGenOptions& options) {
  std::string split = options.split;
  if (split.empty()) {
    split = std::string(to_string(config.split));
    if (options.shuffled) split += "-shuffled";
  }
  std::vector<TaskInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed({seed}, i);
    const Program p = gen_program(config, s);
    std::ostringstream id;
    id << "boolprog-" << split << '-' << std::setw(6) << std::setfill('0') << i;
    out.push_back(options.shuffled ? shuffle_ops(p, derive_seed({s}, 1), id.str(), split)
                                   : make_boolprog_instance(p, id.str(), split, s));
    out.back().seed = s;
  }
  return out;
}

}  // namespace lengthgen::boolprog
