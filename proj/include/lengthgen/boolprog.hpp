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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lengthgen/taskcore.hpp"

namespace lengthgen::boolprog {

enum class OpKind {
  kInit,             // t = <lit>
  kAndVar,           // t = t and w
  kOrVar,            // t = t or w
  kXorVar,           // t = t != w
  kNot,              // t = not t
  kAndConst,         // t = t and <lit>
  kOrConst,          // t = t or <lit>
  kXorConst,         // t = t != <lit>
  kCondAssignConst,  // t = <lit> if c else t
  kAssignVar,        // t = w
  kCondAssignVar,    // t = w if c else t
};

std::string_view to_string(OpKind kind);

// Unused operand fields stay at their defaults ('\0' / false) so that
// structural equality is exact.
struct Operation {
  OpKind kind = OpKind::kInit;
  char target = 'a';
  char source = '\0';     // *Var, AssignVar, CondAssignVar
  char condition = '\0';  // CondAssignConst, CondAssignVar
  bool literal = false;   // Init, *Const, CondAssignConst

  friend bool operator==(const Operation&, const Operation&) = default;

  static Operation init(char t, bool value) { return {OpKind::kInit, t, '\0', '\0', value}; }
  static Operation with_var(OpKind k, char t, char w) { return {k, t, w, '\0', false}; }
  static Operation with_const(OpKind k, char t, bool value) { return {k, t, '\0', '\0', value}; }
  static Operation negate(char t) { return {OpKind::kNot, t, '\0', '\0', false}; }
  static Operation cond_const(char t, bool value, char c) {
    return {OpKind::kCondAssignConst, t, '\0', c, value};
  }
  static Operation assign(char t, char w) { return {OpKind::kAssignVar, t, w, '\0', false}; }
  static Operation cond_var(char t, char w, char c) { return {OpKind::kCondAssignVar, t, w, c, false}; }
};

enum class Split { kChainLike, kDiverse };

std::string_view to_string(Split split);
// Accepts "chain-like"/"chain_like"/"diverse". Throws ConfigError.
Split parse_split(std::string_view name);

const std::vector<OpKind>& op_pool(Split split);

// Straight-line program; the queried variable is printed on the last line.
// Equality compares ops and query_var; split is generation metadata.
struct Program {
  std::vector<Operation> ops;
  char query_var = 'a';
  Split split = Split::kChainLike;

  friend bool operator==(const Program& a, const Program& b) {
    return a.ops == b.ops && a.query_var == b.query_var;
  }
};

class Environment {
 public:
  bool defined(char v) const { return slot(v).has_value(); }
  bool get(char v) const { return slot(v).value(); }
  void set(char v, bool value) { values_[index(v)] = value; }
  std::vector<std::pair<char, bool>> entries() const;

  friend bool operator==(const Environment&, const Environment&) = default;

 private:
  static std::size_t index(char v) { return static_cast<std::size_t>(v - 'a'); }
  const std::optional<bool>& slot(char v) const { return values_[index(v)]; }
  std::array<std::optional<bool>, 26> values_{};
};

struct ExecResult {
  Environment env;
  bool answer = false;
  // Value of each op's target right after that op (one entry per op).
  std::vector<bool> step_values;
};

// Versioned dependency graph: one node per assignment (plus none for reads).
// inputs are the nodes whose values the assignment reads, including the
// previous version of the target for in-place kinds.
struct DepNode {
  char variable = 'a';
  std::size_t version = 0;
  std::size_t op_index = 0;
  std::vector<std::size_t> inputs;
};

struct DepGraph {
  std::vector<DepNode> nodes;  // nodes[i] is produced by ops[i]
  std::size_t query_node = 0;
};

struct GenConfig {
  Split split = Split::kChainLike;
  std::size_t min_ops = 8;
  std::size_t max_ops = 30;
  std::size_t min_vars = 4;
  std::size_t max_vars = 8;
  // When set, every variable's computational depth is kept at or below this cap.
  std::optional<std::size_t> max_depth;
};

// Throws ConfigError when the configuration cannot be satisfied.
Program gen_program(const GenConfig& config, std::uint64_t seed);

std::string render_op(const Operation& op);
std::string render_program(const Program& program);

// Throws ParseError (line number) or SemanticError (use before init).
Program parse_program(std::string_view text);
// Parses one non-print program line; nullopt when it is out of grammar.
std::optional<Operation> parse_op_line(std::string_view line);
// "# v = True" / "# v = False".
std::optional<std::pair<char, bool>> parse_comment_line(std::string_view line);
std::string strip_comments(std::string_view text);

// Throws SemanticError if the program reads an undefined variable.
void check_semantics(const Program& program);

ExecResult exec_program(const Program& program);
// Value op assigns to its target under env (which must define every read).
bool eval_op(const Operation& op, const Environment& env);

// Non-Init op count.
std::size_t num_ops(const Program& program);

DepGraph build_dep_graph(const Program& program);
std::size_t comp_graph_depth(const Program& program);
// mask[i] is true when ops[i] is an ancestor of (or is) the query's final version.
std::vector<bool> on_query_chain(const Program& program);
// Share of non-Init ops on the query chain; 0 for Init-only programs.
double chain_fraction(const Program& program);

// Program text with "# v = <value>" after every assignment and after the print.
std::string scratchpad_annotate(const Program& program);
// Same layout with caller-supplied per-op values; the print comment repeats
// the last value assigned to the query variable.
std::string annotate_with_values(const Program& program, const std::vector<bool>& step_values);

TaskInstance make_boolprog_instance(const Program& program, std::string id, std::string split,
                                    std::uint64_t seed);
// Non-Init lines permuted; answer and scratchpad_target come from the original
// program, so the target doubles as the provenance of the shuffled text.
TaskInstance shuffle_ops(const Program& program, std::uint64_t seed, std::string id = "shuffled",
                         std::string split = "shuffled-ops");

struct BoolprogGenOptions {
  bool shuffled = false;
  std::string split;  // overrides the default label
};

std::vector<TaskInstance> gen_boolprog(const GenConfig& config, std::size_t count,
                                       std::uint64_t seed, const BoolprogGenOptions& options = {});

}  // namespace lengthgen::boolprog
