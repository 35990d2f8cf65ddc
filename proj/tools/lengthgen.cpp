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

// lengthgen command-line tool: gen, validate, solve, prompt, eval, analyze.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lengthgen/adapters.hpp"
#include "lengthgen/boolprog.hpp"
#include "lengthgen/errors.hpp"
#include "lengthgen/harness.hpp"
#include "lengthgen/parity.hpp"
#include "lengthgen/presets.hpp"
#include "lengthgen/taskcore.hpp"

namespace {

using namespace lengthgen;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitAdapter = 3;
constexpr int kExitInterrupted = 130;

constexpr const char* kEndpointEnv = "LENGTHGEN_ENDPOINT";

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) { g_cancel.store(true); }

struct GenArgs {
  std::string task = "parity";
  std::string preset;
  std::string split;
  std::string format = "symbolic";
  std::size_t pad_width = 0;
  std::size_t min_len = 3;
  std::size_t max_len = 20;
  std::size_t total_bits = 30;
  std::size_t min_ones = 10;
  std::size_t max_ones = 20;
  std::size_t min_ops = 8;
  std::size_t max_ops = 30;
  std::size_t min_vars = 4;
  std::size_t max_vars = 8;
  std::size_t max_depth = 0;
  bool shuffled = false;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  std::string out;
  bool force = false;
};

struct PromptArgs {
  std::string dataset;
  std::string style = "scratchpad";
  std::size_t shots = 0;
  std::vector<std::size_t> exemplar_lengths;
  std::string header;
  std::uint64_t seed = 0;
  std::size_t index = 0;
  std::string id;
};

struct EvalArgs {
  PromptArgs prompt;
  std::string adapter = "perfect";
  std::size_t parallelism = 1;
  int retries = 2;
  std::int64_t timeout_ms = 30000;
  std::int64_t max_tokens = 0;
  std::vector<std::string> http_headers;
  std::string out;
  bool force = false;
};

struct AnalyzeArgs {
  std::vector<std::string> results;
  std::string by = "num_steps";
  std::string out;
  std::string chart;
  std::string fit;
  bool force = false;
};

// Flat "key = value" lines; '#' starts a comment line. Returned as
// "--key=value" tokens in file order.
std::vector<std::string> read_config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty() || key == "config") throw ConfigError(path + ":" + std::to_string(line_no) + ": bad key");
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// Moves "--config FILE" / "--config=FILE" out of args and splices the file's
// pairs in right after the subcommand name, so later (user) flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].starts_with("--config=")) {
      config = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config.empty()) return args;
  auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.starts_with("-"); });
  if (sub == args.end()) throw ConfigError("--config given without a subcommand");
  const auto extra = read_config_args(config);
  args.insert(sub + 1, extra.begin(), extra.end());
  return args;
}

void check_writable(const std::string& path, bool force) {
  if (path.empty() || path == "-") return;
  if (fs::exists(path) && !force)
    throw ConfigError("refusing to overwrite existing file '" + path + "' (use --force)");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  return out;
}

// ---- gen --------------------------------------------------------------------

void apply_preset(CLI::App& sub, const GenArgs& args) {
  if (args.preset.empty()) return;
  const Preset& preset = find_preset(parse_task_kind(args.task), args.preset);
  for (const auto& [key, value] : preset.values) {
    CLI::Option* opt = sub.get_option("--" + key);
    if (opt->count() != 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

int cmd_gen(const GenArgs& a) {
  check_writable(a.out, a.force);
  const TaskKind task = parse_task_kind(a.task);
  std::vector<TaskInstance> data;
  if (task == TaskKind::kBoolprog) {
    boolprog::GenConfig cfg;
    cfg.split = boolprog::parse_split(a.split.empty() ? "chain-like" : a.split);
    cfg.min_ops = a.min_ops;
    cfg.max_ops = a.max_ops;
    cfg.min_vars = a.min_vars;
    cfg.max_vars = a.max_vars;
    if (a.max_depth > 0) cfg.max_depth = a.max_depth;
    data = boolprog::gen_boolprog(cfg, a.count, a.seed, {a.shuffled, {}});
  } else {
    parity::ParityGenOptions opts;
    if (task == TaskKind::kCoinflip) {
      opts.format = parity::ParityFormat::kCoinflip;
    } else if (a.format == "padded") {
      opts.format = parity::ParityFormat::kPadded;
    } else if (a.format != "symbolic") {
      throw ConfigError("unknown format '" + a.format + "' (symbolic, padded)");
    }
    opts.pad_width = a.pad_width;
    const std::string split = a.split.empty() ? "varied-bits" : a.split;
    if (split == "varied-bits") {
      data = parity::gen_varied_bits(a.min_len, a.max_len, a.count, a.seed, opts);
    } else if (split == "varied-ones") {
      data = parity::gen_varied_ones(a.total_bits, a.min_ones, a.max_ones, a.count, a.seed, opts);
    } else {
      throw ConfigError("unknown split '" + split + "' (varied-bits, varied-ones)");
    }
  }

  if (a.out.empty() || a.out == "-") {
    write_dataset(data, std::cout);
  } else {
    auto out = open_out(a.out);
    write_dataset(data, out);
  }

  std::map<std::int64_t, std::size_t> buckets;
  const char* metric = task == TaskKind::kBoolprog ? "num_ops" : "num_steps";
  for (const auto& inst : data) ++buckets[*metric_value(inst.metrics, metric)];
  std::cerr << "wrote " << data.size() << " instances";
  if (!a.out.empty() && a.out != "-") std::cerr << " to " << a.out;
  std::cerr << '\n';
  for (const auto& [value, n] : buckets) std::cerr << "  " << metric << '=' << value << ": " << n << '\n';
  return kExitOk;
}

// ---- validate -----------------------------------------------------------------

int cmd_validate(const std::string& path) {
  const auto data = read_dataset_file(path);
  const auto report = harness::validate(data);
  for (const auto& m : report.mismatches) std::cout << m.id << '\t' << m.field << '\t' << m.detail << '\n';
  std::cout << "checked " << report.checked << ", mismatches " << report.mismatches.size() << '\n';
  return report.ok() ? kExitOk : kExitMismatch;
}

// ---- solve --------------------------------------------------------------------

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cmd_solve(std::string text, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + file + "'");
    text = read_all(in);
  } else if (text.empty() || text == "-") {
    text = read_all(std::cin);
  }
  const auto solved = harness::solve_text(text);
  const std::string& answer = solved.answer;
  const std::string& trace = solved.trace;
  std::cout << answer << '\n' << trace;
  if (!trace.empty() && trace.back() != '\n') std::cout << '\n';
  return kExitOk;
}

// ---- prompt / eval --------------------------------------------------------------

harness::PromptSpec make_spec(const PromptArgs& a) {
  harness::PromptSpec spec;
  spec.style = harness::parse_style(a.style);
  spec.shots = a.shots;
  if (a.shots > 0) {
    spec.exemplar_lengths = a.exemplar_lengths;
    if (spec.exemplar_lengths.empty()) {
      for (std::size_t i = 0; i < a.shots; ++i) spec.exemplar_lengths.push_back(3 + i % 3);
    }
    if (spec.exemplar_lengths.size() != a.shots)
      throw ConfigError("--exemplar-lengths needs exactly --shots entries");
  }
  if (!a.header.empty()) spec.instruction_header = a.header;
  return spec;
}

std::vector<TaskInstance> exemplars_for(const harness::PromptSpec& spec, const std::vector<TaskInstance>& data,
                                        std::uint64_t seed) {
  if (spec.shots == 0 || data.empty()) return {};
  return harness::make_exemplars(data.front(), spec.exemplar_lengths, seed);
}

int cmd_prompt(const PromptArgs& a) {
  const auto data = read_dataset_file(a.dataset);
  if (data.empty()) throw DatasetError("dataset is empty");
  const TaskInstance* query = nullptr;
  if (!a.id.empty()) {
    for (const auto& inst : data)
      if (inst.id == a.id) query = &inst;
    if (!query) throw ConfigError("no instance with id '" + a.id + "'");
  } else {
    if (a.index >= data.size()) throw ConfigError("--index out of range");
    query = &data[a.index];
  }
  const auto spec = make_spec(a);
  const auto exemplars = exemplars_for(spec, data, a.seed);
  std::cout << harness::build_prompt(spec, exemplars, *query);
  return kExitOk;
}

int cmd_eval(const EvalArgs& a) {
  check_writable(a.out, a.force);
  const auto data = read_dataset_file(a.prompt.dataset);
  if (data.empty()) throw DatasetError("dataset is empty");
  const auto spec = make_spec(a.prompt);
  const auto exemplars = exemplars_for(spec, data, a.prompt.seed);

  adapters::AdapterSpecOptions aopts;
  aopts.seed = a.prompt.seed;
  aopts.direct = spec.style == harness::PromptStyle::kDirect;
  aopts.transport.parallelism = a.parallelism;
  aopts.transport.timeout = std::chrono::milliseconds(a.timeout_ms);
  if (const char* env = std::getenv(kEndpointEnv); env && *env) aopts.endpoint_override = env;
  for (const auto& h : a.http_headers) {
    const auto colon = h.find(':');
    if (colon == std::string::npos) throw ConfigError("--http-header expects 'Name: value'");
    const auto value_start = h.find_first_not_of(' ', colon + 1);
    aopts.http_headers[h.substr(0, colon)] = value_start == std::string::npos ? "" : h.substr(value_start);
  }
  auto adapter = adapters::make_adapter(a.adapter, aopts);

  harness::EvalOptions eopts;
  eopts.parallelism = a.parallelism;
  eopts.retries = a.retries;
  eopts.max_tokens = a.max_tokens;
  eopts.cancel = &g_cancel;
  std::signal(SIGINT, on_sigint);
  const auto run = harness::run_eval(data, *adapter, spec, exemplars, eopts);
  std::signal(SIGINT, SIG_DFL);

  if (a.out.empty() || a.out == "-") {
    harness::write_results(run, std::cout);
  } else {
    auto out = open_out(a.out);
    harness::write_results(run, out);
  }

  std::size_t scored = 0, correct = 0;
  for (const auto& r : run.records) {
    scored += r.scored ? 1 : 0;
    correct += r.final_correct ? 1 : 0;
  }
  const double acc = scored ? static_cast<double>(correct) / static_cast<double>(scored) : 0.0;
  std::ostringstream msg;
  msg.setf(std::ios::fixed);
  msg.precision(6);
  msg << "accuracy " << acc << " (" << correct << '/' << scored << " scored, " << data.size() << " instances)";
  std::cerr << msg.str() << '\n';
  if (run.aborted) {
    std::cerr << "run aborted: " << run.abort_reason << " (partial results written)\n";
    return g_cancel.load() ? kExitInterrupted : kExitAdapter;
  }
  if (scored < run.records.size()) std::cerr << (run.records.size() - scored) << " records unscored\n";
  return kExitOk;
}

// ---- analyze --------------------------------------------------------------------

int cmd_analyze(const AnalyzeArgs& a) {
  check_writable(a.out, a.force);
  check_writable(a.chart, a.force);
  std::vector<harness::EvalRecord> records;
  for (const auto& path : a.results) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    auto run = harness::read_results(in);
    if (run.aborted) std::cerr << path << ": partial results (" << run.abort_reason << ")\n";
    for (auto& r : run.records) records.push_back(std::move(r));
  }
  const auto table = harness::accuracy_by(records, a.by);
  if (a.out.empty() || a.out == "-") {
    harness::write_table_csv(table, std::cout);
  } else {
    auto out = open_out(a.out);
    harness::write_table_csv(table, out);
  }

  if (!a.chart.empty()) {
    std::map<std::string, std::vector<harness::EvalRecord>> by_split;
    for (const auto& r : records) by_split[r.split].push_back(r);
    std::vector<std::pair<std::string, harness::AccuracyTable>> series;
    for (const auto& [split, recs] : by_split) series.emplace_back(split, harness::accuracy_by(recs, a.by));
    auto out = open_out(a.chart);
    harness::write_chart_svg(series, out);
  }

  if (!a.fit.empty()) {
    const auto fit = harness::fit_step_error(table, harness::parse_fit_model(a.fit));
    std::ostringstream msg;
    msg.setf(std::ios::fixed);
    msg.precision(6);
    msg << "fit " << harness::to_string(fit.model) << " epsilon_hat " << fit.epsilon_hat << " residual "
        << fit.residual;
    std::cerr << msg.str() << '\n';
  }
  return kExitOk;
}

void add_prompt_options(CLI::App& sub, PromptArgs& p) {
  sub.add_option("--dataset,-d", p.dataset, "Dataset file (JSON lines)")->required();
  sub.add_option("--style", p.style, "direct or scratchpad")->check(CLI::IsMember({"direct", "scratchpad"}));
  sub.add_option("--shots", p.shots, "Number of few-shot exemplars");
  sub.add_option("--exemplar-lengths", p.exemplar_lengths, "Exemplar lengths, one per shot")->delimiter(',');
  sub.add_option("--header", p.header, "Instruction header placed before the exemplars");
  sub.add_option("--seed", p.seed, "Master seed for exemplars and stochastic solvers");
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  args = expand_config(std::move(args));

  CLI::App app{"Length-generalization task generators, oracles and evaluation harness", "lengthgen"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.footer("Options may also come from a flat 'key = value' file given with --config.\n"
             "Precedence: flags > config file > preset > defaults.\n"
             "Exit codes: 0 ok, 1 usage/config, 2 validation mismatch, 3 adapter failure.");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a dataset");
  g->add_option("--task", gen.task, "parity, coinflip or boolprog")
      ->check(CLI::IsMember({"parity", "coinflip", "boolprog"}));
  g->add_option("--preset", gen.preset, "Named setting (see README)");
  g->add_option("--split", gen.split, "varied-bits / varied-ones, or chain-like / diverse");
  g->add_option("--format", gen.format, "Parity rendering: symbolic or padded");
  g->add_option("--pad-width", gen.pad_width, "Padded row width (0 = longest generated length)");
  g->add_option("--min-len", gen.min_len);
  g->add_option("--max-len", gen.max_len);
  g->add_option("--total-bits", gen.total_bits);
  g->add_option("--min-ones", gen.min_ones);
  g->add_option("--max-ones", gen.max_ones);
  g->add_option("--min-ops", gen.min_ops);
  g->add_option("--max-ops", gen.max_ops);
  g->add_option("--min-vars", gen.min_vars);
  g->add_option("--max-vars", gen.max_vars);
  g->add_option("--max-depth", gen.max_depth, "Cap on computational graph depth (0 = none)");
  g->add_flag("--shuffled", gen.shuffled, "Permute the non-initialization lines");
  g->add_option("--count,-n", gen.count, "Number of instances");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--out,-o", gen.out, "Output file ('-' for stdout)")->required();
  g->add_flag("--force", gen.force, "Overwrite an existing output file");

  std::string validate_path;
  auto* v = app.add_subcommand("validate", "Re-check a dataset against the task oracles");
  v->add_option("dataset", validate_path)->required();

  std::string solve_text, solve_file;
  auto* s = app.add_subcommand("solve", "Print the oracle answer and scratchpad for one instance");
  s->add_option("text", solve_text, "Instance text ('-' or empty reads stdin)");
  s->add_option("--file,-f", solve_file, "Read the instance from a file");

  PromptArgs prompt;
  auto* p = app.add_subcommand("prompt", "Render the prompt for one dataset instance");
  add_prompt_options(*p, prompt);
  p->add_option("--index", prompt.index, "Instance position in the dataset");
  p->add_option("--id", prompt.id, "Instance id (overrides --index)");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Evaluate an adapter on a dataset");
  add_prompt_options(*e, eval.prompt);
  e->add_option("--adapter", eval.adapter,
                "perfect | shortcut:LO-HI | noisy:eps=E[,seed=S] | echo | subprocess:CMD | http:URL");
  e->add_option("--parallelism,-j", eval.parallelism)->check(CLI::PositiveNumber);
  e->add_option("--retries", eval.retries)->check(CLI::NonNegativeNumber);
  e->add_option("--timeout-ms", eval.timeout_ms)->check(CLI::PositiveNumber);
  e->add_option("--max-tokens", eval.max_tokens, "Completion budget (0 = from oracle target length)");
  e->add_option("--http-header", eval.http_headers, "'Name: value', repeatable")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  e->add_option("--out,-o", eval.out, "Results file ('-' for stdout)")->required();
  e->add_flag("--force", eval.force);

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Aggregate results into accuracy tables");
  a->add_option("results", an.results, "Results files")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  a->add_option("--by", an.by, "Grouping metric");
  a->add_option("--out,-o", an.out, "CSV output ('-' for stdout)");
  a->add_option("--chart", an.chart, "SVG chart output");
  a->add_option("--fit", an.fit, "prefix_geometric or parity_closed_form");
  a->add_flag("--force", an.force);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    apply_preset(*g, gen);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kExitOk : kExitUsage;
  }

  if (g->parsed()) return cmd_gen(gen);
  if (v->parsed()) return cmd_validate(validate_path);
  if (s->parsed()) return cmd_solve(solve_text, solve_file);
  if (p->parsed()) return cmd_prompt(prompt);
  if (e->parsed()) return cmd_eval(eval);
  if (a->parsed()) return cmd_analyze(an);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const adapters::AdapterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAdapter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
