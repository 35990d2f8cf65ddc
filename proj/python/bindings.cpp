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

// Python bindings for the generators, oracles and built-in evaluation loop.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lengthgen/adapters.hpp"
#include "lengthgen/boolprog.hpp"
#include "lengthgen/harness.hpp"
#include "lengthgen/parity.hpp"
#include "lengthgen/taskcore.hpp"

namespace py = pybind11;
using namespace lengthgen;

namespace {

parity::ParityGenOptions parity_options(const std::string& format, std::size_t pad_width) {
  parity::ParityGenOptions o;
  if (format == "symbolic") {
    o.format = parity::ParityFormat::kSymbolic;
  } else if (format == "padded") {
    o.format = parity::ParityFormat::kPadded;
  } else if (format == "coinflip") {
    o.format = parity::ParityFormat::kCoinflip;
  } else {
    throw ConfigError("unknown format '" + format + "' (symbolic, padded, coinflip)");
  }
  o.pad_width = pad_width;
  return o;
}

std::string results_jsonl(const harness::EvalRun& run) {
  std::ostringstream out;
  harness::write_results(run, out);
  return out.str();
}

harness::EvalRun parse_results(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return harness::read_results(in);
}

}  // namespace

PYBIND11_MODULE(_lengthgen, m) {
  m.doc() = "Length-generalization task generators, oracles and evaluation harness.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SemanticError>(m, "SemanticError", PyExc_ValueError);
  py::register_exception<DatasetError>(m, "DatasetError", PyExc_ValueError);
  py::register_exception<adapters::AdapterError>(m, "AdapterError", PyExc_RuntimeError);

  py::class_<LengthMetrics>(m, "LengthMetrics")
      .def_readonly("num_steps", &LengthMetrics::num_steps)
      .def_readonly("num_tokens", &LengthMetrics::num_tokens)
      .def_readonly("num_ones", &LengthMetrics::num_ones)
      .def_readonly("num_ops", &LengthMetrics::num_ops)
      .def_readonly("graph_depth", &LengthMetrics::graph_depth);

  py::class_<TaskInstance>(m, "TaskInstance")
      .def_readonly("id", &TaskInstance::id)
      .def_property_readonly("task", [](const TaskInstance& t) { return std::string(to_string(t.task)); })
      .def_readonly("split", &TaskInstance::split)
      .def_readonly("input_text", &TaskInstance::input_text)
      .def_readonly("scratchpad_target", &TaskInstance::scratchpad_target)
      .def_readonly("answer", &TaskInstance::answer)
      .def_readonly("metrics", &TaskInstance::metrics)
      .def_readonly("seed", &TaskInstance::seed)
      .def("to_json", &instance_to_json)
      .def_static("from_json", [](const std::string& line) { return instance_from_json(line); })
      .def("__eq__", [](const TaskInstance& a, const TaskInstance& b) { return a == b; })
      .def("__repr__", [](const TaskInstance& t) { return "<TaskInstance " + t.id + ">"; });

  m.def("derive_seed", [](std::uint64_t master, std::uint64_t index) { return derive_seed({master}, index); },
        py::arg("master"), py::arg("index"));

  m.def(
      "gen_parity",
      [](std::size_t min_len, std::size_t max_len, std::size_t count, std::uint64_t seed, const std::string& format,
         std::size_t pad_width) {
        return parity::gen_varied_bits(min_len, max_len, count, seed, parity_options(format, pad_width));
      },
      py::arg("min_len"), py::arg("max_len"), py::arg("count"), py::arg("seed") = 0,
      py::arg("format") = "symbolic", py::arg("pad_width") = 0);

  m.def(
      "gen_parity_ones",
      [](std::size_t total_bits, std::size_t min_ones, std::size_t max_ones, std::size_t count, std::uint64_t seed,
         const std::string& format, std::size_t pad_width) {
        return parity::gen_varied_ones(total_bits, min_ones, max_ones, count, seed,
                                       parity_options(format, pad_width));
      },
      py::arg("total_bits"), py::arg("min_ones"), py::arg("max_ones"), py::arg("count"), py::arg("seed") = 0,
      py::arg("format") = "symbolic", py::arg("pad_width") = 0);

  m.def(
      "gen_boolprog",
      [](std::size_t count, std::uint64_t seed, const std::string& split, std::size_t min_ops, std::size_t max_ops,
         std::size_t min_vars, std::size_t max_vars, std::optional<std::size_t> max_depth, bool shuffled) {
        boolprog::GenConfig c;
        c.split = boolprog::parse_split(split);
        c.min_ops = min_ops;
        c.max_ops = max_ops;
        c.min_vars = min_vars;
        c.max_vars = max_vars;
        c.max_depth = max_depth;
        return boolprog::gen_boolprog(c, count, seed, {shuffled, {}});
      },
      py::arg("count"), py::arg("seed") = 0, py::arg("split") = "chain-like", py::arg("min_ops") = 8,
      py::arg("max_ops") = 30, py::arg("min_vars") = 4, py::arg("max_vars") = 8, py::arg("max_depth") = py::none(),
      py::arg("shuffled") = false);

  m.def(
      "solve",
      [](const std::string& text) {
        const auto s = harness::solve_text(text);
        return py::make_tuple(s.answer, s.trace);
      },
      py::arg("text"), "Oracle (answer, scratchpad) for a rendered parity, coin-flip or program instance.");

  m.def(
      "exec_program", [](const std::string& text) { return boolprog::exec_program(boolprog::parse_program(text)).answer; },
      py::arg("text"));
  m.def(
      "graph_depth", [](const std::string& text) { return boolprog::comp_graph_depth(boolprog::parse_program(text)); },
      py::arg("text"));

  m.def(
      "validate",
      [](const std::vector<TaskInstance>& data) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& mm : harness::validate(data).mismatches) out.emplace_back(mm.id, mm.field, mm.detail);
        return out;
      },
      py::arg("instances"), "List of (id, field, detail) mismatches; empty when the data is consistent.");

  m.def(
      "write_dataset",
      [](const std::vector<TaskInstance>& data, const std::string& path) { return write_dataset_file(data, path); },
      py::arg("instances"), py::arg("path"));
  m.def("read_dataset", &read_dataset_file, py::arg("path"));

  m.def(
      "eval_jsonl",
      [](const std::vector<TaskInstance>& data, const std::string& adapter_spec, const std::string& style,
         std::size_t shots, std::vector<std::size_t> exemplar_lengths, std::uint64_t seed, std::size_t parallelism) {
        harness::PromptSpec spec;
        spec.style = harness::parse_style(style);
        spec.shots = shots;
        if (exemplar_lengths.empty())
          for (std::size_t i = 0; i < shots; ++i) exemplar_lengths.push_back(3 + i % 3);
        spec.exemplar_lengths = exemplar_lengths;
        adapters::AdapterSpecOptions ao;
        ao.seed = seed;
        ao.direct = spec.style == harness::PromptStyle::kDirect;
        auto adapter = adapters::make_adapter(adapter_spec, ao);
        std::vector<TaskInstance> ex;
        if (shots > 0 && !data.empty()) ex = harness::make_exemplars(data.front(), spec.exemplar_lengths, seed);
        harness::EvalOptions eo;
        eo.parallelism = parallelism;
        harness::EvalRun run;
        {
          py::gil_scoped_release release;
          run = harness::run_eval(data, *adapter, spec, ex, eo);
        }
        return results_jsonl(run);
      },
      py::arg("instances"), py::arg("adapter") = "perfect", py::arg("style") = "scratchpad", py::arg("shots") = 0,
      py::arg("exemplar_lengths") = std::vector<std::size_t>{}, py::arg("seed") = 0, py::arg("parallelism") = 1,
      "Runs a built-in or external adapter and returns the results file contents.");

  m.def(
      "accuracy_table",
      [](const std::string& results, const std::string& metric) {
        const auto run = parse_results(results);
        py::list rows;
        for (const auto& r : harness::accuracy_by(run.records, metric).rows) {
          py::dict d;
          d["value"] = r.value;
          d["n"] = r.n;
          d["final_acc"] = r.final_acc;
          d["step_acc"] = r.step_acc ? py::cast(*r.step_acc) : py::none();
          d["prefix"] = r.prefix;
          d["mean_steps"] = r.mean_steps;
          rows.append(d);
        }
        return rows;
      },
      py::arg("results"), py::arg("metric") = "num_steps");

  m.def(
      "fit_step_error",
      [](const std::string& results, const std::string& metric, const std::string& model) {
        const auto run = parse_results(results);
        const auto fit =
            harness::fit_step_error(harness::accuracy_by(run.records, metric), harness::parse_fit_model(model));
        return py::make_tuple(fit.epsilon_hat, fit.residual);
      },
      py::arg("results"), py::arg("metric") = "num_steps", py::arg("model") = "prefix_geometric");

  m.def("parity_closed_form", &harness::parity_closed_form, py::arg("epsilon"), py::arg("n"));
  m.def("prefix_closed_form", &harness::prefix_closed_form, py::arg("epsilon"), py::arg("k"));
}
