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

#include <gtest/gtest.h>

#include <chrono>
#include <sstream>
#include <thread>

#include "lengthgen/adapters.hpp"
#include "lengthgen/boolprog.hpp"
#include "lengthgen/harness.hpp"
#include "lengthgen/parity.hpp"
#include "oracles.hpp"

namespace lengthgen::harness {
namespace {

using adapters::AdapterError;
using adapters::CompletionRequest;
using adapters::CompletionResponse;

std::vector<TaskInstance> coin_data(std::size_t min_len, std::size_t max_len, std::size_t n, std::uint64_t seed) {
  parity::ParityGenOptions o;
  o.format = parity::ParityFormat::kCoinflip;
  return parity::gen_varied_bits(min_len, max_len, n, seed, o);
}

TEST(Prompt, ZeroShotDirectIsHeaderPlusQuery) {
  const auto q = parity::gen_varied_bits(5, 5, 1, 1)[0];
  PromptSpec spec;
  spec.style = PromptStyle::kDirect;
  EXPECT_EQ(build_prompt(spec, {}, q), q.input_text + "\n");
  spec.instruction_header = "Compute the parity.";
  EXPECT_EQ(build_prompt(spec, {}, q), "Compute the parity.\n\n" + q.input_text + "\n");
}

TEST(Prompt, FewShotLayout) {
  const auto q = parity::gen_varied_bits(6, 6, 1, 2)[0];
  PromptSpec spec;
  spec.shots = 2;
  spec.exemplar_lengths = {3, 4};
  const auto ex = make_exemplars(q, spec.exemplar_lengths, 5);
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].metrics.num_steps, 3);
  EXPECT_EQ(ex[1].metrics.num_steps, 4);
  const auto prompt = build_prompt(spec, ex, q);
  EXPECT_EQ(prompt, ex[0].input_text + "\n" + ex[0].scratchpad_target + "\n\n" + ex[1].input_text + "\n" +
                        ex[1].scratchpad_target + "\n\n" + q.input_text + "\n");
  spec.style = PromptStyle::kDirect;
  EXPECT_EQ(build_prompt(spec, ex, q), ex[0].input_text + "\n" + ex[0].answer + "\n\n" + ex[1].input_text + "\n" +
                                           ex[1].answer + "\n\n" + q.input_text + "\n");
}

TEST(Prompt, CoinflipShortExemplarsLongQuery) {
  const auto q = coin_data(20, 20, 1, 3)[0];
  PromptSpec spec;
  spec.shots = 3;
  spec.exemplar_lengths = {3, 3, 3};
  const auto ex = make_exemplars(q, spec.exemplar_lengths, 1);
  const auto prompt = build_prompt(spec, ex, q);
  // The perfect continuation of this prompt is the 20-step scratchpad.
  const auto continuation = adapters::solve_perfect_sequential(prompt);
  EXPECT_EQ(continuation, q.scratchpad_target);
  EXPECT_EQ(parse_completion(continuation, TaskKind::kCoinflip, PromptStyle::kScratchpad).steps.size(), 20u);
}

TEST(Prompt, QueryAnswerNeverFollowsQueryInput) {
  std::vector<TaskInstance> all = parity::gen_varied_bits(3, 10, 100, 4);
  const auto coins = coin_data(3, 10, 100, 5);
  const auto progs = boolprog::gen_boolprog({}, 100, 6);
  all.insert(all.end(), coins.begin(), coins.end());
  all.insert(all.end(), progs.begin(), progs.end());
  for (const auto& q : all) {
    for (auto style : {PromptStyle::kDirect, PromptStyle::kScratchpad}) {
      PromptSpec spec;
      spec.style = style;
      spec.shots = 2;
      spec.exemplar_lengths = {3, 4};
      const auto prompt = build_prompt(spec, make_exemplars(q, spec.exemplar_lengths, 9), q);
      const auto at = prompt.rfind(q.input_text);
      ASSERT_NE(at, std::string::npos);
      const auto tail = prompt.substr(at + q.input_text.size());
      ASSERT_EQ(tail, spec.separator);
      ASSERT_EQ(tail.find(q.scratchpad_target), std::string::npos);
    }
  }
}

TEST(Prompt, Errors) {
  const auto q = parity::gen_varied_bits(5, 5, 1, 1)[0];
  const auto b = boolprog::gen_boolprog({}, 1, 1)[0];
  PromptSpec spec;
  spec.shots = 1;
  spec.exemplar_lengths = {3};
  EXPECT_THROW(build_prompt(spec, std::vector<TaskInstance>{b}, q), ConfigError);
  auto no_target = parity::gen_varied_bits(3, 3, 1, 2)[0];
  no_target.scratchpad_target.clear();
  EXPECT_THROW(build_prompt(spec, std::vector<TaskInstance>{no_target}, q), ConfigError);
  spec.style = PromptStyle::kDirect;
  EXPECT_NO_THROW(build_prompt(spec, std::vector<TaskInstance>{no_target}, q));
  spec.exemplar_lengths = {3, 4};
  EXPECT_THROW(build_prompt(spec, std::vector<TaskInstance>{no_target}, q), ConfigError);
}

TEST(Exemplars, MatchQueryShape) {
  parity::ParityGenOptions padded;
  padded.format = parity::ParityFormat::kPadded;
  padded.pad_width = 30;
  const auto pq = parity::gen_varied_bits(20, 20, 1, 1, padded)[0];
  for (const auto& ex : make_exemplars(pq, std::vector<std::size_t>{3, 5}, 2)) {
    const auto parsed = parity::parse_symbolic_input(ex.input_text);
    EXPECT_EQ(parsed.bits.size() + parsed.left_pad + parsed.right_pad, 30u);
  }
  boolprog::GenConfig dc;
  dc.split = boolprog::Split::kDiverse;
  const auto bq = boolprog::gen_boolprog(dc, 1, 1)[0];
  for (const auto& ex : make_exemplars(bq, std::vector<std::size_t>{4, 6}, 2)) {
    EXPECT_EQ(ex.task, TaskKind::kBoolprog);
    EXPECT_EQ(ex.split, bq.split);
  }
  EXPECT_EQ(make_exemplars(bq, std::vector<std::size_t>{4}, 2), make_exemplars(bq, std::vector<std::size_t>{4}, 2));
}

TEST(ParseCompletion, PerfectOutputParsesFully) {
  for (const auto& inst : parity::gen_varied_bits(3, 30, 50, 8)) {
    const auto pc = parse_completion(inst.scratchpad_target, inst.task, PromptStyle::kScratchpad);
    ASSERT_EQ(pc.steps, oracle::words_of(inst.scratchpad_target));
    ASSERT_EQ(pc.answer, inst.answer);
  }
  for (const auto& inst : boolprog::gen_boolprog({}, 50, 8)) {
    const auto pc = parse_completion(inst.scratchpad_target, inst.task, PromptStyle::kScratchpad);
    ASSERT_EQ(pc.steps.size(), inst.metrics.num_steps);
    ASSERT_EQ(pc.answer, inst.answer);
  }
}

TEST(ParseCompletion, EmptyHasNoAnswer) {
  for (auto task : {TaskKind::kParity, TaskKind::kCoinflip, TaskKind::kBoolprog})
    for (auto style : {PromptStyle::kDirect, PromptStyle::kScratchpad}) {
      const auto pc = parse_completion("", task, style);
      EXPECT_FALSE(pc.answer.has_value());
      EXPECT_TRUE(pc.steps.empty());
    }
}

TEST(ParseCompletion, PrefixThenGarbage) {
  const auto pc = parse_completion("1 0 0 banana 1 1", TaskKind::kParity, PromptStyle::kScratchpad);
  EXPECT_EQ(pc.steps, (std::vector<std::string>{"1", "0", "0"}));
  EXPECT_EQ(pc.answer, "0");
  const auto coin = parse_completion("3. The coin is tails up.\n2. The coin is heads up.\n1. I lost the coin.",
                                     TaskKind::kCoinflip, PromptStyle::kScratchpad);
  EXPECT_EQ(coin.steps, (std::vector<std::string>{"1", "0"}));
  EXPECT_EQ(coin.answer, "0");
  const auto prog = parse_completion("a = True\n# a = True\nb = a\n# b = False\nc = ???\n# c = True",
                                     TaskKind::kBoolprog, PromptStyle::kScratchpad);
  EXPECT_EQ(prog.steps, (std::vector<std::string>{"True", "False"}));
  EXPECT_EQ(prog.answer, "False");
}

TEST(ParseCompletion, DirectAnswers) {
  EXPECT_EQ(parse_completion("1", TaskKind::kParity, PromptStyle::kDirect).answer, "1");
  EXPECT_EQ(parse_completion(" yes.", TaskKind::kCoinflip, PromptStyle::kDirect).answer, "0");
  EXPECT_EQ(parse_completion("No", TaskKind::kCoinflip, PromptStyle::kDirect).answer, "1");
  EXPECT_EQ(parse_completion("True\nprint", TaskKind::kBoolprog, PromptStyle::kDirect).answer, "True");
  EXPECT_FALSE(parse_completion("maybe", TaskKind::kBoolprog, PromptStyle::kDirect).answer.has_value());
  EXPECT_TRUE(parse_completion("0", TaskKind::kParity, PromptStyle::kDirect).steps.empty());
}

TEST(ParseCompletion, PaddedSkipsPadding) {
  const auto pc = parse_completion("_ _ 1 0 _", TaskKind::kParity, PromptStyle::kScratchpad);
  EXPECT_EQ(pc.steps, (std::vector<std::string>{"1", "0"}));
}

TEST(Score, PositionalStepsAndFinal) {
  const auto inst = parity::make_parity_instance(parity::BitString{1, 1, 0, 1}, parity::ParityFormat::kSymbolic, "s",
                                                 "t", 0);
  ASSERT_EQ(inst.scratchpad_target, "1 0 0 1");
  auto r = score_completion(inst, "p", "1 0 1 0", PromptStyle::kScratchpad);
  EXPECT_EQ(r.step_correct, (std::vector<bool>{true, true, false, false}));
  EXPECT_FALSE(r.final_correct);
  EXPECT_TRUE(r.scored);
  // A skipped step is wrong from that position on.
  r = score_completion(inst, "p", "1 0 1", PromptStyle::kScratchpad);
  EXPECT_EQ(r.step_correct, (std::vector<bool>{true, true, false}));
  EXPECT_TRUE(r.final_correct);  // answer token still matches
  r = score_completion(inst, "p", "1 0 0 1 1 1 1", PromptStyle::kScratchpad);
  EXPECT_EQ(r.step_correct.size(), 4u);
  r = score_completion(inst, "p", "garbage", PromptStyle::kScratchpad);
  EXPECT_TRUE(r.scored);
  EXPECT_FALSE(r.final_correct);
  EXPECT_FALSE(r.parsed_answer.has_value());
  r = score_completion(inst, "p", "1", PromptStyle::kDirect);
  EXPECT_TRUE(r.final_correct);
  EXPECT_TRUE(r.step_correct.empty());
}

// Completes requests in a scrambled order with random delays.
class JitterAdapter : public adapters::ModelAdapter {
 public:
  CompletionResponse complete(const CompletionRequest& request) override {
    std::this_thread::sleep_for(std::chrono::microseconds(stable_hash(request.id) % 2000));
    return inner_.complete(request);
  }
  std::size_t parallelism() const override { return 16; }
  std::string name() const override { return "jitter"; }

 private:
  adapters::SolverAdapter inner_{adapters::SolverConfig{}};
};

TEST(RunEval, PerfectIsAllCorrectInDatasetOrder) {
  const auto data = parity::gen_varied_bits(3, 40, 300, 12);
  JitterAdapter adapter;
  EvalOptions o;
  o.parallelism = 16;
  const auto run = run_eval(data, adapter, PromptSpec{}, {}, o);
  ASSERT_FALSE(run.aborted);
  ASSERT_EQ(run.records.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(run.records[i].instance_id, data[i].id);
    EXPECT_TRUE(run.records[i].final_correct);
    EXPECT_EQ(run.records[i].step_correct.size(), static_cast<std::size_t>(data[i].metrics.num_steps));
  }
}

TEST(RunEval, ParallelismDoesNotChangeOutput) {
  const auto data = parity::gen_varied_bits(3, 20, 200, 13);
  auto noisy = adapters::make_adapter("noisy:eps=0.1,seed=3");
  EvalOptions one;
  EvalOptions many;
  many.parallelism = 16;
  std::ostringstream a, b;
  write_results(run_eval(data, *noisy, PromptSpec{}, {}, one), a);
  write_results(run_eval(data, *noisy, PromptSpec{}, {}, many), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunEval, HalfEpsilonIsChance) {
  const auto data = parity::gen_varied_bits(3, 40, 10000, 14);
  auto noisy = adapters::make_adapter("noisy:eps=0.5,seed=1");
  EvalOptions o;
  o.parallelism = 8;
  const auto run = run_eval(data, *noisy, PromptSpec{}, {}, o);
  double correct = 0;
  for (const auto& r : run.records) correct += r.final_correct;
  EXPECT_NEAR(correct / static_cast<double>(data.size()), 0.5, 0.02);
}

class FlakyAdapter : public adapters::ModelAdapter {
 public:
  explicit FlakyAdapter(AdapterError::Kind kind, int fail_times) : kind_(kind), fail_times_(fail_times) {}
  CompletionResponse complete(const CompletionRequest& request) override {
    if (request.id == target_ && calls_++ < fail_times_) throw AdapterError(kind_, "injected failure");
    return inner_.complete(request);
  }
  std::string name() const override { return "flaky"; }
  std::string target_ = "parity-varied-bits-000002";
  int calls_ = 0;

 private:
  AdapterError::Kind kind_;
  int fail_times_;
  adapters::SolverAdapter inner_{adapters::SolverConfig{}};
};

TEST(RunEval, RetriesRecoverTransientFailures) {
  const auto data = parity::gen_varied_bits(3, 5, 5, 1);
  FlakyAdapter a(AdapterError::Kind::kTimeout, 2);
  EvalOptions o;
  o.retries = 2;
  const auto run = run_eval(data, a, PromptSpec{}, {}, o);
  EXPECT_FALSE(run.aborted);
  for (const auto& r : run.records) EXPECT_TRUE(r.final_correct);
  EXPECT_EQ(a.calls_, 3);
}

TEST(RunEval, ExhaustedTransportFailureLeavesRecordUnscored) {
  const auto data = parity::gen_varied_bits(3, 5, 5, 1);
  FlakyAdapter a(AdapterError::Kind::kTransport, 100);
  const auto run = run_eval(data, a, PromptSpec{}, {}, {});
  ASSERT_EQ(run.records.size(), 5u);
  EXPECT_FALSE(run.aborted);
  EXPECT_FALSE(run.records[2].scored);
  EXPECT_FALSE(run.records[2].final_correct);
  EXPECT_EQ(run.records[2].error, "injected failure");
  EXPECT_TRUE(run.records[3].final_correct);
  FlakyAdapter p(AdapterError::Kind::kProtocol, 100);
  run_eval(data, p, PromptSpec{}, {}, {});
  EXPECT_EQ(p.calls_, 1);  // protocol errors are not retried
}

TEST(RunEval, UnavailableAdapterAbortsWithPartialResults) {
  const auto data = parity::gen_varied_bits(3, 5, 5, 1);
  FlakyAdapter a(AdapterError::Kind::kUnavailable, 100);
  const auto run = run_eval(data, a, PromptSpec{}, {}, {});
  EXPECT_TRUE(run.aborted);
  EXPECT_EQ(run.abort_reason, "injected failure");
  ASSERT_EQ(run.records.size(), 2u);
  std::ostringstream out;
  write_results(run, out);
  EXPECT_NE(out.str().find("{\"partial\":true"), std::string::npos);
  std::istringstream in(out.str());
  const auto back = read_results(in);
  EXPECT_TRUE(back.aborted);
  EXPECT_EQ(back.records, run.records);
}

TEST(RunEval, CancelFlagStopsEarly) {
  const auto data = parity::gen_varied_bits(3, 5, 50, 1);
  adapters::SolverAdapter a{adapters::SolverConfig{}};
  std::atomic<bool> cancel{true};
  EvalOptions o;
  o.cancel = &cancel;
  const auto run = run_eval(data, a, PromptSpec{}, {}, o);
  EXPECT_TRUE(run.aborted);
  EXPECT_TRUE(run.records.empty());
}

TEST(RunEval, GarbageIsWrongNotUnscored) {
  const auto data = parity::gen_varied_bits(3, 5, 20, 1);
  adapters::EchoAdapter echo;
  const auto run = run_eval(data, echo, PromptSpec{}, {}, {});
  for (const auto& r : run.records) {
    EXPECT_TRUE(r.scored);
    EXPECT_FALSE(r.final_correct);
  }
}

TEST(Results, RoundTripAndInvalidUtf8) {
  const auto data = boolprog::gen_boolprog({}, 10, 2);
  auto perfect = adapters::make_adapter("perfect");
  auto run = run_eval(data, *perfect, PromptSpec{}, {}, {});
  run.records[0].raw_completion = "bad \xff byte";
  std::ostringstream out;
  write_results(run, out);
  std::istringstream in(out.str());
  const auto back = read_results(in);
  ASSERT_EQ(back.records.size(), run.records.size());
  for (std::size_t i = 1; i < back.records.size(); ++i) EXPECT_EQ(back.records[i], run.records[i]);
  EXPECT_NE(back.records[0].raw_completion.find("bad "), std::string::npos);
  std::istringstream broken("{\"instance_id\":1}\n");
  EXPECT_THROW(read_results(broken), DatasetError);
}

TEST(Validate, GeneratorOutputIsClean) {
  std::vector<TaskInstance> all = parity::gen_varied_bits(3, 40, 200, 1);
  parity::ParityGenOptions padded;
  padded.format = parity::ParityFormat::kPadded;
  const auto p2 = parity::gen_varied_ones(30, 1, 30, 100, 2, padded);
  const auto c = coin_data(1, 20, 100, 3);
  boolprog::GenConfig dc;
  dc.split = boolprog::Split::kDiverse;
  const auto b1 = boolprog::gen_boolprog(dc, 100, 4);
  const auto b2 = boolprog::gen_boolprog({}, 100, 5, {true, {}});
  for (const auto* part : {&p2, &c, &b1, &b2}) all.insert(all.end(), part->begin(), part->end());
  const auto report = validate(all);
  EXPECT_EQ(report.checked, all.size());
  EXPECT_TRUE(report.ok()) << report.mismatches.front().id << ": " << report.mismatches.front().detail;
}

TEST(Validate, FlippedAnswerReportedById) {
  auto data = parity::gen_varied_bits(3, 20, 50, 6);
  data[17].answer = data[17].answer == "1" ? "0" : "1";
  const auto report = validate(data);
  ASSERT_EQ(report.mismatches.size(), 1u);
  EXPECT_EQ(report.mismatches[0].id, data[17].id);
  EXPECT_EQ(report.mismatches[0].field, "answer");
}

TEST(Validate, ShuffledCheckedAgainstSourceProgram) {
  auto data = boolprog::gen_boolprog({}, 50, 7, {true, {}});
  EXPECT_TRUE(validate(data).ok());
  // The label follows the original program, not the shuffled text.
  std::size_t differs = 0;
  for (const auto& inst : data)
    differs += oracle::simulate(inst.input_text).answer != (inst.answer == "True");
  EXPECT_GT(differs, 0u);
  data[3].answer = data[3].answer == "True" ? "False" : "True";
  const auto report = validate(data);
  ASSERT_EQ(report.mismatches.size(), 1u);
  EXPECT_EQ(report.mismatches[0].id, data[3].id);
}

TEST(Validate, TamperedTraceAndMetrics) {
  auto data = boolprog::gen_boolprog({}, 5, 8);
  data[0].metrics.graph_depth = 0;
  data[1].scratchpad_target += "\n# a = True";
  data[2].input_text = "not a program";
  const auto report = validate(data);
  ASSERT_EQ(report.mismatches.size(), 3u);
  EXPECT_EQ(report.mismatches[0].field, "metrics");
  EXPECT_EQ(report.mismatches[1].field, "scratchpad_target");
  EXPECT_EQ(report.mismatches[2].id, data[2].id);
}

TEST(SolveText, RecognizesEachTask) {
  auto s = solve_text("  > > > 0 1 1 0 1 ==\n");
  EXPECT_EQ(s.task, TaskKind::kParity);
  EXPECT_EQ(s.answer, "1");
  EXPECT_EQ(s.trace, "0 1 0 0 1");
  s = solve_text("> > > _ 1 1 _ ==");
  EXPECT_EQ(s.trace, "_ 1 0 _");
  for (const auto& inst : coin_data(4, 9, 20, 3)) {
    s = solve_text(inst.input_text);
    EXPECT_EQ(s.task, TaskKind::kCoinflip);
    EXPECT_EQ(s.answer, surface_answer(TaskKind::kCoinflip, inst.answer));
    EXPECT_EQ(s.trace, inst.scratchpad_target);
  }
  for (const auto& inst : boolprog::gen_boolprog({}, 20, 3)) {
    s = solve_text(inst.input_text);
    EXPECT_EQ(s.answer, inst.answer);
    EXPECT_EQ(s.trace, inst.scratchpad_target);
  }
  EXPECT_THROW(solve_text(" \n"), ParseError);
  EXPECT_THROW(solve_text("b = a\nprint(b)"), SemanticError);
}

}  // namespace
}  // namespace lengthgen::harness
