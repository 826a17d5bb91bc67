// Copyright 2026 The Leanbridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leanbridge/prover/harness.h"

#include <algorithm>
#include <cstdio>
#include <semaphore>
#include <sstream>

#include "leanbridge/common/error.h"
#include "leanbridge/common/parallel.h"

namespace leanbridge::prover {
namespace {

struct ProblemRun {
  std::vector<ProofAttempt> attempts;
  std::int64_t drawn = 0;
  bool proved = false;
  ProvedEntry entry;
};

// Bounds verifier calls separately from backend calls.
class VerifierGate {
 public:
  explicit VerifierGate(std::size_t limit)
      : sem_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, limit))) {}

  VerifyResult Run(Verifier& v, const Problem& p, const std::string& proof) {
    sem_.acquire();
    struct Release {
      std::counting_semaphore<1 << 16>& s;
      ~Release() { s.release(); }
    } release{sem_};
    try {
      return v.Verify(p, proof);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kVerifierTimeout || e.code() == ErrorCode::kVerifierCrashed) {
        return {Verdict::kError, std::string(ErrorCodeName(e.code())) + ": " + e.what()};
      }
      throw;
    }
  }

 private:
  std::counting_semaphore<1 << 16> sem_;
};

ProblemRun AttemptProblem(const Problem& problem, const std::vector<PoolExample>& pool, int round,
                          genclient::Client& client, Verifier& verifier, VerifierGate& gate,
                          const trainprep::Tokenizer& tokenizer, const HarnessConfig& config) {
  ProblemRun run;
  AssembledPrompt prompt;
  try {
    prompt = AssembleProofPrompt(problem, pool, config.prompt, tokenizer);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPromptExceedsBudget) throw;
    run.attempts.push_back({problem.name, round, 0, "", "", Verdict::kError, e.what()});
    return run;
  }
  genclient::GenerationRequest request;
  request.prompt = prompt.text;
  request.max_new_tokens = config.max_new_tokens;
  request.temperature = config.temperature;

  int index = 0;
  while (index < config.n_samples && !run.proved) {
    const int n = std::min(config.samples_per_request, config.n_samples - index);
    request.n_samples = n;
    request.request_id = "prove:" + problem.name + ":" + std::to_string(round) + ":" +
                         std::to_string(index);
    std::vector<std::string> samples;
    try {
      samples = client.Complete(request).samples;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudgetExceeded) throw;
      run.attempts.push_back({problem.name, round, index, "", "", Verdict::kError,
                              std::string("backend: ") + e.what()});
      break;
    }
    run.drawn += n;
    for (auto& text : samples) {
      ProofAttempt a{problem.name, round, index++, std::move(text), "", Verdict::kRejected, ""};
      try {
        ExtractedProof ex = ExtractProof(a.generated_text, problem);
        a.extracted_proof = std::move(ex.proof);
        if (!ex.lean3.empty()) {
          a.diagnostic = "lean3 artifact (" +
                         std::string(corpus::Lean3PatternName(ex.lean3.front().pattern)) +
                         "): " + ex.lean3.front().excerpt;
        } else if (!KeepsStatement(problem, a.extracted_proof)) {
          a.diagnostic = "statement was altered";
        } else {
          const VerifyResult v = gate.Run(verifier, problem, a.extracted_proof);
          a.verdict = v.verdict;
          a.diagnostic = v.diagnostic;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoProofFound) throw;
        a.diagnostic = e.what();
      }
      const bool ok = a.verdict == Verdict::kVerified;
      if (ok) run.entry = {a.extracted_proof, round, a.sample_index};
      run.attempts.push_back(std::move(a));
      if (ok) {
        run.proved = true;
        break;  // samples after the first success are drawn but not checked
      }
    }
  }
  return run;
}

}  // namespace

Json ToJson(const ProofAttempt& a) {
  return Json{{"problem", a.problem_name},       {"round", a.round},
              {"sample_index", a.sample_index},  {"generated_text", a.generated_text},
              {"extracted_proof", a.extracted_proof}, {"verdict", VerdictName(a.verdict)},
              {"diagnostic", a.diagnostic}};
}

void IterationState::Validate() const {
  for (const auto& [name, entry] : proved) {
    if (unproved.count(name)) {
      throw Error(ErrorCode::kPreconditionViolated, "'" + name + "' is both proved and unproved");
    }
  }
  if (seed_count > example_pool.size()) {
    throw Error(ErrorCode::kPreconditionViolated, "example pool lost its seed examples");
  }
  for (std::size_t i = example_pool.size() - seed_count; i < example_pool.size(); ++i) {
    if (example_pool[i].round != 0) {
      throw Error(ErrorCode::kPreconditionViolated, "seed examples must be the pool's tail");
    }
  }
}

IterationState InitialState(const std::vector<Problem>& problems,
                            std::vector<PoolExample> seed_pool) {
  IterationState s;
  for (auto& e : seed_pool) e.round = 0;
  s.seed_count = seed_pool.size();
  s.example_pool = std::move(seed_pool);
  for (const auto& p : problems) {
    if (!s.unproved.insert(p.name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate problem '" + p.name + "'");
    }
  }
  return s;
}

void HarnessConfig::Validate() const {
  prompt.Validate();
  if (n_samples < 1 || samples_per_request < 1 || max_rounds < 1) {
    throw Error(ErrorCode::kConfigInvalid,
                "n_samples, samples_per_request and max_rounds must be >= 1");
  }
}

RoundResult RunIteration(const IterationState& state, const std::vector<Problem>& problems,
                         genclient::Client& client, Verifier& verifier,
                         const trainprep::Tokenizer& tokenizer, const HarnessConfig& config) {
  config.Validate();
  state.Validate();
  const int round = state.round + 1;
  std::vector<const Problem*> todo;
  for (const auto& p : problems) {
    if (state.unproved.count(p.name)) todo.push_back(&p);
  }
  VerifierGate gate(config.verifier_parallelism);
  std::vector<ProblemRun> runs(todo.size());
  ParallelFor(todo.size(), std::max<std::size_t>(1, config.parallelism), [&](std::size_t i) {
    runs[i] = AttemptProblem(*todo[i], state.example_pool, round, client, verifier, gate,
                             tokenizer, config);
  });

  // Single-threaded commit in problem order.
  RoundResult out;
  out.state = state;
  out.state.round = round;
  std::vector<PoolExample> fresh;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    out.state.budget_used += runs[i].drawn;
    for (auto& a : runs[i].attempts) out.attempts.push_back(std::move(a));
    if (!runs[i].proved) continue;
    const Problem& p = *todo[i];
    out.state.unproved.erase(p.name);
    out.state.proved[p.name] = runs[i].entry;
    fresh.push_back({p.name, p.nl_statement_and_proof, p.fl_statement, runs[i].entry.proof, round});
    ++out.newly_proved;
  }
  fresh.insert(fresh.end(), out.state.example_pool.begin(), out.state.example_pool.end());
  out.state.example_pool = std::move(fresh);
  return out;
}

double HarnessReport::CumulativeRate(std::size_t after_rounds) const {
  if (problem_count == 0) return 0.0;
  if (after_rounds == 0 || rounds.empty()) return 0.0;
  const auto& r = rounds[std::min(after_rounds, rounds.size()) - 1];
  return static_cast<double>(r.cumulative_proved) / problem_count;
}

double HarnessReport::PassRate() const { return CumulativeRate(rounds.size()); }

std::string HarnessReport::SummaryTable() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %12s %12s %12s %12s\n", "round", "new", "cumulative",
                "pass_rate", "generations");
  out << line;
  for (const auto& r : rounds) {
    std::snprintf(line, sizeof line, "%-6d %12d %12d %11.2f%% %12lld\n", r.round, r.newly_proved,
                  r.cumulative_proved,
                  problem_count ? 100.0 * r.cumulative_proved / problem_count : 0.0,
                  static_cast<long long>(r.generations));
    out << line;
  }
  const int proved = rounds.empty() ? 0 : rounds.back().cumulative_proved;
  std::snprintf(line, sizeof line, "proved %d of %d problems (%.2f%%)\n", proved, problem_count,
                100.0 * PassRate());
  out << line;
  return out.str();
}

HarnessRun RunIterative(const std::vector<Problem>& problems, std::vector<PoolExample> seed_pool,
                        genclient::Client& client, Verifier& verifier,
                        const trainprep::Tokenizer& tokenizer, const HarnessConfig& config) {
  config.Validate();
  HarnessRun run;
  run.final_state = InitialState(problems, std::move(seed_pool));
  run.report.problem_count = static_cast<int>(problems.size());
  while (run.final_state.round < config.max_rounds && !run.final_state.unproved.empty()) {
    const std::int64_t before = run.final_state.budget_used;
    RoundResult r = RunIteration(run.final_state, problems, client, verifier, tokenizer, config);
    run.final_state = std::move(r.state);
    for (auto& a : r.attempts) run.attempts.push_back(std::move(a));
    run.report.rounds.push_back({run.final_state.round, r.newly_proved,
                                 static_cast<int>(run.final_state.proved.size()),
                                 run.final_state.budget_used - before});
    if (r.newly_proved == 0) break;
  }
  run.report.generations = run.final_state.budget_used;
  for (const auto& p : problems) {
    ProblemOutcome o{p.name};
    if (const auto it = run.final_state.proved.find(p.name); it != run.final_state.proved.end()) {
      o.proved = true;
      o.first_round = it->second.round;
      o.sample_index = it->second.sample_index;
      o.proof = it->second.proof;
    }
    run.report.problems.push_back(std::move(o));
  }
  return run;
}

void WriteHarnessReport(const std::filesystem::path& path, const HarnessReport& report) {
  std::vector<Json> lines;
  for (const auto& r : report.rounds) {
    lines.push_back(Json{{"kind", "round"},
                         {"round", r.round},
                         {"newly_proved", r.newly_proved},
                         {"cumulative_proved", r.cumulative_proved},
                         {"generations", r.generations}});
  }
  for (const auto& p : report.problems) {
    lines.push_back(Json{{"kind", "problem"},
                         {"name", p.name},
                         {"proved", p.proved},
                         {"first_round", p.first_round},
                         {"sample_index", p.sample_index},
                         {"proof", p.proof}});
  }
  WriteJsonl(path, lines);
}

HarnessReport LoadHarnessReport(const std::filesystem::path& path,
                                const std::vector<Problem>& problems, Verifier& verifier) {
  std::map<std::string, const Problem*> by_name;
  for (const auto& p : problems) by_name[p.name] = &p;
  HarnessReport report;
  try {
    for (const auto& j : ReadJsonl(path)) {
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "round") {
        report.rounds.push_back({j.at("round").get<int>(), j.at("newly_proved").get<int>(),
                                 j.at("cumulative_proved").get<int>(),
                                 j.at("generations").get<std::int64_t>()});
        report.generations += report.rounds.back().generations;
      } else if (kind == "problem") {
        report.problems.push_back({j.at("name").get<std::string>(), j.at("proved").get<bool>(),
                                   j.at("first_round").get<int>(), j.at("sample_index").get<int>(),
                                   j.at("proof").get<std::string>()});
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown report line kind '" + kind + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": malformed report: " + e.what());
  }
  report.problem_count = static_cast<int>(report.problems.size());
  for (const auto& o : report.problems) {
    if (!o.proved) continue;
    const auto it = by_name.find(o.name);
    if (it == by_name.end()) {
      throw Error(ErrorCode::kPreconditionViolated,
                  path.string() + ": report proves unknown problem '" + o.name + "'");
    }
    VerifyResult v;
    try {
      v = verifier.Verify(*it->second, o.proof);
    } catch (const Error& e) {
      v = {Verdict::kError, e.what()};
    }
    if (v.verdict != Verdict::kVerified || !KeepsStatement(*it->second, o.proof)) {
      throw Error(ErrorCode::kPreconditionViolated,
                  path.string() + ": stored proof of '" + o.name +
                      "' no longer verifies: " + v.diagnostic);
    }
  }
  return report;
}

}  // namespace leanbridge::prover
