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

// Command-line entry point. Every command loads and validates the whole
// config before it reads or writes anything else.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leanbridge/common/error.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/common/random.h"
#include "leanbridge/pipeline/config.h"
#include "leanbridge/pipeline/stages.h"

namespace {

namespace fs = std::filesystem;
using namespace leanbridge;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct GlobalOptions {
  std::string config;
  std::vector<std::string> overrides;
  std::string work_dir;
  std::optional<std::uint64_t> seed;
};

pipeline::PipelineConfig Load(const GlobalOptions& g, std::vector<std::string> extra) {
  std::vector<std::string> all = g.overrides;
  // Flags win over both the file and --set.
  if (!g.work_dir.empty()) all.push_back("work_dir=" + Json(fs::absolute(g.work_dir).string()).dump());
  if (g.seed) all.push_back("seed=" + std::to_string(*g.seed));
  all.insert(all.end(), extra.begin(), extra.end());
  return pipeline::LoadConfig(g.config, all);
}

int Run(CLI::App& app, int argc, char** argv) {
  GlobalOptions g;
  app.add_option("-c,--config", g.config, "pipeline config (JSON)");
  app.add_option("--set", g.overrides, "override a config key, e.g. --set prover.max_rounds=1")
      ->take_all();
  app.add_option("--work-dir", g.work_dir, "override work_dir");
  app.add_option("--seed", g.seed, "override the root seed");
  app.require_subcommand(1);

  auto* extract = app.add_subcommand("extract", "extract theorems from the corpus");
  auto* train = app.add_subcommand("train-retriever", "train the example-retrieval head");
  auto* inf = app.add_subcommand("informalize", "generate NL statements and proofs");
  bool resume = false, restart = false;
  inf->add_flag("--resume", resume, "continue from the checkpoint");
  inf->add_flag("--restart-on-corrupt", restart, "with --resume, discard an unusable checkpoint");
  auto* boot = app.add_subcommand("bootstrap", "embed NL proofs as Lean comments");
  std::string mode;
  boot->add_option("--mode", mode, "interleaved or head");
  auto* prep = app.add_subcommand("prep", "build the training set");
  bool no_curriculum = false, no_block = false, no_nl = false, no_boot = false;
  std::optional<std::int64_t> budget;
  prep->add_flag("--no-curriculum", no_curriculum, "keep input order");
  prep->add_flag("--no-block", no_block, "no in-context examples");
  prep->add_flag("--no-nl-guidance", no_nl, "drop NL sections");
  prep->add_flag("--no-bootstrapped", no_boot, "train on the uncommented proof");
  prep->add_option("--context-budget", budget, "tokens per record");
  auto* prove = app.add_subcommand("prove", "iterative proof writing");
  std::optional<int> max_rounds, n_samples;
  prove->add_option("--max-rounds", max_rounds, "round limit");
  prove->add_option("--n-samples", n_samples, "samples per problem per round");
  auto* report = app.add_subcommand("report", "re-verify and print the harness report");
  auto* sample = app.add_subcommand("sample", "seeded subset of a JSONL dataset");
  std::string dataset, out;
  std::size_t n = 0;
  bool for_review = false;
  sample->add_option("--dataset", dataset, "input JSONL")->required();
  sample->add_option("-n", n, "records to draw")->required();
  sample->add_option("--out", out, "output file (default: stdout)");
  sample->add_flag("--for-review", for_review, "NL beside Lean4 text for manual grading");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sample->parsed()) {
      // The seed comes from --seed, else from the config's root seed.
      std::uint64_t seed = g.seed.value_or(0);
      if (!g.seed && !g.config.empty()) seed = ForkSeed(Load(g, {}).seed, "sample");
      const auto picked = pipeline::SampleRecords(ReadJsonl(dataset), n, seed);
      std::string text;
      if (for_review) {
        text = pipeline::FormatForReview(picked);
      } else {
        for (const auto& j : picked) text += DumpLine(j) + "\n";
      }
      if (out.empty()) {
        std::cout << text;
      } else {
        WriteFileAtomic(out, text);
      }
      return 0;
    }
    if (g.config.empty()) throw Error(ErrorCode::kConfigInvalid, "--config is required");

    std::vector<std::string> extra;
    if (!mode.empty()) extra.push_back("bootstrap.mode=" + mode);
    if (no_curriculum) extra.push_back("trainprep.curriculum=false");
    if (no_block) extra.push_back("trainprep.block=false");
    if (no_nl) extra.push_back("trainprep.nl_guidance=false");
    if (no_boot) extra.push_back("trainprep.use_bootstrapped=false");
    if (budget) extra.push_back("trainprep.context_budget=" + std::to_string(*budget));
    if (max_rounds) extra.push_back("prover.max_rounds=" + std::to_string(*max_rounds));
    if (n_samples) extra.push_back("prover.n_samples=" + std::to_string(*n_samples));
    const auto config = Load(g, extra);

    Json summary;
    if (extract->parsed()) summary = pipeline::RunExtract(config);
    if (train->parsed()) summary = pipeline::RunTrainRetriever(config);
    if (inf->parsed()) summary = pipeline::RunInformalize(config, {resume, restart});
    if (boot->parsed()) summary = pipeline::RunBootstrap(config);
    if (prep->parsed()) summary = pipeline::RunPrep(config);
    if (prove->parsed()) summary = pipeline::RunProve(config);
    if (report->parsed()) {
      std::cout << pipeline::RunReport(config);
      return 0;
    }
    std::cout << summary.dump() << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfigInvalid ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leanbridge: Lean4 data generation, training prep and proof search"};
  return Run(app, argc, argv);
}
