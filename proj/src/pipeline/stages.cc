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

#include "leanbridge/pipeline/stages.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "leanbridge/bootstrap/bootstrap.h"
#include "leanbridge/common/error.h"
#include "leanbridge/common/random.h"
#include "leanbridge/corpus/theorem.h"
#include "leanbridge/genclient/mock.h"
#include "leanbridge/informalize/informalize.h"
#include "leanbridge/prover/harness.h"
#include "leanbridge/retrieval/analysis.h"
#include "leanbridge/retrieval/provider.h"
#include "leanbridge/trainprep/packing.h"
#include "leanbridge/trainprep/tokenizer.h"
// httplib must follow Eigen (pulled in above through the retrieval headers).
#include "leanbridge/genclient/http_backends.h"

namespace leanbridge::pipeline {
namespace {

namespace fs = std::filesystem;

fs::path Out(const PipelineConfig& c, const char* name) {
  fs::create_directories(c.work_dir);
  return c.work_dir / name;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<corpus::TheoremRecord> LoadTheorems(const fs::path& path) {
  std::vector<corpus::TheoremRecord> out;
  for (const auto& j : ReadJsonl(path)) out.push_back(corpus::TheoremFromJson(j));
  return out;
}

std::vector<informalize::Example> LoadExamples(const fs::path& path) {
  std::vector<informalize::Example> out;
  for (const auto& j : ReadJsonl(path)) out.push_back(informalize::ExampleFromJson(j));
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyInput, "example file " + path.string() + " has no records");
  }
  return out;
}

std::shared_ptr<const retrieval::EmbeddingProvider> MakeEmbedder(const EmbedderSettings& s) {
  if (s.kind == "http") {
    return std::make_shared<retrieval::HttpEmbeddingProvider>(s.url, s.dimension,
                                                              s.timeout_seconds);
  }
  return std::make_shared<retrieval::HashEmbedder>(s.dimension, s.ngram);
}

struct SourceFile {
  std::string file_path;  // relative, for the skip log
  std::string source;
  corpus::Provenance provenance;
};

std::vector<SourceFile> ReadCorpus(const CorpusSettings& s) {
  std::vector<SourceFile> files;
  const corpus::Provenance base{s.repo_url, s.commit};
  if (fs::is_directory(s.path)) {
    for (const auto& entry : fs::recursive_directory_iterator(s.path)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".lean") continue;
      files.push_back({fs::relative(entry.path(), s.path).generic_string(),
                       ReadFile(entry.path()), base});
    }
    // Directory iteration order is unspecified; sort for stable output.
    std::sort(files.begin(), files.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.file_path < b.file_path; });
    return files;
  }
  const auto lines = ReadJsonl(s.path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Json& j = lines[i];
    if (!j.is_object() || !j.contains("file_path") || !j.contains("source")) {
      throw Error(ErrorCode::kInvalidArgument, s.path.string() + ":" + std::to_string(i + 1) +
                                                   ": corpus lines need file_path and source");
    }
    files.push_back({j.at("file_path").get<std::string>(), j.at("source").get<std::string>(),
                     {j.value("url", base.file_path), j.value("commit", base.commit)}});
  }
  return files;
}

Json SkipLine(const std::string& file, const std::string& name, std::size_t offset,
              const std::string& reason) {
  Json j = {{"file", file}, {"name", name}, {"reason", reason}};
  j["offset"] = offset == Error::kNoOffset ? Json(nullptr) : Json(offset);
  return j;
}

}  // namespace

fs::path RequireArtifact(const PipelineConfig& config, const char* name, const char* producer) {
  const fs::path p = config.work_dir / name;
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kMissingArtifact, "expected " + p.string() + "; run '" +
                                                 std::string(producer) + "' first");
  }
  return p;
}

std::shared_ptr<genclient::Backend> MakeBackend(const GenClientSettings& s) {
  if (s.backend.kind == "openai") return std::make_shared<genclient::OpenAiChatBackend>(s.backend.http);
  if (s.backend.kind == "gemini") return std::make_shared<genclient::GeminiBackend>(s.backend.http);
  return std::make_shared<genclient::MockBackend>(genclient::LoadMockScript(s.backend.script));
}

std::unique_ptr<genclient::Client> MakeClient(const PipelineConfig& c) {
  genclient::RetryPolicy retry = c.genclient.retry;
  retry.jitter_seed = ForkSeed(c.seed, "genclient.retry");
  return std::make_unique<genclient::Client>(MakeBackend(c.genclient), retry, c.genclient.budget);
}

std::unique_ptr<prover::Verifier> MakeVerifier(const PipelineConfig& c) {
  const auto& v = c.prover.verifier;
  if (v.kind == "command") {
    const fs::path scratch = c.work_dir / "verify_scratch";
    fs::create_directories(scratch);
    return std::make_unique<prover::ExternalVerifier>(v.command, v.timeout_seconds, scratch);
  }
  return std::make_unique<prover::MockVerifier>(prover::MockVerifier::FromFile(v.answer_key));
}

Json RunExtract(const PipelineConfig& c) {
  c.Validate(Command::kExtract);
  const auto files = ReadCorpus(c.corpus);
  std::vector<Json> records;
  std::vector<Json> skips;
  std::set<std::string> seen;
  for (const auto& f : files) {
    corpus::ExtractionResult r;
    try {
      r = corpus::ExtractTheorems(f.source, f.provenance);
    } catch (const Error& e) {
      // A file the lexer rejects contributes nothing; the run goes on.
      skips.push_back(SkipLine(f.file_path, "", e.offset(),
                               std::string(ErrorCodeName(e.code())) + ": " + e.what()));
      continue;
    }
    for (const auto& s : r.skipped) skips.push_back(SkipLine(f.file_path, s.name, s.offset, s.reason));
    for (const auto& t : r.records) {
      if (!seen.insert(t.name).second) {
        skips.push_back(SkipLine(f.file_path, t.name, Error::kNoOffset, "duplicate name"));
        continue;
      }
      records.push_back(corpus::ToJson(t));
    }
  }
  WriteJsonl(Out(c, artifact::kTheorems), records);
  WriteJsonl(Out(c, artifact::kExtractSkips), skips);
  return {{"stage", "extract"}, {"files", files.size()}, {"records", records.size()},
          {"skipped", skips.size()}};
}

Json RunTrainRetriever(const PipelineConfig& c) {
  c.Validate(Command::kTrainRetriever);
  const auto& r = c.retrieval;
  const std::uint64_t seed = ForkSeed(c.seed, "retrieval");
  std::vector<retrieval::EmbeddingPair> pairs;
  if (r.pairs == "synthetic") {
    pairs = retrieval::MakeRotatedPairs(r.synthetic_count, r.synthetic_dimension,
                                        r.synthetic_shared_dim, ForkSeed(seed, "corpus"));
  } else {
    const auto examples = LoadExamples(r.pairs);
    std::vector<std::string> nl, fl;
    for (const auto& e : examples) {
      nl.push_back(e.nl);
      fl.push_back(e.fl_statement);
    }
    const auto embedder = MakeEmbedder(r.embedder);
    const auto a = embedder->Embed(nl);
    const auto b = embedder->Embed(fl);
    for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
  }
  retrieval::TrainConfig tc;
  tc.learning_rate = r.learning_rate;
  tc.steps = r.steps;
  tc.batch_size = std::min<int>(r.batch_size, static_cast<int>(pairs.size()));
  tc.seed = ForkSeed(seed, "train");
  tc.d_out = r.d_out;
  const auto result = retrieval::TrainProjection(pairs, tc);

  WriteFileAtomic(Out(c, artifact::kHead), ToJson(result.head).dump() + "\n");
  std::string trace = "step,loss\n";
  for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
    trace += std::to_string(i) + "," + FormatDouble(result.loss_trace[i]) + "\n";
  }
  WriteFileAtomic(Out(c, artifact::kLossTrace), trace);
  const auto similarity = retrieval::PairwiseSimilarity(pairs, result.head);
  const auto histogram = retrieval::ComputeHistogram(similarity, r.histogram_bins);
  WriteFileAtomic(Out(c, artifact::kHistogram), histogram.ToCsv());

  Json summary = {{"stage", "train-retriever"},
                  {"pairs", pairs.size()},
                  {"steps", r.steps},
                  {"head_checksum", result.head.Checksum()},
                  {"recall_at_1", retrieval::RecallAt1(similarity)}};
  summary["final_loss"] = result.loss_trace.empty() ? Json(nullptr) : Json(result.loss_trace.back());
  return summary;
}

Json RunInformalize(const PipelineConfig& c, const ResumeOptions& options) {
  c.Validate(Command::kInformalize);
  const auto theorems = LoadTheorems(RequireArtifact(c, artifact::kTheorems, "extract"));
  const auto head =
      retrieval::HeadFromJson(Json::parse(ReadFile(RequireArtifact(c, artifact::kHead, "train-retriever"))));
  const auto embedder = MakeEmbedder(c.retrieval.embedder);
  if (head.d_in() != embedder->dimension()) {
    throw Error(ErrorCode::kConfigInvalid,
                "head.json expects " + std::to_string(head.d_in()) +
                    "-dimensional embeddings but the embedder produces " +
                    std::to_string(embedder->dimension()) +
                    "; train the retriever on example pairs, not the synthetic corpus");
  }
  const auto key = c.informalize.key == "fl_statement" ? informalize::ExampleKey::kFlStatement
                                                      : informalize::ExampleKey::kNl;
  const informalize::ExampleSelector selector(LoadExamples(c.informalize.examples), embedder, head,
                                              key);
  const auto client = MakeClient(c);
  const auto tokenizer = trainprep::MakeTokenizer(c.trainprep.tokenizer);

  informalize::CorpusConfig cc;
  cc.examples_per_prompt = c.informalize.examples_per_prompt;
  cc.max_attempts = c.informalize.max_attempts;
  cc.parallelism = c.genclient.parallelism;
  cc.limits = c.informalize.limits;
  cc.generation = {c.informalize.max_new_tokens, c.genclient.temperature};
  cc.checkpoint = Out(c, artifact::kInformalCheckpoint);
  cc.resume = options.resume;
  cc.restart_on_corrupt = options.restart_on_corrupt;
  const auto results = informalize::InformalizeCorpus(theorems, selector, *client, *tokenizer, cc);

  std::vector<Json> lines;
  std::size_t passed = 0;
  for (const auto& r : results) {
    lines.push_back(ToJson(r));
    passed += r.pass;
  }
  WriteJsonl(Out(c, artifact::kInformal), lines);
  return {{"stage", "informalize"}, {"theorems", results.size()}, {"pass", passed},
          {"fail", results.size() - passed}};
}

Json RunBootstrap(const PipelineConfig& c) {
  c.Validate(Command::kBootstrap);
  const auto theorems = LoadTheorems(RequireArtifact(c, artifact::kTheorems, "extract"));
  const auto tokenizer = trainprep::MakeTokenizer(c.trainprep.tokenizer);
  const auto informal = informalize::LoadInformalDataset(
      RequireArtifact(c, artifact::kInformal, "informalize"), c.informalize.limits, *tokenizer);
  std::unique_ptr<genclient::Client> client;
  if (c.bootstrap.mode == bootstrap::BootstrapMode::kInterleaved) client = MakeClient(c);
  const auto dataset =
      bootstrap::BootstrapCorpus(theorems, informal, client.get(), c.bootstrap, c.genclient.parallelism);
  bootstrap::WriteObtDataset(Out(c, artifact::kObt), dataset.records);
  WriteFileAtomic(Out(c, artifact::kBootstrapReport), dataset.report.ToJson().dump(2) + "\n");
  Json summary = dataset.report.ToJson();
  summary["stage"] = "bootstrap";
  return summary;
}

Json RunPrep(const PipelineConfig& c) {
  c.Validate(Command::kPrep);
  const auto obt = bootstrap::LoadObtDataset(RequireArtifact(c, artifact::kObt, "bootstrap"));
  const auto tokenizer = trainprep::MakeTokenizer(c.trainprep.tokenizer);
  const auto set = trainprep::EmitTrainingSet(obt, *tokenizer, c.trainprep.emit);
  std::vector<Json> lines, skips;
  std::int64_t max_tokens = 0;
  for (const auto& r : set.records) {
    lines.push_back(ToJson(r));
    max_tokens = std::max(max_tokens, r.token_count);
  }
  for (const auto& s : set.skipped) skips.push_back(s.ToJson());
  WriteJsonl(Out(c, artifact::kTrain), lines);
  WriteJsonl(Out(c, artifact::kTrainSkips), skips);
  return {{"stage", "prep"},
          {"records", set.records.size()},
          {"skipped", set.skipped.size()},
          {"context_budget", c.trainprep.emit.pack.context_budget},
          {"max_tokens", max_tokens}};
}

Json RunProve(const PipelineConfig& c) {
  c.Validate(Command::kProve);
  const auto problems = prover::LoadProblems(c.prover.problems);
  auto pool = prover::LoadExamplePool(c.prover.seed_pool);
  const auto client = MakeClient(c);
  const auto verifier = MakeVerifier(c);
  const auto tokenizer = trainprep::MakeTokenizer(c.trainprep.tokenizer);
  const auto run =
      prover::RunIterative(problems, std::move(pool), *client, *verifier, *tokenizer, c.prover.harness);
  prover::WriteHarnessReport(Out(c, artifact::kReport), run.report);
  std::vector<Json> attempts;
  for (const auto& a : run.attempts) attempts.push_back(ToJson(a));
  WriteJsonl(Out(c, artifact::kAttempts), attempts);
  WriteFileAtomic(Out(c, artifact::kSummary), run.report.SummaryTable());
  Json rounds = Json::array();
  for (const auto& r : run.report.rounds) rounds.push_back(r.newly_proved);
  return {{"stage", "prove"},
          {"problems", run.report.problem_count},
          {"rounds", run.report.rounds.size()},
          {"newly_proved_per_round", rounds},
          {"generations", run.report.generations},
          {"pass_rate", run.report.PassRate()}};
}

std::string RunReport(const PipelineConfig& c) {
  c.Validate(Command::kReport);
  const auto problems = prover::LoadProblems(c.prover.problems);
  const auto verifier = MakeVerifier(c);
  const auto report =
      prover::LoadHarnessReport(RequireArtifact(c, artifact::kReport, "prove"), problems, *verifier);
  std::string out = report.SummaryTable();
  const fs::path boot = c.work_dir / artifact::kBootstrapReport;
  if (fs::exists(boot)) {
    out += "bootstrap: " + Json::parse(ReadFile(boot)).dump() + "\n";
  }
  return out;
}

std::vector<Json> SampleRecords(const std::vector<Json>& records, std::size_t n,
                                std::uint64_t seed) {
  if (n > records.size()) {
    throw Error(ErrorCode::kSampleTooLarge, "cannot sample " + std::to_string(n) + " of " +
                                                std::to_string(records.size()) + " records");
  }
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));
  std::vector<Json> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(records[order[i]]);
  return out;
}

std::string FormatForReview(const std::vector<Json>& records) {
  // The first key present wins, so OBT records, informalization results and
  // training records all render.
  auto pick = [](const Json& j, std::initializer_list<const char*> keys) -> std::string {
    for (const char* k : keys) {
      if (j.contains(k) && j.at(k).is_string()) return j.at(k).get<std::string>();
    }
    return "(missing)";
  };
  std::ostringstream out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& j = records[i];
    out << "=== [" << i + 1 << "/" << records.size() << "] "
        << pick(j, {"Name", "name", "theorem_name"}) << " ===\n"
        << "--- natural language ---\n"
        << pick(j, {"Generated_informal_statement_and_proof", "generated_informal_statement_and_proof",
                    "nl"})
        << "\n--- lean4 ---\n"
        << pick(j, {"Commented_proof", "commented_proof", "Proof", "proof", "target"})
        << "\n--- grade (correct / minor issues / wrong) ---\n\n";
  }
  return out.str();
}

}  // namespace leanbridge::pipeline
