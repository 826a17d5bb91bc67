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

#ifndef LEANBRIDGE_PIPELINE_STAGES_H_
#define LEANBRIDGE_PIPELINE_STAGES_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/genclient/client.h"
#include "leanbridge/pipeline/config.h"
#include "leanbridge/prover/verifier.h"

namespace leanbridge::pipeline {

// File names inside work_dir. Each stage reads only its upstream files.
namespace artifact {
inline constexpr const char* kTheorems = "theorems.jsonl";
inline constexpr const char* kExtractSkips = "extract_skips.jsonl";
inline constexpr const char* kHead = "head.json";
inline constexpr const char* kLossTrace = "loss_trace.csv";
inline constexpr const char* kHistogram = "histogram.csv";
inline constexpr const char* kInformal = "informal.jsonl";
inline constexpr const char* kInformalCheckpoint = "informal.checkpoint.jsonl";
inline constexpr const char* kObt = "obt.jsonl";
inline constexpr const char* kBootstrapReport = "bootstrap_report.json";
inline constexpr const char* kTrain = "train.jsonl";
inline constexpr const char* kTrainSkips = "train_skips.jsonl";
inline constexpr const char* kReport = "report.jsonl";
inline constexpr const char* kAttempts = "attempts.jsonl";
inline constexpr const char* kSummary = "summary.txt";
}  // namespace artifact

// Throws MissingArtifact naming the expected file and the command that
// produces it.
std::filesystem::path RequireArtifact(const PipelineConfig& config, const char* name,
                                      const char* producer);

std::shared_ptr<genclient::Backend> MakeBackend(const GenClientSettings& settings);
std::unique_ptr<genclient::Client> MakeClient(const PipelineConfig& config);
std::unique_ptr<prover::Verifier> MakeVerifier(const PipelineConfig& config);

struct ResumeOptions {
  bool resume = false;
  bool restart_on_corrupt = false;
};

// Each stage validates the config for itself, writes its outputs under
// work_dir, and returns a one-line JSON summary with no timing data, so a
// rerun on the same inputs reproduces every byte.
Json RunExtract(const PipelineConfig& config);
Json RunTrainRetriever(const PipelineConfig& config);
Json RunInformalize(const PipelineConfig& config, const ResumeOptions& options = {});
Json RunBootstrap(const PipelineConfig& config);
Json RunPrep(const PipelineConfig& config);
Json RunProve(const PipelineConfig& config);
// Reloads the harness report, re-verifying it, and renders the table.
std::string RunReport(const PipelineConfig& config);

// Seeded uniform sample of n records without replacement, in sampled order.
// Throws SampleTooLarge when n exceeds the record count.
std::vector<Json> SampleRecords(const std::vector<Json>& records, std::size_t n,
                                std::uint64_t seed);

// Plain-text sheet that puts each record's NL text next to its Lean4 text
// for manual grading.
std::string FormatForReview(const std::vector<Json>& records);

}  // namespace leanbridge::pipeline

#endif  // LEANBRIDGE_PIPELINE_STAGES_H_
