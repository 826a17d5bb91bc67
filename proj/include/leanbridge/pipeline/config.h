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

#ifndef LEANBRIDGE_PIPELINE_CONFIG_H_
#define LEANBRIDGE_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "leanbridge/bootstrap/bootstrap.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/genclient/client.h"
#include "leanbridge/genclient/http_backends.h"
#include "leanbridge/informalize/informalize.h"
#include "leanbridge/prover/harness.h"
#include "leanbridge/trainprep/packing.h"

namespace leanbridge::pipeline {

struct CorpusSettings {
  // A directory of .lean files, or a JSONL file of {file_path, source}
  // lines with optional per-line url and commit.
  std::filesystem::path path;
  std::string repo_url;
  std::string commit;
};

struct EmbedderSettings {
  std::string kind = "hash";  // "hash" or "http"
  int dimension = 64;
  int ngram = 3;
  std::string url;
  int timeout_seconds = 60;
};

struct RetrievalSettings {
  EmbedderSettings embedder;
  // "synthetic", or a JSONL of examples whose (nl, fl_statement) pairs are
  // embedded and aligned.
  std::string pairs = "synthetic";
  int synthetic_count = 200;
  int synthetic_dimension = 64;
  int synthetic_shared_dim = 48;
  double learning_rate = 0.05;
  int steps = 500;
  int batch_size = 16;
  int d_out = 0;  // 0 keeps the input dimension
  int histogram_bins = 20;
};

struct BackendSettings {
  std::string kind = "mock";  // "mock", "openai" or "gemini"
  std::filesystem::path script;  // mock only
  genclient::HttpBackendOptions http;
};

struct GenClientSettings {
  BackendSettings backend;
  std::size_t parallelism = 4;
  genclient::RetryPolicy retry;
  genclient::Budget budget;
  double temperature = 0.7;
};

struct InformalizeSettings {
  std::filesystem::path examples;
  std::size_t examples_per_prompt = 3;
  std::string key = "nl";  // "nl" or "fl_statement"
  int max_attempts = 3;
  int max_new_tokens = 2048;
  informalize::QualityLimits limits;
};

struct TrainPrepSettings {
  std::string tokenizer = "word-punct";
  trainprep::EmitConfig emit;
};

struct VerifierSettings {
  std::string kind = "mock";  // "mock" or "command"
  std::filesystem::path answer_key;
  std::vector<std::string> command;
  double timeout_seconds = 120.0;
};

struct ProverSettings {
  std::filesystem::path problems;
  std::filesystem::path seed_pool;
  prover::HarnessConfig harness;
  VerifierSettings verifier;
};

enum class Command { kExtract, kTrainRetriever, kInformalize, kBootstrap, kPrep, kProve, kReport };

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::filesystem::path work_dir = "work";
  CorpusSettings corpus;
  RetrievalSettings retrieval;
  GenClientSettings genclient;
  InformalizeSettings informalize;
  bootstrap::BootstrapOptions bootstrap;
  TrainPrepSettings trainprep;
  ProverSettings prover;

  // Ranges for every field, existence of every configured input path, and
  // the inputs `command` needs. Throws ConfigInvalid naming the key.
  void Validate(Command command) const;
};

// Replaces ${NAME} in every string value. An unset variable is an error so
// a missing secret never turns into an empty string silently.
Json InterpolateEnv(const Json& j);

// Applies "a.b.c=value" assignments. The value is parsed as JSON when it
// parses, and kept as a string otherwise.
void ApplyOverrides(Json& j, const std::vector<std::string>& assignments);

// Unknown keys are errors. Relative paths resolve against `base_dir`.
PipelineConfig ParseConfig(const Json& j, const std::filesystem::path& base_dir);

// Reads, interpolates, overrides, then parses.
PipelineConfig LoadConfig(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {});

}  // namespace leanbridge::pipeline

#endif  // LEANBRIDGE_PIPELINE_CONFIG_H_
