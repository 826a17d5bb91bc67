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

#ifndef LEANBRIDGE_TESTS_SUPPORT_E2E_H_
#define LEANBRIDGE_TESTS_SUPPORT_E2E_H_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "leanbridge/common/error.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/common/text.h"
#include "leanbridge/pipeline/config.h"
#include "leanbridge/pipeline/stages.h"

namespace leanbridge::testing {

// The ten-theorem mock fixture: three source files, a scripted backend and
// an answer key for three competition problems.
inline std::filesystem::path E2eConfigPath() {
  return std::filesystem::path(LEANBRIDGE_TEST_DATA_DIR) / "e2e" / "config.json";
}

inline std::filesystem::path E2eGoldenDir() {
  return std::filesystem::path(LEANBRIDGE_TEST_DATA_DIR) / "e2e" / "golden";
}

// Files checked against goldens. head.json and the loss trace hold printed
// doubles, which are compared between runs but not against stored bytes.
inline const std::vector<std::string>& GoldenFiles() {
  static const std::vector<std::string> files = {
      pipeline::artifact::kTheorems, pipeline::artifact::kInformal, pipeline::artifact::kObt,
      pipeline::artifact::kBootstrapReport, pipeline::artifact::kTrain,
      pipeline::artifact::kReport, pipeline::artifact::kSummary};
  return files;
}

inline pipeline::PipelineConfig E2eConfig(const std::filesystem::path& work_dir,
                                          std::vector<std::string> overrides = {}) {
  overrides.push_back("work_dir=" + Json(work_dir.string()).dump());
  return pipeline::LoadConfig(E2eConfigPath(), overrides);
}

// Every regular file in the directory, by name, with line endings normalized.
inline std::map<std::string, std::string> ReadOutputs(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) {
      out[e.path().filename().string()] = NormalizeLineEndings(ReadFile(e.path()));
    }
  }
  return out;
}

inline void RunAfterInformalize(const pipeline::PipelineConfig& c) {
  pipeline::RunBootstrap(c);
  pipeline::RunPrep(c);
  pipeline::RunProve(c);
}

inline std::map<std::string, std::string> RunFullPipeline(const std::filesystem::path& work_dir) {
  std::filesystem::remove_all(work_dir);
  const auto c = E2eConfig(work_dir);
  pipeline::RunExtract(c);
  pipeline::RunTrainRetriever(c);
  pipeline::RunInformalize(c);
  RunAfterInformalize(c);
  return ReadOutputs(work_dir);
}

// Interrupts informalization by exhausting a request budget, as a killed or
// throttled run would, then resumes without the budget and finishes. Returns
// the outputs and the number of checkpoint lines that survived.
inline std::map<std::string, std::string> RunResumedPipeline(const std::filesystem::path& work_dir,
                                                             int max_requests,
                                                             std::size_t* surviving = nullptr) {
  std::filesystem::remove_all(work_dir);
  const auto c = E2eConfig(work_dir);
  pipeline::RunExtract(c);
  pipeline::RunTrainRetriever(c);
  const auto limited =
      E2eConfig(work_dir, {"genclient.budget.max_requests=" + std::to_string(max_requests)});
  bool interrupted = false;
  try {
    pipeline::RunInformalize(limited);
  } catch (const Error& e) {
    interrupted = e.code() == ErrorCode::kBudgetExceeded;
  }
  if (!interrupted) throw std::runtime_error("budget did not interrupt informalization");
  if (surviving) {
    *surviving = ReadJsonl(work_dir / pipeline::artifact::kInformalCheckpoint).size();
  }
  pipeline::RunInformalize(c, {/*resume=*/true, /*restart_on_corrupt=*/false});
  RunAfterInformalize(c);
  return ReadOutputs(work_dir);
}

}  // namespace leanbridge::testing

#endif  // LEANBRIDGE_TESTS_SUPPORT_E2E_H_
