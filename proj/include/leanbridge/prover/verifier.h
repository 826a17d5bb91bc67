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

#ifndef LEANBRIDGE_PROVER_VERIFIER_H_
#define LEANBRIDGE_PROVER_VERIFIER_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "leanbridge/prover/problem.h"

namespace leanbridge::prover {

enum class Verdict { kVerified, kRejected, kError };
std::string_view VerdictName(Verdict v);
Verdict ParseVerdict(std::string_view name);

struct VerifyResult {
  Verdict verdict = Verdict::kRejected;
  std::string diagnostic;
};

// Implementations must be safe for concurrent calls.
class Verifier {
 public:
  virtual ~Verifier() = default;
  virtual std::string name() const = 0;
  // Returns verified or rejected. Throws VerifierTimeout or VerifierCrashed
  // when no verdict could be obtained.
  virtual VerifyResult Verify(const Problem& problem, const std::string& proof) = 0;
};

// Accepts a proof iff, comments removed, it is token-equal to one of the
// problem's answer-key proofs.
class MockVerifier : public Verifier {
 public:
  explicit MockVerifier(std::multimap<std::string, std::string> answer_key);
  // JSONL of {name, proof}; a name may appear more than once.
  static MockVerifier FromFile(const std::filesystem::path& path);

  std::string name() const override { return "mock"; }
  VerifyResult Verify(const Problem& problem, const std::string& proof) override;

 private:
  std::multimap<std::string, std::string> key_;
};

// Runs `command... <file.lean>` on imports + proof. Exit 0 means verified,
// any other exit status rejected with the captured output as diagnostic.
// The child runs in its own process group, killed as a whole on timeout.
class ExternalVerifier : public Verifier {
 public:
  ExternalVerifier(std::vector<std::string> command, double timeout_seconds,
                   std::filesystem::path scratch_dir = std::filesystem::temp_directory_path());

  std::string name() const override;
  VerifyResult Verify(const Problem& problem, const std::string& proof) override;

 private:
  std::vector<std::string> command_;
  double timeout_seconds_;
  std::filesystem::path scratch_dir_;
};

// Longest diagnostic kept from a checker's output.
inline constexpr std::size_t kMaxDiagnosticBytes = 4096;

}  // namespace leanbridge::prover

#endif  // LEANBRIDGE_PROVER_VERIFIER_H_
