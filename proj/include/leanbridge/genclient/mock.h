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

#ifndef LEANBRIDGE_GENCLIENT_MOCK_H_
#define LEANBRIDGE_GENCLIENT_MOCK_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/genclient/backend.h"

namespace leanbridge::genclient {

// A rule fires when every pattern is a substring of the prompt.
struct MockRule {
  std::vector<std::string> patterns;
  // The k-th sample ever drawn for a given prompt is responses[k], clamped to
  // the last entry. Must be nonempty.
  std::vector<std::string> responses;
};

struct MockScript {
  std::vector<MockRule> rules;  // first match wins, declared order
  std::string default_text;
};

// Script file: {"default": "...", "rules": [{"pattern": "..." | "patterns":
// [...], "response": "..." | "responses": [...]}]}. A response may instead be
// {"file": "relative/path"} resolved against `base_dir`.
MockScript ParseMockScript(const Json& j, const std::filesystem::path& base_dir = {});
MockScript LoadMockScript(const std::filesystem::path& path);

// Deterministic scripted backend. Sample counters are keyed by the prompt's
// FNV-1a hash, so repeated identical prompts walk through the response list
// while unrelated prompts do not disturb each other.
class MockBackend : public Backend {
 public:
  explicit MockBackend(MockScript script);
  std::string name() const override { return "mock"; }
  BackendReply Generate(const GenerationRequest& request) override;

  std::int64_t calls() const { return calls_.load(); }
  // Index of the matching rule, or -1 for the default text.
  int MatchRule(const std::string& prompt) const;

 private:
  MockScript script_;
  std::mutex mu_;
  std::map<std::uint64_t, std::int64_t> drawn_;
  std::atomic<std::int64_t> calls_{0};
};

// Test helper: fails calls according to a script, then delegates.
class FaultInjectingBackend : public Backend {
 public:
  enum class Fault { kNone, kTransient, kPermanent, kMalformed, kShort };

  FaultInjectingBackend(std::shared_ptr<Backend> inner, std::vector<Fault> faults);
  std::string name() const override { return "fault(" + inner_->name() + ")"; }
  int max_samples_per_call() const override { return inner_->max_samples_per_call(); }
  BackendReply Generate(const GenerationRequest& request) override;
  std::int64_t calls() const { return calls_.load(); }

 private:
  std::shared_ptr<Backend> inner_;
  std::vector<Fault> faults_;  // fault for call i; kNone afterwards
  std::atomic<std::int64_t> calls_{0};
};

}  // namespace leanbridge::genclient

#endif  // LEANBRIDGE_GENCLIENT_MOCK_H_
