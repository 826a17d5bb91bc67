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

#ifndef LEANBRIDGE_GENCLIENT_HTTP_BACKENDS_H_
#define LEANBRIDGE_GENCLIENT_HTTP_BACKENDS_H_

#include <string>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/genclient/backend.h"

namespace leanbridge::genclient {

struct HttpBackendOptions {
  std::string base_url;     // scheme://host[:port], no trailing path
  std::string model;
  std::string api_key_env;  // name of the environment variable, never the key
  int timeout_seconds = 120;
};

// OpenAI-compatible chat completions.
//   POST {base_url}/v1/chat/completions
//   Authorization: Bearer $api_key_env
//   {"model", "messages": [{"role": "system"|"user", "content"}],
//    "temperature", "max_tokens", "n", "stop"?}
//   reply: {"choices": [{"message": {"content"}, "finish_reason"}]}
// finish_reason "length" marks a sample truncated.
class OpenAiChatBackend : public Backend {
 public:
  explicit OpenAiChatBackend(HttpBackendOptions options);
  std::string name() const override { return "openai:" + options_.model; }
  BackendReply Generate(const GenerationRequest& request) override;

  Json BuildBody(const GenerationRequest& request) const;
  static BackendReply ParseReply(const std::string& body);

 private:
  HttpBackendOptions options_;
  std::string api_key_;
};

// Gemini generateContent.
//   POST {base_url}/v1beta/models/{model}:generateContent
//   x-goog-api-key: $api_key_env
//   {"systemInstruction": {"parts": [{"text"}]}?,
//    "contents": [{"role": "user", "parts": [{"text"}]}],
//    "generationConfig": {"temperature", "maxOutputTokens", "candidateCount",
//                         "stopSequences"?}}
//   reply: {"candidates": [{"content": {"parts": [{"text"}]}, "finishReason"}]}
// finishReason "MAX_TOKENS" marks a sample truncated. At most 8 candidates
// per call.
class GeminiBackend : public Backend {
 public:
  explicit GeminiBackend(HttpBackendOptions options);
  std::string name() const override { return "gemini:" + options_.model; }
  int max_samples_per_call() const override { return 8; }
  BackendReply Generate(const GenerationRequest& request) override;

  Json BuildBody(const GenerationRequest& request) const;
  static BackendReply ParseReply(const std::string& body);

 private:
  HttpBackendOptions options_;
  std::string api_key_;
};

}  // namespace leanbridge::genclient

#endif  // LEANBRIDGE_GENCLIENT_HTTP_BACKENDS_H_
