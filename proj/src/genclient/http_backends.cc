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

#include "leanbridge/genclient/http_backends.h"

#include <cstdlib>

#include "httplib.h"

namespace leanbridge::genclient {
namespace {

std::string RequireKey(const HttpBackendOptions& options) {
  if (options.base_url.empty() || options.model.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "HTTP backend needs base_url and model");
  }
  if (options.api_key_env.empty()) return {};
  const char* key = std::getenv(options.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::kConfigInvalid,
                "environment variable " + options.api_key_env + " is not set");
  }
  return key;
}

bool IsTransientStatus(int status) {
  return status == 408 || status == 429 || status >= 500;
}

std::string PostJson(const HttpBackendOptions& options, const std::string& path,
                     const httplib::Headers& headers, const Json& body) {
  httplib::Client client(options.base_url);
  client.set_connection_timeout(options.timeout_seconds);
  client.set_read_timeout(options.timeout_seconds);
  client.set_write_timeout(options.timeout_seconds);
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransientBackendError(options.base_url + path + ": " +
                                httplib::to_string(res.error()));
  }
  if (IsTransientStatus(res->status)) {
    throw TransientBackendError(options.base_url + path + " returned HTTP " +
                                std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendUnavailable,
                options.base_url + path + " returned HTTP " + std::to_string(res->status) +
                    ": " + res->body.substr(0, 200));
  }
  return res->body;
}

}  // namespace

OpenAiChatBackend::OpenAiChatBackend(HttpBackendOptions options)
    : options_(std::move(options)), api_key_(RequireKey(options_)) {}

Json OpenAiChatBackend::BuildBody(const GenerationRequest& request) const {
  Json messages = Json::array();
  if (!request.system.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system}});
  }
  messages.push_back({{"role", "user"}, {"content", request.prompt}});
  Json body{{"model", options_.model},
            {"messages", std::move(messages)},
            {"temperature", request.temperature},
            {"max_tokens", request.max_new_tokens},
            {"n", request.n_samples}};
  if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;
  return body;
}

BackendReply OpenAiChatBackend::ParseReply(const std::string& body) {
  BackendReply reply;
  try {
    const Json j = Json::parse(body);
    for (const auto& choice : j.at("choices")) {
      reply.samples.push_back(choice.at("message").at("content").get<std::string>());
      reply.truncated.push_back(choice.value("finish_reason", std::string()) == "length");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedBackendReply,
                std::string("chat completion reply: ") + e.what());
  }
  return reply;
}

BackendReply OpenAiChatBackend::Generate(const GenerationRequest& request) {
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  return ParseReply(PostJson(options_, "/v1/chat/completions", headers, BuildBody(request)));
}

GeminiBackend::GeminiBackend(HttpBackendOptions options)
    : options_(std::move(options)), api_key_(RequireKey(options_)) {}

Json GeminiBackend::BuildBody(const GenerationRequest& request) const {
  Json config{{"temperature", request.temperature},
              {"maxOutputTokens", request.max_new_tokens},
              {"candidateCount", request.n_samples}};
  if (!request.stop_sequences.empty()) config["stopSequences"] = request.stop_sequences;
  Json body{{"contents", Json::array({{{"role", "user"},
                                       {"parts", Json::array({{{"text", request.prompt}}})}}})},
            {"generationConfig", std::move(config)}};
  if (!request.system.empty()) {
    body["systemInstruction"] = {{"parts", Json::array({{{"text", request.system}}})}};
  }
  return body;
}

BackendReply GeminiBackend::ParseReply(const std::string& body) {
  BackendReply reply;
  try {
    const Json j = Json::parse(body);
    for (const auto& cand : j.at("candidates")) {
      std::string text;
      for (const auto& part : cand.at("content").at("parts")) {
        text += part.value("text", std::string());
      }
      reply.samples.push_back(std::move(text));
      reply.truncated.push_back(cand.value("finishReason", std::string()) == "MAX_TOKENS");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedBackendReply,
                std::string("generateContent reply: ") + e.what());
  }
  return reply;
}

BackendReply GeminiBackend::Generate(const GenerationRequest& request) {
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("x-goog-api-key", api_key_);
  return ParseReply(PostJson(options_,
                             "/v1beta/models/" + options_.model + ":generateContent",
                             headers, BuildBody(request)));
}

}  // namespace leanbridge::genclient
