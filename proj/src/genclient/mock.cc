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

#include "leanbridge/genclient/mock.h"

#include "leanbridge/common/random.h"

namespace leanbridge::genclient {
namespace {

std::string ResponseText(const Json& r, const std::filesystem::path& base_dir) {
  if (r.is_string()) return r.get<std::string>();
  if (r.is_object() && r.contains("file")) {
    return ReadFile(base_dir / r.at("file").get<std::string>());
  }
  throw Error(ErrorCode::kConfigInvalid, "mock response must be a string or {file}");
}

}  // namespace

MockScript ParseMockScript(const Json& j, const std::filesystem::path& base_dir) {
  MockScript script;
  try {
    script.default_text = j.value("default", std::string());
    for (const Json& r : j.value("rules", Json::array())) {
      MockRule rule;
      if (r.contains("pattern")) rule.patterns.push_back(r.at("pattern").get<std::string>());
      if (r.contains("patterns")) {
        for (const auto& p : r.at("patterns")) rule.patterns.push_back(p.get<std::string>());
      }
      if (r.contains("response")) rule.responses.push_back(ResponseText(r.at("response"), base_dir));
      if (r.contains("responses")) {
        for (const auto& x : r.at("responses")) rule.responses.push_back(ResponseText(x, base_dir));
      }
      if (rule.patterns.empty() || rule.responses.empty()) {
        throw Error(ErrorCode::kConfigInvalid,
                    "mock rule " + std::to_string(script.rules.size()) +
                        " needs at least one pattern and one response");
      }
      script.rules.push_back(std::move(rule));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, std::string("malformed mock script: ") + e.what());
  }
  return script;
}

MockScript LoadMockScript(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(ReadFile(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                "mock script " + path.string() + " is not JSON: " + e.what());
  }
  return ParseMockScript(j, path.parent_path());
}

MockBackend::MockBackend(MockScript script) : script_(std::move(script)) {
  for (const auto& rule : script_.rules) {
    if (rule.responses.empty()) {
      throw Error(ErrorCode::kConfigInvalid, "mock rule without responses");
    }
  }
}

int MockBackend::MatchRule(const std::string& prompt) const {
  for (std::size_t i = 0; i < script_.rules.size(); ++i) {
    bool all = true;
    for (const auto& p : script_.rules[i].patterns) {
      if (prompt.find(p) == std::string::npos) {
        all = false;
        break;
      }
    }
    if (all) return static_cast<int>(i);
  }
  return -1;
}

BackendReply MockBackend::Generate(const GenerationRequest& request) {
  ++calls_;
  const int rule = MatchRule(request.prompt);
  std::int64_t first;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& drawn = drawn_[Fnv1a64(request.system + '\0' + request.prompt)];
    first = drawn;
    drawn += request.n_samples;
  }
  BackendReply reply;
  for (int k = 0; k < request.n_samples; ++k) {
    if (rule < 0) {
      reply.samples.push_back(script_.default_text);
    } else {
      const auto& responses = script_.rules[rule].responses;
      const auto idx = std::min<std::int64_t>(first + k, responses.size() - 1);
      reply.samples.push_back(responses[idx]);
    }
    reply.truncated.push_back(false);
  }
  return reply;
}

FaultInjectingBackend::FaultInjectingBackend(std::shared_ptr<Backend> inner,
                                             std::vector<Fault> faults)
    : inner_(std::move(inner)), faults_(std::move(faults)) {}

BackendReply FaultInjectingBackend::Generate(const GenerationRequest& request) {
  const std::int64_t call = calls_++;
  const Fault fault =
      call < static_cast<std::int64_t>(faults_.size()) ? faults_[call] : Fault::kNone;
  switch (fault) {
    case Fault::kTransient:
      throw TransientBackendError("injected transient failure on call " +
                                  std::to_string(call));
    case Fault::kPermanent:
      throw Error(ErrorCode::kBackendUnavailable,
                  "injected permanent failure on call " + std::to_string(call));
    case Fault::kMalformed:
      throw Error(ErrorCode::kMalformedBackendReply,
                  "injected malformed reply on call " + std::to_string(call));
    case Fault::kShort: {
      GenerationRequest one = request;
      one.n_samples = 1;
      return inner_->Generate(one);
    }
    case Fault::kNone:
      break;
  }
  return inner_->Generate(request);
}

}  // namespace leanbridge::genclient
