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

#include "leanbridge/genclient/client.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "leanbridge/common/random.h"

namespace leanbridge::genclient {

void GenerationRequest::Validate() const {
  if (n_samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_samples must be >= 1");
  }
  if (max_new_tokens < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_new_tokens must be >= 1");
  }
  if (!(temperature >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
}

bool ApplyStopSequences(std::string& text, const std::vector<std::string>& stops) {
  std::size_t cut = std::string::npos;
  for (const auto& stop : stops) {
    if (stop.empty()) continue;
    cut = std::min(cut, text.find(stop));
  }
  if (cut == std::string::npos) return false;
  text.resize(cut);
  return true;
}

std::int64_t EstimateTokens(const std::string& text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

Clock Clock::Real() {
  return {[] {
            return std::chrono::duration<double>(
                       std::chrono::steady_clock::now().time_since_epoch())
                .count();
          },
          [](double s) {
            std::this_thread::sleep_for(std::chrono::duration<double>(s));
          }};
}

Client::Client(std::shared_ptr<Backend> backend, RetryPolicy retry, Budget budget,
               Clock clock)
    : backend_(std::move(backend)),
      retry_(retry),
      budget_(budget),
      clock_(std::move(clock)),
      jitter_state_(ForkSeed(retry.jitter_seed, "backoff-jitter")) {
  if (!backend_) throw Error(ErrorCode::kInvalidArgument, "client needs a backend");
  if (retry_.max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  }
}

Usage Client::usage() const {
  std::lock_guard<std::mutex> lock(mu_);
  return usage_;
}

double Client::BackoffCeiling(int retry) const {
  const double exp = retry_.base_delay_seconds * std::pow(2.0, retry - 1);
  return std::min(retry_.max_delay_seconds, exp);
}

void Client::Charge(std::int64_t tokens) {
  std::lock_guard<std::mutex> lock(mu_);
  usage_.tokens += tokens;
}

BackendReply Client::CallWithRetry(const GenerationRequest& request, double started,
                                   int* attempts) {
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      const std::int64_t prompt_tokens = EstimateTokens(request.system + request.prompt);
      if (budget_.max_requests > 0 && usage_.requests >= budget_.max_requests) {
        throw Error(ErrorCode::kBudgetExceeded,
                    "request budget of " + std::to_string(budget_.max_requests) +
                        " exhausted");
      }
      if (budget_.max_tokens > 0 && usage_.tokens + prompt_tokens > budget_.max_tokens) {
        throw Error(ErrorCode::kBudgetExceeded,
                    "token budget of " + std::to_string(budget_.max_tokens) +
                        " would be exceeded");
      }
      ++usage_.requests;
      usage_.tokens += prompt_tokens;
    }
    ++*attempts;
    try {
      BackendReply reply = backend_->Generate(request);
      reply.truncated.resize(reply.samples.size(), false);
      std::int64_t out_tokens = 0;
      for (const auto& s : reply.samples) out_tokens += EstimateTokens(s);
      Charge(out_tokens);
      return reply;
    } catch (const TransientBackendError& e) {
      last_error = e.what();
    }
    if (attempt == retry_.max_attempts) break;
    double u;
    {
      std::lock_guard<std::mutex> lock(mu_);
      jitter_state_ = SplitMix64(jitter_state_);
      u = static_cast<double>(jitter_state_ >> 11) * 0x1.0p-53;
      ++usage_.retries;
    }
    // Equal jitter: half the ceiling is guaranteed, half is random.
    const double delay = BackoffCeiling(attempt) * (0.5 + 0.5 * u);
    if (clock_.now_seconds() + delay - started > retry_.wall_clock_ceiling_seconds) {
      throw Error(ErrorCode::kBackendUnavailable,
                  backend_->name() + " still failing when the retry time ceiling of " +
                      std::to_string(retry_.wall_clock_ceiling_seconds) +
                      " s was reached: " + last_error);
    }
    clock_.sleep_seconds(delay);
  }
  throw Error(ErrorCode::kBackendUnavailable,
              backend_->name() + " failed after " + std::to_string(retry_.max_attempts) +
                  " attempts: " + last_error);
}

GenerationResponse Client::Complete(const GenerationRequest& request) {
  request.Validate();
  const double started = clock_.now_seconds();
  GenerationResponse response;
  response.backend_name = backend_->name();
  const int per_call = std::max(1, backend_->max_samples_per_call());
  int empty_replies = 0;
  while (static_cast<int>(response.samples.size()) < request.n_samples) {
    GenerationRequest sub = request;
    sub.n_samples =
        std::min(per_call, request.n_samples - static_cast<int>(response.samples.size()));
    BackendReply reply = CallWithRetry(sub, started, &response.attempts);
    if (reply.samples.empty()) {
      if (++empty_replies >= 2) {
        throw Error(ErrorCode::kMalformedBackendReply,
                    backend_->name() + " returned no samples for request " +
                        request.request_id);
      }
      continue;
    }
    const std::size_t take =
        std::min(reply.samples.size(), static_cast<std::size_t>(sub.n_samples));
    for (std::size_t i = 0; i < take; ++i) {
      ApplyStopSequences(reply.samples[i], request.stop_sequences);
      response.samples.push_back(std::move(reply.samples[i]));
      response.truncated.push_back(reply.truncated[i]);
    }
  }
  response.latency_ms = (clock_.now_seconds() - started) * 1000.0;
  return response;
}

}  // namespace leanbridge::genclient
