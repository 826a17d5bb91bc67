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

#ifndef LEANBRIDGE_GENCLIENT_CLIENT_H_
#define LEANBRIDGE_GENCLIENT_CLIENT_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>

#include "leanbridge/genclient/backend.h"

namespace leanbridge::genclient {

struct RetryPolicy {
  int max_attempts = 5;
  double base_delay_seconds = 1.0;
  double max_delay_seconds = 60.0;
  // Total time one Complete call may spend, retries and sleeps included.
  double wall_clock_ceiling_seconds = 600.0;
  std::uint64_t jitter_seed = 0;
};

// Zero means unlimited. Tokens are estimated, not billed counts.
struct Budget {
  std::int64_t max_requests = 0;
  std::int64_t max_tokens = 0;
};

struct Usage {
  std::int64_t requests = 0;
  std::int64_t tokens = 0;
  std::int64_t retries = 0;
};

// Rough token estimate used for budgets: one token per four bytes.
std::int64_t EstimateTokens(const std::string& text);

// Time source and sleeper, replaceable in tests.
struct Clock {
  std::function<double()> now_seconds;
  std::function<void(double)> sleep_seconds;
  static Clock Real();
};

// Wraps a backend with retries, budget accounting, and sample top-up.
// Thread-safe; usage counters are shared across calls.
class Client {
 public:
  Client(std::shared_ptr<Backend> backend, RetryPolicy retry = {},
         Budget budget = {}, Clock clock = Clock::Real());

  // Returns exactly request.n_samples samples. Retries transient failures
  // with exponential backoff and jitter; asks again for missing samples.
  // Throws BackendUnavailable, BudgetExceeded, or MalformedBackendReply.
  GenerationResponse Complete(const GenerationRequest& request);

  Usage usage() const;
  Backend& backend() { return *backend_; }

  // Delay before retry number `retry` (1-based), before jitter is applied.
  double BackoffCeiling(int retry) const;

 private:
  BackendReply CallWithRetry(const GenerationRequest& request, double started,
                             int* attempts);
  void Charge(std::int64_t tokens);

  std::shared_ptr<Backend> backend_;
  RetryPolicy retry_;
  Budget budget_;
  Clock clock_;
  mutable std::mutex mu_;
  Usage usage_;
  std::uint64_t jitter_state_;
};

}  // namespace leanbridge::genclient

#endif  // LEANBRIDGE_GENCLIENT_CLIENT_H_
