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

#ifndef LEANBRIDGE_GENCLIENT_BACKEND_H_
#define LEANBRIDGE_GENCLIENT_BACKEND_H_

#include <string>
#include <vector>

#include "leanbridge/common/error.h"

namespace leanbridge::genclient {

struct GenerationRequest {
  std::string system;  // optional system message
  std::string prompt;
  int max_new_tokens = 1024;
  double temperature = 0.7;
  int n_samples = 1;
  std::vector<std::string> stop_sequences;
  std::string request_id;

  // Throws InvalidArgument.
  void Validate() const;
};

struct GenerationResponse {
  std::vector<std::string> samples;  // exactly n_samples
  std::vector<bool> truncated;       // parallel to samples
  std::string backend_name;
  double latency_ms = 0.0;
  int attempts = 0;  // backend calls including retries and top-ups
};

// One backend call's output. May hold fewer samples than requested.
struct BackendReply {
  std::vector<std::string> samples;
  std::vector<bool> truncated;
};

// A failure worth retrying: timeouts, connection resets, HTTP 429 and 5xx.
class TransientBackendError : public Error {
 public:
  explicit TransientBackendError(const std::string& message)
      : Error(ErrorCode::kBackendUnavailable, message) {}
};

// Implementations must be safe for concurrent Generate calls.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  // Largest n the service accepts in one call.
  virtual int max_samples_per_call() const { return 128; }
  // Throws TransientBackendError for retryable failures, Error otherwise.
  virtual BackendReply Generate(const GenerationRequest& request) = 0;
};

// Cuts `text` before the earliest stop sequence. Returns true if cut.
bool ApplyStopSequences(std::string& text, const std::vector<std::string>& stops);

}  // namespace leanbridge::genclient

#endif  // LEANBRIDGE_GENCLIENT_BACKEND_H_
