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

#ifndef LEANBRIDGE_RETRIEVAL_PROVIDER_H_
#define LEANBRIDGE_RETRIEVAL_PROVIDER_H_

#include <memory>
#include <string>
#include <vector>

#include "leanbridge/retrieval/embedding.h"

namespace leanbridge::retrieval {

// Source of base embeddings. Implementations must be safe for concurrent
// calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual std::vector<EmbeddingVector> Embed(
      const std::vector<std::string>& texts) const = 0;
};

// Offline embedder: each whitespace token becomes a signed feature-hashed
// bag of its character n-grams (with boundary markers), and a text is the
// mean of its token vectors. Identical text always maps to the same vector.
class HashEmbedder : public EmbeddingProvider {
 public:
  explicit HashEmbedder(int dimension, int ngram = 3);
  int dimension() const override { return dimension_; }
  std::vector<EmbeddingVector> Embed(
      const std::vector<std::string>& texts) const override;
  EmbeddingVector EmbedOne(const std::string& text) const;

 private:
  int dimension_;
  int ngram_;
};

// POST {texts: [...]} to `url`, expects {vectors: [[...], ...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string url, int dimension,
                        int timeout_seconds = 60);
  int dimension() const override { return dimension_; }
  // Throws BackendUnavailable, MalformedBackendReply, or DimensionMismatch.
  std::vector<EmbeddingVector> Embed(
      const std::vector<std::string>& texts) const override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  int dimension_;
  int timeout_seconds_;
};

}  // namespace leanbridge::retrieval

#endif  // LEANBRIDGE_RETRIEVAL_PROVIDER_H_
