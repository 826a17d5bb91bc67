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

#ifndef LEANBRIDGE_RETRIEVAL_INDEX_H_
#define LEANBRIDGE_RETRIEVAL_INDEX_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "leanbridge/retrieval/contrastive.h"
#include "leanbridge/retrieval/embedding.h"

namespace leanbridge::retrieval {

struct ScoredId {
  std::string id;
  double similarity;
};

// Exact cosine search over projected vectors. Immutable once built, so
// concurrent queries need no locking.
class SimilarityIndex {
 public:
  struct Entry {
    std::string id;
    Eigen::VectorXd vector;  // projected, nonzero norm
  };

  // Throws EmptyInput, DimensionMismatch, or ZeroNormVector.
  static SimilarityIndex Build(
      const std::vector<std::pair<std::string, EmbeddingVector>>& corpus,
      const ProjectionHead& head);

  // `query` is a base embedding; it is projected through the same head.
  // Descending similarity, ties by ascending id. Throws ZeroNormQuery.
  std::vector<ScoredId> TopK(const EmbeddingVector& query, std::size_t k) const;

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  Eigen::Index dimension() const { return head_.d_in(); }
  const ProjectionHead& head() const { return head_; }

  // JSONL: a header line {dimension, head_checksum, count}, then one
  // {id, vector} line per entry. The head is stored separately.
  void Save(const std::filesystem::path& path) const;
  // Rejects files whose header checksum differs from `head`.
  static SimilarityIndex Load(const std::filesystem::path& path,
                              const ProjectionHead& head);

 private:
  ProjectionHead head_;
  std::vector<Entry> entries_;
  std::vector<double> norms_;
};

}  // namespace leanbridge::retrieval

#endif  // LEANBRIDGE_RETRIEVAL_INDEX_H_
