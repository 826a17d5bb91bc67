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

#include "leanbridge/retrieval/index.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "leanbridge/common/error.h"
#include "leanbridge/common/jsonl.h"

namespace leanbridge::retrieval {

SimilarityIndex SimilarityIndex::Build(
    const std::vector<std::pair<std::string, EmbeddingVector>>& corpus,
    const ProjectionHead& head) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot build an index from an empty corpus");
  }
  head.Validate();
  SimilarityIndex index;
  index.head_ = head;
  index.entries_.reserve(corpus.size());
  index.norms_.reserve(corpus.size());
  for (const auto& [id, v] : corpus) {
    if (v.dimension() != head.d_in()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "entry '" + id + "' has dimension " + std::to_string(v.dimension()) +
                      ", index expects " + std::to_string(head.d_in()));
    }
    Eigen::VectorXd projected = head.weights * v.values();
    const double norm = projected.norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroNormVector, "entry '" + id + "' projects to zero");
    }
    index.entries_.push_back({id, std::move(projected)});
    index.norms_.push_back(norm);
  }
  return index;
}

std::vector<ScoredId> SimilarityIndex::TopK(const EmbeddingVector& query,
                                            std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "top_k needs k >= 1");
  if (query.dimension() != head_.d_in()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dimension " + std::to_string(query.dimension()) +
                    " does not match index dimension " + std::to_string(head_.d_in()));
  }
  const Eigen::VectorXd q = head_.weights * query.values();
  const double nq = q.norm();
  if (nq == 0.0) throw Error(ErrorCode::kZeroNormQuery, "query projects to zero");

  std::vector<ScoredId> scored;
  scored.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    scored.push_back({entries_[i].id, entries_[i].vector.dot(q) / (norms_[i] * nq)});
  }
  const auto better = [](const ScoredId& a, const ScoredId& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n),
                    scored.end(), better);
  scored.resize(n);
  return scored;
}

void SimilarityIndex::Save(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << DumpLine(Json{{"dimension", head_.d_in()},
                       {"head_checksum", head_.Checksum()},
                       {"count", entries_.size()}})
      << '\n';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    // Unprojected vectors are not kept, so the projected ones are stored and
    // reloaded verbatim.
    std::vector<double> values(entries_[i].vector.data(),
                               entries_[i].vector.data() + entries_[i].vector.size());
    out << DumpLine(Json{{"id", entries_[i].id}, {"vector", values}}) << '\n';
  }
  WriteFileAtomic(path, out.str());
}

SimilarityIndex SimilarityIndex::Load(const std::filesystem::path& path,
                                      const ProjectionHead& head) {
  const std::vector<Json> lines = ReadJsonl(path);
  if (lines.empty()) {
    throw Error(ErrorCode::kMissingArtifact, "index file " + path.string() + " is empty");
  }
  const Json& header = lines.front();
  if (header.value("head_checksum", std::string()) != head.Checksum()) {
    throw Error(ErrorCode::kInvalidArgument,
                "index " + path.string() + " was built with a different head");
  }
  if (header.value("dimension", Eigen::Index{-1}) != head.d_in() ||
      header.value("count", std::size_t{0}) != lines.size() - 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "index " + path.string() + " header does not match its contents");
  }
  SimilarityIndex index;
  index.head_ = head;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto values = lines[i].at("vector").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(values.size()) != head.d_out()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "index entry " + std::to_string(i) + " has the wrong dimension");
    }
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
    const double norm = v.norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroNormVector, "index entry " + std::to_string(i) + " is zero");
    }
    index.entries_.push_back({lines[i].at("id").get<std::string>(), std::move(v)});
    index.norms_.push_back(norm);
  }
  return index;
}

}  // namespace leanbridge::retrieval
