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

#ifndef LEANBRIDGE_RETRIEVAL_CONTRASTIVE_H_
#define LEANBRIDGE_RETRIEVAL_CONTRASTIVE_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/retrieval/embedding.h"

namespace leanbridge::retrieval {

using EmbeddingPair = std::pair<EmbeddingVector, EmbeddingVector>;

enum class HeadInit { kUniform, kIdentity };

// Linear map applied to both NL and FL base embeddings.
struct ProjectionHead {
  Eigen::MatrixXd weights;  // d_out x d_in, d_out <= d_in
  std::uint64_t seed = 0;

  Eigen::Index d_in() const { return weights.cols(); }
  Eigen::Index d_out() const { return weights.rows(); }

  // Uniform in [-0.1, 0.1] from `seed`; identity requires d_out == d_in.
  static ProjectionHead Initialize(Eigen::Index d_in, Eigen::Index d_out,
                                   std::uint64_t seed,
                                   HeadInit init = HeadInit::kUniform);

  Eigen::VectorXd Project(const Eigen::VectorXd& v) const;
  // FNV-1a over the little-endian weight bytes, as 16 hex digits.
  std::string Checksum() const;
  void Validate() const;
};

Json ToJson(const ProjectionHead& head);
ProjectionHead HeadFromJson(const Json& j);

// Pair i is contrasted against pair negatives[i]; the default assignment is
// (i + 1) mod B.
struct AlignmentBatch {
  std::vector<EmbeddingPair> pairs;
  std::vector<std::size_t> negatives;

  static AlignmentBatch Make(std::vector<EmbeddingPair> pairs);
  std::size_t size() const { return pairs.size(); }
  // B >= 2, every negative differs from its pair, uniform dimension.
  void Validate() const;
};

// Mean over pairs of 1 - cos(nl_i, fl_i) + (cos(nl_j, fl_i) + cos(nl_i, fl_j)) / 2
// on projected vectors. Throws ZeroNormVector naming the pair.
double ContrastiveLoss(const AlignmentBatch& batch, const ProjectionHead& head);

// Analytic dL/dW with the same shape as head.weights.
Eigen::MatrixXd ContrastiveGradient(const AlignmentBatch& batch,
                                    const ProjectionHead& head);

// Loss and gradient from one projection pass.
double ContrastiveLossAndGradient(const AlignmentBatch& batch,
                                  const ProjectionHead& head,
                                  Eigen::MatrixXd* gradient);

struct TrainConfig {
  double learning_rate = 0.05;
  int steps = 500;
  int batch_size = 16;
  std::uint64_t seed = 0;
  Eigen::Index d_out = 0;  // 0 means d_in
  HeadInit init = HeadInit::kUniform;
};

struct TrainResult {
  ProjectionHead head;
  std::vector<double> loss_trace;  // batch loss before each update
};

// Plain gradient descent over per-epoch shuffled batches. A trailing batch
// with fewer than two pairs is dropped. Throws DivergedLoss on a non-finite
// loss with the step index.
TrainResult TrainProjection(const std::vector<EmbeddingPair>& pairs,
                            const TrainConfig& config);

}  // namespace leanbridge::retrieval

#endif  // LEANBRIDGE_RETRIEVAL_CONTRASTIVE_H_
