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

#ifndef LEANBRIDGE_RETRIEVAL_EMBEDDING_H_
#define LEANBRIDGE_RETRIEVAL_EMBEDDING_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace leanbridge::retrieval {

// A dense vector with its Euclidean norm cached at construction.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(Eigen::VectorXd values);
  EmbeddingVector(std::initializer_list<double> values);

  const Eigen::VectorXd& values() const { return values_; }
  double norm() const { return norm_; }
  Eigen::Index dimension() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

  bool operator==(const EmbeddingVector& other) const {
    return values_ == other.values_;
  }

 private:
  Eigen::VectorXd values_;
  double norm_ = 0.0;
};

// Component-wise arithmetic mean. Throws EmptyInput or DimensionMismatch.
EmbeddingVector MeanPool(std::span<const EmbeddingVector> token_vectors);

// Throws ZeroNormVector if either side has zero norm.
double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace leanbridge::retrieval

#endif  // LEANBRIDGE_RETRIEVAL_EMBEDDING_H_
