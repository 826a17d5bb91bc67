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

#include "leanbridge/retrieval/embedding.h"

#include <string>

#include "leanbridge/common/error.h"

namespace leanbridge::retrieval {

EmbeddingVector::EmbeddingVector(Eigen::VectorXd values)
    : values_(std::move(values)), norm_(values_.norm()) {}

EmbeddingVector::EmbeddingVector(std::initializer_list<double> values)
    : values_(static_cast<Eigen::Index>(values.size())) {
  Eigen::Index i = 0;
  for (double v : values) values_[i++] = v;
  norm_ = values_.norm();
}

EmbeddingVector MeanPool(std::span<const EmbeddingVector> token_vectors) {
  if (token_vectors.empty()) {
    throw Error(ErrorCode::kEmptyInput, "mean_pool of an empty token list");
  }
  const Eigen::Index d = token_vectors.front().dimension();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < token_vectors.size(); ++i) {
    if (token_vectors[i].dimension() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "token vector " + std::to_string(i) + " has dimension " +
                      std::to_string(token_vectors[i].dimension()) +
                      ", expected " + std::to_string(d));
    }
    sum += token_vectors[i].values();
  }
  return EmbeddingVector(sum / static_cast<double>(token_vectors.size()));
}

double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors of dimension " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroNormVector, "cosine with a zero-norm vector");
  }
  return a.dot(b) / (na * nb);
}

}  // namespace leanbridge::retrieval
