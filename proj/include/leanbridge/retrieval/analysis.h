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

#ifndef LEANBRIDGE_RETRIEVAL_ANALYSIS_H_
#define LEANBRIDGE_RETRIEVAL_ANALYSIS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "leanbridge/retrieval/contrastive.h"

namespace leanbridge::retrieval {

// Counts of cos(head*nl_i, head*fl_j) over all i, j, split by whether the
// pair is aligned (i == j). Bins partition [-1, 1] evenly.
struct SimilarityHistogram {
  std::vector<double> edges;  // bins + 1 values
  std::vector<std::int64_t> aligned;
  std::vector<std::int64_t> non_aligned;

  double AlignedFractionAbove(double threshold) const;
  double NonAlignedFractionBelow(double threshold) const;
  // Header "bin_left,bin_right,count,aligned,non_aligned".
  std::string ToCsv() const;
};

// Exact per-pair cosine matrix S(i, j) = cos(head*nl_i, head*fl_j).
Eigen::MatrixXd PairwiseSimilarity(const std::vector<EmbeddingPair>& pairs,
                                   const ProjectionHead& head);

SimilarityHistogram ComputeHistogram(const Eigen::MatrixXd& similarity,
                                     int bins = 20);

// Fraction of NL vectors whose nearest FL vector is their own pair. Ties go
// to the lower index.
double RecallAt1(const Eigen::MatrixXd& similarity);

// Synthetic aligned corpus: fl ~ N(0, I) and nl = R*fl, where R is a
// rotation that fixes the first `shared_dim` coordinates and turns each
// remaining coordinate plane by an angle in [pi/2, pi). A shared linear head
// can only align pairs through directions R leaves fixed, so the generator
// keeps such a subspace.
std::vector<EmbeddingPair> MakeRotatedPairs(int count, int dimension,
                                            int shared_dim, std::uint64_t seed);

// The rotation used by MakeRotatedPairs for the same arguments.
Eigen::MatrixXd MakePartialRotation(int dimension, int shared_dim,
                                    std::uint64_t seed);

}  // namespace leanbridge::retrieval

#endif  // LEANBRIDGE_RETRIEVAL_ANALYSIS_H_
