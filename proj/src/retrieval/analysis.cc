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

#include "leanbridge/retrieval/analysis.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "leanbridge/common/error.h"
#include "leanbridge/common/random.h"

namespace leanbridge::retrieval {

double SimilarityHistogram::AlignedFractionAbove(double threshold) const {
  // Bin granularity: counts bins whose left edge is >= threshold.
  std::int64_t above = 0, total = 0;
  for (std::size_t b = 0; b < aligned.size(); ++b) {
    total += aligned[b];
    if (edges[b] >= threshold) above += aligned[b];
  }
  return total == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(total);
}

double SimilarityHistogram::NonAlignedFractionBelow(double threshold) const {
  std::int64_t below = 0, total = 0;
  for (std::size_t b = 0; b < non_aligned.size(); ++b) {
    total += non_aligned[b];
    if (edges[b + 1] <= threshold) below += non_aligned[b];
  }
  return total == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(total);
}

std::string SimilarityHistogram::ToCsv() const {
  std::ostringstream out;
  out.precision(6);
  out << "bin_left,bin_right,count,aligned,non_aligned\n";
  for (std::size_t b = 0; b < aligned.size(); ++b) {
    out << edges[b] << ',' << edges[b + 1] << ',' << aligned[b] + non_aligned[b] << ','
        << aligned[b] << ',' << non_aligned[b] << '\n';
  }
  return out.str();
}

Eigen::MatrixXd PairwiseSimilarity(const std::vector<EmbeddingPair>& pairs,
                                   const ProjectionHead& head) {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd nl(head.d_out(), n), fl(head.d_out(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    nl.col(i) = head.Project(pairs[i].first.values());
    fl.col(i) = head.Project(pairs[i].second.values());
    const double a = nl.col(i).norm(), b = fl.col(i).norm();
    if (a == 0.0 || b == 0.0) {
      throw Error(ErrorCode::kZeroNormVector,
                  "pair " + std::to_string(i) + " projects to a zero-norm vector");
    }
    nl.col(i) /= a;
    fl.col(i) /= b;
  }
  return nl.transpose() * fl;
}

SimilarityHistogram ComputeHistogram(const Eigen::MatrixXd& similarity, int bins) {
  if (bins <= 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs bins > 0");
  SimilarityHistogram h;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(2 * b - bins) / bins;
  h.aligned.assign(bins, 0);
  h.non_aligned.assign(bins, 0);
  for (Eigen::Index i = 0; i < similarity.rows(); ++i) {
    for (Eigen::Index j = 0; j < similarity.cols(); ++j) {
      const double s = std::clamp(similarity(i, j), -1.0, 1.0);
      int b = static_cast<int>(std::floor((s + 1.0) / 2.0 * bins));
      b = std::clamp(b, 0, bins - 1);
      (i == j ? h.aligned : h.non_aligned)[b] += 1;
    }
  }
  return h;
}

double RecallAt1(const Eigen::MatrixXd& similarity) {
  if (similarity.rows() == 0) return 0.0;
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < similarity.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < similarity.cols(); ++j) {
      if (similarity(i, j) > similarity(i, best)) best = j;
    }
    if (best == i) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(similarity.rows());
}

Eigen::MatrixXd MakePartialRotation(int dimension, int shared_dim, std::uint64_t seed) {
  if (dimension <= 0 || shared_dim < 0 || shared_dim > dimension ||
      (dimension - shared_dim) % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "partial rotation needs an even number of rotated coordinates");
  }
  Rng rng(ForkSeed(seed, "rotation"));
  Eigen::MatrixXd gaussian(dimension, dimension);
  for (int r = 0; r < dimension; ++r) {
    for (int c = 0; c < dimension; ++c) gaussian(r, c) = rng.Normal();
  }
  // Random orthonormal basis, so the fixed subspace is not axis aligned.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  const Eigen::MatrixXd basis = qr.householderQ();
  Eigen::MatrixXd block = Eigen::MatrixXd::Identity(dimension, dimension);
  for (int k = shared_dim; k + 1 < dimension; k += 2) {
    const double angle = std::numbers::pi * (0.5 + 0.5 * rng.UniformDouble());
    block(k, k) = std::cos(angle);
    block(k, k + 1) = -std::sin(angle);
    block(k + 1, k) = std::sin(angle);
    block(k + 1, k + 1) = std::cos(angle);
  }
  return basis * block * basis.transpose();
}

std::vector<EmbeddingPair> MakeRotatedPairs(int count, int dimension, int shared_dim,
                                            std::uint64_t seed) {
  const Eigen::MatrixXd rotation = MakePartialRotation(dimension, shared_dim, seed);
  Rng rng(ForkSeed(seed, "pairs"));
  std::vector<EmbeddingPair> pairs;
  pairs.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd fl(dimension);
    for (int k = 0; k < dimension; ++k) fl[k] = rng.Normal();
    pairs.emplace_back(EmbeddingVector(rotation * fl), EmbeddingVector(fl));
  }
  return pairs;
}

}  // namespace leanbridge::retrieval
