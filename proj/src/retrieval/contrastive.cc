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

#include "leanbridge/retrieval/contrastive.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <span>
#include <string>

#include "leanbridge/common/error.h"
#include "leanbridge/common/random.h"

namespace leanbridge::retrieval {
namespace {

// Partial derivatives of cos(p, q) with respect to p and q.
struct CosineTerm {
  double value;
  Eigen::VectorXd d_p;
  Eigen::VectorXd d_q;
};

CosineTerm CosineWithGradient(const Eigen::VectorXd& p, double np,
                              const Eigen::VectorXd& q, double nq) {
  const double c = p.dot(q) / (np * nq);
  return {c, q / (np * nq) - c * p / (np * np), p / (np * nq) - c * q / (nq * nq)};
}

}  // namespace

ProjectionHead ProjectionHead::Initialize(Eigen::Index d_in, Eigen::Index d_out,
                                          std::uint64_t seed, HeadInit init) {
  if (d_in <= 0 || d_out <= 0 || d_out > d_in) {
    throw Error(ErrorCode::kInvalidArgument,
                "projection head needs 0 < d_out <= d_in, got d_out=" +
                    std::to_string(d_out) + " d_in=" + std::to_string(d_in));
  }
  ProjectionHead head;
  head.seed = seed;
  if (init == HeadInit::kIdentity) {
    if (d_out != d_in) {
      throw Error(ErrorCode::kInvalidArgument,
                  "identity initialization requires d_out == d_in");
    }
    head.weights = Eigen::MatrixXd::Identity(d_out, d_in);
    return head;
  }
  Rng rng(seed);
  head.weights.resize(d_out, d_in);
  // Row-major fill so the layout of random draws is independent of Eigen's
  // storage order.
  for (Eigen::Index r = 0; r < d_out; ++r) {
    for (Eigen::Index c = 0; c < d_in; ++c) head.weights(r, c) = rng.Uniform(-0.1, 0.1);
  }
  return head;
}

Eigen::VectorXd ProjectionHead::Project(const Eigen::VectorXd& v) const {
  if (v.size() != d_in()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector dimension " + std::to_string(v.size()) +
                    " does not match head input " + std::to_string(d_in()));
  }
  return weights * v;
}

std::string ProjectionHead::Checksum() const {
  std::uint64_t h = Fnv1a64("");
  for (Eigen::Index r = 0; r < d_out(); ++r) {
    for (Eigen::Index c = 0; c < d_in(); ++c) {
      double w = weights(r, c);
      char bytes[sizeof(double)];
      std::memcpy(bytes, &w, sizeof(double));
      h = Fnv1a64(std::string_view(bytes, sizeof(double)), h);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void ProjectionHead::Validate() const {
  if (d_out() == 0 || d_out() > d_in()) {
    throw Error(ErrorCode::kInvalidArgument, "projection head shape is invalid");
  }
  if (!weights.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "projection head has non-finite weights");
  }
}

Json ToJson(const ProjectionHead& head) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < head.d_out(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < head.d_in(); ++c) row.push_back(head.weights(r, c));
    rows.push_back(std::move(row));
  }
  return Json{{"d_in", head.d_in()},
              {"d_out", head.d_out()},
              {"seed", head.seed},
              {"checksum", head.Checksum()},
              {"weights", std::move(rows)}};
}

ProjectionHead HeadFromJson(const Json& j) {
  ProjectionHead head;
  try {
    const auto d_in = j.at("d_in").get<Eigen::Index>();
    const auto d_out = j.at("d_out").get<Eigen::Index>();
    head.seed = j.at("seed").get<std::uint64_t>();
    const Json& rows = j.at("weights");
    if (static_cast<Eigen::Index>(rows.size()) != d_out) {
      throw Error(ErrorCode::kDimensionMismatch, "head row count mismatch");
    }
    head.weights.resize(d_out, d_in);
    for (Eigen::Index r = 0; r < d_out; ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != d_in) {
        throw Error(ErrorCode::kDimensionMismatch, "head column count mismatch");
      }
      for (Eigen::Index c = 0; c < d_in; ++c) head.weights(r, c) = rows[r][c].get<double>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed head: ") + e.what());
  }
  head.Validate();
  if (j.contains("checksum") && j["checksum"] != head.Checksum()) {
    throw Error(ErrorCode::kInvalidArgument, "head checksum does not match its weights");
  }
  return head;
}

AlignmentBatch AlignmentBatch::Make(std::vector<EmbeddingPair> pairs) {
  AlignmentBatch batch;
  const std::size_t b = pairs.size();
  batch.pairs = std::move(pairs);
  batch.negatives.resize(b);
  for (std::size_t i = 0; i < b; ++i) batch.negatives[i] = b == 0 ? 0 : (i + 1) % b;
  return batch;
}

void AlignmentBatch::Validate() const {
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "an alignment batch needs at least 2 pairs for in-batch negatives");
  }
  if (negatives.size() != pairs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "negative assignment has the wrong length");
  }
  const Eigen::Index d = pairs.front().first.dimension();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (negatives[i] >= pairs.size() || negatives[i] == i) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pair " + std::to_string(i) + " has an invalid negative index");
    }
    if (pairs[i].first.dimension() != d || pairs[i].second.dimension() != d) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "pair " + std::to_string(i) + " has a mismatched dimension");
    }
  }
}

double ContrastiveLossAndGradient(const AlignmentBatch& batch,
                                  const ProjectionHead& head,
                                  Eigen::MatrixXd* gradient) {
  batch.Validate();
  const std::size_t b = batch.size();
  if (batch.pairs.front().first.dimension() != head.d_in()) {
    throw Error(ErrorCode::kDimensionMismatch, "batch dimension does not match head input");
  }
  std::vector<Eigen::VectorXd> p(b), q(b);
  std::vector<double> np(b), nq(b);
  for (std::size_t i = 0; i < b; ++i) {
    p[i] = head.weights * batch.pairs[i].first.values();
    q[i] = head.weights * batch.pairs[i].second.values();
    np[i] = p[i].norm();
    nq[i] = q[i].norm();
    if (np[i] == 0.0 || nq[i] == 0.0) {
      throw Error(ErrorCode::kZeroNormVector,
                  "pair " + std::to_string(i) + " projects to a zero-norm " +
                      (np[i] == 0.0 ? "NL" : "FL") + " vector");
    }
  }
  std::vector<Eigen::VectorXd> dp, dq;
  if (gradient != nullptr) {
    dp.assign(b, Eigen::VectorXd::Zero(head.d_out()));
    dq.assign(b, Eigen::VectorXd::Zero(head.d_out()));
  }
  double total = 0.0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t j = batch.negatives[i];
    const CosineTerm pos = CosineWithGradient(p[i], np[i], q[i], nq[i]);
    const CosineTerm neg_nl = CosineWithGradient(p[j], np[j], q[i], nq[i]);
    const CosineTerm neg_fl = CosineWithGradient(p[i], np[i], q[j], nq[j]);
    total += 1.0 - pos.value + 0.5 * (neg_nl.value + neg_fl.value);
    if (gradient != nullptr) {
      dp[i] += inv_b * (-pos.d_p + 0.5 * neg_fl.d_p);
      dq[i] += inv_b * (-pos.d_q + 0.5 * neg_nl.d_q);
      dp[j] += inv_b * 0.5 * neg_nl.d_p;
      dq[j] += inv_b * 0.5 * neg_fl.d_q;
    }
  }
  if (gradient != nullptr) {
    gradient->setZero(head.d_out(), head.d_in());
    for (std::size_t i = 0; i < b; ++i) {
      gradient->noalias() += dp[i] * batch.pairs[i].first.values().transpose();
      gradient->noalias() += dq[i] * batch.pairs[i].second.values().transpose();
    }
  }
  return total * inv_b;
}

double ContrastiveLoss(const AlignmentBatch& batch, const ProjectionHead& head) {
  return ContrastiveLossAndGradient(batch, head, nullptr);
}

Eigen::MatrixXd ContrastiveGradient(const AlignmentBatch& batch,
                                    const ProjectionHead& head) {
  Eigen::MatrixXd g;
  ContrastiveLossAndGradient(batch, head, &g);
  return g;
}

TrainResult TrainProjection(const std::vector<EmbeddingPair>& pairs,
                            const TrainConfig& config) {
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "training needs at least 2 pairs");
  }
  if (!(config.learning_rate > 0.0) || config.steps < 0 || config.batch_size < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "training config needs learning_rate > 0, steps >= 0, batch_size >= 2");
  }
  const Eigen::Index d_in = pairs.front().first.dimension();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first.dimension() != d_in || pairs[i].second.dimension() != d_in) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "training pair " + std::to_string(i) + " has a mismatched dimension");
    }
  }
  const Eigen::Index d_out = config.d_out == 0 ? d_in : config.d_out;
  TrainResult result{ProjectionHead::Initialize(d_in, d_out, config.seed, config.init), {}};
  result.loss_trace.reserve(static_cast<std::size_t>(config.steps));

  Rng rng(ForkSeed(config.seed, "batch-order"));
  const std::size_t batch_size =
      std::min(pairs.size(), static_cast<std::size_t>(config.batch_size));
  std::vector<std::size_t> order(pairs.size());
  std::size_t cursor = order.size();  // forces a shuffle on the first step
  Eigen::MatrixXd gradient;
  for (int step = 0; step < config.steps; ++step) {
    if (order.size() - cursor < 2) {
      std::iota(order.begin(), order.end(), 0);
      rng.Shuffle(std::span<std::size_t>(order));
      cursor = 0;
    }
    const std::size_t take = std::min(batch_size, order.size() - cursor);
    std::vector<EmbeddingPair> members;
    members.reserve(take);
    for (std::size_t k = 0; k < take; ++k) members.push_back(pairs[order[cursor + k]]);
    cursor += take;
    const AlignmentBatch batch = AlignmentBatch::Make(std::move(members));
    const double loss = ContrastiveLossAndGradient(batch, result.head, &gradient);
    if (!std::isfinite(loss) || !gradient.allFinite()) {
      throw Error(ErrorCode::kDivergedLoss,
                  "loss became non-finite at step " + std::to_string(step));
    }
    result.loss_trace.push_back(loss);
    result.head.weights -= config.learning_rate * gradient;
  }
  result.head.Validate();
  return result;
}

}  // namespace leanbridge::retrieval
