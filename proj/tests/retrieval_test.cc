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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "leanbridge/common/error.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/common/random.h"
#include "leanbridge/retrieval/analysis.h"
#include "leanbridge/retrieval/contrastive.h"
#include "leanbridge/retrieval/embedding.h"
#include "leanbridge/retrieval/index.h"
#include "leanbridge/retrieval/provider.h"

// After Eigen: <resolv.h> defines a _res macro that clashes with Eigen.
#include "httplib.h"

namespace leanbridge::retrieval {
namespace {

using Vec = std::vector<double>;

// Scalar oracles over std::vector, independent of Eigen and of the trainer.
double DotS(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
double CosS(const Vec& a, const Vec& b) {
  return DotS(a, b) / std::sqrt(DotS(a, a) * DotS(b, b));
}
Vec MatVecS(const std::vector<Vec>& w, const Vec& x) {
  Vec out(w.size(), 0.0);
  for (std::size_t r = 0; r < w.size(); ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) out[r] += w[r][c] * x[c];
  }
  return out;
}
double LossOracle(const std::vector<std::pair<Vec, Vec>>& pairs,
                  const std::vector<Vec>& w) {
  const std::size_t b = pairs.size();
  double total = 0;
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t j = (i + 1) % b;
    const Vec nl = MatVecS(w, pairs[i].first), fl = MatVecS(w, pairs[i].second);
    const Vec nl_neg = MatVecS(w, pairs[j].first), fl_neg = MatVecS(w, pairs[j].second);
    total += 1 - CosS(nl, fl) + 0.5 * (CosS(nl_neg, fl) + CosS(nl, fl_neg));
  }
  return total / static_cast<double>(b);
}

Vec ToVec(const EmbeddingVector& v) {
  return Vec(v.values().data(), v.values().data() + v.dimension());
}
std::vector<Vec> ToRows(const Eigen::MatrixXd& m) {
  std::vector<Vec> rows(m.rows(), Vec(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
  }
  return rows;
}

EmbeddingVector RandomVector(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.Normal();
  return EmbeddingVector(v);
}

AlignmentBatch RandomBatch(Rng& rng, int d, int b) {
  std::vector<EmbeddingPair> pairs;
  for (int i = 0; i < b; ++i) pairs.emplace_back(RandomVector(rng, d), RandomVector(rng, d));
  return AlignmentBatch::Make(std::move(pairs));
}

EmbeddingVector Basis(int d, int k, double scale = 1.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  v[k] = scale;
  return EmbeddingVector(v);
}

TEST(MeanPoolTest, Singleton) {
  std::vector<EmbeddingVector> v{{1.5, -2.0, 3.0}};
  EXPECT_EQ(MeanPool(v), v[0]);
}

TEST(MeanPoolTest, TwoBasisVectors) {
  std::vector<EmbeddingVector> v{{1.0, 0.0}, {0.0, 1.0}};
  EXPECT_EQ(MeanPool(v), (EmbeddingVector{0.5, 0.5}));
}

TEST(MeanPoolTest, MatchesPerComponentLoop) {
  Rng rng(3);
  std::vector<EmbeddingVector> v;
  for (int i = 0; i < 5; ++i) v.push_back(RandomVector(rng, 8));
  const EmbeddingVector mean = MeanPool(v);
  for (int c = 0; c < 8; ++c) {
    double s = 0;
    for (const auto& x : v) s += x[c];
    EXPECT_NEAR(mean[c], s / 5.0, 1e-12);
  }
  EXPECT_NEAR(mean.norm(), mean.values().norm(), 1e-12);
}

TEST(MeanPoolTest, Errors) {
  std::vector<EmbeddingVector> none;
  EXPECT_THROW(MeanPool(none), Error);
  std::vector<EmbeddingVector> mixed{{1.0, 2.0}, {1.0}};
  try {
    MeanPool(mixed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(ContrastiveLossTest, AlignedOrthogonalFixtureIsZero) {
  std::vector<EmbeddingPair> pairs;
  for (int k = 0; k < 4; ++k) pairs.emplace_back(Basis(4, k), Basis(4, k));
  const auto head = ProjectionHead::Initialize(4, 4, 0, HeadInit::kIdentity);
  EXPECT_NEAR(ContrastiveLoss(AlignmentBatch::Make(pairs), head), 0.0, 1e-9);
}

TEST(ContrastiveLossTest, AllIdenticalFixtureIsOne) {
  std::vector<EmbeddingPair> pairs(3, {EmbeddingVector{1, 2, 3}, EmbeddingVector{1, 2, 3}});
  const auto head = ProjectionHead::Initialize(3, 3, 0, HeadInit::kIdentity);
  EXPECT_NEAR(ContrastiveLoss(AlignmentBatch::Make(pairs), head), 1.0, 1e-9);
}

TEST(ContrastiveLossTest, MatchesScalarOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.UniformIndex(10));
    const int b = 2 + static_cast<int>(rng.UniformIndex(6));
    const AlignmentBatch batch = RandomBatch(rng, d, b);
    const auto head = trial == 0 ? ProjectionHead::Initialize(d, d, 0, HeadInit::kIdentity)
                                 : ProjectionHead::Initialize(d, 1 + trial % d, trial);
    std::vector<std::pair<Vec, Vec>> scalar;
    for (const auto& [nl, fl] : batch.pairs) scalar.emplace_back(ToVec(nl), ToVec(fl));
    EXPECT_NEAR(ContrastiveLoss(batch, head), LossOracle(scalar, ToRows(head.weights)),
                1e-12);
  }
}

TEST(ContrastiveLossTest, PerPairBounds) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const AlignmentBatch batch = RandomBatch(rng, 6, 4);
    const double loss = ContrastiveLoss(batch, ProjectionHead::Initialize(6, 4, trial));
    EXPECT_GE(loss, -1.0);
    EXPECT_LE(loss, 3.0);
  }
}

TEST(ContrastiveLossTest, ScaleInvariance) {
  Rng rng(8);
  AlignmentBatch batch = RandomBatch(rng, 5, 4);
  const auto head = ProjectionHead::Initialize(5, 5, 1);
  const double before = ContrastiveLoss(batch, head);
  const double grad_before = ContrastiveGradient(batch, head).norm();
  for (auto& [nl, fl] : batch.pairs) {
    nl = EmbeddingVector(nl.values() * 2.0);
    fl = EmbeddingVector(fl.values() * 3.5);
  }
  EXPECT_NEAR(ContrastiveLoss(batch, head), before, 1e-9);
  EXPECT_GT(grad_before, 0.0);
}

TEST(ContrastiveLossTest, ZeroNormNamesPair) {
  std::vector<EmbeddingPair> pairs{{EmbeddingVector{1, 0}, EmbeddingVector{1, 0}},
                                   {EmbeddingVector{0, 0}, EmbeddingVector{0, 1}}};
  try {
    ContrastiveLoss(AlignmentBatch::Make(pairs),
                    ProjectionHead::Initialize(2, 2, 0, HeadInit::kIdentity));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroNormVector);
    EXPECT_NE(std::string(e.what()).find("pair 1"), std::string::npos);
  }
}

TEST(ContrastiveLossTest, BatchOfOneRejected) {
  std::vector<EmbeddingPair> pairs{{EmbeddingVector{1, 0}, EmbeddingVector{1, 0}}};
  EXPECT_THROW(ContrastiveLoss(AlignmentBatch::Make(pairs),
                               ProjectionHead::Initialize(2, 2, 0)),
               Error);
}

TEST(ContrastiveGradientTest, StationaryAtFloor) {
  std::vector<EmbeddingPair> pairs;
  for (int k = 0; k < 4; ++k) pairs.emplace_back(Basis(4, k), Basis(4, k));
  const auto head = ProjectionHead::Initialize(4, 4, 0, HeadInit::kIdentity);
  const Eigen::MatrixXd g = ContrastiveGradient(AlignmentBatch::Make(pairs), head);
  // Positive cosines sit at 1, so the diagonal directions are stationary.
  // Negatives at cos 0 can still be pushed toward -1 off the diagonal.
  EXPECT_LT(g.diagonal().norm(), 1e-8);
  EXPECT_GT(g.norm(), 0.1);
}

Eigen::MatrixXd FiniteDifference(const AlignmentBatch& batch, ProjectionHead head,
                                 double eps) {
  Eigen::MatrixXd g(head.d_out(), head.d_in());
  for (Eigen::Index r = 0; r < head.d_out(); ++r) {
    for (Eigen::Index c = 0; c < head.d_in(); ++c) {
      const double w = head.weights(r, c);
      head.weights(r, c) = w + eps;
      const double up = ContrastiveLoss(batch, head);
      head.weights(r, c) = w - eps;
      const double down = ContrastiveLoss(batch, head);
      head.weights(r, c) = w;
      g(r, c) = (up - down) / (2 * eps);
    }
  }
  return g;
}

TEST(ContrastiveGradientTest, MatchesCentralDifferences) {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(rng.UniformIndex(15));
    const int b = 2 + static_cast<int>(rng.UniformIndex(7));
    const AlignmentBatch batch = RandomBatch(rng, d, b);
    const auto head = ProjectionHead::Initialize(d, 1 + rng.UniformIndex(d), trial);
    const Eigen::MatrixXd analytic = ContrastiveGradient(batch, head);
    const Eigen::MatrixXd numeric = FiniteDifference(batch, head, 1e-5);
    const double scale = std::max(1e-6, numeric.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < analytic.size(); ++i) {
      EXPECT_LE(std::abs(analytic(i) - numeric(i)), 1e-4 * scale)
          << "trial " << trial << " entry " << i;
    }
  }
}

TEST(TrainProjectionTest, ZeroStepsReturnsInitialization) {
  auto pairs = MakeRotatedPairs(8, 6, 4, 1);
  TrainConfig config;
  config.steps = 0;
  config.seed = 17;
  const TrainResult r = TrainProjection(pairs, config);
  EXPECT_TRUE(r.loss_trace.empty());
  EXPECT_EQ(r.head.weights, ProjectionHead::Initialize(6, 6, 17).weights);
  EXPECT_LE(r.head.weights.cwiseAbs().maxCoeff(), 0.1);
}

TEST(TrainProjectionTest, DeterministicTrace) {
  auto pairs = MakeRotatedPairs(40, 8, 4, 2);
  TrainConfig config;
  config.steps = 50;
  config.batch_size = 7;  // 40 = 5*7 + 5, exercises the partial batch
  config.seed = 3;
  const TrainResult a = TrainProjection(pairs, config);
  const TrainResult b = TrainProjection(pairs, config);
  ASSERT_EQ(a.loss_trace.size(), 50u);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  EXPECT_EQ(a.head.weights, b.head.weights);
  EXPECT_EQ(a.head.Checksum(), b.head.Checksum());
}

TEST(TrainProjectionTest, RotatedPairsConverge) {
  // Rotation fixes an 8-d subspace of 16-d; the head must find it.
  auto pairs = MakeRotatedPairs(64, 16, 8, 42);
  TrainConfig config;
  config.learning_rate = 0.05;
  config.steps = 500;
  config.batch_size = 16;
  config.seed = 7;
  const TrainResult r = TrainProjection(pairs, config);
  ASSERT_EQ(r.loss_trace.size(), 500u);
  const double initial = ContrastiveLoss(AlignmentBatch::Make(pairs),
                                         ProjectionHead::Initialize(16, 16, 7));
  const double final_loss = ContrastiveLoss(AlignmentBatch::Make(pairs), r.head);
  EXPECT_GT(initial, 0.5);
  EXPECT_LT(final_loss, 0.1);
  EXPECT_TRUE(r.head.weights.allFinite());
}

TEST(TrainProjectionTest, DivergenceReportsStep) {
  auto pairs = MakeRotatedPairs(8, 4, 2, 4);
  TrainConfig config;
  config.learning_rate = 1e308;
  config.steps = 20;
  config.batch_size = 4;
  try {
    TrainProjection(pairs, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::kDivergedLoss || e.code() == ErrorCode::kZeroNormVector)
        << e.what();
    if (e.code() == ErrorCode::kDivergedLoss) {
      EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
    }
  }
}

TEST(TrainProjectionTest, RejectsBadConfig) {
  auto pairs = MakeRotatedPairs(4, 4, 2, 4);
  TrainConfig config;
  config.batch_size = 1;
  EXPECT_THROW(TrainProjection(pairs, config), Error);
  EXPECT_THROW(TrainProjection({pairs[0]}, TrainConfig{}), Error);
}

TEST(PartialRotationTest, IsProperRotationWithFixedSubspace) {
  const Eigen::MatrixXd r = MakePartialRotation(10, 4, 9);
  EXPECT_LT((r.transpose() * r - Eigen::MatrixXd::Identity(10, 10)).norm(), 1e-10);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-10);
  Eigen::EigenSolver<Eigen::MatrixXd> es(r);
  int unit = 0;
  for (Eigen::Index i = 0; i < 10; ++i) {
    if (std::abs(es.eigenvalues()[i] - std::complex<double>(1.0, 0.0)) < 1e-8) ++unit;
  }
  EXPECT_EQ(unit, 4);
}

std::vector<std::pair<std::string, EmbeddingVector>> RandomCorpus(Rng& rng, int n, int d) {
  std::vector<std::pair<std::string, EmbeddingVector>> corpus;
  for (int i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "e%03d", i);
    corpus.emplace_back(id, RandomVector(rng, d));
  }
  return corpus;
}

TEST(SimilarityIndexTest, SingleEntry) {
  auto index = SimilarityIndex::Build({{"only", EmbeddingVector{1, 2}}},
                                      ProjectionHead::Initialize(2, 2, 0, HeadInit::kIdentity));
  EXPECT_EQ(index.size(), 1u);
  auto top = index.TopK(EmbeddingVector{-1, 0.5}, 3);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].id, "only");
}

TEST(SimilarityIndexTest, DuplicatesRetained) {
  auto index = SimilarityIndex::Build(
      {{"b", EmbeddingVector{1, 1}}, {"a", EmbeddingVector{1, 1}}},
      ProjectionHead::Initialize(2, 2, 0, HeadInit::kIdentity));
  EXPECT_EQ(index.size(), 2u);
  auto top = index.TopK(EmbeddingVector{1, 1}, 2);
  EXPECT_EQ(top[0].id, "a");  // equal similarity, ascending id
  EXPECT_EQ(top[1].id, "b");
}

TEST(SimilarityIndexTest, ProjectionMatchesMatVec) {
  Rng rng(31);
  const auto corpus = RandomCorpus(rng, 100, 12);
  const auto head = ProjectionHead::Initialize(12, 5, 31);
  const auto index = SimilarityIndex::Build(corpus, head);
  ASSERT_EQ(index.size(), 100u);
  const auto rows = ToRows(head.weights);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(index.entries()[i].id, corpus[i].first);
    const Vec expected = MatVecS(rows, ToVec(corpus[i].second));
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(index.entries()[i].vector[k], expected[k], 1e-12);
  }
}

TEST(SimilarityIndexTest, QueryEqualToEntryRanksFirst) {
  Rng rng(4);
  const auto corpus = RandomCorpus(rng, 30, 6);
  const auto index = SimilarityIndex::Build(corpus, ProjectionHead::Initialize(6, 6, 4));
  auto top = index.TopK(corpus[17].second, 1);
  EXPECT_EQ(top[0].id, corpus[17].first);
  EXPECT_NEAR(top[0].similarity, 1.0, 1e-9);
}

TEST(SimilarityIndexTest, OrthogonalQueryKeepsIdOrder) {
  auto index = SimilarityIndex::Build({{"c", Basis(3, 0)}, {"a", Basis(3, 1)}, {"b", Basis(3, 0, 2)}},
                                      ProjectionHead::Initialize(3, 3, 0, HeadInit::kIdentity));
  auto top = index.TopK(Basis(3, 2), 10);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].id, "a");
  EXPECT_EQ(top[1].id, "b");
  EXPECT_EQ(top[2].id, "c");
  for (const auto& s : top) EXPECT_NEAR(s.similarity, 0.0, 1e-9);
}

std::vector<ScoredId> BruteForce(const std::vector<std::pair<std::string, EmbeddingVector>>& corpus,
                                 const ProjectionHead& head, const EmbeddingVector& q) {
  const auto rows = ToRows(head.weights);
  const Vec pq = MatVecS(rows, ToVec(q));
  std::vector<ScoredId> all;
  for (const auto& [id, v] : corpus) all.push_back({id, CosS(MatVecS(rows, ToVec(v)), pq)});
  std::stable_sort(all.begin(), all.end(), [](const ScoredId& a, const ScoredId& b) {
    return a.similarity > b.similarity || (a.similarity == b.similarity && a.id < b.id);
  });
  return all;
}

TEST(SimilarityIndexTest, TopKMatchesBruteForce) {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const auto corpus = RandomCorpus(rng, 20, 8);
    const auto head = ProjectionHead::Initialize(8, 6, trial);
    const auto index = SimilarityIndex::Build(corpus, head);
    const EmbeddingVector q = RandomVector(rng, 8);
    const auto expected = BruteForce(corpus, head, q);
    for (std::size_t k : {std::size_t{5}, std::size_t{20}}) {
      const auto got = index.TopK(q, k);
      ASSERT_EQ(got.size(), k);
      for (std::size_t i = 0; i < k; ++i) {
        EXPECT_EQ(got[i].id, expected[i].id);
        EXPECT_NEAR(got[i].similarity, expected[i].similarity, 1e-12);
      }
    }
  }
}

TEST(SimilarityIndexTest, Errors) {
  const auto head = ProjectionHead::Initialize(2, 2, 0, HeadInit::kIdentity);
  EXPECT_THROW(SimilarityIndex::Build({}, head), Error);
  try {
    SimilarityIndex::Build({{"x", EmbeddingVector{1, 2, 3}}}, head);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  auto index = SimilarityIndex::Build({{"x", EmbeddingVector{1, 2}}}, head);
  try {
    index.TopK(EmbeddingVector{0, 0}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroNormQuery);
  }
}

TEST(SimilarityIndexTest, SaveLoadRoundTrip) {
  Rng rng(77);
  const auto corpus = RandomCorpus(rng, 15, 5);
  const auto head = ProjectionHead::Initialize(5, 4, 77);
  const auto index = SimilarityIndex::Build(corpus, head);
  const auto path = std::filesystem::temp_directory_path() / "leanbridge_index_test.jsonl";
  index.Save(path);
  const auto loaded = SimilarityIndex::Load(path, head);
  ASSERT_EQ(loaded.size(), index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    EXPECT_EQ(loaded.entries()[i].id, index.entries()[i].id);
    EXPECT_EQ(loaded.entries()[i].vector, index.entries()[i].vector);
  }
  EXPECT_THROW(SimilarityIndex::Load(path, ProjectionHead::Initialize(5, 4, 78)), Error);
  std::filesystem::remove(path);
}

TEST(ProjectionHeadTest, JsonRoundTripIsExact) {
  const auto head = ProjectionHead::Initialize(7, 3, 12345);
  const auto back = HeadFromJson(Json::parse(ToJson(head).dump()));
  EXPECT_EQ(back.weights, head.weights);
  EXPECT_EQ(back.Checksum(), head.Checksum());
  EXPECT_THROW(ProjectionHead::Initialize(3, 4, 0), Error);
  EXPECT_THROW(ProjectionHead::Initialize(3, 2, 0, HeadInit::kIdentity), Error);
}

TEST(HashEmbedderTest, DeterministicAndTextSensitive) {
  HashEmbedder embedder(64);
  const auto a = embedder.EmbedOne("theorem foo (a b : ℝ) : a + b = b + a");
  EXPECT_EQ(a, embedder.EmbedOne("theorem foo (a b : ℝ) : a + b = b + a"));
  EXPECT_GT(a.norm(), 0.0);
  EXPECT_GT(embedder.EmbedOne("").norm(), 0.0);
  const auto near = embedder.EmbedOne("theorem foo (a b : ℝ) : a * b = b * a");
  const auto far = embedder.EmbedOne("lemma card_divisors_pow ...");
  EXPECT_GT(Cosine(a.values(), near.values()), Cosine(a.values(), far.values()));
}

TEST(HttpEmbeddingProviderTest, WireContract) {
  httplib::Server server;
  server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
    const Json body = Json::parse(req.body);
    Json vectors = Json::array();
    for (const auto& t : body.at("texts")) {
      const double len = static_cast<double>(t.get<std::string>().size());
      vectors.push_back({len, 1.0, -len});
    }
    res.set_content(Json{{"vectors", vectors}}.dump(), "application/json");
  });
  server.Post("/bad", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"vectors": [[1, 2]]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  HttpEmbeddingProvider provider(base + "/embed", 3, 5);
  auto out = provider.Embed({"ab", "abcd"});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1], (EmbeddingVector{4, 1, -4}));

  HttpEmbeddingProvider wrong_dim(base + "/bad", 3, 5);
  try {
    wrong_dim.Embed({"x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  server.stop();
  thread.join();

  HttpEmbeddingProvider down(base + "/embed", 3, 1);
  try {
    down.Embed({"x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

TEST(AnalysisTest, HistogramAndRecallOnTrainedHead) {
  auto pairs = MakeRotatedPairs(60, 16, 12, 5);
  TrainConfig config;
  config.steps = 300;
  config.seed = 5;
  const TrainResult r = TrainProjection(pairs, config);
  const Eigen::MatrixXd s = PairwiseSimilarity(pairs, r.head);
  const SimilarityHistogram h = ComputeHistogram(s, 20);
  std::int64_t total = 0;
  for (std::size_t b = 0; b < h.aligned.size(); ++b) total += h.aligned[b] + h.non_aligned[b];
  EXPECT_EQ(total, 60 * 60);
  EXPECT_GE(RecallAt1(s), 0.95);
  EXPECT_GE(h.AlignedFractionAbove(0.9), 0.8);
  const std::string csv = h.ToCsv();
  EXPECT_EQ(csv.rfind("bin_left,bin_right,count,aligned,non_aligned\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
}

TEST(AnalysisTest, HistogramBinning) {
  Eigen::MatrixXd s(2, 2);
  s << 1.0, -1.0, 0.05, 0.95;
  const SimilarityHistogram h = ComputeHistogram(s, 4);
  EXPECT_EQ(h.aligned, (std::vector<std::int64_t>{0, 0, 0, 2}));
  EXPECT_EQ(h.non_aligned, (std::vector<std::int64_t>{1, 0, 1, 0}));
  EXPECT_DOUBLE_EQ(h.NonAlignedFractionBelow(0.5), 1.0);
}

}  // namespace
}  // namespace leanbridge::retrieval
