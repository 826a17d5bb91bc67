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
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "leanbridge/common/error.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/genclient/mock.h"
#include "leanbridge/informalize/informalize.h"
#include "leanbridge/informalize/quality.h"
#include "leanbridge/retrieval/contrastive.h"
#include "leanbridge/retrieval/provider.h"

namespace leanbridge::informalize {
namespace {

namespace fs = std::filesystem;
using corpus::TheoremRecord;
using genclient::Client;
using genclient::MockBackend;
using genclient::MockScript;

const char kGood[] =
    "**Statement:** For all natural x, x + 0 = x.\n"
    "**Proof:** Addition of zero leaves a natural number unchanged by definition.";

const trainprep::WordPunctTokenizer kTok;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("leanbridge_informalize_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TheoremRecord Theorem(int i) {
  TheoremRecord r;
  r.name = "thm_" + std::to_string(i);
  r.statement = "theorem thm_" + std::to_string(i) + " (x : Nat) : x + " + std::to_string(i) +
                " = " + std::to_string(i) + " + x := by";
  r.proof = r.statement + "\n  omega";
  r.file_path = "https://example.org/repo";
  r.commit = std::string(40, 'a');
  return r;
}

std::vector<TheoremRecord> Theorems(int n) {
  std::vector<TheoremRecord> out;
  for (int i = 0; i < n; ++i) out.push_back(Theorem(i));
  return out;
}

std::vector<Example> Pool(int n) {
  std::vector<Example> pool;
  for (int i = 0; i < n; ++i) {
    const std::string s = std::to_string(i);
    pool.push_back({"ex" + s, "**Statement:** fact number " + s + " holds.\n**Proof:** trivial.",
                    "theorem fact" + s + " : " + s + " * " + s + " = " + s + " ^ 2 := by",
                    "theorem fact" + s + " : " + s + " * " + s + " = " + s + " ^ 2 := by\n  ring"});
  }
  return pool;
}

ExampleSelector Selector(int pool_size, ExampleKey key = ExampleKey::kNl) {
  auto embedder = std::make_shared<retrieval::HashEmbedder>(32);
  return ExampleSelector(Pool(pool_size), embedder,
                         retrieval::ProjectionHead::Initialize(32, 16, 3), key);
}

// Always-pass mock, except for theorems whose statement mentions a name in
// `failing`, which always get a reply with no sections.
std::shared_ptr<MockBackend> ScriptedMock(const std::vector<std::string>& failing) {
  MockScript script;
  script.default_text = kGood;
  for (const auto& name : failing) {
    script.rules.push_back({{"theorem " + name + " "}, {"I could not do this one."}});
  }
  return std::make_shared<MockBackend>(script);
}

// --- quality_check ---------------------------------------------------------

TEST(QualityCheckTest, WellFormedPasses) {
  const auto v = QualityCheck(kGood, {}, kTok);
  EXPECT_TRUE(v.pass);
  EXPECT_TRUE(v.reasons.empty());
}

TEST(QualityCheckTest, Overlength) {
  QualityLimits limits;
  limits.max_tokens = 10;
  const auto v = QualityCheck(kGood, limits, kTok);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.reasons, std::vector<std::string>{kOverlength});
}

TEST(QualityCheckTest, RepeatedWord) {
  std::string text = "**Statement:** s\n**Proof:**";
  for (int i = 0; i < 40; ++i) text += " the";
  const auto v = QualityCheck(text, {}, kTok);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.reasons, std::vector<std::string>{kRepetition});
}

TEST(QualityCheckTest, MissingSectionAndEmpty) {
  EXPECT_EQ(QualityCheck("Proof: only a proof here", {}, kTok).reasons,
            std::vector<std::string>{kMissingSection});
  EXPECT_EQ(QualityCheck("  \n", {}, kTok).reasons,
            (std::vector<std::string>{kEmptyText, kMissingSection}));
}

TEST(QualityCheckTest, InvalidLimits) {
  QualityLimits l;
  l.repetition_ratio_max = 0.0;
  EXPECT_THROW(l.Validate(), Error);
  l = {};
  l.max_tokens = 0;
  EXPECT_THROW(l.Validate(), Error);
  l = {};
  l.repetition_ratio_max = 1.0;
  EXPECT_NO_THROW(l.Validate());
}

// Counts worked out by hand for a three-fold repeated 4-gram.
TEST(QualityCheckTest, RepetitionMatchesDirectCount) {
  const std::string text = "a b c d a b c d a b c d x";
  const auto stats = MeasureRepetition(text, 4, kTok);
  // 10 four-grams; "a b c d" occurs 3 times.
  EXPECT_EQ(stats.total, 10);
  EXPECT_EQ(stats.top_count, 3);
  EXPECT_DOUBLE_EQ(stats.top_ratio, 0.3);
  // Exactly at the threshold is not a failure: the rule is strict.
  QualityLimits limits;
  limits.repetition_ratio_max = 0.3;
  limits.required_sections = {};
  EXPECT_TRUE(QualityCheck(text, limits, kTok).pass);
  limits.repetition_ratio_max = 0.29;
  EXPECT_EQ(QualityCheck(text, limits, kTok).reasons, std::vector<std::string>{kRepetition});
}

// The default threshold must separate the hand-built fixtures: every good
// text sits below it and every degenerate text above it. Loops with a period
// of three tokens diluted by a prose prefix land just under 0.3, so 0.3
// itself does not separate this set.
TEST(QualityCheckTest, ThresholdSeparatesFixtures) {
  const Json fixtures = Json::parse(ReadFile(LEANBRIDGE_TEST_DATA_DIR "/quality_fixtures.json"));
  ASSERT_EQ(fixtures.size(), 20u);
  double max_good = 0.0;
  double min_bad = 1.0;
  for (const auto& f : fixtures) {
    const std::string text = f.at("text").get<std::string>();
    const double r = MeasureRepetition(text, 4, kTok).top_ratio;
    const bool good = f.at("label") == "good";
    (good ? max_good : min_bad) = good ? std::max(max_good, r) : std::min(min_bad, r);
    EXPECT_EQ(QualityCheck(text, {}, kTok).pass, good) << text;
  }
  const double threshold = QualityLimits{}.repetition_ratio_max;
  EXPECT_LT(max_good, threshold);
  EXPECT_GT(min_bad, threshold);
  EXPECT_LT(min_bad, 0.3);
}

// --- select_examples -------------------------------------------------------

TEST(SelectExamplesTest, PoolOfOne) {
  const auto selector = Selector(1);
  const auto got = selector.Select(Theorem(7), 5);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].id, "ex0");
}

TEST(SelectExamplesTest, IdenticalFlTextRanksFirst) {
  const auto selector = Selector(20, ExampleKey::kFlStatement);
  TheoremRecord r = Theorem(0);
  r.statement = Pool(20)[13].fl_statement;
  EXPECT_EQ(selector.Select(r, 3).front().id, "ex13");
}

TEST(SelectExamplesTest, MatchesBruteForce) {
  const int kDim = 32;
  const auto head = retrieval::ProjectionHead::Initialize(kDim, 16, 3);
  retrieval::HashEmbedder embedder(kDim);
  std::vector<Example> pool;
  for (int i = 0; i < 50; ++i) {
    pool.push_back({"e" + std::to_string(100 + i),
                    "natural text " + std::to_string(i * 7919 % 61) + " about sums " +
                        std::string(static_cast<std::size_t>(i % 5), 'z'),
                    "stmt" + std::to_string(i), "proof"});
  }
  ExampleSelector selector(pool, std::make_shared<retrieval::HashEmbedder>(kDim), head);
  TheoremRecord r = Theorem(4);

  auto project = [&](const retrieval::EmbeddingVector& v) {
    std::vector<double> out(16, 0.0);
    for (int o = 0; o < 16; ++o) {
      for (int i = 0; i < kDim; ++i) out[o] += head.weights(o, i) * v[i];
    }
    return out;
  };
  auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      d += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    return d / std::sqrt(na * nb);
  };
  const auto q = project(embedder.EmbedOne(r.statement));
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& e : pool) scored.emplace_back(-cosine(q, project(embedder.EmbedOne(e.nl))), e.id);
  std::sort(scored.begin(), scored.end());

  const auto got = selector.Select(r, 10);
  ASSERT_EQ(got.size(), 10u);
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].id, scored[i].second) << i;
}

TEST(SelectExamplesTest, RejectsEmptyAndDuplicatePools) {
  auto embedder = std::make_shared<retrieval::HashEmbedder>(8);
  const auto head = retrieval::ProjectionHead::Initialize(8, 8, 1);
  EXPECT_THROW(ExampleSelector({}, embedder, head), Error);
  auto pool = Pool(2);
  pool[1].id = pool[0].id;
  EXPECT_THROW(ExampleSelector(pool, embedder, head), Error);
}

// --- informalize_theorem ---------------------------------------------------

TEST(InformalizeTheoremTest, PassOnFirstAttempt) {
  Client client(ScriptedMock({}));
  const auto r = InformalizeTheorem(Theorem(1), Pool(2), client, {}, kTok, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.attempts, 1);
  EXPECT_EQ(r.nl_statement_and_proof, kGood);
  EXPECT_EQ(r.examples_used, (std::vector<std::string>{"ex0", "ex1"}));
  EXPECT_EQ(r.attempt_log, std::vector<std::vector<std::string>>{{}});
}

TEST(InformalizeTheoremTest, OverlengthThenPass) {
  std::string long_text = "**Statement:** long.\n**Proof:**";
  for (int i = 0; i < 200; ++i) long_text += " step " + std::to_string(i) + ".";
  MockScript script;
  script.rules.push_back({{"theorem thm_2 "}, {long_text, kGood}});
  auto mock = std::make_shared<MockBackend>(script);
  Client client(mock);
  QualityLimits limits;
  limits.max_tokens = 300;
  const auto r = InformalizeTheorem(Theorem(2), {}, client, limits, kTok, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.attempts, 2);
  EXPECT_EQ(r.attempt_log,
            (std::vector<std::vector<std::string>>{{kOverlength}, {}}));
  EXPECT_EQ(mock->calls(), 2);
}

TEST(InformalizeTheoremTest, AlwaysFailing) {
  Client client(ScriptedMock({"thm_5"}));
  const auto r = InformalizeTheorem(Theorem(5), {}, client, {}, kTok, 4);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.attempts, 4);
  ASSERT_EQ(r.attempt_log.size(), 4u);
  for (const auto& reasons : r.attempt_log) {
    EXPECT_EQ(reasons, std::vector<std::string>{kMissingSection});
  }
  EXPECT_EQ(r.reasons, std::vector<std::string>{kMissingSection});
}

TEST(InformalizeTheoremTest, BackendErrorsAreRecorded) {
  using Fault = genclient::FaultInjectingBackend::Fault;
  auto faulty = std::make_shared<genclient::FaultInjectingBackend>(
      ScriptedMock({}), std::vector<Fault>{Fault::kPermanent});
  Client client(faulty);
  const auto r = InformalizeTheorem(Theorem(1), {}, client, {}, kTok, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.attempts, 2);
  ASSERT_EQ(r.attempt_log[0].size(), 1u);
  EXPECT_EQ(r.attempt_log[0][0].rfind(kBackendError, 0), 0u);
}

TEST(InformalizeTheoremTest, BudgetExhaustionPropagates) {
  Client client(ScriptedMock({}), {}, genclient::Budget{1, 0});
  InformalizeTheorem(Theorem(1), {}, client, {}, kTok, 1);
  try {
    InformalizeTheorem(Theorem(2), {}, client, {}, kTok, 1);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
}

TEST(InformalizeTheoremTest, PromptCarriesExamplesAndSections) {
  const std::string p = RenderInformalizationPrompt(Theorem(3), Pool(1));
  EXPECT_NE(p.find(Pool(1)[0].nl), std::string::npos);
  EXPECT_NE(p.find(Theorem(3).proof), std::string::npos);
  EXPECT_LT(p.find(Pool(1)[0].nl), p.find(Theorem(3).proof));
}

TEST(InformalizationResultTest, JsonRoundTrip) {
  Client client(ScriptedMock({"thm_1"}));
  const auto r = InformalizeTheorem(Theorem(1), Pool(2), client, {}, kTok, 2);
  const Json j = ToJson(r);
  EXPECT_EQ(j.at("Name"), "thm_1");
  EXPECT_EQ(j.at("verdict"), "fail");
  EXPECT_EQ(InformalizationFromJson(j), r);
  Json bad = j;
  bad["attempts"] = 0;
  EXPECT_THROW(InformalizationFromJson(bad), Error);
}

// --- informalize_corpus ----------------------------------------------------

TEST(InformalizeCorpusTest, EmptyInput) {
  Client client(ScriptedMock({}));
  EXPECT_TRUE(InformalizeCorpus({}, Selector(3), client, kTok, {}).empty());
}

TEST(InformalizeCorpusTest, AllPass) {
  Client client(ScriptedMock({}));
  const auto out = InformalizeCorpus(Theorems(10), Selector(5), client, kTok, {});
  ASSERT_EQ(out.size(), 10u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(out[i].theorem_name, "thm_" + std::to_string(i));
    EXPECT_TRUE(out[i].pass);
    EXPECT_EQ(out[i].examples_used.size(), 3u);
  }
}

TEST(InformalizeCorpusTest, ScriptedFailuresAndOrder) {
  const std::vector<std::string> failing = {"thm_2", "thm_5", "thm_9"};
  for (std::size_t parallelism : {1u, 3u, 8u}) {
    Client client(ScriptedMock(failing));
    CorpusConfig config;
    config.parallelism = parallelism;
    const auto out = InformalizeCorpus(Theorems(10), Selector(5), client, kTok, config);
    ASSERT_EQ(out.size(), 10u);
    std::vector<std::string> failed;
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(out[i].theorem_name, "thm_" + std::to_string(i));
      if (!out[i].pass) failed.push_back(out[i].theorem_name);
    }
    EXPECT_EQ(failed, failing) << parallelism;
    EXPECT_EQ(std::count_if(out.begin(), out.end(), [](auto& r) { return r.pass; }), 7);
  }
}

TEST(InformalizeCorpusTest, ResumeMatchesUninterruptedRun) {
  const fs::path dir = TempDir("resume");
  const auto records = Theorems(10);
  const std::vector<std::string> failing = {"thm_4"};
  CorpusConfig config;
  config.parallelism = 3;

  config.checkpoint = dir / "full.jsonl";
  Client full_client(ScriptedMock(failing));
  const auto full = InformalizeCorpus(records, Selector(5), full_client, kTok, config);

  // Interrupted run: only the first six records were processed.
  config.checkpoint = dir / "partial.jsonl";
  Client first(ScriptedMock(failing));
  InformalizeCorpus({records.begin(), records.begin() + 6}, Selector(5), first, kTok, config);
  config.resume = true;
  auto mock = ScriptedMock(failing);
  Client second(mock);
  const auto resumed = InformalizeCorpus(records, Selector(5), second, kTok, config);

  EXPECT_EQ(resumed, full);
  EXPECT_EQ(ReadFile(dir / "partial.jsonl"), ReadFile(dir / "full.jsonl"));
  // thm_4 failed three times in the first run, so only records 6..9 are new.
  EXPECT_EQ(mock->calls(), 4);
}

TEST(InformalizeCorpusTest, CorruptCheckpointNeedsRestart) {
  const fs::path dir = TempDir("corrupt");
  CorpusConfig config;
  config.checkpoint = dir / "ck.jsonl";
  config.resume = true;
  WriteFileAtomic(config.checkpoint, "{\"Name\": \"thm_0\", truncated");
  Client client(ScriptedMock({}));
  try {
    InformalizeCorpus(Theorems(3), Selector(2), client, kTok, config);
    FAIL() << "expected CheckpointCorrupt";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCheckpointCorrupt);
  }
  config.restart_on_corrupt = true;
  const auto out = InformalizeCorpus(Theorems(3), Selector(2), client, kTok, config);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_EQ(ReadJsonl(config.checkpoint).size(), 3u);
}

TEST(InformalizeCorpusTest, CheckpointForDifferentInputIsCorrupt) {
  const fs::path dir = TempDir("mismatch");
  CorpusConfig config;
  config.checkpoint = dir / "ck.jsonl";
  Client client(ScriptedMock({}));
  InformalizeCorpus(Theorems(3), Selector(2), client, kTok, config);
  config.resume = true;
  auto shuffled = Theorems(3);
  std::swap(shuffled[0], shuffled[1]);
  EXPECT_THROW(InformalizeCorpus(shuffled, Selector(2), client, kTok, config), Error);
}

TEST(InformalizeCorpusTest, TightenedLimitsRecomputeStalePasses) {
  const fs::path dir = TempDir("stale");
  CorpusConfig config;
  config.checkpoint = dir / "ck.jsonl";
  Client client(ScriptedMock({}));
  InformalizeCorpus(Theorems(4), Selector(2), client, kTok, config);

  config.resume = true;
  config.limits.max_tokens = 5;
  const auto out = InformalizeCorpus(Theorems(4), Selector(2), client, kTok, config);
  for (const auto& r : out) {
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.reasons, std::vector<std::string>{kOverlength});
  }
  // Nothing on disk claims a pass that violates the new limits.
  EXPECT_NO_THROW(LoadInformalDataset(config.checkpoint, config.limits, kTok));
}

TEST(LoadInformalDatasetTest, RejectsPassViolatingLimits) {
  const fs::path dir = TempDir("load");
  InformalizationResult r;
  r.theorem_name = "t";
  r.nl_statement_and_proof = "no sections at all";
  r.attempts = 1;
  r.pass = true;
  r.attempt_log = {{}};
  WriteJsonl(dir / "d.jsonl", {ToJson(r)});
  EXPECT_THROW(LoadInformalDataset(dir / "d.jsonl", {}, kTok), Error);
  r.pass = false;
  r.reasons = {kMissingSection};
  WriteJsonl(dir / "d.jsonl", {ToJson(r)});
  EXPECT_EQ(LoadInformalDataset(dir / "d.jsonl", {}, kTok).size(), 1u);
}

}  // namespace
}  // namespace leanbridge::informalize
