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
#include <map>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "leanbridge/bootstrap/bootstrap.h"
#include "leanbridge/common/error.h"
#include "leanbridge/common/random.h"
#include "leanbridge/corpus/lexer.h"
#include "leanbridge/corpus/theorem.h"
#include "leanbridge/genclient/template.h"
#include "leanbridge/trainprep/packing.h"
#include "support/packing_oracle.h"
#include "support/snippets.h"

namespace leanbridge::trainprep {
namespace {

using testing::GreedyOracle;
using testing::WordCounts;
using testing::WordRecord;

const WhitespaceTokenizer kWs;

std::vector<SourceRecord> WordRing(const std::vector<WordCounts>& counts) {
  std::vector<SourceRecord> ring;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    ring.push_back(WordRecord("r" + std::to_string(i), counts[i], 0));
  }
  return ring;
}

std::vector<int> Difficulties(const std::vector<SourceRecord>& rs) {
  std::vector<int> d;
  for (const auto& r : rs) d.push_back(r.difficulty);
  return d;
}

TEST(CurriculumSortTest, Ascending) {
  std::vector<SourceRecord> rs = {{"a", "", "", "", "", 3}, {"b", "", "", "", "", 1},
                                  {"c", "", "", "", "", 2}};
  EXPECT_EQ(Difficulties(CurriculumSort(rs)), (std::vector<int>{1, 2, 3}));
}

TEST(CurriculumSortTest, StableOnTies) {
  std::vector<SourceRecord> rs;
  for (int i = 0; i < 6; ++i) rs.push_back({"n" + std::to_string(i), "", "", "", "", 4});
  const auto sorted = CurriculumSort(rs);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(sorted[i].name, "n" + std::to_string(i));
}

TEST(CurriculumSortTest, ThousandRandomRecords) {
  Rng rng(17);
  std::vector<SourceRecord> rs;
  for (int i = 0; i < 1000; ++i) {
    rs.push_back({"n" + std::to_string(i), "", "", "", "", static_cast<int>(rng.UniformIndex(12))});
  }
  const auto sorted = CurriculumSort(rs);
  ASSERT_EQ(sorted.size(), rs.size());
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) {
      ASSERT_LE(sorted[i - 1].difficulty, sorted[i].difficulty);
      // ties keep input order; names encode the input index
      if (sorted[i - 1].difficulty == sorted[i].difficulty) {
        ASSERT_LT(std::stoi(sorted[i - 1].name.substr(1)), std::stoi(sorted[i].name.substr(1)));
      }
    }
    ++seen[sorted[i].name];
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(PackBlockTest, MarkerCountsMatchOracleConstants) {
  EXPECT_EQ(kWs.Count(genclient::FormatProofExample("", "", "")), testing::kMarkerWords);
  EXPECT_EQ(kWs.Count(genclient::ProofWritingTemplate().Render(
                {{"examples", ""}, {"nl", ""}, {"statement", ""}})),
            testing::kHeaderWords + testing::kMarkerWords);
}

TEST(PackBlockTest, JustFitsGivesNoExamples) {
  const std::vector<WordCounts> counts = {{5, 5, 5}, {5, 5, 5}, {5, 5, 5}};
  const auto ring = WordRing(counts);
  const std::int64_t own = testing::kHeaderWords + testing::kMarkerWords + 15;
  const auto p = PackBlock(ring, 1, kWs, {own});
  EXPECT_EQ(p.example_count, 0);
  EXPECT_EQ(p.token_count, own);
  EXPECT_EQ(p.target, ring[1].target);
  EXPECT_EQ(p.instruction, genclient::ProofWritingTemplate().Render(
                               {{"examples", ""}, {"nl", ring[1].nl},
                                {"statement", ring[1].statement}}));
  EXPECT_THROW(PackBlock(ring, 1, kWs, {own - 1}), Error);
}

TEST(PackBlockTest, HugeBudgetWrapsWithoutSelf) {
  std::vector<SourceRecord> ring = {{"a", "nl a", "st a", "fl a", "ex a", 0},
                                    {"b", "nl b", "st b", "fl b", "ex b", 0},
                                    {"c", "nl c", "st c", "fl c", "ex c", 0}};
  const auto p = PackBlock(ring, 0, kWs, {1 << 20});
  EXPECT_EQ(p.example_count, 2);
  // i-1 wraps to c and i-2 to b; the oldest example comes first.
  const std::size_t b = p.instruction.find("ex b");
  const std::size_t c = p.instruction.find("ex c");
  ASSERT_NE(b, std::string::npos);
  ASSERT_NE(c, std::string::npos);
  EXPECT_LT(b, c);
  EXPECT_EQ(p.instruction.find("ex a"), std::string::npos);
  EXPECT_NE(p.instruction.find("nl a"), std::string::npos);
}

TEST(PackBlockTest, TenRecordsMatchGreedyOracle) {
  const std::vector<WordCounts> counts = {{30, 10, 40}, {12, 8, 20}, {50, 20, 90}, {5, 5, 5},
                                          {25, 15, 60}, {40, 10, 30}, {8, 4, 16},  {60, 25, 100},
                                          {20, 10, 20}, {15, 5, 45}};
  const auto ring = WordRing(counts);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto oracle = GreedyOracle(counts, i, 500);
    const auto p = PackBlock(ring, i, kWs, {500});
    EXPECT_EQ(p.example_count, oracle.k) << i;
    EXPECT_EQ(p.token_count, oracle.tokens) << i;
  }
}

TEST(PackBlockTest, RandomRingsMatchOracleAndAreMaximal) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto counts = testing::RandomCounts(rng, 1 + rng.UniformIndex(60));
    const auto ring = WordRing(counts);
    const std::int64_t budget = 200 + static_cast<std::int64_t>(rng.UniformIndex(1500));
    const RingPacker packer(ring, kWs, {budget});
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto oracle = GreedyOracle(counts, i, budget);
      if (oracle.k < 0) {
        EXPECT_THROW(packer.Pack(i), Error);
        continue;
      }
      const auto p = packer.Pack(i);
      ASSERT_EQ(p.example_count, oracle.k);
      ASSERT_LE(p.token_count, budget);
      const std::size_t n = ring.size();
      if (static_cast<std::size_t>(p.example_count) + 1 < n) {
        const auto& next = ring[(i + n - p.example_count - 1) % n];
        const std::int64_t more =
            kWs.Count(genclient::FormatProofExample(next.nl, next.statement, next.example));
        EXPECT_GT(p.token_count + more, budget);
      }
    }
  }
}

TEST(PackBlockTest, ExamplesAreWholeRecords) {
  Rng rng(8);
  const auto counts = testing::RandomCounts(rng, 12);
  auto ring = WordRing(counts);
  for (std::size_t i = 0; i < ring.size(); ++i) ring[i].nl += " tag" + std::to_string(i);
  const auto p = PackBlock(ring, 4, kWs, {900});
  ASSERT_GT(p.example_count, 0);
  std::string expected;
  for (std::int64_t s = p.example_count; s >= 1; --s) {
    const auto& e = ring[(4 + ring.size() - s) % ring.size()];
    expected += genclient::FormatProofExample(e.nl, e.statement, e.example);
  }
  EXPECT_NE(p.instruction.find(expected), std::string::npos);
}

TEST(PackBlockTest, BlockOffAndNoNlGuidance) {
  const auto ring = WordRing({{5, 5, 5}, {5, 5, 5}, {5, 5, 5}});
  PackOptions o{1 << 20};
  o.block = false;
  EXPECT_EQ(PackBlock(ring, 2, kWs, o).example_count, 0);
  o.block = true;
  o.nl_guidance = false;
  const auto p = PackBlock(ring, 2, kWs, o);
  EXPECT_EQ(p.example_count, 2);
  EXPECT_EQ(p.instruction.find(genclient::kNlSection), std::string::npos);
}

TEST(PackedRecordTest, JsonRoundTrip) {
  const auto ring = WordRing({{5, 5, 5}, {6, 6, 6}});
  const auto p = PackBlock(ring, 1, kWs, {4096});
  const Json j = ToJson(p);
  for (const char* key : {"instruction", "target", "example_count", "difficulty"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(PackedFromJson(j), p);
}

// --- emit_training_set -----------------------------------------------------

std::vector<bootstrap::ObtRecord> FixtureObt() {
  const auto snippets = testing::LoadSnippets();
  std::vector<bootstrap::ObtRecord> out;
  for (const char* name : {"mathd_algebra_116", "amc12b_2002_p2", "mathd_algebra_338",
                           "algebra_sqineq_unitcircatbpamblt1", "amc12_2000_p5"}) {
    const std::string raw = corpus::StripComments(testing::FindSnippet(snippets, name).text);
    const auto t = corpus::ExtractTheorems(raw, {"u", std::string(40, 'd')}).records.at(0);
    const std::string nl = std::string("**Statement:** about ") + name + ".\n**Proof:** steps.";
    out.push_back({t.name, t.statement, t.proof, t.file_path, t.commit, nl,
                   bootstrap::HeadBootstrap(t.proof, nl)});
  }
  return out;
}

TEST(EmitTrainingSetTest, EmptyInput) {
  const auto set = EmitTrainingSet({}, kWs, {});
  EXPECT_TRUE(set.records.empty());
  EXPECT_TRUE(set.skipped.empty());
}

TEST(EmitTrainingSetTest, CurriculumOrderWithinBudget) {
  EmitConfig config;
  config.pack.context_budget = 600;
  WordPunctTokenizer tok;
  const auto set = EmitTrainingSet(FixtureObt(), tok, config);
  ASSERT_EQ(set.records.size(), 5u);
  for (std::size_t i = 0; i < set.records.size(); ++i) {
    EXPECT_LE(set.records[i].token_count, 600);
    if (i) EXPECT_LE(set.records[i - 1].difficulty, set.records[i].difficulty);
  }
  EXPECT_EQ(set.records.front().difficulty, 2);
}

TEST(EmitTrainingSetTest, BootstrapToggleDiffersOnlyInComments) {
  const auto obt = FixtureObt();
  EmitConfig with;
  EmitConfig without;
  without.use_bootstrapped = false;
  const auto a = EmitTrainingSet(obt, kWs, with);
  const auto b = EmitTrainingSet(obt, kWs, without);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].name, b.records[i].name);
    EXPECT_NE(a.records[i].target, b.records[i].target);
    EXPECT_TRUE(corpus::TokenEqual(corpus::StripComments(a.records[i].target),
                                   b.records[i].target));
  }
}

TEST(EmitTrainingSetTest, OversizedRecordsAreSkippedAndLeaveTheRing) {
  auto obt = FixtureObt();
  obt[1].generated_informal_statement_and_proof += testing::Words(5000);
  obt[1].commented_proof =
      bootstrap::HeadBootstrap(obt[1].proof, obt[1].generated_informal_statement_and_proof);
  EmitConfig config;
  config.pack.context_budget = 2000;
  const auto set = EmitTrainingSet(obt, kWs, config);
  ASSERT_EQ(set.skipped.size(), 1u);
  EXPECT_EQ(set.skipped[0].name, obt[1].name);
  EXPECT_GT(set.skipped[0].tokens, 2000);
  EXPECT_EQ(set.skipped[0].ToJson().at("reason"), "RecordExceedsBudget");
  ASSERT_EQ(set.records.size(), 4u);
  for (const auto& r : set.records) {
    EXPECT_NE(r.name, obt[1].name);
    EXPECT_EQ(r.instruction.find("w w w w w"), std::string::npos);
  }
}

TEST(EmitTrainingSetTest, AblationArms) {
  const auto obt = FixtureObt();
  EmitConfig plain;
  plain.curriculum = false;
  plain.pack.block = false;
  plain.pack.nl_guidance = false;
  plain.use_bootstrapped = false;
  const auto set = EmitTrainingSet(obt, kWs, plain);
  ASSERT_EQ(set.records.size(), obt.size());
  for (std::size_t i = 0; i < obt.size(); ++i) {
    EXPECT_EQ(set.records[i].name, obt[i].name);  // input order kept
    EXPECT_EQ(set.records[i].example_count, 0);
    EXPECT_EQ(set.records[i].target, obt[i].proof);
    EXPECT_EQ(set.records[i].instruction.find("**Statement:**"), std::string::npos);
  }
}

}  // namespace
}  // namespace leanbridge::trainprep
