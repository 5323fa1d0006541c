// Copyright 2026 The culteval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "culteval/filter.hpp"
#include "support.hpp"

namespace ce = culteval;
namespace ts = testing_support;
using nlohmann::json;

TEST(Corpus, LoadsSampleInOrder) {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  ASSERT_EQ(corpus.size(), 50u);
  EXPECT_EQ(corpus.metadata.name, "sample");
  EXPECT_EQ(corpus.instances.front().id, "a1");
  EXPECT_EQ(corpus.instances.back().id, "a50");
  EXPECT_EQ(corpus.find("a33")->source_term(), "炕");
}

TEST(Corpus, RoundTripIsIdentity) {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  ts::TempDir dir;
  ce::save_corpus(corpus, dir / "c.jsonl");
  const auto again = ce::load_corpus(dir / "c.jsonl");
  EXPECT_EQ(again.metadata, corpus.metadata);
  EXPECT_EQ(again.instances, corpus.instances);
}

TEST(Corpus, SpanBeyondTextNamesIdAndField) {
  ts::TempDir dir;
  ce::io::write_file(dir / "bad.jsonl",
                     R"({"id":"x1","source_text":"ab","reference_text":"r","source_span":[0,5],"category":"Social","explication":"e"})"
                     "\n");
  try {
    ce::load_corpus(dir / "bad.jsonl");
    FAIL();
  } catch (const ce::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("x1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("source_span"), std::string::npos);
  }
}

TEST(Corpus, DuplicateIdCitesBothLines) {
  ts::TempDir dir;
  const std::string row =
      R"({"id":"x1","source_text":"ab","reference_text":"r","source_span":[0,1],"category":"Social","explication":"e"})";
  const std::string other =
      R"({"id":"y","source_text":"ab","reference_text":"r","source_span":[0,1],"category":"Social","explication":"e"})";
  std::string text = row + "\n";
  for (int i = 0; i < 5; ++i) text += std::string(other).replace(7, 1, std::to_string(i)) + "\n";
  text += row + "\n";
  ce::io::write_file(dir / "dup.jsonl", text);
  try {
    ce::load_corpus(dir / "dup.jsonl");
    FAIL();
  } catch (const ce::InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("x1"), std::string::npos);
    EXPECT_NE(msg.find("lines 1 and 7"), std::string::npos) << msg;
  }
}

TEST(Corpus, RejectsEmptyExplicationAndUnknownCategory) {
  ts::TempDir dir;
  ce::io::write_file(dir / "a.jsonl",
                     R"({"id":"x","source_text":"ab","reference_text":"r","source_span":[0,1],"category":"Social","explication":"  "})"
                     "\n");
  EXPECT_THROW(ce::load_corpus(dir / "a.jsonl"), ce::InputError);
  ce::io::write_file(dir / "b.jsonl",
                     R"({"id":"x","source_text":"ab","reference_text":"r","source_span":[0,1],"category":"Food","explication":"e"})"
                     "\n");
  EXPECT_THROW(ce::load_corpus(dir / "b.jsonl"), ce::InputError);
}

TEST(Corpus, CategorySpellings) {
  EXPECT_EQ(ce::parse_category("social culture"), ce::CulturalCategory::kSocial);
  EXPECT_EQ(ce::parse_category(" MATERIAL CULTURE "), ce::CulturalCategory::kMaterial);
  EXPECT_FALSE(ce::parse_category("culture"));
  EXPECT_FALSE(ce::parse_category("Socials"));
}

TEST(Stats, MatchesPythonTally) {
  const auto stats = ce::corpus_stats(ce::load_corpus(ts::data("sample/corpus.jsonl")));
  const auto want = json::parse(ce::io::read_file(ts::data("sample/expected_stats.json")));
  ASSERT_EQ(stats.rows.size(), want["rows"].size());
  for (const auto& w : want["rows"]) {
    auto it = std::find_if(stats.rows.begin(), stats.rows.end(),
                           [&](const ce::CategoryStats& r) { return r.label == w["category"].get<std::string>(); });
    ASSERT_NE(it, stats.rows.end());
    EXPECT_EQ(it->count, w["count"].get<std::size_t>());
    EXPECT_NEAR(it->ratio, w["ratio"].get<double>(), 1e-9);
    EXPECT_NEAR(it->avg_source_term_len, w["avg_source_term_len"].get<double>(), 1e-9);
    EXPECT_NEAR(it->avg_target_term_len, w["avg_target_term_len"].get<double>(), 1e-9);
    EXPECT_NEAR(it->avg_context_len, w["avg_context_len"].get<double>(), 1e-9);
  }
  EXPECT_NEAR(stats.total.avg_context_len, want["total"]["avg_context_len"].get<double>(), 1e-9);
}

TEST(Stats, RatiosSumToHundredAndIgnoreOrder) {
  auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  const auto a = ce::corpus_stats(corpus);
  double sum = 0;
  for (const auto& r : a.rows) sum += r.ratio;
  EXPECT_NEAR(sum, 100.0, 0.05 * static_cast<double>(a.rows.size()));
  std::mt19937 rng(1);
  std::shuffle(corpus.instances.begin(), corpus.instances.end(), rng);
  const auto b = ce::corpus_stats(corpus);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].count, b.rows[i].count);
  EXPECT_THROW(ce::corpus_stats(ce::Corpus{}), ce::InputError);
}

TEST(Filter, EmptyRulesIsIdentity) {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  const auto r = ce::filter_instances(corpus, {});
  EXPECT_EQ(r.kept.instances, corpus.instances);
  EXPECT_TRUE(r.rejected.empty());
}

TEST(Filter, SalienceScreenRejectsScriptedItems) {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  auto judge = ts::mock_client("sample/mock_filter.json");
  ce::FilterConfig cfg;
  cfg.salience = true;
  const auto r = ce::filter_instances(corpus, cfg, &judge);
  ASSERT_EQ(r.rejected.size(), 2u);
  EXPECT_EQ(r.rejected[0].id, "a3");
  EXPECT_EQ(r.rejected[1].id, "a7");
  EXPECT_EQ(r.rejected[0].reason, ce::RejectReason::kInsufficientCulturalSalience);
  EXPECT_EQ(r.kept.size(), 48u);
  EXPECT_THROW(ce::filter_instances(corpus, cfg, nullptr), ce::JudgeError);
}

TEST(Filter, RuleOnlyChecksUseAllowedReasons) {
  auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  corpus.instances[0].reference_span.reset();
  ce::FilterConfig cfg;
  cfg.context = true;
  cfg.alignment = true;
  cfg.min_context_chars = 12;
  const auto r = ce::filter_instances(corpus, cfg);
  EXPECT_EQ(r.kept.size() + r.rejected.size(), corpus.size());
  bool saw_alignment = false;
  for (const auto& rej : r.rejected) {
    EXPECT_TRUE(rej.reason == ce::RejectReason::kWeakContextualSupport ||
                rej.reason == ce::RejectReason::kSemanticMisalignment);
    saw_alignment |= rej.id == "a1";
  }
  EXPECT_TRUE(saw_alignment);
}
