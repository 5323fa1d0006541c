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

#include "culteval/mining.hpp"
#include "culteval/mt_runner.hpp"
#include "culteval/run.hpp"
#include "support.hpp"

namespace ce = culteval;
namespace ts = testing_support;
using nlohmann::json;

TEST(Chunk, ParagraphsStayTogetherUnderTheCap) {
  const std::string raw = "a\tA\nb\tB\n\nc\tC\n";
  const auto one = ce::chunk_raw_text(raw, "f", {});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].text, "a\tA\nb\tB\n\nc\tC");
  EXPECT_EQ(one[0].origin, "f:1");
  ce::ChunkOptions small;
  small.max_chars = 8;
  const auto split = ce::chunk_raw_text(raw, "f", small);
  ASSERT_EQ(split.size(), 2u);
  EXPECT_EQ(split[1].origin, "f:4");
  ce::ChunkOptions zero;
  zero.max_chars = 0;
  EXPECT_THROW(ce::chunk_raw_text(raw, "f", zero), ce::InputError);
}

TEST(Chunk, InterleavedKeepsPairs) {
  ce::ChunkOptions opt;
  opt.format = ce::RawFormat::kInterleaved;
  opt.max_chars = 5;
  const auto chunks = ce::chunk_raw_text("甲\nA\n乙\nB\n", "f", opt);
  ASSERT_EQ(chunks.size(), 2u);
  EXPECT_EQ(chunks[0].text, "甲\nA");
  EXPECT_EQ(chunks[1].text, "乙\nB");
}

TEST(Mining, CandidateListParsing) {
  const auto c = ce::parse_candidate_list(
      R"([{"src":"他在摸鱼","tgt":"He slacks","focus_term":"摸鱼"},{"src":"x","tgt":"y","focus_term":"z"},{"src":"q"}])", "o");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].origin, "o#0");
  EXPECT_THROW(ce::parse_candidate_list(R"({"src":"a"})", "o"), ce::ParseError);
  EXPECT_TRUE(ce::parse_candidate_list("[]", "o").empty());
}

TEST(Mining, ExtractDropsBadFocusTerm) {
  const auto raw = ce::io::read_file(ts::data("fixtures/mining/raw.tsv"));
  const auto chunks = ce::chunk_raw_text(raw, "raw.tsv", {});
  auto judge = ts::mock_client("fixtures/mining/mock.json");
  const auto cands = ce::extract_all(chunks, judge, 2);
  ASSERT_EQ(cands.size(), 3u);
  for (const auto& c : cands) EXPECT_NE(c.src.find(c.focus_term), std::string::npos);
}

TEST(Mining, ClassifyAndBuildAgainstKey) {
  auto cands = ce::load_candidates(ts::data("fixtures/mining/candidates.jsonl"));
  const auto key = json::parse(ce::io::read_file(ts::data("fixtures/mining/key.json")));
  auto judge = ts::mock_client("fixtures/mining/mock.json");
  for (auto& c : cands) {
    const auto cls = ce::classify_candidate(c, judge);
    EXPECT_EQ(ce::to_string(cls.category), key.at(c.focus_term).get<std::string>()) << c.focus_term;
    c.category = cls.category;
    c.reason = cls.reason;
  }
  cands.push_back(cands.front());  // exact duplicate is collapsed
  const auto sidecar = ce::load_sidecar(ts::data("fixtures/mining/sidecar.json"));
  ce::BuildOptions opt;
  opt.sidecar = &sidecar;
  const auto corpus = ce::build_corpus(cands, opt);
  ASSERT_EQ(corpus.size(), 10u);
  EXPECT_EQ(corpus.instances[0].id, "m0001");
  for (const auto& inst : corpus.instances) {
    EXPECT_TRUE(inst.reference_span.has_value()) << inst.id;
    EXPECT_EQ(inst.explication_origin, "human");
  }
  // Build, save, load: the loader's invariants hold.
  ts::TempDir dir;
  ce::save_corpus(corpus, dir / "c.jsonl");
  EXPECT_EQ(ce::load_corpus(dir / "c.jsonl").instances, corpus.instances);
}

TEST(Mining, MachineExplicationsAreMarked) {
  auto cands = ce::load_candidates(ts::data("fixtures/mining/candidates.jsonl"));
  for (auto& c : cands) c.category = ce::CulturalCategory::kSocial;
  auto judge = ts::mock_client("fixtures/mining/mock.json");
  ce::BuildOptions opt;
  opt.source = ce::ExplicationSource::kJudge;
  opt.judge = &judge;
  const auto corpus = ce::build_corpus(cands, opt);
  for (const auto& inst : corpus.instances) {
    EXPECT_EQ(inst.explication_origin, "machine");
    EXPECT_FALSE(inst.reference_span.has_value());
  }
  EXPECT_EQ(ce::to_json(corpus.instances[0])["explication_origin"], "machine");
}

TEST(Mining, BuildErrors) {
  auto cands = ce::load_candidates(ts::data("fixtures/mining/candidates.jsonl"));
  ce::BuildOptions opt;
  EXPECT_THROW(ce::build_corpus(cands, opt), ce::InputError);  // no sidecar
  const ce::Sidecar empty;
  opt.sidecar = &empty;
  EXPECT_THROW(ce::build_corpus(cands, opt), ce::InputError);  // no category
  for (auto& c : cands) c.category = ce::CulturalCategory::kSocial;
  try {
    ce::build_corpus(cands, opt);
    FAIL();
  } catch (const ce::InputError& e) {
    EXPECT_NE(std::string(e.what()).find(cands[0].focus_term), std::string::npos);
  }
}

TEST(Mining, TaxonomyAnswers) {
  EXPECT_EQ(ce::parse_taxonomy_answer(R"({"category":"Religious Culture"})").category, ce::CulturalCategory::kReligious);
  EXPECT_THROW(ce::parse_taxonomy_answer(R"({"category":"Food"})"), ce::ParseError);
  EXPECT_THROW(ce::parse_taxonomy_answer(R"(["Social"])"), ce::ParseError);
}

TEST(Translate, ScriptedBackendAndLeakCheck) {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  auto judge = ts::mock_client("sample/mock_translate.json");
  ce::TranslationRun run{"scripted", "mock", ce::PromptMode::kZeroShot, std::nullopt, 4};
  const auto r = ce::translate_corpus(corpus, run, judge);
  EXPECT_EQ(r.hypotheses.size() + r.failures.size(), corpus.size());
  const auto want = ce::load_hypotheses(ts::data("sample/expected_translations.jsonl"));
  EXPECT_EQ(r.hypotheses, want);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(r.transcripts[i].rendered_prompt.find(corpus.instances[i].reference_text), std::string::npos);
    EXPECT_EQ(r.transcripts[i].rendered_prompt.find(corpus.instances[i].explication), std::string::npos);
  }
}

TEST(Translate, OneShotNeedsHeldOutDemo) {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  auto judge = ts::mock_client("sample/mock_translate.json");
  ce::TranslationRun run{"s", "mock", ce::PromptMode::kOneShot, std::nullopt, 1};
  EXPECT_THROW(ce::translate_corpus(corpus, run, judge), ce::InputError);
  run.demo = ce::load_demonstration(ts::data("sample/demo.json"));
  const auto ok = ce::translate_corpus(corpus, run, judge);
  EXPECT_EQ(ok.hypotheses.size(), corpus.size());
  EXPECT_EQ(ok.hypotheses[0].mode, ce::PromptMode::kOneShot);
  run.demo->id = "a1";
  EXPECT_THROW(ce::translate_corpus(corpus, run, judge), ce::InputError);
  run.backend = "nmt:http://localhost:1";
  run.demo.reset();
  auto echo = ts::mock_client(std::make_shared<ce::EchoBackend>());
  const auto nmt = ce::translate_corpus(corpus, run, echo);
  EXPECT_EQ(nmt.hypotheses[0].mode, ce::PromptMode::kZeroShot);
}

TEST(Translate, FailuresAreCounted) {
  const auto corpus = ce::load_corpus(ts::data("fixtures/hand/corpus.jsonl"));
  auto judge = ts::mock_client_json({{"rules",
                                      {{{"template", "translate_0shot"}, {"when", {{"SOURCE", {{"equals", corpus.instances[1].source_text}}}}}, {"respond", "  "}},
                                       {{"template", "translate_0shot"}, {"when", {{"SOURCE", {{"equals", corpus.instances[2].source_text}}}}}, {"fail_times", 99}, {"respond", "x"}},
                                       {{"template", "translate_0shot"}, {"echo", "SOURCE"}}}}});
  ce::TranslationRun run{"s", "mock", ce::PromptMode::kZeroShot, std::nullopt, 1};
  const auto r = ce::translate_corpus(corpus, run, judge);
  EXPECT_EQ(r.hypotheses.size(), 2u);
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_EQ(r.failures[0].instance_id, "h2");
  EXPECT_EQ(r.failures[1].instance_id, "h3");
}

TEST(Run, IdIgnoresExecutionOnlyKeys) {
  ce::RunManifest a;
  a.command = "acre";
  a.config = {{"weights", "0.5:0.5"}, {"parallelism", 1}, {"out", "x"}};
  ce::RunManifest b = a;
  b.config["parallelism"] = 8;
  b.config["out"] = "y";
  EXPECT_EQ(a.run_id(), b.run_id());
  b.config["weights"] = "0.6:0.4";
  EXPECT_NE(a.run_id(), b.run_id());
  EXPECT_EQ(a.run_id().size(), 16u);
}

TEST(Run, DirectoryLockIsExclusive) {
  ts::TempDir dir;
  {
    ce::RunDirectory first(dir / "run");
    EXPECT_THROW(ce::RunDirectory(dir / "run"), ce::InputError);
  }
  EXPECT_NO_THROW(ce::RunDirectory(dir / "run"));
}
