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

#include <random>

#include "oracles.hpp"
#include "support.hpp"

namespace ce = culteval;
namespace ts = testing_support;
using nlohmann::json;

TEST(Taxonomy, NamesAndPriorities) {
  for (std::size_t i = 0; i < ce::kAllErrors.size(); ++i) {
    EXPECT_EQ(ce::priority(ce::kAllErrors[i]), static_cast<int>(i) + 1);
    EXPECT_EQ(ce::parse_error_category(ce::to_string(ce::kAllErrors[i])), ce::kAllErrors[i]);
  }
  EXPECT_EQ(ce::parse_error_category("sense error"), ce::ErrorCategory::kSenseError);
  EXPECT_EQ(ce::parse_error_category("Over-Interpretation"), ce::ErrorCategory::kOverInterpretation);
  EXPECT_FALSE(ce::parse_error_category("Typo"));
}

TEST(Taxonomy, PrimaryIsOrderInsensitiveAndIdempotent) {
  for (auto e : ce::kAllErrors) EXPECT_EQ(ce::assign_primary({e}), e);
  EXPECT_FALSE(ce::assign_primary({}));
  std::mt19937 rng(2);
  for (int k = 0; k < 200; ++k) {
    std::vector<ce::ErrorCategory> v;
    for (auto e : ce::kAllErrors) {
      if (rng() % 2) v.push_back(e);
    }
    if (v.empty()) continue;
    const ce::ErrorSet a(v.begin(), v.end());
    std::shuffle(v.begin(), v.end(), rng);
    const ce::ErrorSet b(v.rbegin(), v.rend());
    const auto p = ce::assign_primary(a);
    EXPECT_EQ(p, ce::assign_primary(b));
    EXPECT_EQ(ce::assign_primary({*p}), p);
  }
}

TEST(Taxonomy, LabelAnswers) {
  EXPECT_TRUE(ce::parse_error_labels("Reasoning: fine\nLabels: NONE").empty());
  const auto two = ce::parse_error_labels("Labels: Literalization, Sense Error.");
  EXPECT_EQ(two, (ce::ErrorSet{ce::ErrorCategory::kLiteralization, ce::ErrorCategory::kSenseError}));
  EXPECT_EQ(ce::parse_error_labels("omission").size(), 1u);
  EXPECT_THROW(ce::parse_error_labels("Labels: Typo"), ce::ParseError);
  EXPECT_THROW(ce::parse_error_labels("Labels: NONE, Omission"), ce::ParseError);
  EXPECT_THROW(ce::parse_error_labels("   "), ce::ParseError);
}

TEST(Taxonomy, DistributionMatchesPythonTally) {
  const auto ann = ce::load_annotations(ts::data("fixtures/errors/annotations.jsonl"));
  const auto want = json::parse(ce::io::read_file(ts::data("fixtures/errors/expected.json")));
  auto check = [&](const ce::ErrorDistributionRow& row, const json& w) {
    EXPECT_EQ(row.n, w["n"].get<std::size_t>());
    EXPECT_NEAR(row.correctness_rate, w["correctness_rate"].get<double>(), 1e-12);
    EXPECT_EQ(row.shares.size(), w["shares"].size());
    double sum = 0;
    for (const auto& [e, share] : row.shares) {
      EXPECT_NEAR(share, w["shares"][std::string(ce::to_string(e))].get<double>(), 1e-12);
      sum += share;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  };
  const auto pooled = ce::error_distribution(ann, false);
  ASSERT_EQ(pooled.size(), 1u);
  EXPECT_EQ(pooled[0].system_id, "*");
  check(pooled[0], want["pooled"]);
  const auto per = ce::error_distribution(ann, true);
  ASSERT_EQ(per.size(), 2u);
  check(per[0], want["sys_a"]);
  check(per[1], want["sys_b"]);
  const std::set<std::string> known = {"sys_a"};
  EXPECT_THROW(ce::error_distribution(ann, true, &known), ce::InputError);
}

TEST(Taxonomy, JudgeLabelingUsesClassifierTemplate) {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  auto judge = ts::mock_client_json({{"rules", {{{"template", "error_classifier"}, {"sequence", {"Labels: ???", "Labels: Omission"}}}}}});
  const auto v = ce::classify_errors(*corpus.find("a4"), "Anything.", judge);
  EXPECT_EQ(v.value, ce::ErrorSet{ce::ErrorCategory::kOmission});
  EXPECT_EQ(v.transcripts.size(), 2u);
}

TEST(Correlation, MatchesScipyOnFixture) {
  const auto scores = ce::load_metric_scores(ts::data("fixtures/correlation/scores.jsonl"));
  const auto judgments = ce::load_judgments(ts::data("fixtures/correlation/judgments.jsonl"));
  const auto want = json::parse(ce::io::read_file(ts::data("fixtures/correlation/expected.json")));
  const auto got = ce::correlate_metrics(scores, judgments);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].metric_id, want[i]["metric"].get<std::string>());
    EXPECT_NEAR(got[i].pearson_r, want[i]["pearson_r"].get<double>(), 1e-9);
    EXPECT_NEAR(got[i].spearman_rho, want[i]["spearman_rho"].get<double>(), 1e-9);
    EXPECT_EQ(got[i].n, want[i]["n"].get<std::size_t>());
  }
}

TEST(Correlation, CoverageMismatchIsAnError) {
  auto scores = ce::load_metric_scores(ts::data("fixtures/correlation/scores.jsonl"));
  const auto judgments = ce::load_judgments(ts::data("fixtures/correlation/judgments.jsonl"));
  scores["bleu"].erase({"a3", "sys_b"});
  try {
    ce::correlate_metrics(scores, judgments);
    FAIL();
  } catch (const ce::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("a3/sys_b"), std::string::npos);
  }
  EXPECT_THROW(ce::correlate_metrics(scores, judgments, ce::JudgmentTarget::kGraded), ce::InputError);
}

TEST(Correlation, DegenerateInputs) {
  EXPECT_THROW(ce::pearson({1, 2}, {1}), ce::InputError);
  EXPECT_THROW(ce::pearson({1}, {1}), ce::InputError);
  EXPECT_THROW(ce::pearson({1, 1, 1}, {1, 2, 3}), ce::InputError);
  EXPECT_THROW(ce::spearman({1, 2, 3}, {4, 4, 4}), ce::InputError);
}

TEST(Correlation, SymmetryAndTransformInvariance) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(30), y(30);
    for (std::size_t i = 0; i < 30; ++i) {
      x[i] = g(rng);
      y[i] = 0.5 * x[i] + g(rng);
    }
    const double r = ce::pearson(x, y), rho = ce::spearman(x, y);
    EXPECT_NEAR(r, ce::pearson(y, x), 1e-12);
    EXPECT_NEAR(rho, ce::spearman(y, x), 1e-12);
    std::vector<double> affine(x), mono(x);
    for (auto& v : affine) v = 3.0 * v + 7.0;
    for (auto& v : mono) v = std::exp(v);
    EXPECT_NEAR(ce::pearson(affine, y), r, 1e-9);
    EXPECT_NEAR(ce::spearman(mono, y), rho, 1e-12);
    EXPECT_NEAR(r, oracle::pearson(x, y), 1e-9);
  }
}

TEST(Correlation, DuplicateJudgmentCitesLines) {
  ts::TempDir dir;
  ce::io::write_file(dir / "j.jsonl", R"({"instance_id":"a","system_id":"s","cultural_correct":true})"
                                      "\n"
                                      R"({"instance_id":"a","system_id":"s","cultural_correct":false})"
                                      "\n");
  try {
    ce::load_judgments(dir / "j.jsonl");
    FAIL();
  } catch (const ce::InputError& e) {
    EXPECT_NE(std::string(e.what()).find("lines 1 and 2"), std::string::npos);
  }
}

namespace {

struct SensitivityFixture {
  ce::Corpus corpus = ce::load_corpus(ts::data("fixtures/sensitivity/corpus.jsonl"));
  ce::PerturbationTable table = ce::load_perturbation_table(ts::data("fixtures/sensitivity/perturbations.json"));
  std::map<std::string, std::string> base;

  SensitivityFixture() {
    for (const auto& h : ce::load_hypotheses(ts::data("fixtures/sensitivity/hypotheses.jsonl"))) base[h.instance_id] = h.text;
  }

  std::string perturb(const std::string& id, ce::ErrorCategory e) const {
    ce::PerturbRequest r;
    r.instance = corpus.find(id);
    r.hypothesis = base.at(id);
    r.error = e;
    r.entry = &table.at(id);
    return ce::perturb(r);
  }
};

}  // namespace

TEST(Perturb, RuleModeEditsOnlyTheSpan) {
  const SensitivityFixture fx;
  for (const auto& inst : fx.corpus.instances) {
    const auto& h = fx.base.at(inst.id);
    const auto term = *inst.reference_term();
    const auto pos = h.find(term);
    ASSERT_NE(pos, std::string::npos);
    const auto prefix = h.substr(0, pos);
    const auto& entry = fx.table.at(inst.id);

    EXPECT_EQ(fx.perturb(inst.id, ce::ErrorCategory::kNeutralization),
              prefix + *entry.hypernym + h.substr(pos + term.size()));
    EXPECT_EQ(fx.perturb(inst.id, ce::ErrorCategory::kOverInterpretation),
              h.substr(0, pos + term.size()) + " " + *entry.clause + h.substr(pos + term.size()));
    EXPECT_EQ(fx.perturb(inst.id, ce::ErrorCategory::kSenseError),
              prefix + entry.substitutions.at(ce::ErrorCategory::kSenseError) + h.substr(pos + term.size()));
    const auto cut = fx.perturb(inst.id, ce::ErrorCategory::kOmission);
    EXPECT_EQ(cut.find(term), std::string::npos);
    EXPECT_EQ(cut.find("  "), std::string::npos);
    EXPECT_EQ(cut.find(" ,"), std::string::npos);
  }
}

TEST(Perturb, DeleteRangeJoinsCleanly) {
  EXPECT_EQ(ce::detail::delete_range("a big dog, ok", 2, 5), "a dog, ok");
  EXPECT_EQ(ce::detail::delete_range("a big dog, ok", 6, 9), "a big, ok");
  EXPECT_EQ(ce::detail::delete_range("dog runs", 0, 3), "runs");
  EXPECT_EQ(ce::detail::delete_range("runs dog", 5, 8), "runs");
}

TEST(Perturb, UnrealizedSpanAndMissingMaterialAreErrors) {
  const SensitivityFixture fx;
  ce::PerturbRequest r;
  r.instance = &fx.corpus.instances[0];
  r.hypothesis = "Nothing relevant here.";
  r.entry = &fx.table.at(r.instance->id);
  EXPECT_THROW(ce::perturb(r), ce::InputError);
  ce::PerturbationEntry empty;
  r.hypothesis = fx.base.at(r.instance->id);
  r.entry = &empty;
  r.error = ce::ErrorCategory::kPragmaticShift;
  EXPECT_THROW(ce::perturb(r), ce::InputError);
  r.error = ce::ErrorCategory::kOmission;
  EXPECT_NO_THROW(ce::perturb(r));
  r.mode = ce::PerturbMode::kJudge;
  EXPECT_THROW(ce::perturb(r), ce::JudgeError);
}

TEST(Perturb, JudgeModeUsesDefinitionFromClassifierPrompt) {
  const auto def = ce::error_definition(*ts::prompts(), ce::ErrorCategory::kLiteralization);
  EXPECT_TRUE(def.starts_with("Literalization")) << def;
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  auto judge = ts::mock_client_json(
      {{"rules", {{{"template", "perturb"}, {"when", {{"ERROR_DEFINITION", {{"prefix", "Literalization"}}}}},
                   {"respond", "Rewritten: He slept on the fire bed."}}}}});
  ce::PerturbRequest r;
  r.instance = corpus.find("a33");
  r.hypothesis = corpus.find("a33")->reference_text;
  r.error = ce::ErrorCategory::kLiteralization;
  r.mode = ce::PerturbMode::kJudge;
  r.judge = &judge;
  EXPECT_EQ(ce::perturb(r), "He slept on the fire bed.");
}

TEST(Sensitivity, FullGridAndClassification) {
  const SensitivityFixture fx;
  auto judge = ts::mock_client("fixtures/sensitivity/mock.json");
  ce::SensitivityInputs in{&fx.corpus, &fx.base, &fx.table, nullptr};
  const std::vector<ce::ErrorCategory> errors(ce::kAllErrors.begin(), ce::kAllErrors.end());
  ce::SensitivityConfig cfg;
  cfg.parallelism = 4;
  const auto rep = ce::sensitivity_analysis(in, errors, {ce::bleu_metric(), ce::chrf_metric(), ce::acre_metric(judge, {})}, cfg);
  EXPECT_EQ(rep.cells.size(), 3u * 7u);
  for (const auto& c : rep.cells) {
    EXPECT_EQ(c.items.size() + c.errors.size(), fx.corpus.size()) << c.metric << "/" << ce::to_string(c.error);
    EXPECT_TRUE(c.errors.empty());
  }
  for (const auto& d : rep.cell("bleu", ce::ErrorCategory::kOmission).items) EXPECT_GE(d.delta, 0.0);
  // Only the sense-error substitution trips the scripted gate.
  for (auto e : errors) {
    const auto& c = rep.cell("acre", e);
    EXPECT_EQ(c.sensitivity, e == ce::ErrorCategory::kSenseError ? ce::Sensitivity::kSensitive : ce::Sensitivity::kInsensitive)
        << ce::to_string(e);
  }
  const auto csv = ce::sensitivity_csv(rep);
  EXPECT_TRUE(csv.starts_with("metric,error_type,instance_id,base,perturbed,delta\n"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 7 * 6);
  EXPECT_EQ(ce::to_json(rep)["cells"].size(), 21u);
}

TEST(Sensitivity, ThresholdsAreFractionsOfScale) {
  const ce::SensitivityConfig cfg;
  EXPECT_EQ(ce::classify_sensitivity(20.0, 100.0, cfg), ce::Sensitivity::kSensitive);
  EXPECT_EQ(ce::classify_sensitivity(19.9, 100.0, cfg), ce::Sensitivity::kPartial);
  EXPECT_EQ(ce::classify_sensitivity(0.05, 1.0, cfg), ce::Sensitivity::kPartial);
  EXPECT_EQ(ce::classify_sensitivity(0.049, 1.0, cfg), ce::Sensitivity::kInsensitive);
  EXPECT_EQ(ce::classify_sensitivity(-30.0, 100.0, cfg), ce::Sensitivity::kInsensitive);
}

TEST(Sensitivity, MissingMaterialIsRecordedNotDropped) {
  const SensitivityFixture fx;
  ce::PerturbationTable partial = fx.table;
  partial.erase(fx.corpus.instances[0].id);
  ce::SensitivityInputs in{&fx.corpus, &fx.base, &partial, nullptr};
  const auto rep = ce::sensitivity_analysis(in, {ce::ErrorCategory::kNeutralization}, {ce::bleu_metric()}, {});
  const auto& c = rep.cell("bleu", ce::ErrorCategory::kNeutralization);
  EXPECT_EQ(c.items.size(), fx.corpus.size() - 1);
  ASSERT_EQ(c.errors.size(), 1u);
  EXPECT_EQ(c.errors[0].first, fx.corpus.instances[0].id);
}
