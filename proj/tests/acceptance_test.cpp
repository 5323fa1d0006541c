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

// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails or overruns its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "oracles.hpp"
#include "support.hpp"

namespace ce = culteval;
namespace ts = testing_support;
using nlohmann::json;

namespace {

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string random_text(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e", " ", " ", ".", ",", "!",
                                                    "中", "文", "。", "、", "x", "y"};
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += alphabet[pick(rng)];
  return s;
}

bool has_token(const std::string& s) { return !oracle::tokens(s).empty(); }

// 1. Gate and aggregation, exhaustively.
void gate_exhaustive() {
  const std::vector<ce::QualityWeights> settings = {ce::QualityWeights(), ce::QualityWeights::uniform({0.5, 0.5}),
                                                    ce::QualityWeights::uniform({1.0, 0.0})};
  int cases = 0;
  for (std::size_t w = 0; w < settings.size(); ++w) {
    for (bool valid : {false, true}) {
      for (int f = 1; f <= 5; ++f) {
        for (int c = 1; c <= 5; ++c) {
          // Protocol alternates so both weight rows of the default setting are used.
          const auto p = (f + c) % 2 ? ce::Protocol::kFactCentric : ce::Protocol::kStyleCentric;
          const auto got = ce::aggregate(valid, f, c, settings[w], p).final_score;
          const auto& wt = settings[w][p];
          const double want = wt.alpha * (f - 1) / 4.0 + wt.beta * (c - 1) / 4.0;
          if (!valid) require(got == 0.0, "invalid case scored " + fmt(got));
          else require(std::abs(got - want) <= 1e-12, "valid case f=" + std::to_string(f) + " c=" + std::to_string(c));
          ++cases;
        }
      }
    }
  }
  require(cases == 150, "case count " + std::to_string(cases));
}

// 2. Surface metrics against brute-force oracles.
void surface_oracles() {
  std::mt19937_64 rng(7);
  int identity = 0;
  while (identity < 50) {
    const auto h = random_text(rng, 1, 40);
    if (!has_token(h)) continue;
    require(std::abs(ce::bleu(h, {h}).value - 100.0) < 1e-9, "BLEU(h,h) != 100 for \"" + h + "\"");
    require(std::abs(ce::chrf_pp(h, h).value - 100.0) < 1e-9, "chrF++(h,h) != 100 for \"" + h + "\"");
    ++identity;
  }
  int pairs = 0;
  while (pairs < 100) {
    const auto h = random_text(rng, 1, 25), r = random_text(rng, 1, 25);
    if (!has_token(h) || !has_token(r)) continue;
    const double b = ce::bleu(h, {r}).value, bo = oracle::bleu(h, r);
    require(std::abs(b - bo) <= 1e-6, "BLEU " + fmt(b) + " vs oracle " + fmt(bo) + " on \"" + h + "\" / \"" + r + "\"");
    const double c = ce::chrf_pp(h, r).value, co = oracle::chrf_pp(h, r);
    require(std::abs(c - co) <= 1e-6, "chrF++ " + fmt(c) + " vs oracle " + fmt(co) + " on \"" + h + "\" / \"" + r + "\"");
    ++pairs;
  }
}

// 3. Correlation against definitional oracles.
void correlation_oracles() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(10, 200);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> small(0, 6);
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<std::size_t>(size(rng));
    std::vector<double> x(n), y(n);
    const bool ties = k % 3 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ties ? small(rng) : u(rng);
      y[i] = ties ? small(rng) + 0.5 * x[i] : u(rng) + 0.3 * x[i];
    }
    const double p = ce::pearson(x, y), po = oracle::pearson(x, y);
    require(std::abs(p - po) <= 1e-9, "pearson " + fmt(p) + " vs " + fmt(po));
    const double s = ce::spearman(x, y), so = oracle::spearman(x, y);
    require(std::abs(s - so) <= 1e-9, "spearman " + fmt(s) + " vs " + fmt(so));
  }
  std::vector<double> a, b;
  for (int i = 0; i < 50; ++i) {
    a.push_back(i * 0.37);
    b.push_back(std::exp(i * 0.1));
  }
  require(ce::spearman(a, b) == 1.0, "monotone rho = " + fmt(ce::spearman(a, b)));
  require(ce::spearman({1, 2, 2, 3}, {1, 3, 3, 5}) == 1.0, "tie fixture rho != 1");
}

// 4. Primary label over every non-empty label set.
void priority_rule() {
  const auto& all = ce::kAllErrors;
  int subsets = 0;
  for (unsigned mask = 1; mask < (1u << all.size()); ++mask) {
    ce::ErrorSet labels;
    std::set<std::string> names;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask & (1u << i)) {
        labels.insert(all[i]);
        names.insert(std::string(ce::to_string(all[i])));
      }
    }
    const auto got = ce::assign_primary(labels);
    require(got.has_value() && std::string(ce::to_string(*got)) == oracle::primary(names),
            "subset mask " + std::to_string(mask));
    ++subsets;
  }
  require(subsets == 127, "subset count");
  require(ce::assign_primary({ce::ErrorCategory::kLiteralization, ce::ErrorCategory::kNeutralization}) ==
              ce::ErrorCategory::kLiteralization,
          "{Literalization, Neutralization}");
}

// 5. Category ratios on a synthetic corpus of the benchmark's size.
void category_ratios() {
  const std::vector<std::pair<ce::CulturalCategory, std::size_t>> counts = {
      {ce::CulturalCategory::kLinguistic, 2512}, {ce::CulturalCategory::kSocial, 2399},
      {ce::CulturalCategory::kMaterial, 1594},   {ce::CulturalCategory::kEcological, 833},
      {ce::CulturalCategory::kReligious, 621}};
  const std::vector<double> want = {31.6, 30.1, 20.0, 10.5, 7.8};
  ce::Corpus corpus;
  std::size_t id = 0;
  for (const auto& [cat, n] : counts) {
    for (std::size_t i = 0; i < n; ++i) {
      ce::Instance inst;
      inst.id = "g" + std::to_string(id++);
      inst.source_text = "他说这件事得从长计议。";
      inst.source_span = {5, 9};
      inst.reference_text = "He said the matter needed careful thought.";
      inst.reference_span = ce::Span{20, 41};
      inst.category = cat;
      inst.explication = "To plan with patience over a longer horizon.";
      corpus.instances.push_back(std::move(inst));
    }
  }
  const auto stats = ce::corpus_stats(corpus);
  require(stats.total.count == 7959, "total " + std::to_string(stats.total.count));
  require(stats.rows.size() == 5, "row count");
  for (std::size_t i = 0; i < 5; ++i) {
    require(stats.rows[i].label == ce::to_string(counts[i].first), "row order at " + std::to_string(i));
    require(stats.rows[i].count == counts[i].second, "count of " + stats.rows[i].label);
    require(std::abs(stats.rows[i].ratio - want[i]) <= 0.05, stats.rows[i].label + " ratio " + fmt(stats.rows[i].ratio));
  }
}

std::string serialize(const ce::SystemEvaluation& ev, const ce::EvalConfig& cfg) {
  std::string out;
  for (const auto& s : ev.scores) out += ce::to_json(s, ev.report.system_id, cfg).dump() + "\n";
  out += ce::to_json(ev.report).dump(2) + "\n";
  return out;
}

// 6. End-to-end determinism and the hand-computed fixture.
void deterministic_acre() {
  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  const auto hyps = ce::load_hypotheses(ts::data("sample/hypotheses.jsonl"));
  std::vector<std::string> runs;
  for (std::size_t par : {1u, 8u}) {
    auto judge = ts::mock_client("sample/mock_judge.json");
    std::string all;
    for (const auto* sys : {"sys_a", "sys_b"}) {
      ce::EvalConfig cfg;
      cfg.parallelism = par;
      const auto ev = ce::evaluate_system(corpus, ts::of_system(hyps, sys), cfg, judge);
      require(ev.report.n_failed == 0, std::string(sys) + " had failures");
      all += serialize(ev, cfg);
    }
    runs.push_back(all);
  }
  require(runs[0] == runs[1], "parallelism 1 and 8 outputs differ");

  const auto hand = ce::load_corpus(ts::data("fixtures/hand/corpus.jsonl"));
  const auto hand_hyps = ce::load_hypotheses(ts::data("fixtures/hand/hypotheses.jsonl"));
  const auto expected = json::parse(ce::io::read_file(ts::data("fixtures/hand/expected.json")));
  auto judge = ts::mock_client("fixtures/hand/mock.json");
  ce::EvalConfig cfg;
  cfg.weights = ce::QualityWeights::uniform({0.5, 0.5});
  const auto ev = ce::evaluate_system(hand, hand_hyps, cfg, judge);
  require(ev.report.overall.validity_rate == 0.75, "validity_rate " + fmt(ev.report.overall.validity_rate));
  require(std::abs(ev.report.overall.mean_acre - 0.75) < 1e-12, "mean_acre " + fmt(ev.report.overall.mean_acre));
  require(std::abs(ev.report.overall.mean_acre - expected["full"]["mean_acre"].get<double>()) < 1e-12,
          "mean_acre differs from expected.json");
}

// 7. Gate ablation direction.
void ablation_direction() {
  const auto corpus = ce::load_corpus(ts::data("fixtures/ablation/corpus.jsonl"));
  const auto hyps = ce::load_hypotheses(ts::data("fixtures/ablation/hypotheses.jsonl"));
  const auto judgments = ce::load_judgments(ts::data("fixtures/ablation/judgments.jsonl"));
  auto judge = ts::mock_client("fixtures/ablation/mock.json");
  std::map<ce::AblationArm, double> r;
  for (auto arm : {ce::AblationArm::kFull, ce::AblationArm::kNoGate}) {
    const auto ev = ce::evaluate_ablation(corpus, hyps, arm, {}, judge);
    require(ev.report.n_failed == 0, "judge failures in arm " + std::string(ce::to_string(arm)));
    ce::MetricTable table;
    for (const auto& s : ev.scores) table["acre"][{s.instance_id, "sys_x"}] = s.final_score;
    r[arm] = ce::correlate_metrics(table, judgments).front().pearson_r;
  }
  require(r[ce::AblationArm::kFull] > r[ce::AblationArm::kNoGate],
          "full r " + fmt(r[ce::AblationArm::kFull]) + " <= no_gate r " + fmt(r[ce::AblationArm::kNoGate]));
}

// 8. Sensitivity asymmetry.
void sensitivity_asymmetry() {
  const auto corpus = ce::load_corpus(ts::data("fixtures/sensitivity/corpus.jsonl"));
  std::map<std::string, std::string> base;
  for (const auto& h : ce::load_hypotheses(ts::data("fixtures/sensitivity/hypotheses.jsonl"))) base[h.instance_id] = h.text;
  const auto table = ce::load_perturbation_table(ts::data("fixtures/sensitivity/perturbations.json"));
  const auto expected = json::parse(ce::io::read_file(ts::data("fixtures/sensitivity/expected.json")));
  auto judge = ts::mock_client("fixtures/sensitivity/mock.json");
  ce::SensitivityInputs in{&corpus, &base, &table, nullptr};
  const std::vector<ce::ErrorCategory> errors = {ce::ErrorCategory::kOmission, ce::ErrorCategory::kOverInterpretation,
                                                 ce::ErrorCategory::kSenseError};
  const auto report = ce::sensitivity_analysis(in, errors, {ce::bleu_metric(), ce::acre_metric(judge, {})}, {});

  const auto& om = report.cell("bleu", ce::ErrorCategory::kOmission);
  require(om.errors.empty() && om.items.size() == corpus.size(), "omission cell incomplete");
  for (std::size_t i = 0; i < om.items.size(); ++i) {
    require(om.items[i].delta > 0.0, "omission BLEU delta <= 0 on " + om.items[i].instance_id);
    const double want = expected["bleu_omission_deltas"][i].get<double>();
    require(std::abs(om.items[i].delta - want) < 1e-9, "omission delta differs from the Python oracle");
  }
  const auto& oi = report.cell("bleu", ce::ErrorCategory::kOverInterpretation);
  require(oi.items.size() == corpus.size(), "over-interpretation cell incomplete");
  require(oi.sensitivity == ce::Sensitivity::kInsensitive,
          "over-interpretation BLEU classified " + std::string(ce::to_string(*oi.sensitivity)) + " (mean " +
              fmt(*oi.mean_delta) + ")");
  const auto& se = report.cell("acre", ce::ErrorCategory::kSenseError);
  require(se.errors.empty() && se.items.size() == corpus.size(), "ACRE sense-error cell incomplete");
  for (const auto& d : se.items) {
    require(d.base > 0.0, "ACRE base is zero on " + d.instance_id);
    require(d.perturbed == 0.0 && d.delta == d.base, "ACRE delta != base on " + d.instance_id);
  }
}

// 9. Golden renders and ablation prompt contents.
void prompt_fidelity() {
  const auto bindings = json::parse(ce::io::read_file(ts::data("golden/bindings.json")));
  const auto& lib = *ts::prompts();
  std::size_t n = 0;
  for (const auto& info : ce::template_registry()) {
    const std::string name(info.name);
    require(bindings.contains(name), "no golden bindings for " + name);
    const auto rendered = lib.render(info.id, bindings[name].get<ce::Bindings>()).text();
    require(rendered == ce::io::read_file(ts::data("golden/" + name + ".txt")), "render of " + name + " differs");
    ++n;
  }
  require(n >= 8, "fewer than eight templates");

  const auto corpus = ce::load_corpus(ts::data("sample/corpus.jsonl"));
  // sys_b, because sys_a's hypotheses are the references verbatim.
  const auto hyps = ts::of_system(ce::load_hypotheses(ts::data("sample/hypotheses.jsonl")), "sys_b");
  auto judge = ts::mock_client("sample/mock_judge.json");
  std::map<std::string, const ce::Instance*> by_id;
  for (const auto& inst : corpus.instances) by_id[inst.id] = &inst;

  std::size_t fidelity_prompts = 0, validator_prompts = 0;
  for (const auto& s : ce::evaluate_ablation(corpus, hyps, ce::AblationArm::kNoReference, {}, judge).scores) {
    for (const auto& t : s.transcripts) {
      if (t.request.template_id == ce::TemplateId::kFidelity) throw Failure{"no_reference used the anchored template"};
      if (t.request.template_id != ce::TemplateId::kFidelityNoReference) continue;
      require(t.rendered_prompt.find(by_id.at(s.instance_id)->reference_text) == std::string::npos,
              "reference text in no_reference prompt for " + s.instance_id);
      ++fidelity_prompts;
    }
  }
  for (const auto& s : ce::evaluate_ablation(corpus, hyps, ce::AblationArm::kNoExplication, {}, judge).scores) {
    for (const auto& t : s.transcripts) {
      if (t.request.template_id != ce::TemplateId::kValidator) continue;
      require(t.rendered_prompt.find(by_id.at(s.instance_id)->explication) == std::string::npos,
              "explication in no_explication prompt for " + s.instance_id);
      ++validator_prompts;
    }
  }
  require(fidelity_prompts > 0 && validator_prompts == corpus.size(), "too few transcripts inspected");
}

// 10. Parser totality under fuzzing.
void parser_totality() {
  std::mt19937_64 rng(13);
  static const std::vector<std::string> pieces = {
      "Decision:", "decision :", "DECISION", "Score:", "score:", "**Score:**", "VALID", "INVALID", "valid", "invalid",
      "NOT", " ", "\n", "\r\n", "\t", "[", "]", "/", "/5", ".", "-", "#", "0", "1", "3", "5", "6", "10", "999",
      "-2", "Reasoning:", "x", "é", "中", "\xff", "\x00", "{\"score\": 4}", ":", "VALIDITY", "IN VALID"};
  std::uniform_int_distribution<std::size_t> count(0, 12), pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  int parsed = 0;
  for (int k = 0; k < 10000; ++k) {
    std::string s;
    const auto n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (k % 4 == 0) s += static_cast<char>(byte(rng));
      else s += pieces[pick(rng)];
    }
    try {
      const auto v = ce::parse_validity(s);
      require(v.valid == true || v.valid == false, "validity out of codomain");
      ++parsed;
    } catch (const ce::ParseError&) {
    } catch (const std::exception& e) {
      throw Failure{std::string("parse_validity threw a non-parse error: ") + e.what()};
    }
    try {
      const auto v = ce::parse_score(s);
      require(v.score >= 1 && v.score <= 5, "score out of range: " + std::to_string(v.score));
      ++parsed;
    } catch (const ce::ParseError&) {
    } catch (const std::exception& e) {
      throw Failure{std::string("parse_score threw a non-parse error: ") + e.what()};
    }
  }
  require(parsed > 0, "fuzzer never produced a parseable answer");
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gate aggregation exhaustive", 1, gate_exhaustive},
      {2, "surface metric oracles", 10, surface_oracles},
      {3, "correlation oracles", 5, correlation_oracles},
      {4, "error priority rule", 1, priority_rule},
      {5, "category ratios on synthetic counts", 5, category_ratios},
      {6, "deterministic end-to-end ACRE", 30, deterministic_acre},
      {7, "gate ablation direction", 30, ablation_direction},
      {8, "sensitivity asymmetry", 60, sensitivity_asymmetry},
      {9, "prompt fidelity", 5, prompt_fidelity},
      {10, "parser totality", 10, parser_totality},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs > c.budget_s) {
      ok = false;
      detail = "over budget";
    }
    std::printf("%s criterion %2d: %-38s %8.3fs (budget %gs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, detail.empty() ? "" : "  ", detail.c_str());
    failed += !ok;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
