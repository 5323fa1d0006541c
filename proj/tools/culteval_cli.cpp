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


// culteval command-line driver. Every subcommand writes its outputs and a
// manifest.json into a run directory (default runs/<command>-<run id>).
// Exit status: 0 clean, 2 when some items failed softly, 1 on a hard error.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "culteval/culteval.hpp"

namespace ce = culteval;
using nlohmann::json;

namespace {

struct Common {
  std::string out;
  std::size_t parallelism = 1;
  std::uint64_t seed = 0;
  std::string model = "judge";
  std::string assets;
  std::string cache;
  std::string log_level = "info";
  int retries = 3;
};

// State for one invocation.
class Run {
 public:
  Run(std::string command, const Common& common, CLI::App* sub) : common_(common) {
    manifest_.command = std::move(command);
    manifest_.started_at = ce::utc_timestamp();
    manifest_.config["seed"] = common.seed;
    manifest_.config["parallelism"] = common.parallelism;
    manifest_.config["model"] = common.model;
    if (!common.cache.empty()) manifest_.config["cache"] = common.cache;
    for (const auto* opt : sub->get_options()) {
      const auto name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      auto values = opt->reduced_results();
      if (values.empty() && !opt->get_default_str().empty()) values = {opt->get_default_str()};
      if (values.empty()) continue;
      manifest_.config[name] = values.size() == 1 ? json(values.front()) : json(values);
    }
  }

  void input(const std::string& path) {
    if (!path.empty()) manifest_.add_input(path);
  }

  const ce::PromptLibrary& prompts() {
    if (!prompts_) {
      prompts_ = std::make_shared<const ce::PromptLibrary>(
          ce::PromptLibrary::load(common_.assets.empty() ? ce::default_asset_dir() : std::filesystem::path(common_.assets)));
      manifest_.assets = prompts_->hashes();
    }
    return *prompts_;
  }

  std::shared_ptr<ce::JudgeClient> judge(const std::string& descriptor) {
    if (descriptor.empty()) throw ce::InputError("this command needs --judge");
    prompts();
    if (descriptor.starts_with("mock:")) input(descriptor.substr(5));
    ce::JudgeOptions opt;
    opt.model_id = common_.model;
    opt.retry.max_retries = common_.retries;
    auto cache = common_.cache.empty() ? std::make_shared<ce::ResponseCache>()
                                       : std::make_shared<ce::ResponseCache>(common_.cache);
    auto client = std::make_shared<ce::JudgeClient>(prompts_, ce::make_backend(descriptor, common_.model), opt, cache);
    manifest_.judge_model = common_.model;
    manifest_.backend = client->backend_description();
    return client;
  }

  // Opens the run directory. Inputs must be registered before this.
  void open() {
    std::filesystem::path dir = common_.out;
    if (dir.empty()) dir = std::filesystem::path("runs") / (manifest_.command + "-" + manifest_.run_id());
    dir_ = std::make_unique<ce::RunDirectory>(dir);
    spdlog::info("run {} -> {}", manifest_.run_id(), dir.string());
  }

  // JSON reports carry the run id and point at the manifest.
  void report(const std::string& name, json body) {
    json j = {{"run_id", manifest_.run_id()}, {"manifest", "manifest.json"}};
    for (auto& [k, v] : body.items()) j[k] = std::move(v);
    write(name, ce::io::dump_report(j));
  }

  void table(const std::string& name, const std::string& text) {
    write(name, "# run " + manifest_.run_id() + "\n" + text);
    std::cout << text;
  }

  void jsonl(const std::string& name, const std::vector<json>& rows) { write(name, ce::io::to_jsonl(rows)); }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_->path() / name;
    ce::io::write_file(path, content);
    manifest_.outputs.push_back(name);
  }

  void soft_failures(std::size_t n) { soft_ += n; }

  int finish() {
    const int status = soft_ > 0 ? 2 : 0;
    if (soft_ > 0) spdlog::warn("{} item(s) failed; see the run outputs", soft_);
    manifest_.finished_at = ce::utc_timestamp();
    manifest_.exit_status = status;
    ce::io::write_file(dir_->path() / "manifest.json", ce::io::dump_report(manifest_.to_json()));
    return status;
  }

  std::size_t parallelism() const { return common_.parallelism; }

 private:
  const Common& common_;
  ce::RunManifest manifest_;
  std::shared_ptr<const ce::PromptLibrary> prompts_;
  std::unique_ptr<ce::RunDirectory> dir_;
  std::size_t soft_ = 0;
};

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      auto comma = item.find(',', start);
      if (comma == std::string::npos) comma = item.size();
      auto piece = ce::text::trim(std::string_view(item).substr(start, comma - start));
      if (!piece.empty()) out.push_back(piece);
      start = comma + 1;
    }
  }
  return out;
}

ce::PromptMode mode_of(const std::string& s) {
  auto m = ce::parse_prompt_mode(s);
  if (!m) throw ce::InputError("--mode must be zero_shot or one_shot");
  return *m;
}

std::vector<ce::Hypothesis> for_system(const std::vector<ce::Hypothesis>& all, const std::string& system) {
  std::vector<ce::Hypothesis> out;
  for (const auto& h : all) {
    if (h.system_id == system) out.push_back(h);
  }
  return out;
}

json transcript_rows(const std::vector<ce::JudgeTranscript>& ts) {
  json rows = json::array();
  for (const auto& t : ts) rows.push_back(ce::to_json(t));
  return rows;
}

std::vector<json> as_rows(const json& arr) { return {arr.begin(), arr.end()}; }

// ---------------------------------------------------------------------------
// ACRE shared by `acre` and `ablate`

struct AcreArgs {
  std::string corpus, hyps, judge, weights = "A=0.7:0.3,B=0.6:0.4", routing = "static", mode = "zero_shot";
};

void add_acre_options(CLI::App* sub, AcreArgs& a) {
  sub->add_option("--corpus", a.corpus, "Corpus JSON-Lines file")->required()->check(CLI::ExistingFile);
  sub->add_option("--hyps", a.hyps, "Hypotheses JSON-Lines file")->required()->check(CLI::ExistingFile);
  sub->add_option("--judge", a.judge, "Judge backend: mock:<script>, echo, or an http(s) chat endpoint")->required();
  sub->add_option("--weights", a.weights, "Quality weights, e.g. A=0.7:0.3,B=0.6:0.4 or 0.5:0.5")->capture_default_str();
  sub->add_option("--routing", a.routing, "Protocol routing: static or judge")
      ->check(CLI::IsMember({"static", "judge"}))
      ->capture_default_str();
  sub->add_option("--mode", a.mode, "Hypothesis prompt mode to evaluate")
      ->check(CLI::IsMember({"zero_shot", "one_shot"}))
      ->capture_default_str();
}

struct ArmOutcome {
  std::vector<ce::SystemReport> reports;
  std::vector<json> score_rows;  // {instance_id, system_id, metric, value}
  std::vector<json> detail_rows;
  std::vector<ce::JudgeTranscript> transcripts;
  std::size_t failed = 0;
};

ArmOutcome run_acre(const ce::Corpus& corpus, const std::vector<ce::Hypothesis>& hyps, ce::EvalConfig config,
                    ce::JudgeClient& judge) {
  ArmOutcome out;
  for (const auto& system : ce::system_ids(hyps)) {
    auto eval = ce::evaluate_system(corpus, for_system(hyps, system), config, judge);
    for (const auto& s : eval.scores) {
      out.detail_rows.push_back(ce::to_json(s, system, config));
      if (s.ok()) {
        out.score_rows.push_back({{"instance_id", s.instance_id},
                                  {"system_id", system},
                                  {"metric", "acre"},
                                  {"value", s.final_score}});
      }
      for (const auto& t : s.transcripts) out.transcripts.push_back(t);
    }
    out.failed += eval.report.n_failed;
    out.reports.push_back(std::move(eval.report));
  }
  return out;
}

ce::EvalConfig eval_config(const AcreArgs& a, std::size_t parallelism) {
  ce::EvalConfig c;
  c.weights = ce::parse_weights(a.weights);
  c.routing = a.routing == "judge" ? ce::RoutingMode::kJudge : ce::RoutingMode::kStatic;
  c.mode = mode_of(a.mode);
  c.parallelism = parallelism;
  return c;
}

json reports_json(const std::vector<ce::SystemReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(ce::to_json(r));
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("culteval");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Culture-aware translation evaluation harness"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common common;
  app.add_option("--out", common.out, "Run directory (default runs/<command>-<run id>)");
  app.add_option("--parallelism", common.parallelism, "Concurrent judge/scorer requests")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_option("--seed", common.seed, "Recorded in the manifest; all components are deterministic")
      ->capture_default_str();
  app.add_option("--model", common.model, "Judge model id sent to chat endpoints")->capture_default_str();
  app.add_option("--assets", common.assets, "Prompt asset directory (default: bundled assets or $CULTEVAL_ASSETS)");
  app.add_option("--cache", common.cache, "Directory for the judge response cache");
  app.add_option("--retries", common.retries, "Retries on an unavailable backend")->check(CLI::Range(0, 20))->capture_default_str();
  app.add_option("--log-level", common.log_level, "trace, debug, info, warn, error, off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();

  std::function<int()> action;

  // stats ------------------------------------------------------------------
  std::string stats_corpus;
  auto* stats = app.add_subcommand("stats", "Corpus statistics by cultural category");
  stats->add_option("--corpus", stats_corpus, "Corpus JSON-Lines file")->required()->check(CLI::ExistingFile);
  stats->callback([&] {
    action = [&] {
      Run run("stats", common, stats);
      run.input(stats_corpus);
      const auto corpus = ce::load_corpus(stats_corpus);
      const auto s = ce::corpus_stats(corpus);
      run.open();
      run.report("stats.json", {{"corpus", corpus.metadata.name}, {"stats", ce::to_json(s)}});
      run.table("stats.txt", ce::format_stats_table(s));
      return run.finish();
    };
  });

  // filter -----------------------------------------------------------------
  std::string filter_corpus, filter_judge;
  std::vector<std::string> filter_rules;
  std::size_t min_context = 4;
  auto* filter = app.add_subcommand("filter", "Apply the instance exclusion rules");
  filter->add_option("--corpus", filter_corpus, "Corpus JSON-Lines file")->required()->check(CLI::ExistingFile);
  filter->add_option("--rules", filter_rules, "salience, context, alignment (comma-separated)")->delimiter(',');
  filter->add_option("--min-context", min_context, "Minimum context characters for the context rule")->capture_default_str();
  filter->add_option("--judge", filter_judge, "Judge backend for judge-backed rules");
  filter->callback([&] {
    action = [&] {
      Run run("filter", common, filter);
      run.input(filter_corpus);
      ce::FilterConfig cfg;
      cfg.min_context_chars = min_context;
      for (const auto& r : split_list(filter_rules)) {
        if (r == "salience") cfg.salience = true;
        else if (r == "context") cfg.context = true;
        else if (r == "alignment") cfg.alignment = true;
        else throw ce::InputError("--rules: unknown rule '" + r + "'");
      }
      std::shared_ptr<ce::JudgeClient> judge;
      if (!filter_judge.empty()) judge = run.judge(filter_judge);
      const auto corpus = ce::load_corpus(filter_corpus);
      auto result = ce::filter_instances(corpus, cfg, judge.get());
      run.open();
      std::map<std::string, std::size_t> counts;
      std::vector<json> rejected;
      for (const auto& r : result.rejected) {
        counts[std::string(ce::to_string(r.reason))]++;
        rejected.push_back({{"id", r.id}, {"reason", ce::to_string(r.reason)}});
      }
      run.write("corpus.jsonl", ce::serialize_corpus(result.kept));
      run.jsonl("rejected.jsonl", rejected);
      if (!result.transcripts.empty()) run.jsonl("transcripts.jsonl", as_rows(transcript_rows(result.transcripts)));
      run.report("filter.json", {{"input", corpus.size()}, {"kept", result.kept.size()}, {"rejected_by_rule", counts}});
      std::string text = "kept " + std::to_string(result.kept.size()) + " of " + std::to_string(corpus.size()) + "\n";
      for (const auto& [k, v] : counts) text += "  " + k + ": " + std::to_string(v) + "\n";
      run.table("filter.txt", text);
      return run.finish();
    };
  });

  // mine -------------------------------------------------------------------
  std::vector<std::string> mine_inputs;
  std::string mine_format = "tsv", mine_judge;
  std::size_t chunk_chars = 4000;
  auto* mine = app.add_subcommand("mine", "Extract culture-loaded candidates from raw bilingual text");
  mine->add_option("--input", mine_inputs, "Raw bilingual text file(s)")->required()->check(CLI::ExistingFile);
  mine->add_option("--format", mine_format, "tsv or interleaved")
      ->check(CLI::IsMember({"tsv", "interleaved"}))
      ->capture_default_str();
  mine->add_option("--chunk-chars", chunk_chars, "Character cap per chunk")->check(CLI::PositiveNumber)->capture_default_str();
  mine->add_option("--judge", mine_judge, "Judge backend")->required();
  mine->callback([&] {
    action = [&] {
      Run run("mine", common, mine);
      for (const auto& f : mine_inputs) run.input(f);
      auto judge = run.judge(mine_judge);
      ce::ChunkOptions opt{*ce::parse_raw_format(mine_format), chunk_chars};
      std::vector<ce::RawChunk> chunks;
      for (const auto& f : mine_inputs) {
        for (auto& c : ce::chunk_raw_text(ce::io::read_file(f), f, opt)) chunks.push_back(std::move(c));
      }
      auto cands = ce::extract_all(chunks, *judge, run.parallelism());
      run.open();
      std::vector<json> rows;
      for (const auto& c : cands) rows.push_back(ce::to_json(c));
      run.jsonl("candidates.jsonl", rows);
      run.report("mine.json", {{"chunks", chunks.size()}, {"candidates", cands.size()}});
      run.table("mine.txt", std::to_string(cands.size()) + " candidates from " + std::to_string(chunks.size()) + " chunks\n");
      return run.finish();
    };
  });

  // classify ---------------------------------------------------------------
  std::string cls_candidates, cls_judge, cls_sidecar, cls_prefix = "m", cls_domain = "literary", cls_name = "mined";
  bool machine_explications = false;
  auto* classify = app.add_subcommand("classify", "Assign cultural categories and assemble a corpus");
  classify->add_option("--candidates", cls_candidates, "Candidates JSON-Lines file")->required()->check(CLI::ExistingFile);
  classify->add_option("--judge", cls_judge, "Judge backend")->required();
  classify->add_option("--explications", cls_sidecar, "Sidecar JSON: term -> {explication, standard_equivalent?, target_term?}")
      ->check(CLI::ExistingFile);
  classify->add_flag("--machine-explications", machine_explications, "Generate explications with the judge");
  classify->add_option("--id-prefix", cls_prefix, "Prefix for generated ids")->capture_default_str();
  classify->add_option("--domain", cls_domain, "literary or institutional")
      ->check(CLI::IsMember({"literary", "institutional"}))
      ->capture_default_str();
  classify->add_option("--name", cls_name, "Corpus name recorded in metadata")->capture_default_str();
  classify->callback([&] {
    action = [&] {
      Run run("classify", common, classify);
      run.input(cls_candidates);
      run.input(cls_sidecar);
      if (!machine_explications && cls_sidecar.empty()) {
        throw ce::InputError("classify needs --explications or --machine-explications");
      }
      auto judge = run.judge(cls_judge);
      auto cands = ce::load_candidates(cls_candidates);
      std::vector<std::optional<ce::Classification>> labels(cands.size());
      std::vector<std::string> errors(cands.size());
      ce::parallel_for(cands.size(), run.parallelism(), [&](std::size_t i) {
        try {
          labels[i] = ce::classify_candidate(cands[i], *judge);
        } catch (const ce::JudgeError& e) {
          errors[i] = e.what();
        }
      });
      std::vector<ce::Candidate> labeled;
      std::vector<json> failures;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!labels[i]) {
          failures.push_back({{"focus_term", cands[i].focus_term}, {"origin", cands[i].origin}, {"error", errors[i]}});
          continue;
        }
        cands[i].category = labels[i]->category;
        cands[i].reason = labels[i]->reason;
        labeled.push_back(cands[i]);
      }
      std::optional<ce::Sidecar> sidecar;
      if (!cls_sidecar.empty()) sidecar = ce::load_sidecar(cls_sidecar);
      ce::BuildOptions b;
      b.source = machine_explications ? ce::ExplicationSource::kJudge : ce::ExplicationSource::kManualFile;
      b.sidecar = sidecar ? &*sidecar : nullptr;
      b.judge = judge.get();
      b.id_prefix = cls_prefix;
      b.domain = *ce::parse_domain(cls_domain);
      b.metadata.name = cls_name;
      auto corpus = ce::build_corpus(labeled, b);
      run.open();
      std::vector<json> rows;
      for (const auto& c : labeled) rows.push_back(ce::to_json(c));
      run.jsonl("labeled.jsonl", rows);
      run.write("corpus.jsonl", ce::serialize_corpus(corpus));
      if (!failures.empty()) run.jsonl("failures.jsonl", failures);
      run.soft_failures(failures.size());
      run.report("classify.json", {{"candidates", cands.size()}, {"instances", corpus.size()}, {"failed", failures.size()}});
      run.table("classify.txt", ce::format_stats_table(ce::corpus_stats(corpus)));
      return run.finish();
    };
  });

  // translate --------------------------------------------------------------
  std::string tr_corpus, tr_backend, tr_system, tr_mode = "zero_shot", tr_demo;
  auto* translate = app.add_subcommand("translate", "Generate hypotheses from a translation backend");
  translate->add_option("--corpus", tr_corpus, "Corpus JSON-Lines file")->required()->check(CLI::ExistingFile);
  translate->add_option("--backend", tr_backend, "mock:<script>, echo, nmt:<url>, or an http(s) chat endpoint")->required();
  translate->add_option("--system", tr_system, "System id recorded on every hypothesis")->required();
  translate->add_option("--mode", tr_mode, "zero_shot or one_shot")
      ->check(CLI::IsMember({"zero_shot", "one_shot"}))
      ->capture_default_str();
  translate->add_option("--demo", tr_demo, "Held-out demonstration JSON {id, source, translation}")->check(CLI::ExistingFile);
  translate->callback([&] {
    action = [&] {
      Run run("translate", common, translate);
      run.input(tr_corpus);
      run.input(tr_demo);
      auto client = run.judge(tr_backend);
      const auto corpus = ce::load_corpus(tr_corpus);
      ce::TranslationRun tr{tr_system, tr_backend, mode_of(tr_mode), std::nullopt, run.parallelism()};
      if (!tr_demo.empty()) tr.demo = ce::load_demonstration(tr_demo);
      auto result = ce::translate_corpus(corpus, tr, *client);
      run.open();
      std::vector<json> rows, failures;
      for (const auto& h : result.hypotheses) rows.push_back(ce::to_json(h));
      for (const auto& f : result.failures) failures.push_back({{"instance_id", f.instance_id}, {"error", f.message}});
      run.jsonl("hypotheses.jsonl", rows);
      run.jsonl("transcripts.jsonl", as_rows(transcript_rows(result.transcripts)));
      if (!failures.empty()) run.jsonl("failures.jsonl", failures);
      run.soft_failures(failures.size());
      run.report("translate.json", {{"system_id", tr_system},
                                    {"mode", ce::to_string(tr.mode)},
                                    {"instances", corpus.size()},
                                    {"translated", result.hypotheses.size()},
                                    {"failed", failures.size()}});
      run.table("translate.txt", std::to_string(result.hypotheses.size()) + " of " + std::to_string(corpus.size()) +
                                     " instances translated\n");
      return run.finish();
    };
  });

  // score ------------------------------------------------------------------
  std::string sc_corpus, sc_hyps, sc_mode = "zero_shot";
  std::vector<std::string> sc_metrics{"bleu", "chrf_pp"};
  auto* score = app.add_subcommand("score", "Surface metrics and external scorers per segment");
  score->add_option("--corpus", sc_corpus, "Corpus JSON-Lines file")->required()->check(CLI::ExistingFile);
  score->add_option("--hyps", sc_hyps, "Hypotheses JSON-Lines file")->required()->check(CLI::ExistingFile);
  score->add_option("--metrics,--metric", sc_metrics,
                    "bleu, chrf_pp, span_exact, span_normalized, or [name=]cmd:<command> / [name=]http(s)://...")
      ->delimiter(',')
      ->capture_default_str();
  score->add_option("--mode", sc_mode, "Hypothesis prompt mode")
      ->check(CLI::IsMember({"zero_shot", "one_shot"}))
      ->capture_default_str();
  score->callback([&] {
    action = [&] {
      Run run("score", common, score);
      run.input(sc_corpus);
      run.input(sc_hyps);
      const auto corpus = ce::load_corpus(sc_corpus);
      const auto mode = mode_of(sc_mode);
      std::vector<std::pair<const ce::Instance*, const ce::Hypothesis*>> segs;
      const auto all = ce::load_hypotheses(sc_hyps);
      for (const auto& system : ce::system_ids(all)) {
        for (const auto& inst : corpus.instances) {
          for (const auto& h : all) {
            if (h.system_id == system && h.mode == mode && h.instance_id == inst.id) segs.emplace_back(&inst, &h);
          }
        }
      }
      for (const auto& h : all) {
        if (!corpus.find(h.instance_id)) spdlog::warn("hypothesis for unknown instance {} ignored", h.instance_id);
      }
      std::vector<json> rows, errors;
      json summary = json::array();
      std::string text;
      for (const auto& metric : split_list(sc_metrics)) {
        std::vector<std::optional<double>> values(segs.size());
        std::vector<std::string> errs(segs.size());
        if (metric == "bleu" || metric == "chrf_pp" || metric == "span_exact" || metric == "span_normalized") {
          for (std::size_t i = 0; i < segs.size(); ++i) {
            const auto& [inst, h] = segs[i];
            try {
              if (metric == "bleu") values[i] = ce::bleu(h->text, {inst->reference_text}).value;
              else if (metric == "chrf_pp") values[i] = h->text.empty() ? 0.0 : ce::chrf_pp(h->text, inst->reference_text).value;
              else values[i] = ce::span_realized(h->text, *inst, metric == "span_exact" ? ce::SpanMatch::kExact
                                                                                         : ce::SpanMatch::kNormalized)
                                   ? 1.0 : 0.0;
            } catch (const ce::Error& e) {
              errs[i] = e.what();
            }
          }
        } else if (metric.find("cmd:") != std::string::npos || metric.find("http") != std::string::npos) {
          auto scorer = ce::register_external_scorer(metric);
          scorer.set_parallelism(run.parallelism());
          std::vector<ce::SegmentInput> batch;
          for (const auto& [inst, h] : segs) batch.push_back({inst->source_text, h->text, inst->reference_text});
          auto results = scorer.score(batch);
          for (std::size_t i = 0; i < segs.size(); ++i) {
            values[i] = results[i].score;
            errs[i] = results[i].error;
          }
        } else {
          throw ce::InputError("--metrics: unknown metric '" + metric + "'");
        }
        const auto name = metric.find('=') != std::string::npos && metric.find('=') < metric.find(':')
                              ? metric.substr(0, metric.find('='))
                              : (metric.find(':') != std::string::npos ? std::string("external") : metric);
        std::map<std::string, std::pair<double, std::size_t>> per_system;
        std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::vector<std::string>>>> corpus_in;
        for (std::size_t i = 0; i < segs.size(); ++i) {
          const auto& [inst, h] = segs[i];
          if (!values[i]) {
            errors.push_back({{"instance_id", h->instance_id}, {"system_id", h->system_id}, {"metric", name}, {"error", errs[i]}});
            continue;
          }
          rows.push_back({{"instance_id", h->instance_id}, {"system_id", h->system_id}, {"metric", name}, {"value", *values[i]}});
          auto& acc = per_system[h->system_id];
          acc.first += *values[i];
          acc.second++;
          corpus_in[h->system_id].first.push_back(h->text);
          corpus_in[h->system_id].second.push_back({inst->reference_text});
        }
        for (const auto& [system, acc] : per_system) {
          json row = {{"system_id", system}, {"metric", name}, {"n", acc.second}, {"mean", acc.first / acc.second}};
          char buf[160];
          std::snprintf(buf, sizeof buf, "%-20s %-16s %6zu %10.4f", system.c_str(), name.c_str(), acc.second,
                        acc.first / acc.second);
          text += buf;
          if (metric == "bleu") {
            const auto& [hs, rs] = corpus_in[system];
            const double cb = ce::corpus_bleu(hs, rs, 4, ce::BleuSmoothing::kNone).value;
            row["corpus_bleu"] = cb;
            std::snprintf(buf, sizeof buf, "  corpus %.4f", cb);
            text += buf;
          }
          text += "\n";
          summary.push_back(row);
        }
      }
      run.open();
      run.jsonl("scores.jsonl", rows);
      if (!errors.empty()) run.jsonl("errors.jsonl", errors);
      run.soft_failures(errors.size());
      run.report("summary.json", {{"mode", sc_mode}, {"systems", summary}, {"failed_segments", errors.size()}});
      char head[160];
      std::snprintf(head, sizeof head, "%-20s %-16s %6s %10s\n", "System", "Metric", "N", "Mean");
      run.table("summary.txt", head + text);
      return run.finish();
    };
  });

  // acre -------------------------------------------------------------------
  AcreArgs acre_args;
  auto* acre = app.add_subcommand("acre", "Gated judge evaluation per instance and per system");
  add_acre_options(acre, acre_args);
  acre->callback([&] {
    action = [&] {
      Run run("acre", common, acre);
      run.input(acre_args.corpus);
      run.input(acre_args.hyps);
      auto judge = run.judge(acre_args.judge);
      const auto corpus = ce::load_corpus(acre_args.corpus);
      const auto hyps = ce::load_hypotheses(acre_args.hyps);
      const auto config = eval_config(acre_args, run.parallelism());
      auto outcome = run_acre(corpus, hyps, config, *judge);
      run.open();
      run.jsonl("acre_scores.jsonl", outcome.detail_rows);
      run.jsonl("scores.jsonl", outcome.score_rows);
      run.jsonl("transcripts.jsonl", as_rows(transcript_rows(outcome.transcripts)));
      run.soft_failures(outcome.failed);
      run.report("report.json", {{"arm", "full"}, {"reports", reports_json(outcome.reports)}});
      run.table("report.txt", ce::format_report_table(outcome.reports));
      return run.finish();
    };
  });

  // ablate -----------------------------------------------------------------
  AcreArgs ab_args;
  std::vector<std::string> arms{"full", "no_gate", "no_routing", "no_explication", "no_reference"};
  std::string ab_judgments;
  auto* ablate = app.add_subcommand("ablate", "Evaluate ablation arms of the gated judge");
  add_acre_options(ablate, ab_args);
  ablate->add_option("--arms,--arm", arms, "full, no_gate, no_routing, no_explication, no_reference")
      ->delimiter(',')
      ->capture_default_str();
  ablate->add_option("--judgments", ab_judgments, "Human judgments; adds per-arm correlations")->check(CLI::ExistingFile);
  ablate->callback([&] {
    action = [&] {
      Run run("ablate", common, ablate);
      run.input(ab_args.corpus);
      run.input(ab_args.hyps);
      run.input(ab_judgments);
      auto judge = run.judge(ab_args.judge);
      const auto corpus = ce::load_corpus(ab_args.corpus);
      const auto hyps = ce::load_hypotheses(ab_args.hyps);
      std::vector<ce::AblationArm> selected;
      for (const auto& a : split_list(arms)) {
        auto arm = ce::parse_arm(a);
        if (!arm) throw ce::InputError("--arms: unknown arm '" + a + "'");
        selected.push_back(*arm);
      }
      std::optional<std::vector<ce::HumanJudgment>> judgments;
      if (!ab_judgments.empty()) judgments = ce::load_judgments(ab_judgments);
      const auto base = eval_config(ab_args, run.parallelism());
      std::vector<std::pair<ce::AblationArm, ArmOutcome>> outcomes;
      for (auto arm : selected) {
        auto cfg = base;
        cfg.arm = arm;
        outcomes.emplace_back(arm, run_acre(corpus, hyps, cfg, *judge));
      }
      run.open();
      json summary = json::array();
      std::vector<ce::SystemReport> all_reports;
      std::string corr_text;
      for (auto& [arm, o] : outcomes) {
        const std::string name(ce::to_string(arm));
        run.jsonl(name + "/acre_scores.jsonl", o.detail_rows);
        run.jsonl(name + "/scores.jsonl", o.score_rows);
        run.report(name + "/report.json", {{"arm", name}, {"reports", reports_json(o.reports)}});
        run.soft_failures(o.failed);
        json entry = {{"arm", name}, {"reports", reports_json(o.reports)}};
        if (judgments) {
          ce::MetricTable table;
          for (const auto& row : o.score_rows) {
            table["acre/" + name][{row["instance_id"].get<std::string>(), row["system_id"].get<std::string>()}] =
                row["value"].get<double>();
          }
          try {
            auto corr = ce::correlate_metrics(table, *judgments);
            entry["correlation"] = ce::to_json(corr.front());
            corr_text += ce::format_correlation_table(corr);
          } catch (const ce::InputError& e) {
            spdlog::warn("arm {}: correlation not computed: {}", name, e.what());
            entry["correlation"] = {{"error", e.what()}};
            run.soft_failures(1);
          }
        }
        summary.push_back(entry);
        for (auto& r : o.reports) all_reports.push_back(r);
      }
      run.report("ablation.json", {{"arms", summary}});
      run.table("ablation.txt", ce::format_report_table(all_reports) + (corr_text.empty() ? "" : "\n" + corr_text));
      return run.finish();
    };
  });

  // errors -----------------------------------------------------------------
  std::string err_annotations, err_corpus, err_hyps, err_judge, err_mode = "zero_shot";
  std::vector<std::string> err_systems;
  bool by_system = false;
  auto* errors = app.add_subcommand("errors", "Error-type distribution, optionally judge-labeled");
  errors->add_option("--annotations", err_annotations, "Annotation JSON-Lines file")->check(CLI::ExistingFile);
  errors->add_option("--corpus", err_corpus, "Corpus, for judge labeling")->check(CLI::ExistingFile);
  errors->add_option("--hyps", err_hyps, "Hypotheses, for judge labeling")->check(CLI::ExistingFile);
  errors->add_option("--judge", err_judge, "Judge backend for labeling");
  errors->add_option("--mode", err_mode, "Hypothesis prompt mode")
      ->check(CLI::IsMember({"zero_shot", "one_shot"}))
      ->capture_default_str();
  errors->add_option("--systems", err_systems, "Known system ids; others are an error")->delimiter(',');
  errors->add_flag("--by-system", by_system, "One row per system instead of pooled");
  errors->callback([&] {
    action = [&] {
      Run run("errors", common, errors);
      run.input(err_annotations);
      run.input(err_corpus);
      run.input(err_hyps);
      std::vector<ce::ErrorAnnotation> annotations;
      std::vector<json> failures;
      if (!err_annotations.empty()) {
        annotations = ce::load_annotations(err_annotations);
      } else {
        if (err_corpus.empty() || err_hyps.empty() || err_judge.empty()) {
          throw ce::InputError("errors needs --annotations, or --corpus, --hyps and --judge for judge labeling");
        }
        auto judge = run.judge(err_judge);
        const auto corpus = ce::load_corpus(err_corpus);
        const auto mode = mode_of(err_mode);
        std::vector<ce::Hypothesis> hyps;
        for (auto& h : ce::load_hypotheses(err_hyps)) {
          if (h.mode == mode && corpus.find(h.instance_id)) hyps.push_back(std::move(h));
        }
        std::vector<std::optional<ce::ErrorSet>> labels(hyps.size());
        std::vector<std::string> errs(hyps.size());
        ce::parallel_for(hyps.size(), run.parallelism(), [&](std::size_t i) {
          try {
            labels[i] = ce::classify_errors(*corpus.find(hyps[i].instance_id), hyps[i].text, *judge).value;
          } catch (const ce::JudgeError& e) {
            errs[i] = e.what();
          }
        });
        for (std::size_t i = 0; i < hyps.size(); ++i) {
          if (labels[i]) annotations.push_back({hyps[i].instance_id, hyps[i].system_id, *labels[i], "judge"});
          else failures.push_back({{"instance_id", hyps[i].instance_id}, {"system_id", hyps[i].system_id}, {"error", errs[i]}});
        }
      }
      std::set<std::string> known;
      for (const auto& s : split_list(err_systems)) known.insert(s);
      auto rows = ce::error_distribution(annotations, by_system, known.empty() ? nullptr : &known);
      run.open();
      if (err_annotations.empty()) {
        std::vector<json> out;
        for (const auto& a : annotations) out.push_back(ce::to_json(a));
        run.jsonl("annotations.jsonl", out);
      }
      if (!failures.empty()) run.jsonl("failures.jsonl", failures);
      run.soft_failures(failures.size());
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(ce::to_json(r));
      run.report("distribution.json", {{"by_system", by_system}, {"rows", arr}});
      run.table("distribution.txt", ce::format_distribution_table(rows));
      return run.finish();
    };
  });

  // correlate --------------------------------------------------------------
  std::vector<std::string> co_scores;
  std::vector<std::string> co_metrics;
  std::string co_judgments, co_target = "binary";
  auto* correlate = app.add_subcommand("correlate", "Segment-level correlation with human judgments");
  correlate->add_option("--scores", co_scores, "Score JSON-Lines file(s) {instance_id, system_id, metric, value}")
      ->required()
      ->check(CLI::ExistingFile);
  correlate->add_option("--judgments", co_judgments, "Judgments JSON-Lines file")->required()->check(CLI::ExistingFile);
  correlate->add_option("--metrics,--metric", co_metrics, "Restrict to these metrics")->delimiter(',');
  correlate->add_option("--target", co_target, "binary or graded")
      ->check(CLI::IsMember({"binary", "graded"}))
      ->capture_default_str();
  correlate->callback([&] {
    action = [&] {
      Run run("correlate", common, correlate);
      for (const auto& f : co_scores) run.input(f);
      run.input(co_judgments);
      ce::MetricTable table;
      for (const auto& f : co_scores) {
        for (auto& [metric, values] : ce::load_metric_scores(f)) {
          auto& dst = table[metric];
          for (auto& [k, v] : values) {
            if (!dst.emplace(k, v).second) throw ce::InputError("duplicate " + metric + " score for " + ce::to_string(k));
          }
        }
      }
      const auto wanted = split_list(co_metrics);
      if (!wanted.empty()) {
        ce::MetricTable picked;
        for (const auto& m : wanted) {
          auto it = table.find(m);
          if (it == table.end()) throw ce::InputError("--metrics: no scores for metric '" + m + "'");
          picked.insert(*it);
        }
        table = std::move(picked);
      }
      auto reports = ce::correlate_metrics(table, ce::load_judgments(co_judgments),
                                           co_target == "graded" ? ce::JudgmentTarget::kGraded : ce::JudgmentTarget::kBinary);
      run.open();
      json arr = json::array();
      for (const auto& r : reports) arr.push_back(ce::to_json(r));
      run.report("correlation.json", {{"target", co_target}, {"metrics", arr}});
      run.table("correlation.txt", ce::format_correlation_table(reports));
      return run.finish();
    };
  });

  // sensitivity ------------------------------------------------------------
  AcreArgs se_args;
  se_args.judge.clear();
  std::string se_perturb, se_system, se_pmode = "rule";
  std::vector<std::string> se_errors, se_metrics{"bleu", "chrf_pp"};
  double th_sensitive = 0.20, th_partial = 0.05;
  auto* sens = app.add_subcommand("sensitivity", "Score drops under controlled cultural perturbations");
  sens->add_option("--corpus", se_args.corpus, "Corpus JSON-Lines file")->required()->check(CLI::ExistingFile);
  sens->add_option("--hyps", se_args.hyps, "Base hypotheses JSON-Lines file")->required()->check(CLI::ExistingFile);
  sens->add_option("--system", se_system, "System whose hypotheses are perturbed (needed if several)");
  sens->add_option("--perturbations", se_perturb, "Perturbation table JSON")->check(CLI::ExistingFile);
  sens->add_option("--errors", se_errors, "Error types (default: all seven)")->delimiter(',');
  sens->add_option("--metrics,--metric", se_metrics, "bleu, chrf_pp, acre")->delimiter(',')->capture_default_str();
  sens->add_option("--perturb-mode", se_pmode, "rule or judge")->check(CLI::IsMember({"rule", "judge"}))->capture_default_str();
  sens->add_option("--judge", se_args.judge, "Judge backend (acre metric or judge-mode perturbation)");
  sens->add_option("--weights", se_args.weights, "Quality weights for the acre metric")->capture_default_str();
  sens->add_option("--mode", se_args.mode, "Hypothesis prompt mode")
      ->check(CLI::IsMember({"zero_shot", "one_shot"}))
      ->capture_default_str();
  sens->add_option("--sensitive", th_sensitive, "Threshold (fraction of the metric scale)")->capture_default_str();
  sens->add_option("--partial", th_partial, "Threshold (fraction of the metric scale)")->capture_default_str();
  sens->callback([&] {
    action = [&] {
      Run run("sensitivity", common, sens);
      run.input(se_args.corpus);
      run.input(se_args.hyps);
      run.input(se_perturb);
      if (!(th_partial > 0.0 && th_partial <= th_sensitive)) {
        throw ce::InputError("thresholds must satisfy 0 < partial <= sensitive");
      }
      const auto corpus = ce::load_corpus(se_args.corpus);
      const auto mode = mode_of(se_args.mode);
      auto all = ce::load_hypotheses(se_args.hyps);
      auto systems = ce::system_ids(all);
      if (se_system.empty()) {
        if (systems.size() != 1) throw ce::InputError("hypotheses span several systems; pass --system");
        se_system = *systems.begin();
      }
      std::map<std::string, std::string> base;
      for (const auto& h : all) {
        if (h.system_id == se_system && h.mode == mode) base[h.instance_id] = h.text;
      }
      if (base.empty()) throw ce::InputError("no hypotheses for system " + se_system);
      std::optional<ce::PerturbationTable> table;
      if (!se_perturb.empty()) table = ce::load_perturbation_table(se_perturb);
      std::shared_ptr<ce::JudgeClient> judge;
      if (!se_args.judge.empty()) judge = run.judge(se_args.judge);

      std::vector<ce::ErrorCategory> types;
      for (const auto& e : split_list(se_errors)) {
        auto cat = ce::parse_error_category(e);
        if (!cat) throw ce::InputError("--errors: unknown error type '" + e + "'");
        types.push_back(*cat);
      }
      if (types.empty()) types.assign(ce::kAllErrors.begin(), ce::kAllErrors.end());
      std::vector<ce::SegmentMetric> metrics;
      for (const auto& m : split_list(se_metrics)) {
        if (m == "bleu") metrics.push_back(ce::bleu_metric());
        else if (m == "chrf_pp") metrics.push_back(ce::chrf_metric());
        else if (m == "acre") {
          if (!judge) throw ce::InputError("the acre metric needs --judge");
          auto cfg = eval_config(se_args, 1);
          metrics.push_back(ce::acre_metric(*judge, cfg));
        } else {
          throw ce::InputError("--metrics: unknown metric '" + m + "'");
        }
      }
      ce::SensitivityConfig cfg;
      cfg.sensitive = th_sensitive;
      cfg.partial = th_partial;
      cfg.mode = se_pmode == "judge" ? ce::PerturbMode::kJudge : ce::PerturbMode::kRule;
      cfg.parallelism = run.parallelism();
      if (cfg.mode == ce::PerturbMode::kJudge && !judge) throw ce::InputError("judge-mode perturbation needs --judge");
      ce::SensitivityInputs in{&corpus, &base, table ? &*table : nullptr, judge.get()};
      auto report = ce::sensitivity_analysis(in, types, metrics, cfg);
      run.open();
      std::size_t failed = 0;
      for (const auto& c : report.cells) failed += c.errors.size();
      run.soft_failures(failed);
      run.report("sensitivity.json", {{"system_id", se_system},
                                      {"thresholds", {{"sensitive", th_sensitive}, {"partial", th_partial}}},
                                      {"report", ce::to_json(report)}});
      run.write("deltas.csv", ce::sensitivity_csv(report));
      run.table("sensitivity.txt", ce::format_sensitivity_table(report));
      return run.finish();
    };
  });

  // report -----------------------------------------------------------------
  std::vector<std::string> rep_inputs;
  auto* report = app.add_subcommand("report", "Combine ACRE reports from earlier run directories");
  report->add_option("--inputs,--input", rep_inputs, "Run directories from acre or ablate")->required()->check(CLI::ExistingDirectory);
  report->callback([&] {
    action = [&] {
      Run run("report", common, report);
      std::vector<std::filesystem::path> files;
      for (const auto& dir : rep_inputs) {
        bool any = false;
        for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
          if (entry.path().filename() == "report.json") {
            files.push_back(entry.path());
            any = true;
          }
        }
        if (!any) throw ce::InputError(dir + " contains no report.json");
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) run.input(f.string());
      json combined = json::array();
      std::string text;
      char buf[200];
      std::snprintf(buf, sizeof buf, "%-24s %-10s %-15s %9s %9s %9s %9s %6s\n", "System", "Mode", "Arm", "Validity",
                    "Fidelity", "Clarity", "ACRE", "Failed");
      text += buf;
      auto cell = [](const json& v) {
        char b[32];
        if (v.is_number()) std::snprintf(b, sizeof b, "%9.4f", v.get<double>());
        else std::snprintf(b, sizeof b, "%9s", "--");
        return std::string(b);
      };
      for (const auto& f : files) {
        const auto j = json::parse(ce::io::read_file(f));
        for (const auto& r : j.at("reports")) {
          combined.push_back({{"source_run", j.value("run_id", "")}, {"report", r}});
          const auto& o = r.at("overall");
          std::snprintf(buf, sizeof buf, "%-24s %-10s %-15s %s %s %s %s %6zu\n",
                        r.at("system_id").get<std::string>().c_str(), r.at("mode").get<std::string>().c_str(),
                        r.at("arm").get<std::string>().c_str(), cell(o.at("validity_rate")).c_str(),
                        cell(o.at("mean_fidelity_valid")).c_str(), cell(o.at("mean_clarity_valid")).c_str(),
                        cell(o.at("mean_acre")).c_str(), r.at("n_failed").get<std::size_t>());
          text += buf;
        }
      }
      run.open();
      run.report("combined.json", {{"reports", combined}});
      run.table("combined.txt", text);
      return run.finish();
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  spdlog::set_level(spdlog::level::from_str(common.log_level));
  try {
    return action();
  } catch (const ce::Error& e) {
    spdlog::error("{}", e.what());
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("malformed JSON: {}", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
  }
  return 1;
}
