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

#pragma once

// Metric meta-evaluation: segment-level correlation against binary human
// judgments, and controlled-perturbation sensitivity.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "culteval/acre.hpp"
#include "culteval/corpus.hpp"
#include "culteval/error.hpp"
#include "culteval/error_taxonomy.hpp"
#include "culteval/io.hpp"
#include "culteval/judge.hpp"
#include "culteval/parallel.hpp"
#include "culteval/surface_metrics.hpp"
#include "culteval/text.hpp"

namespace culteval {

// ---------------------------------------------------------------------------
// Correlation

namespace detail {

inline void check_pair(const std::vector<double>& xs, const std::vector<double>& ys, const char* what) {
  if (xs.size() != ys.size()) {
    throw InputError(std::string(what) + ": length mismatch (" + std::to_string(xs.size()) + " vs " +
                     std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw InputError(std::string(what) + ": need at least 2 samples");
}

}  // namespace detail

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  detail::check_pair(xs, ys, "pearson");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InputError("pearson: first vector has zero variance");
  if (syy == 0.0) throw InputError("pearson: second vector has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// 1-based ranks; tied values share the mean of the positions they span.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  detail::check_pair(xs, ys, "spearman");
  return pearson(average_ranks(xs), average_ranks(ys));
}

struct HumanJudgment {
  std::string instance_id;
  std::string system_id;
  bool cultural_correct = false;
  std::optional<double> graded;
};

using SegmentKey = std::pair<std::string, std::string>;  // (instance_id, system_id)

inline std::string to_string(const SegmentKey& k) { return k.first + "/" + k.second; }

inline std::vector<HumanJudgment> load_judgments(const std::filesystem::path& path) {
  std::vector<HumanJudgment> out;
  std::map<SegmentKey, std::size_t> seen;
  for (const auto& [line, j] : io::read_jsonl(path)) {
    const std::string where = path.string() + ":" + std::to_string(line);
    HumanJudgment h;
    try {
      h.instance_id = j.at("instance_id").get<std::string>();
      h.system_id = j.at("system_id").get<std::string>();
      h.cultural_correct = j.at("cultural_correct").get<bool>();
      if (j.contains("graded") && !j["graded"].is_null()) h.graded = j["graded"].get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    SegmentKey key{h.instance_id, h.system_id};
    if (auto [it, fresh] = seen.emplace(key, line); !fresh) {
      throw InputError(path.string() + ": duplicate judgment for " + to_string(key) + " on lines " +
                       std::to_string(it->second) + " and " + std::to_string(line));
    }
    out.push_back(std::move(h));
  }
  return out;
}

// metric -> (instance, system) -> value
using MetricTable = std::map<std::string, std::map<SegmentKey, double>>;

// Rows {instance_id, system_id, metric, value}.
inline MetricTable load_metric_scores(const std::filesystem::path& path) {
  MetricTable out;
  for (const auto& [line, j] : io::read_jsonl(path)) {
    const std::string where = path.string() + ":" + std::to_string(line);
    try {
      SegmentKey key{j.at("instance_id").get<std::string>(), j.at("system_id").get<std::string>()};
      const auto metric = j.at("metric").get<std::string>();
      if (!out[metric].emplace(key, j.at("value").get<double>()).second) {
        throw InputError(where + ": duplicate " + metric + " score for " + to_string(key));
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return out;
}

struct CorrelationReport {
  std::string metric_id;
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  std::size_t n = 0;
};

enum class JudgmentTarget { kBinary, kGraded };

// One report per metric, over all judged segments in (instance, system)
// order. Binary judgments are encoded as 1 (correct) / 0.
inline std::vector<CorrelationReport> correlate_metrics(const MetricTable& scores,
                                                        const std::vector<HumanJudgment>& judgments,
                                                        JudgmentTarget target = JudgmentTarget::kBinary) {
  if (judgments.empty()) throw InputError("correlate_metrics: no judgments");
  std::vector<const HumanJudgment*> sorted;
  for (const auto& h : judgments) sorted.push_back(&h);
  std::sort(sorted.begin(), sorted.end(), [](const HumanJudgment* a, const HumanJudgment* b) {
    return std::tie(a->instance_id, a->system_id) < std::tie(b->instance_id, b->system_id);
  });
  std::vector<double> human;
  for (const auto* h : sorted) {
    if (target == JudgmentTarget::kGraded) {
      if (!h->graded) throw InputError("correlate_metrics: no graded judgment for " + h->instance_id + "/" + h->system_id);
      human.push_back(*h->graded);
    } else {
      human.push_back(h->cultural_correct ? 1.0 : 0.0);
    }
  }
  std::vector<CorrelationReport> out;
  for (const auto& [metric, table] : scores) {
    std::vector<double> xs;
    std::vector<std::string> missing;
    for (const auto* h : sorted) {
      auto it = table.find({h->instance_id, h->system_id});
      if (it == table.end()) missing.push_back(h->instance_id + "/" + h->system_id);
      else xs.push_back(it->second);
    }
    if (!missing.empty()) {
      std::string list;
      for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
      if (missing.size() > 20) list += ", ...";
      throw InputError("correlate_metrics: metric " + metric + " has no score for " + std::to_string(missing.size()) +
                       " judged segment(s): " + list);
    }
    CorrelationReport r;
    r.metric_id = metric;
    r.n = xs.size();
    r.pearson_r = pearson(xs, human);
    r.spearman_rho = spearman(xs, human);
    out.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::json to_json(const CorrelationReport& r) {
  return {{"metric", r.metric_id}, {"pearson_r", r.pearson_r}, {"spearman_rho", r.spearman_rho}, {"n", r.n}};
}

inline std::string format_correlation_table(const std::vector<CorrelationReport>& reports) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-20s %8s %8s %6s\n", "Metric", "r", "rho", "n");
  out += buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-20s %8.4f %8.4f %6zu\n", r.metric_id.c_str(), r.pearson_r, r.spearman_rho, r.n);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Perturbation

// Per-instance material for rule-mode corruption. `realized` overrides the
// reference-side span as the string to look for in the hypothesis.
struct PerturbationEntry {
  std::optional<std::string> realized;
  std::optional<std::string> hypernym;
  std::optional<std::string> clause;
  std::map<ErrorCategory, std::string> substitutions;
};

using PerturbationTable = std::map<std::string, PerturbationEntry>;

// {"<id>": {"realized"?, "hypernym"?, "clause"?, "substitutions"?: {"SenseError": "..."}}}
inline PerturbationTable perturbation_table_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("perturbation table must be a JSON object keyed by instance id");
  PerturbationTable out;
  for (const auto& [id, v] : j.items()) {
    PerturbationEntry e;
    try {
      if (v.contains("realized")) e.realized = v["realized"].get<std::string>();
      if (v.contains("hypernym")) e.hypernym = v["hypernym"].get<std::string>();
      if (v.contains("clause")) e.clause = v["clause"].get<std::string>();
      if (v.contains("substitutions")) {
        for (const auto& [name, s] : v["substitutions"].items()) {
          auto cat = parse_error_category(name);
          if (!cat) throw InputError("perturbation table: unknown error type \"" + name + "\" for " + id);
          e.substitutions[*cat] = s.get<std::string>();
        }
      }
    } catch (const nlohmann::json::exception& ex) {
      throw InputError("perturbation table entry " + id + ": " + ex.what());
    }
    out.emplace(id, std::move(e));
  }
  return out;
}

inline PerturbationTable load_perturbation_table(const std::filesystem::path& path) {
  try {
    return perturbation_table_from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

enum class PerturbMode { kRule, kJudge };

// Definition line for one category, taken from the classifier prompt asset
// ("<priority>. <Name>: <definition>").
inline std::string error_definition(const PromptLibrary& prompts, ErrorCategory e) {
  const auto prefix = std::to_string(priority(e)) + ". ";
  for (const auto& line : text::split_lines(prompts.get(TemplateId::kErrorClassifier).system_text)) {
    if (line.starts_with(prefix)) return text::trim(std::string_view(line).substr(prefix.size()));
  }
  throw Error("error classifier prompt has no definition for " + std::string(to_string(e)));
}

namespace detail {

inline bool is_closing_punct(char c) { return c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?'; }

// Removes [begin, end) and rejoins the two sides with at most one space.
inline std::string delete_range(std::string_view s, std::size_t begin, std::size_t end) {
  auto left = s.substr(0, begin);
  auto right = s.substr(end);
  while (!left.empty() && left.back() == ' ') left.remove_suffix(1);
  while (!right.empty() && right.front() == ' ') right.remove_prefix(1);
  if (left.empty()) return std::string(right);
  if (right.empty() || is_closing_punct(right.front())) return std::string(left) + std::string(right);
  return std::string(left) + " " + std::string(right);
}

inline std::string replace_range(std::string_view s, std::size_t begin, std::size_t end, std::string_view with) {
  return std::string(s.substr(0, begin)) + std::string(with) + std::string(s.substr(end));
}

}  // namespace detail

struct PerturbRequest {
  const Instance* instance = nullptr;
  std::string_view hypothesis;
  ErrorCategory error = ErrorCategory::kOmission;
  PerturbMode mode = PerturbMode::kRule;
  const PerturbationEntry* entry = nullptr;  // required in rule mode
  JudgeClient* judge = nullptr;              // required in judge mode
};

// Rule mode edits only the realized span: Omission deletes it,
// Neutralization swaps in the hypernym, OverInterpretation inserts the
// clause right after it, and the remaining categories take the table's
// substitution string.
inline std::string perturb(const PerturbRequest& r) {
  if (r.instance == nullptr) throw InputError("perturb: no instance");
  const auto& inst = *r.instance;
  std::string needle;
  if (r.entry && r.entry->realized) needle = *r.entry->realized;
  else if (auto t = inst.reference_term()) needle = *t;
  const auto loc = locate_span(r.hypothesis, needle);
  if (needle.empty() || !loc) {
    throw InputError("perturb: cultural span of " + inst.id + " is not realized in the hypothesis");
  }
  const auto [begin, end] = *loc;
  const std::string realized(r.hypothesis.substr(begin, end - begin));

  if (r.mode == PerturbMode::kJudge) {
    if (r.judge == nullptr) throw JudgeError("perturb: judge mode without a judge backend");
    auto req = r.judge->make_request(TemplateId::kPerturb, {{"SOURCE", inst.source_text},
                                                            {"TERM", inst.source_term()},
                                                            {"EXPLICATION", inst.explication},
                                                            {"HYPOTHESIS", std::string(r.hypothesis)},
                                                            {"REALIZED_SPAN", realized},
                                                            {"ERROR_DEFINITION", error_definition(r.judge->prompts(), r.error)}});
    auto parse = [](std::string_view raw) { return parse_labeled_line(raw, "rewritten"); };
    return r.judge->ask(std::move(req), parse, "reminders/rewrite.txt").value;
  }

  auto missing = [&](const char* what) {
    return InputError("perturb: no " + std::string(what) + " for " + inst.id + " (" + std::string(to_string(r.error)) + ")");
  };
  switch (r.error) {
    case ErrorCategory::kOmission:
      return detail::delete_range(r.hypothesis, begin, end);
    case ErrorCategory::kNeutralization:
      if (!r.entry || !r.entry->hypernym) throw missing("hypernym");
      return detail::replace_range(r.hypothesis, begin, end, *r.entry->hypernym);
    case ErrorCategory::kOverInterpretation:
      if (!r.entry || !r.entry->clause) throw missing("clause");
      return detail::replace_range(r.hypothesis, end, end, " " + *r.entry->clause);
    default: {
      if (!r.entry) throw missing("substitution");
      auto it = r.entry->substitutions.find(r.error);
      if (it == r.entry->substitutions.end()) throw missing("substitution");
      return detail::replace_range(r.hypothesis, begin, end, it->second);
    }
  }
}

// ---------------------------------------------------------------------------
// Sensitivity

struct SegmentMetric {
  std::string name;
  double scale = 100.0;  // maximum of the metric's range
  std::function<double(const Instance&, std::string_view)> score;
};

inline SegmentMetric bleu_metric() {
  return {"bleu", 100.0, [](const Instance& inst, std::string_view h) { return bleu(h, {inst.reference_text}).value; }};
}

inline SegmentMetric chrf_metric() {
  return {"chrf_pp", 100.0, [](const Instance& inst, std::string_view h) {
            if (h.empty()) return 0.0;
            return chrf_pp(h, inst.reference_text).value;
          }};
}

// Final ACRE score in [0,1]; judge failures propagate as errors.
inline SegmentMetric acre_metric(JudgeClient& judge, EvalConfig config) {
  return {"acre", 1.0, [&judge, config](const Instance& inst, std::string_view h) {
            auto s = score_instance(inst, h, config, judge);
            if (s.error) throw JudgeError(*s.error);
            return s.final_score;
          }};
}

enum class Sensitivity { kSensitive, kPartial, kInsensitive };

inline std::string_view to_string(Sensitivity s) {
  switch (s) {
    case Sensitivity::kSensitive: return "Sensitive";
    case Sensitivity::kPartial: return "Partial";
    case Sensitivity::kInsensitive: return "Insensitive";
  }
  return "?";
}

// Thresholds are fractions of the metric scale applied to the signed mean
// drop.
struct SensitivityConfig {
  double sensitive = 0.20;
  double partial = 0.05;
  PerturbMode mode = PerturbMode::kRule;
  std::size_t parallelism = 1;
};

inline Sensitivity classify_sensitivity(double mean_delta, double scale, const SensitivityConfig& cfg) {
  const double frac = mean_delta / scale;
  if (frac >= cfg.sensitive) return Sensitivity::kSensitive;
  if (frac >= cfg.partial) return Sensitivity::kPartial;
  return Sensitivity::kInsensitive;
}

struct ItemDelta {
  std::string instance_id;
  std::string perturbed_text;
  double base = 0.0;
  double perturbed = 0.0;
  double delta = 0.0;  // base - perturbed
};

struct SensitivityCell {
  std::string metric;
  ErrorCategory error = ErrorCategory::kOmission;
  std::vector<ItemDelta> items;  // corpus order
  std::vector<std::pair<std::string, std::string>> errors;  // (instance_id, message)
  std::optional<double> mean_delta;
  std::optional<Sensitivity> sensitivity;
};

struct SensitivityReport {
  std::vector<std::string> metrics;
  std::vector<ErrorCategory> error_types;
  std::vector<SensitivityCell> cells;  // metric-major

  const SensitivityCell& cell(std::string_view metric, ErrorCategory e) const {
    for (const auto& c : cells) {
      if (c.metric == metric && c.error == e) return c;
    }
    throw InputError("no sensitivity cell for " + std::string(metric) + "/" + std::string(to_string(e)));
  }
};

struct SensitivityInputs {
  const Corpus* corpus = nullptr;
  const std::map<std::string, std::string>* base_hypotheses = nullptr;  // instance_id -> text
  const PerturbationTable* table = nullptr;
  JudgeClient* judge = nullptr;  // judge-mode perturbation
};

// Scores base and perturbed hypotheses under every metric. Instances without
// a base hypothesis are skipped with a warning; perturbation and metric
// failures are recorded in the affected cell.
inline SensitivityReport sensitivity_analysis(const SensitivityInputs& in, const std::vector<ErrorCategory>& error_types,
                                              const std::vector<SegmentMetric>& metrics, const SensitivityConfig& cfg) {
  if (!in.corpus || !in.base_hypotheses) throw InputError("sensitivity_analysis: corpus and hypotheses are required");
  if (metrics.empty() || error_types.empty()) throw InputError("sensitivity_analysis: empty metric or error grid");
  std::vector<const Instance*> items;
  for (const auto& inst : in.corpus->instances) {
    if (in.base_hypotheses->contains(inst.id)) items.push_back(&inst);
    else spdlog::warn("sensitivity: no base hypothesis for {}, skipped", inst.id);
  }
  const std::size_t ni = items.size(), ne = error_types.size(), nm = metrics.size();

  // Perturbed texts, one per (item, error).
  std::vector<std::optional<std::string>> perturbed(ni * ne);
  std::vector<std::string> perturb_error(ni * ne);
  parallel_for(ni * ne, cfg.parallelism, [&](std::size_t k) {
    const auto* inst = items[k / ne];
    PerturbRequest r;
    r.instance = inst;
    r.hypothesis = in.base_hypotheses->at(inst->id);
    r.error = error_types[k % ne];
    r.mode = cfg.mode;
    r.judge = in.judge;
    if (in.table) {
      auto it = in.table->find(inst->id);
      if (it != in.table->end()) r.entry = &it->second;
    }
    try {
      perturbed[k] = perturb(r);
    } catch (const Error& e) {
      perturb_error[k] = e.what();
    }
  });

  // Base scores per (item, metric), perturbed per (item, error, metric).
  struct Outcome {
    std::optional<double> value;
    std::string error;
  };
  std::vector<Outcome> base(ni * nm);
  std::vector<Outcome> pert(ni * ne * nm);
  auto run = [&](Outcome& out, const SegmentMetric& m, const Instance& inst, std::string_view h) {
    try {
      out.value = m.score(inst, h);
    } catch (const Error& e) {
      out.error = e.what();
    }
  };
  parallel_for(ni * nm, cfg.parallelism, [&](std::size_t k) {
    const auto* inst = items[k / nm];
    run(base[k], metrics[k % nm], *inst, in.base_hypotheses->at(inst->id));
  });
  parallel_for(ni * ne * nm, cfg.parallelism, [&](std::size_t k) {
    const std::size_t i = k / (ne * nm), e = (k / nm) % ne, m = k % nm;
    if (perturbed[i * ne + e]) run(pert[k], metrics[m], *items[i], *perturbed[i * ne + e]);
  });

  SensitivityReport report;
  for (const auto& m : metrics) report.metrics.push_back(m.name);
  report.error_types = error_types;
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t e = 0; e < ne; ++e) {
      SensitivityCell cell;
      cell.metric = metrics[m].name;
      cell.error = error_types[e];
      double sum = 0.0;
      for (std::size_t i = 0; i < ni; ++i) {
        const auto& id = items[i]->id;
        if (!perturbed[i * ne + e]) {
          cell.errors.emplace_back(id, perturb_error[i * ne + e]);
          continue;
        }
        const auto& b = base[i * nm + m];
        const auto& p = pert[(i * ne + e) * nm + m];
        if (!b.value || !p.value) {
          cell.errors.emplace_back(id, !b.value ? b.error : p.error);
          continue;
        }
        ItemDelta d{id, *perturbed[i * ne + e], *b.value, *p.value, *b.value - *p.value};
        sum += d.delta;
        cell.items.push_back(std::move(d));
      }
      if (!cell.items.empty()) {
        cell.mean_delta = sum / static_cast<double>(cell.items.size());
        cell.sensitivity = classify_sensitivity(*cell.mean_delta, metrics[m].scale, cfg);
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

inline nlohmann::json to_json(const SensitivityReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& d : c.items) {
      items.push_back({{"instance_id", d.instance_id},
                       {"perturbed", d.perturbed_text},
                       {"base", d.base},
                       {"perturbed_score", d.perturbed},
                       {"delta", d.delta}});
    }
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& [id, msg] : c.errors) errors.push_back({{"instance_id", id}, {"error", msg}});
    cells.push_back({{"metric", c.metric},
                     {"error_type", to_string(c.error)},
                     {"n", c.items.size()},
                     {"mean_delta", c.mean_delta ? nlohmann::json(*c.mean_delta) : nlohmann::json(nullptr)},
                     {"sensitivity", c.sensitivity ? nlohmann::json(to_string(*c.sensitivity)) : nlohmann::json(nullptr)},
                     {"items", items},
                     {"errors", errors}});
  }
  return {{"metrics", r.metrics}, {"cells", cells}};
}

inline std::string format_sensitivity_table(const SensitivityReport& r) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-12s", "Metric");
  out += buf;
  for (auto e : r.error_types) {
    std::snprintf(buf, sizeof buf, " %22.22s", std::string(to_string(e)).c_str());
    out += buf;
  }
  out += "\n";
  for (const auto& m : r.metrics) {
    std::snprintf(buf, sizeof buf, "%-12s", m.c_str());
    out += buf;
    for (auto e : r.error_types) {
      const auto& c = r.cell(m, e);
      if (c.mean_delta) {
        std::snprintf(buf, sizeof buf, " %9.4f %-12s", *c.mean_delta, std::string(to_string(*c.sensitivity)).c_str());
      } else {
        std::snprintf(buf, sizeof buf, " %22s", "--");
      }
      out += buf;
    }
    out += "\n";
  }
  return out;
}

inline std::string sensitivity_csv(const SensitivityReport& r) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out = "metric,error_type,instance_id,base,perturbed,delta\n";
  char buf[128];
  for (const auto& c : r.cells) {
    for (const auto& d : c.items) {
      std::snprintf(buf, sizeof buf, ",%.10g,%.10g,%.10g\n", d.base, d.perturbed, d.delta);
      out += c.metric + "," + std::string(to_string(c.error)) + "," + quote(d.instance_id) + buf;
    }
  }
  return out;
}

}  // namespace culteval
