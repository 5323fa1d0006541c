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

// ACRE: a validity gate over a weighted fidelity/clarity quality score.
//
//   final   = valid ? quality : 0
//   quality = alpha_P * fidelity + beta_P * clarity
//
// fidelity and clarity are the critics' 1..5 scores mapped to [0, 1] by
// (s - 1) / 4, and P is the instance's evaluation protocol. Each instance is
// routed to Protocol A (fact-centric) or Protocol B (style-centric), either
// statically from its category or by the dispatcher prompt.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "culteval/corpus.hpp"
#include "culteval/error.hpp"
#include "culteval/hypothesis.hpp"
#include "culteval/judge.hpp"
#include "culteval/parallel.hpp"

namespace culteval {

enum class Protocol { kFactCentric, kStyleCentric };

inline std::string_view to_string(Protocol p) { return p == Protocol::kFactCentric ? "A_fact_centric" : "B_style_centric"; }

// Label bound into the judge prompts.
inline std::string_view prompt_label(Protocol p) {
  return p == Protocol::kFactCentric ? "Protocol A (Fact-Centric)" : "Protocol B (Style-Centric)";
}

inline std::optional<Protocol> parse_protocol_name(std::string_view s) {
  if (s == "A" || s == "A_fact_centric") return Protocol::kFactCentric;
  if (s == "B" || s == "B_style_centric") return Protocol::kStyleCentric;
  return std::nullopt;
}

struct Weights {
  double alpha = 0.5;  // fidelity
  double beta = 0.5;   // clarity
};

class QualityWeights {
 public:
  // Defaults: fidelity dominates under A, somewhat less under B.
  QualityWeights() : QualityWeights({0.7, 0.3}, {0.6, 0.4}) {}
  QualityWeights(Weights a, Weights b) : a_(check(a)), b_(check(b)) {}

  static QualityWeights uniform(Weights w) { return {w, w}; }

  const Weights& operator[](Protocol p) const { return p == Protocol::kFactCentric ? a_ : b_; }

 private:
  static Weights check(Weights w) {
    if (!(w.alpha >= 0.0) || !(w.beta >= 0.0) || std::abs(w.alpha + w.beta - 1.0) > 1e-9) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "quality weights must be non-negative and sum to 1 (got %g + %g)", w.alpha, w.beta);
      throw InputError(buf);
    }
    return w;
  }

  Weights a_, b_;
};

// "A=0.7:0.3,B=0.6:0.4" sets each protocol; "0.5:0.5" sets both.
inline QualityWeights parse_weights(std::string_view spec) {
  auto pair = [&](std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) throw InputError("weights: expected alpha:beta, got '" + std::string(s) + "'");
    try {
      std::size_t used = 0;
      const std::string a(s.substr(0, colon)), b(s.substr(colon + 1));
      Weights w{std::stod(a, &used), 0.0};
      if (used != a.size()) throw std::invalid_argument(a);
      w.beta = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
      return w;
    } catch (const std::logic_error&) {
      throw InputError("weights: malformed number in '" + std::string(s) + "'");
    }
  };
  if (spec.find('=') == std::string_view::npos) return QualityWeights::uniform(pair(spec));
  std::optional<Weights> a, b;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    const auto item = spec.substr(start, comma - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InputError("weights: expected A=... or B=..., got '" + std::string(item) + "'");
    const auto which = parse_protocol_name(item.substr(0, eq));
    if (!which) throw InputError("weights: unknown protocol '" + std::string(item.substr(0, eq)) + "'");
    (*which == Protocol::kFactCentric ? a : b) = pair(item.substr(eq + 1));
    start = comma + 1;
  }
  const QualityWeights defaults;
  return {a.value_or(defaults[Protocol::kFactCentric]), b.value_or(defaults[Protocol::kStyleCentric])};
}

// ---------------------------------------------------------------------------
// Aggregation

inline double normalize_critic_score(int raw) {
  if (raw < 1 || raw > 5) throw InputError("critic score out of range 1..5: " + std::to_string(raw));
  return (raw - 1) / 4.0;
}

struct AcreComponents {
  double fidelity = 0.0;
  double clarity = 0.0;
  double quality = 0.0;
  double final_score = 0.0;
};

inline AcreComponents aggregate(bool valid, int fidelity_raw, int clarity_raw, const QualityWeights& weights,
                                Protocol protocol) {
  AcreComponents c;
  c.fidelity = normalize_critic_score(fidelity_raw);
  c.clarity = normalize_critic_score(clarity_raw);
  const auto& w = weights[protocol];
  c.quality = w.alpha * c.fidelity + w.beta * c.clarity;
  c.final_score = valid ? c.quality : 0.0;
  return c;
}

// ---------------------------------------------------------------------------
// Agents

enum class RoutingMode { kStatic, kJudge };

enum class AblationArm { kFull, kNoGate, kNoRouting, kNoExplication, kNoReference };

inline constexpr std::array<AblationArm, 5> kAllArms = {AblationArm::kFull, AblationArm::kNoGate,
                                                        AblationArm::kNoRouting, AblationArm::kNoExplication,
                                                        AblationArm::kNoReference};

inline std::string_view to_string(AblationArm a) {
  switch (a) {
    case AblationArm::kFull: return "full";
    case AblationArm::kNoGate: return "no_gate";
    case AblationArm::kNoRouting: return "no_routing";
    case AblationArm::kNoExplication: return "no_explication";
    case AblationArm::kNoReference: return "no_reference";
  }
  return "?";
}

inline std::optional<AblationArm> parse_arm(std::string_view s) {
  for (auto a : kAllArms) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

inline Protocol static_protocol(CulturalCategory c) {
  return c == CulturalCategory::kLinguistic ? Protocol::kStyleCentric : Protocol::kFactCentric;
}

// Source sentence with the cultural span wrapped in square brackets.
inline std::string bracket_source(const Instance& inst) {
  const auto cps = text::decode_utf8(inst.source_text);
  std::u32string out = cps.substr(0, inst.source_span.start);
  out += U'[';
  out += cps.substr(inst.source_span.start, inst.source_span.length());
  out += U']';
  out += cps.substr(inst.source_span.end);
  return text::encode_utf8(out);
}

// "Protocol A" or "Protocol B", exactly one of them.
inline Protocol parse_protocol_answer(std::string_view raw) {
  const auto lower = text::to_lower_ascii(raw);
  const bool a = lower.find("protocol a") != std::string::npos;
  const bool b = lower.find("protocol b") != std::string::npos;
  if (a == b) throw ParseError("dispatcher answer names neither or both protocols");
  return a ? Protocol::kFactCentric : Protocol::kStyleCentric;
}

struct DispatchResult {
  Protocol protocol = Protocol::kFactCentric;
  bool fell_back = false;
  std::vector<JudgeTranscript> transcripts;
};

inline DispatchResult dispatch_protocol(const Instance& inst, RoutingMode mode, JudgeClient* judge = nullptr) {
  DispatchResult r;
  r.protocol = static_protocol(inst.category);
  if (mode == RoutingMode::kStatic) return r;
  if (judge == nullptr) throw JudgeError("judge routing requested without a judge backend");
  try {
    auto v = judge->ask(judge->make_request(TemplateId::kDispatcher, {{"SOURCE_WITH_BRACKETS", bracket_source(inst)}}),
                        parse_protocol_answer, "reminders/protocol.txt");
    r.protocol = v.value;
    r.transcripts = std::move(v.transcripts);
  } catch (const JudgeFailure& e) {
    spdlog::warn("dispatcher answer for {} unparseable, using category routing: {}", inst.id, e.what());
    r.fell_back = true;
    r.transcripts = e.transcripts();
  }
  return r;
}

// Validator bindings. With `use_explication` false the bare source term
// stands in for the explication.
inline Verdict<ValidityVerdict> validate(const Instance& inst, std::string_view hypothesis, Protocol protocol,
                                         JudgeClient& judge, bool use_explication = true) {
  const auto term = inst.source_term();
  auto req = judge.make_request(TemplateId::kValidator, {{"PROTOCOL_LABEL", std::string(prompt_label(protocol))},
                                                          {"SOURCE", inst.source_text},
                                                          {"TERM", term},
                                                          {"EXPLICATION", use_explication ? inst.explication : term},
                                                          {"HYPOTHESIS", std::string(hypothesis)}});
  return judge.ask(std::move(req), parse_validity, "reminders/decision.txt");
}

struct FidelityOptions {
  bool dynamic_instruction = true;  // false: no protocol-specific guideline
  bool reference_anchor = true;     // false: the reference block is omitted
};

inline Verdict<ScoreVerdict> score_fidelity(const Instance& inst, std::string_view hypothesis, Protocol protocol,
                                            JudgeClient& judge, FidelityOptions opt = {}) {
  std::string instruction;
  if (opt.dynamic_instruction) {
    instruction = judge.prompts().asset(protocol == Protocol::kFactCentric ? "prompts/fidelity_protocol_a.txt"
                                                                           : "prompts/fidelity_protocol_b.txt");
  }
  Bindings b = {{"DYNAMIC_INSTRUCTION", instruction},
                {"PROTOCOL_LABEL", std::string(prompt_label(protocol))},
                {"SOURCE", inst.source_text},
                {"HYPOTHESIS", std::string(hypothesis)}};
  auto id = TemplateId::kFidelityNoReference;
  if (opt.reference_anchor) {
    b["REFERENCE"] = inst.reference_text;
    id = TemplateId::kFidelity;
  }
  return judge.ask(judge.make_request(id, std::move(b)), parse_score, "reminders/score.txt");
}

inline Verdict<ScoreVerdict> score_clarity(const Instance& inst, std::string_view hypothesis, JudgeClient& judge) {
  auto req = judge.make_request(TemplateId::kClarity, {{"SOURCE", inst.source_text}, {"HYPOTHESIS", std::string(hypothesis)}});
  return judge.ask(std::move(req), parse_score, "reminders/score.txt");
}

// ---------------------------------------------------------------------------
// Per-instance scoring and system reports

struct AcreScore {
  std::string instance_id;
  CulturalCategory category = CulturalCategory::kMaterial;
  Protocol protocol = Protocol::kFactCentric;
  bool valid = false;
  std::optional<int> fidelity_raw;  // absent when the gate stopped evaluation
  std::optional<int> clarity_raw;
  double fidelity = 0.0;
  double clarity = 0.0;
  double quality = 0.0;
  double final_score = 0.0;
  std::vector<JudgeTranscript> transcripts;
  std::optional<std::string> error;  // per-instance judge failure

  bool ok() const { return !error.has_value(); }
};

struct EvalConfig {
  QualityWeights weights;
  RoutingMode routing = RoutingMode::kStatic;
  AblationArm arm = AblationArm::kFull;
  PromptMode mode = PromptMode::kZeroShot;
  std::size_t parallelism = 1;
};

inline AcreScore score_instance(const Instance& inst, std::string_view hypothesis, const EvalConfig& config,
                                JudgeClient& judge) {
  AcreScore s;
  s.instance_id = inst.id;
  s.category = inst.category;
  auto keep = [&](std::vector<JudgeTranscript>& ts) {
    for (auto& t : ts) s.transcripts.push_back(std::move(t));
  };
  try {
    if (config.arm == AblationArm::kNoRouting) {
      s.protocol = Protocol::kFactCentric;
    } else {
      auto d = dispatch_protocol(inst, config.routing, &judge);
      s.protocol = d.protocol;
      keep(d.transcripts);
    }
    auto validity = validate(inst, hypothesis, s.protocol, judge, config.arm != AblationArm::kNoExplication);
    s.valid = validity.value.valid;
    keep(validity.transcripts);
    if (!s.valid && config.arm != AblationArm::kNoGate) return s;

    FidelityOptions fopt;
    fopt.dynamic_instruction = config.arm != AblationArm::kNoRouting;
    fopt.reference_anchor = config.arm != AblationArm::kNoReference;
    auto fidelity = score_fidelity(inst, hypothesis, s.protocol, judge, fopt);
    keep(fidelity.transcripts);
    auto clarity = score_clarity(inst, hypothesis, judge);
    keep(clarity.transcripts);

    s.fidelity_raw = fidelity.value.score;
    s.clarity_raw = clarity.value.score;
    const auto c = aggregate(s.valid || config.arm == AblationArm::kNoGate, *s.fidelity_raw, *s.clarity_raw,
                             config.weights, s.protocol);
    s.fidelity = c.fidelity;
    s.clarity = c.clarity;
    s.quality = c.quality;
    s.final_score = c.final_score;
  } catch (const JudgeFailure& e) {
    auto ts = e.transcripts();
    keep(ts);
    s.error = e.what();
  } catch (const Error& e) {
    s.error = e.what();
  }
  return s;
}

struct BreakdownRow {
  std::size_t n = 0;
  double validity_rate = 0.0;
  std::optional<double> mean_fidelity_valid;  // normalized, over valid instances
  std::optional<double> mean_clarity_valid;
  double mean_acre = 0.0;
};

struct SystemReport {
  std::string system_id;
  PromptMode mode = PromptMode::kZeroShot;
  AblationArm arm = AblationArm::kFull;
  std::size_t n_instances = 0;
  std::size_t n_failed = 0;
  BreakdownRow overall;
  std::map<CulturalCategory, BreakdownRow> per_category;
  std::vector<std::string> failed_ids;
};

struct SystemEvaluation {
  SystemReport report;
  std::vector<AcreScore> scores;  // corpus order
};

namespace detail {

// Deterministic fold: caller passes scores sorted by instance id.
inline BreakdownRow fold_scores(const std::vector<const AcreScore*>& scores) {
  BreakdownRow row;
  std::size_t valid = 0, fid_n = 0;
  double acre = 0.0, fid = 0.0, cla = 0.0;
  for (const auto* s : scores) {
    ++row.n;
    acre += s->final_score;
    if (s->valid) {
      ++valid;
      if (s->fidelity_raw) {
        ++fid_n;
        fid += s->fidelity;
        cla += s->clarity;
      }
    }
  }
  if (row.n == 0) return row;
  row.validity_rate = static_cast<double>(valid) / static_cast<double>(row.n);
  row.mean_acre = acre / static_cast<double>(row.n);
  if (fid_n > 0) {
    row.mean_fidelity_valid = fid / static_cast<double>(fid_n);
    row.mean_clarity_valid = cla / static_cast<double>(fid_n);
  }
  return row;
}

}  // namespace detail

inline SystemReport build_report(std::string system_id, const EvalConfig& config, const std::vector<AcreScore>& scores) {
  SystemReport r;
  r.system_id = std::move(system_id);
  r.mode = config.mode;
  r.arm = config.arm;
  r.n_instances = scores.size();
  std::vector<const AcreScore*> ok;
  for (const auto& s : scores) {
    if (s.ok()) {
      ok.push_back(&s);
    } else {
      r.failed_ids.push_back(s.instance_id);
    }
  }
  r.n_failed = r.failed_ids.size();
  std::sort(ok.begin(), ok.end(), [](const AcreScore* a, const AcreScore* b) { return a->instance_id < b->instance_id; });
  std::sort(r.failed_ids.begin(), r.failed_ids.end());
  r.overall = detail::fold_scores(ok);
  for (auto c : kAllCategories) {
    std::vector<const AcreScore*> subset;
    for (const auto* s : ok) {
      if (s->category == c) subset.push_back(s);
    }
    if (!subset.empty()) r.per_category[c] = detail::fold_scores(subset);
  }
  return r;
}

// Runs dispatch -> validate -> (fidelity, clarity) -> aggregate for every
// instance. Hypotheses must all belong to one system; exactly one per
// instance for config.mode is required, and missing ones are a hard error.
inline SystemEvaluation evaluate_system(const Corpus& corpus, const std::vector<Hypothesis>& hypotheses,
                                        const EvalConfig& config, JudgeClient& judge) {
  const auto systems = system_ids(hypotheses);
  if (systems.size() > 1) throw InputError("evaluate_system: hypotheses span several systems");
  std::map<std::string, const Hypothesis*> by_id;
  for (const auto& h : hypotheses) {
    if (h.mode != config.mode) continue;
    if (!by_id.emplace(h.instance_id, &h).second) throw InputError("evaluate_system: duplicate hypothesis for " + h.instance_id);
  }
  std::vector<std::string> missing;
  for (const auto& inst : corpus.instances) {
    if (!by_id.contains(inst.id)) missing.push_back(inst.id);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw InputError("missing hypotheses (" + std::string(to_string(config.mode)) + ") for: " + list);
  }
  for (const auto& [id, _] : by_id) {
    if (!corpus.find(id)) spdlog::warn("hypothesis for unknown instance {} ignored", id);
  }

  SystemEvaluation out;
  out.scores.resize(corpus.size());
  parallel_for(corpus.size(), config.parallelism, [&](std::size_t i) {
    const auto& inst = corpus.instances[i];
    out.scores[i] = score_instance(inst, by_id.at(inst.id)->text, config, judge);
  });
  out.report = build_report(systems.empty() ? std::string() : *systems.begin(), config, out.scores);
  return out;
}

inline SystemEvaluation evaluate_ablation(const Corpus& corpus, const std::vector<Hypothesis>& hypotheses,
                                          AblationArm arm, EvalConfig config, JudgeClient& judge) {
  config.arm = arm;
  return evaluate_system(corpus, hypotheses, config, judge);
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const AcreScore& s, std::string_view system_id, const EvalConfig& config) {
  nlohmann::json keys = nlohmann::json::array();
  for (const auto& t : s.transcripts) keys.push_back(t.cache_key);
  nlohmann::json j = {{"instance_id", s.instance_id},
                      {"system_id", system_id},
                      {"mode", to_string(config.mode)},
                      {"arm", to_string(config.arm)},
                      {"category", to_string(s.category)},
                      {"protocol", to_string(s.protocol)},
                      {"validity", s.valid},
                      {"fidelity_raw", s.fidelity_raw ? nlohmann::json(*s.fidelity_raw) : nlohmann::json(nullptr)},
                      {"clarity_raw", s.clarity_raw ? nlohmann::json(*s.clarity_raw) : nlohmann::json(nullptr)},
                      {"fidelity", s.fidelity},
                      {"clarity", s.clarity},
                      {"quality", s.quality},
                      {"final", s.final_score},
                      {"transcripts", keys}};
  if (s.error) j["error"] = *s.error;
  return j;
}

inline nlohmann::json to_json(const BreakdownRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"n", r.n},
          {"validity_rate", r.validity_rate},
          {"mean_fidelity_valid", opt(r.mean_fidelity_valid)},
          {"mean_clarity_valid", opt(r.mean_clarity_valid)},
          {"mean_acre", r.mean_acre}};
}

inline nlohmann::json to_json(const SystemReport& r) {
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [c, row] : r.per_category) cats[std::string(to_string(c))] = to_json(row);
  return {{"system_id", r.system_id},
          {"mode", to_string(r.mode)},
          {"arm", to_string(r.arm)},
          {"n_instances", r.n_instances},
          {"n_failed", r.n_failed},
          {"failed_ids", r.failed_ids},
          {"overall", to_json(r.overall)},
          {"per_category", cats}};
}

// Columns: validity rate, mean fidelity and clarity over valid instances,
// final ACRE.
inline std::string format_report_table(const std::vector<SystemReport>& reports) {
  std::string out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-24s %-10s %-15s %9s %9s %9s %9s %6s\n", "System", "Mode", "Arm", "Validity",
                "Fidelity", "Clarity", "ACRE", "Failed");
  out += buf;
  auto cell = [](const std::optional<double>& v) {
    char b[32];
    if (v) std::snprintf(b, sizeof b, "%9.4f", *v);
    else std::snprintf(b, sizeof b, "%9s", "--");
    return std::string(b);
  };
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-24s %-10s %-15s %9.4f %s %s %9.4f %6zu\n", r.system_id.c_str(),
                  std::string(to_string(r.mode)).c_str(), std::string(to_string(r.arm)).c_str(),
                  r.overall.validity_rate, cell(r.overall.mean_fidelity_valid).c_str(),
                  cell(r.overall.mean_clarity_valid).c_str(), r.overall.mean_acre, r.n_failed);
    out += buf;
  }
  return out;
}

}  // namespace culteval
