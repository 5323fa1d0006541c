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

// Culture-related translation errors and the primary-label rule.
//
// Priorities follow the listing order, 1 = most fundamental:
//   Omission, Literalization, SenseError, Neutralization, MisSubstitution,
//   PragmaticShift, OverInterpretation.
// An empty label set means the span was realized correctly.

#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "culteval/corpus.hpp"
#include "culteval/error.hpp"
#include "culteval/io.hpp"
#include "culteval/judge.hpp"

namespace culteval {

enum class ErrorCategory {
  kOmission = 1,
  kLiteralization = 2,
  kSenseError = 3,
  kNeutralization = 4,
  kMisSubstitution = 5,
  kPragmaticShift = 6,
  kOverInterpretation = 7,
};

inline constexpr std::array<ErrorCategory, 7> kAllErrors = {
    ErrorCategory::kOmission,        ErrorCategory::kLiteralization, ErrorCategory::kSenseError,
    ErrorCategory::kNeutralization,  ErrorCategory::kMisSubstitution, ErrorCategory::kPragmaticShift,
    ErrorCategory::kOverInterpretation};

inline int priority(ErrorCategory e) { return static_cast<int>(e); }

inline std::string_view to_string(ErrorCategory e) {
  switch (e) {
    case ErrorCategory::kOmission: return "Omission";
    case ErrorCategory::kLiteralization: return "Literalization";
    case ErrorCategory::kSenseError: return "SenseError";
    case ErrorCategory::kNeutralization: return "Neutralization";
    case ErrorCategory::kMisSubstitution: return "MisSubstitution";
    case ErrorCategory::kPragmaticShift: return "PragmaticShift";
    case ErrorCategory::kOverInterpretation: return "OverInterpretation";
  }
  return "?";
}

// Accepts the canonical names and their spaced/hyphenated spellings
// ("Sense Error", "Mis-substitution", "over-interpretation"), any case.
inline std::optional<ErrorCategory> parse_error_category(std::string_view s) {
  std::string key;
  for (char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) key.push_back(static_cast<char>(c | 0x20));
    else if (c != ' ' && c != '-' && c != '_') return std::nullopt;
  }
  for (auto e : kAllErrors) {
    if (key == text::to_lower_ascii(to_string(e))) return e;
  }
  return std::nullopt;
}

using ErrorSet = std::set<ErrorCategory>;

inline std::optional<ErrorCategory> assign_primary(const ErrorSet& labels) {
  if (labels.empty()) return std::nullopt;
  ErrorCategory best = *labels.begin();
  for (auto e : labels) {
    if (priority(e) < priority(best)) best = e;
  }
  return best;
}

struct ErrorAnnotation {
  std::string instance_id;
  std::string system_id;
  ErrorSet labels;
  std::string source = "human";  // or "judge"

  std::optional<ErrorCategory> primary() const { return assign_primary(labels); }
};

inline nlohmann::json to_json(const ErrorAnnotation& a) {
  nlohmann::json labels = nlohmann::json::array();
  for (auto e : a.labels) labels.push_back(to_string(e));
  nlohmann::json j = {{"instance_id", a.instance_id}, {"system_id", a.system_id}, {"labels", labels}, {"source", a.source}};
  auto p = a.primary();
  j["primary"] = p ? nlohmann::json(to_string(*p)) : nlohmann::json(nullptr);
  return j;
}

inline std::vector<ErrorAnnotation> load_annotations(const std::filesystem::path& path) {
  std::vector<ErrorAnnotation> out;
  for (const auto& [line, j] : io::read_jsonl(path)) {
    const std::string where = path.string() + ":" + std::to_string(line);
    ErrorAnnotation a;
    try {
      a.instance_id = j.at("instance_id").get<std::string>();
      a.system_id = j.at("system_id").get<std::string>();
      a.source = j.value("source", std::string("human"));
      for (const auto& l : j.at("labels")) {
        auto e = parse_error_category(l.get<std::string>());
        if (!e) throw InputError(where + ": unknown error label " + l.dump());
        a.labels.insert(*e);
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    if (a.source != "human" && a.source != "judge") throw InputError(where + ": source must be human or judge");
    out.push_back(std::move(a));
  }
  return out;
}

// Per-system (or pooled) correctness rate and the primary-label shares over
// incorrect samples. Shares are empty when nothing was incorrect.
struct ErrorDistributionRow {
  std::string system_id;  // "*" when pooled
  std::size_t n = 0;
  std::size_t n_correct = 0;
  double correctness_rate = 0.0;
  std::map<ErrorCategory, double> shares;
};

inline std::vector<ErrorDistributionRow> error_distribution(const std::vector<ErrorAnnotation>& annotations,
                                                            bool by_system,
                                                            const std::set<std::string>* known_systems = nullptr) {
  std::map<std::string, std::vector<const ErrorAnnotation*>> groups;
  for (const auto& a : annotations) {
    if (known_systems && !known_systems->contains(a.system_id)) {
      throw InputError("error_distribution: unknown system id \"" + a.system_id + "\"");
    }
    groups[by_system ? a.system_id : std::string("*")].push_back(&a);
  }
  std::vector<ErrorDistributionRow> rows;
  for (const auto& [system, group] : groups) {
    ErrorDistributionRow row;
    row.system_id = system;
    row.n = group.size();
    std::map<ErrorCategory, std::size_t> counts;
    for (const auto* a : group) {
      if (auto p = a->primary()) counts[*p]++;
      else row.n_correct++;
    }
    row.correctness_rate = static_cast<double>(row.n_correct) / static_cast<double>(row.n);
    const auto incorrect = row.n - row.n_correct;
    for (const auto& [e, c] : counts) row.shares[e] = static_cast<double>(c) / static_cast<double>(incorrect);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json to_json(const ErrorDistributionRow& row) {
  nlohmann::json shares = nlohmann::json::object();
  for (const auto& [e, v] : row.shares) shares[std::string(to_string(e))] = v;
  return {{"system_id", row.system_id},
          {"n", row.n},
          {"n_correct", row.n_correct},
          {"correctness_rate", row.correctness_rate},
          {"primary_shares", shares}};
}

inline std::string format_distribution_table(const std::vector<ErrorDistributionRow>& rows) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-20s %6s %8s", "System", "N", "Correct");
  out += buf;
  for (auto e : kAllErrors) {
    std::snprintf(buf, sizeof buf, " %9.9s", std::string(to_string(e)).c_str());
    out += buf;
  }
  out += "\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-20s %6zu %8.3f", r.system_id.c_str(), r.n, r.correctness_rate);
    out += buf;
    for (auto e : kAllErrors) {
      auto it = r.shares.find(e);
      if (it == r.shares.end()) std::snprintf(buf, sizeof buf, " %9s", r.shares.empty() ? "--" : "0.000");
      else std::snprintf(buf, sizeof buf, " %9.3f", it->second);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

// "Labels: A, B" (or a bare list). NONE means no errors. Any name outside
// the seven categories makes the whole answer unparseable.
inline ErrorSet parse_error_labels(std::string_view raw) {
  const auto lines = text::split_lines(raw);
  std::string body;
  if (auto f = detail::last_field(lines, "labels")) body = f->second;
  else body = text::trim(raw);
  if (body.empty()) throw ParseError("empty label answer");
  ErrorSet out;
  std::size_t start = 0;
  bool none = false;
  while (start <= body.size()) {
    auto comma = body.find_first_of(",;\n", start);
    if (comma == std::string::npos) comma = body.size();
    auto item = detail::strip_markup(text::trim(std::string_view(body).substr(start, comma - start)));
    item = text::trim(item);
    if (item.ends_with(".")) item.pop_back();
    if (!item.empty()) {
      if (text::to_lower_ascii(item) == "none") {
        none = true;
      } else if (auto e = parse_error_category(item)) {
        out.insert(*e);
      } else {
        throw ParseError("unknown error label \"" + item + "\"");
      }
    }
    start = comma + 1;
  }
  if (none && !out.empty()) throw ParseError("NONE combined with error labels");
  return out;
}

// Judge-assisted labeling. This is an annotation aid, not ground truth.
inline Verdict<ErrorSet> classify_errors(const Instance& inst, std::string_view hypothesis, JudgeClient& judge) {
  auto req = judge.make_request(TemplateId::kErrorClassifier, {{"SOURCE", inst.source_text},
                                                               {"TERM", inst.source_term()},
                                                               {"EXPLICATION", inst.explication},
                                                               {"HYPOTHESIS", std::string(hypothesis)}});
  return judge.ask(std::move(req), parse_error_labels, "reminders/labels.txt");
}

}  // namespace culteval
