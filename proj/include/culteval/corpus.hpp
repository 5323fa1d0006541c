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

// Benchmark data model: instances, corpus files, and per-category statistics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "culteval/error.hpp"
#include "culteval/io.hpp"
#include "culteval/text.hpp"

namespace culteval {

using nlohmann::json;

enum class CulturalCategory { kMaterial, kSocial, kLinguistic, kReligious, kEcological };

inline constexpr std::array<CulturalCategory, 5> kAllCategories = {
    CulturalCategory::kMaterial, CulturalCategory::kSocial, CulturalCategory::kLinguistic,
    CulturalCategory::kReligious, CulturalCategory::kEcological};

inline std::string_view to_string(CulturalCategory c) {
  switch (c) {
    case CulturalCategory::kMaterial: return "Material";
    case CulturalCategory::kSocial: return "Social";
    case CulturalCategory::kLinguistic: return "Linguistic";
    case CulturalCategory::kReligious: return "Religious";
    case CulturalCategory::kEcological: return "Ecological";
  }
  return "?";
}

// Accepts "Social" and "Social Culture", case-insensitively. Nothing else.
inline std::optional<CulturalCategory> parse_category(std::string_view s) {
  auto key = text::to_lower_ascii(text::trim(s));
  constexpr std::string_view suffix = " culture";
  if (key.size() > suffix.size() && key.ends_with(suffix)) key.resize(key.size() - suffix.size());
  for (auto c : kAllCategories) {
    if (key == text::to_lower_ascii(to_string(c))) return c;
  }
  return std::nullopt;
}

enum class Domain { kLiterary, kInstitutional };

inline std::string_view to_string(Domain d) { return d == Domain::kLiterary ? "literary" : "institutional"; }

inline std::optional<Domain> parse_domain(std::string_view s) {
  if (s == "literary") return Domain::kLiterary;
  if (s == "institutional") return Domain::kInstitutional;
  return std::nullopt;
}

// Half-open code point range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
};

struct Instance {
  std::string id;
  std::string source_text;
  std::string reference_text;
  Span source_span;
  // Absent when the target-side rendering could not be located; such
  // instances are skipped by span-based checks.
  std::optional<Span> reference_span;
  CulturalCategory category = CulturalCategory::kMaterial;
  std::string explication;
  std::optional<std::string> standard_equivalent;
  Domain domain = Domain::kLiterary;
  // Extra annotated spans are carried through but never scored.
  std::vector<Span> extra_source_spans;
  // "human" for annotator-written explications, "machine" when generated.
  std::string explication_origin = "human";

  std::string source_term() const { return text::substr(source_text, source_span.start, source_span.end); }

  std::optional<std::string> reference_term() const {
    if (!reference_span) return std::nullopt;
    return text::substr(reference_text, reference_span->start, reference_span->end);
  }

  bool operator==(const Instance&) const = default;
};

struct CorpusMetadata {
  std::string name = "unnamed";
  std::string language_pair = "zh-en";
  std::string version = "1";

  bool operator==(const CorpusMetadata&) const = default;
};

struct Corpus {
  CorpusMetadata metadata;
  std::vector<Instance> instances;

  bool empty() const { return instances.empty(); }
  std::size_t size() const { return instances.size(); }

  const Instance* find(std::string_view id) const {
    for (const auto& inst : instances) {
      if (inst.id == id) return &inst;
    }
    return nullptr;
  }
};

namespace detail {

inline Span span_from_json(const json& j, std::string_view field, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw InputError(where + ": " + std::string(field) + " must be [start, end]");
  }
  const auto start = j[0].get<long long>();
  const auto end = j[1].get<long long>();
  if (start < 0 || end < 0) throw InputError(where + ": " + std::string(field) + " has a negative offset");
  return {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
}

inline std::string required_string(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw InputError(where + ": missing string field '" + key + "'");
  return it->get<std::string>();
}

inline void check_span(const Span& span, std::string_view text_value, std::string_view field,
                       const std::string& where) {
  const auto len = text::length(text_value);
  if (span.start >= span.end) {
    throw InputError(where + ": " + std::string(field) + " [" + std::to_string(span.start) + "," +
                     std::to_string(span.end) + ") is empty");
  }
  if (span.end > len) {
    throw InputError(where + ": " + std::string(field) + " end " + std::to_string(span.end) +
                     " exceeds text length " + std::to_string(len));
  }
}

}  // namespace detail

// Checks every Instance invariant. `where` prefixes error messages.
inline void validate_instance(const Instance& inst, const std::string& where) {
  if (inst.id.empty()) throw InputError(where + ": empty id");
  if (inst.reference_text.empty()) throw InputError(where + ": reference_text is empty");
  if (text::trim(inst.explication).empty()) throw InputError(where + ": explication is empty");
  detail::check_span(inst.source_span, inst.source_text, "source_span", where);
  if (inst.reference_span) detail::check_span(*inst.reference_span, inst.reference_text, "reference_span", where);
  for (const auto& extra : inst.extra_source_spans) detail::check_span(extra, inst.source_text, "extra_source_spans", where);
}

inline Instance instance_from_json(const json& j, const std::string& where_prefix) {
  Instance inst;
  auto id_it = j.find("id");
  if (id_it == j.end() || !id_it->is_string()) throw InputError(where_prefix + ": missing string field 'id'");
  inst.id = id_it->get<std::string>();
  const std::string where = where_prefix + " (id " + inst.id + ")";
  inst.source_text = detail::required_string(j, "source_text", where);
  inst.reference_text = detail::required_string(j, "reference_text", where);
  if (!j.contains("source_span")) throw InputError(where + ": missing field 'source_span'");
  inst.source_span = detail::span_from_json(j["source_span"], "source_span", where);
  if (j.contains("reference_span") && !j["reference_span"].is_null()) {
    inst.reference_span = detail::span_from_json(j["reference_span"], "reference_span", where);
  }
  const auto category = detail::required_string(j, "category", where);
  auto parsed = parse_category(category);
  if (!parsed) throw InputError(where + ": unknown category \"" + category + "\"");
  inst.category = *parsed;
  inst.explication = detail::required_string(j, "explication", where);
  if (j.contains("standard_equivalent") && !j["standard_equivalent"].is_null()) {
    inst.standard_equivalent = detail::required_string(j, "standard_equivalent", where);
  }
  if (j.contains("domain")) {
    const auto domain = detail::required_string(j, "domain", where);
    auto d = parse_domain(domain);
    if (!d) throw InputError(where + ": unknown domain \"" + domain + "\"");
    inst.domain = *d;
  }
  if (j.contains("extra_source_spans")) {
    for (const auto& s : j["extra_source_spans"]) {
      inst.extra_source_spans.push_back(detail::span_from_json(s, "extra_source_spans", where));
    }
  }
  if (j.contains("explication_origin")) inst.explication_origin = detail::required_string(j, "explication_origin", where);
  validate_instance(inst, where);
  return inst;
}

inline json to_json(const Instance& inst) {
  json j;
  j["id"] = inst.id;
  j["source_text"] = inst.source_text;
  j["reference_text"] = inst.reference_text;
  j["source_span"] = {inst.source_span.start, inst.source_span.end};
  j["reference_span"] = inst.reference_span ? json{inst.reference_span->start, inst.reference_span->end} : json(nullptr);
  j["category"] = to_string(inst.category);
  j["explication"] = inst.explication;
  if (inst.standard_equivalent) j["standard_equivalent"] = *inst.standard_equivalent;
  j["domain"] = to_string(inst.domain);
  if (!inst.extra_source_spans.empty()) {
    json spans = json::array();
    for (const auto& s : inst.extra_source_spans) spans.push_back({s.start, s.end});
    j["extra_source_spans"] = spans;
  }
  if (inst.explication_origin != "human") j["explication_origin"] = inst.explication_origin;
  return j;
}

// Reads a JSON-Lines corpus. An optional first record of the form
// {"corpus": {"name": ..., "language_pair": ..., "version": ...}} carries
// metadata; every other record is an instance.
inline Corpus load_corpus(const std::filesystem::path& path) {
  Corpus corpus;
  corpus.metadata.name = path.stem().string();
  std::unordered_map<std::string, std::size_t> seen;  // id -> line
  bool first = true;
  for (auto& [line, value] : io::read_jsonl(path)) {
    const std::string where = path.string() + ":" + std::to_string(line);
    if (first && value.contains("corpus") && !value.contains("id")) {
      const auto& m = value["corpus"];
      corpus.metadata.name = m.value("name", corpus.metadata.name);
      corpus.metadata.language_pair = m.value("language_pair", corpus.metadata.language_pair);
      corpus.metadata.version = m.value("version", corpus.metadata.version);
      first = false;
      continue;
    }
    first = false;
    auto inst = instance_from_json(value, where);
    auto [it, inserted] = seen.emplace(inst.id, line);
    if (!inserted) {
      throw InputError(path.string() + ": duplicate id \"" + inst.id + "\" on lines " + std::to_string(it->second) +
                       " and " + std::to_string(line));
    }
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

inline std::string serialize_corpus(const Corpus& corpus) {
  std::vector<json> rows;
  rows.reserve(corpus.size() + 1);
  rows.push_back({{"corpus",
                   {{"name", corpus.metadata.name},
                    {"language_pair", corpus.metadata.language_pair},
                    {"version", corpus.metadata.version}}}});
  for (const auto& inst : corpus.instances) rows.push_back(to_json(inst));
  return io::to_jsonl(rows);
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  io::write_file(path, serialize_corpus(corpus));
}

// ---------------------------------------------------------------------------
// Statistics

struct CategoryStats {
  std::string label;  // category name, or "Total" for the totals row
  std::size_t count = 0;
  double ratio = 0.0;          // percent, rounded to one decimal
  double avg_source_term_len = 0.0;  // code points
  double avg_target_term_len = 0.0;  // code points, over instances with a reference span
  double avg_context_len = 0.0;      // source length minus source span length
};

struct CorpusStats {
  std::vector<CategoryStats> rows;  // by descending count
  CategoryStats total;
};

inline double round1(double x) { return std::round(x * 10.0) / 10.0; }

inline CorpusStats corpus_stats(const Corpus& corpus) {
  if (corpus.empty()) throw InputError("corpus_stats: corpus is empty");
  struct Acc {
    std::size_t count = 0;
    double src = 0, tgt = 0, ctx = 0;
    std::size_t tgt_n = 0;
  };
  std::map<CulturalCategory, Acc> acc;
  Acc all;
  for (const auto& inst : corpus.instances) {
    const double src_len = static_cast<double>(inst.source_span.length());
    const double ctx_len = static_cast<double>(text::length(inst.source_text)) - src_len;
    for (Acc* a : {&acc[inst.category], &all}) {
      a->count++;
      a->src += src_len;
      a->ctx += ctx_len;
      if (inst.reference_span) {
        a->tgt += static_cast<double>(inst.reference_span->length());
        a->tgt_n++;
      }
    }
  }
  const double total = static_cast<double>(all.count);
  auto make_row = [&](std::string label, const Acc& a) {
    CategoryStats row;
    row.label = std::move(label);
    row.count = a.count;
    row.ratio = round1(100.0 * static_cast<double>(a.count) / total);
    row.avg_source_term_len = a.src / static_cast<double>(a.count);
    row.avg_target_term_len = a.tgt_n ? a.tgt / static_cast<double>(a.tgt_n) : 0.0;
    row.avg_context_len = a.ctx / static_cast<double>(a.count);
    return row;
  };
  CorpusStats stats;
  for (auto c : kAllCategories) {
    auto it = acc.find(c);
    if (it != acc.end()) stats.rows.push_back(make_row(std::string(to_string(c)), it->second));
  }
  std::stable_sort(stats.rows.begin(), stats.rows.end(),
                   [](const CategoryStats& a, const CategoryStats& b) { return a.count > b.count; });
  stats.total = make_row("Total", all);
  stats.total.ratio = 100.0;
  return stats;
}

inline json to_json(const CategoryStats& row) {
  return {{"category", row.label},
          {"count", row.count},
          {"ratio", row.ratio},
          {"avg_source_term_len", row.avg_source_term_len},
          {"avg_target_term_len", row.avg_target_term_len},
          {"avg_context_len", row.avg_context_len}};
}

inline json to_json(const CorpusStats& stats) {
  json rows = json::array();
  for (const auto& r : stats.rows) rows.push_back(to_json(r));
  return {{"categories", rows}, {"total", to_json(stats.total)}};
}

inline std::string format_stats_table(const CorpusStats& stats) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %7s %9s %12s %12s %12s\n", "Category", "Count", "Ratio(%)", "SrcTermLen",
                "TgtTermLen", "SrcContext");
  out += buf;
  auto line = [&](const CategoryStats& r) {
    std::snprintf(buf, sizeof buf, "%-12s %7zu %9.1f %12.2f %12.2f %12.2f\n", r.label.c_str(), r.count, r.ratio,
                  r.avg_source_term_len, r.avg_target_term_len, r.avg_context_len);
    out += buf;
  };
  for (const auto& r : stats.rows) line(r);
  out += std::string(68, '-') + "\n";
  line(stats.total);
  return out;
}

}  // namespace culteval
