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

// Benchmark construction front end: chunk raw bilingual text, extract
// culture-loaded candidates with the judge, classify them into the five
// categories, and assemble a corpus.
//
// Input formats:
//   tsv          one "<source>\t<target>" pair per line
//   interleaved  source line followed by its target line; blank lines
//                separate paragraphs
// In both, blank lines mark paragraph boundaries for chunking.

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
#include "culteval/io.hpp"
#include "culteval/judge.hpp"
#include "culteval/parallel.hpp"
#include "culteval/text.hpp"

namespace culteval {

enum class RawFormat { kTsv, kInterleaved };

inline std::optional<RawFormat> parse_raw_format(std::string_view s) {
  if (s == "tsv") return RawFormat::kTsv;
  if (s == "interleaved") return RawFormat::kInterleaved;
  return std::nullopt;
}

struct RawChunk {
  std::string text;
  std::string origin;  // file:first_line
};

struct ChunkOptions {
  RawFormat format = RawFormat::kTsv;
  std::size_t max_chars = 4000;  // code points
};

// Paragraph-first chunking under a character cap. Oversized paragraphs are
// split between pairs (two lines at a time for interleaved input); a single
// pair longer than the cap becomes its own chunk.
inline std::vector<RawChunk> chunk_raw_text(std::string_view raw, std::string_view origin, const ChunkOptions& opt) {
  if (opt.max_chars == 0) throw InputError("chunk size must be positive");
  const auto lines = text::split_lines(raw);
  const std::size_t step = opt.format == RawFormat::kInterleaved ? 2 : 1;

  struct Unit {
    std::string text;
    std::size_t line;
    std::size_t chars;
    bool paragraph_start;
  };
  std::vector<Unit> units;
  bool para_start = true;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (text::trim(lines[i]).empty()) {
      para_start = true;
      ++i;
      continue;
    }
    Unit u{lines[i], i + 1, 0, para_start};
    std::size_t taken = 1;
    while (taken < step && i + taken < lines.size() && !text::trim(lines[i + taken]).empty()) {
      u.text += "\n" + lines[i + taken];
      ++taken;
    }
    if (opt.format == RawFormat::kTsv && u.text.find('\t') == std::string::npos) {
      spdlog::warn("{}:{}: line has no tab separator", origin, u.line);
    }
    if (opt.format == RawFormat::kInterleaved && taken < step) {
      spdlog::warn("{}:{}: source line without a target line", origin, u.line);
    }
    u.chars = text::length(u.text);
    units.push_back(std::move(u));
    para_start = false;
    i += taken;
  }

  std::vector<RawChunk> chunks;
  RawChunk cur;
  std::size_t cur_chars = 0;
  auto flush = [&] {
    if (!cur.text.empty()) chunks.push_back(std::move(cur));
    cur = {};
    cur_chars = 0;
  };
  for (auto& u : units) {
    const std::string sep = u.paragraph_start ? "\n\n" : "\n";
    if (!cur.text.empty() && cur_chars + sep.size() + u.chars > opt.max_chars) flush();
    if (u.chars > opt.max_chars) spdlog::warn("{}:{}: pair exceeds chunk cap of {} characters", origin, u.line, opt.max_chars);
    if (cur.text.empty()) {
      cur.origin = std::string(origin) + ":" + std::to_string(u.line);
    } else {
      cur.text += sep;
      cur_chars += sep.size();
    }
    cur.text += u.text;
    cur_chars += u.chars;
  }
  flush();
  return chunks;
}

struct Candidate {
  std::string src;
  std::string tgt;
  std::string focus_term;
  std::string origin;
  std::optional<CulturalCategory> category;
  std::string reason;
};

inline nlohmann::json to_json(const Candidate& c) {
  nlohmann::json j = {{"src", c.src}, {"tgt", c.tgt}, {"focus_term", c.focus_term}, {"origin", c.origin}};
  if (c.category) {
    j["category"] = to_string(*c.category);
    j["reason"] = c.reason;
  }
  return j;
}

inline std::vector<Candidate> load_candidates(const std::filesystem::path& path) {
  std::vector<Candidate> out;
  for (const auto& [line, j] : io::read_jsonl(path)) {
    const std::string where = path.string() + ":" + std::to_string(line);
    Candidate c;
    try {
      c.src = j.at("src").get<std::string>();
      c.tgt = j.at("tgt").get<std::string>();
      c.focus_term = j.at("focus_term").get<std::string>();
      c.origin = j.value("origin", where);
      if (j.contains("category") && !j["category"].is_null()) {
        c.category = parse_category(j["category"].get<std::string>());
        if (!c.category) throw InputError(where + ": unknown category " + j["category"].dump());
        c.reason = j.value("reason", std::string());
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    if (c.focus_term.empty() || c.src.find(c.focus_term) == std::string::npos) {
      throw InputError(where + ": focus_term does not occur in src");
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline void save_candidates(const std::vector<Candidate>& cands, const std::filesystem::path& path) {
  std::vector<nlohmann::json> rows;
  for (const auto& c : cands) rows.push_back(to_json(c));
  io::write_jsonl(path, rows);
}

// The mining answer must be a JSON list; anything else is a parse failure.
// Entries with missing fields or a focus_term absent from src are dropped.
inline std::vector<Candidate> parse_candidate_list(std::string_view raw, std::string_view origin) {
  const auto j = parse_json_payload(raw);
  if (!j.is_array()) throw ParseError("mining answer is not a JSON list");
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const auto field = [&](const char* k) -> std::optional<std::string> {
      if (!e.is_object() || !e.contains(k) || !e[k].is_string()) return std::nullopt;
      return text::trim(e[k].get<std::string>());
    };
    auto src = field("src"), tgt = field("tgt"), term = field("focus_term");
    if (!src || !tgt || !term || src->empty() || tgt->empty() || term->empty()) {
      spdlog::warn("{}: candidate {} lacks src/tgt/focus_term, dropped", origin, i);
      continue;
    }
    if (src->find(*term) == std::string::npos) {
      spdlog::warn("{}: focus_term \"{}\" not found in src, candidate {} dropped", origin, *term, i);
      continue;
    }
    out.push_back({std::move(*src), std::move(*tgt), std::move(*term), std::string(origin) + "#" + std::to_string(i), {}, {}});
  }
  return out;
}

inline std::vector<Candidate> extract_candidates(const RawChunk& chunk, JudgeClient& judge) {
  auto req = judge.make_request(TemplateId::kMining, {{"RAW_TEXT_CHUNK", chunk.text}});
  auto parse = [&](std::string_view raw) { return parse_candidate_list(raw, chunk.origin); };
  return judge.ask(std::move(req), parse, "reminders/json.txt").value;
}

// Chunks are independent; results are concatenated in chunk order.
inline std::vector<Candidate> extract_all(const std::vector<RawChunk>& chunks, JudgeClient& judge,
                                          std::size_t parallelism = 1) {
  std::vector<std::vector<Candidate>> per(chunks.size());
  parallel_for(chunks.size(), parallelism, [&](std::size_t i) { per[i] = extract_candidates(chunks[i], judge); });
  std::vector<Candidate> out;
  for (auto& v : per) {
    for (auto& c : v) out.push_back(std::move(c));
  }
  return out;
}

struct Classification {
  CulturalCategory category = CulturalCategory::kMaterial;
  std::string reason;
};

inline Classification parse_taxonomy_answer(std::string_view raw) {
  const auto j = parse_json_payload(raw);
  if (!j.is_object() || !j.contains("category") || !j["category"].is_string()) {
    throw ParseError("taxonomy answer has no category field");
  }
  const auto name = j["category"].get<std::string>();
  auto cat = parse_category(name);
  if (!cat) throw ParseError("unknown category \"" + name + "\"");
  Classification c{*cat, {}};
  if (j.contains("reason") && j["reason"].is_string()) c.reason = j["reason"].get<std::string>();
  return c;
}

inline Classification classify_candidate(const Candidate& cand, JudgeClient& judge) {
  auto req = judge.make_request(TemplateId::kTaxonomy, {{"SOURCE_SENTENCE", cand.src}, {"FOCUS_TERM", cand.focus_term}});
  return judge.ask(std::move(req), parse_taxonomy_answer, "reminders/json.txt").value;
}

// Sidecar explications keyed by focus_term.
struct SidecarEntry {
  std::string explication;
  std::optional<std::string> standard_equivalent;
  std::optional<std::string> target_term;
};

using Sidecar = std::map<std::string, SidecarEntry>;

inline Sidecar sidecar_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("explication sidecar must be a JSON object keyed by term");
  Sidecar out;
  for (const auto& [term, v] : j.items()) {
    SidecarEntry e;
    try {
      e.explication = v.at("explication").get<std::string>();
      if (v.contains("standard_equivalent") && !v["standard_equivalent"].is_null()) {
        e.standard_equivalent = v["standard_equivalent"].get<std::string>();
      }
      if (v.contains("target_term") && !v["target_term"].is_null()) e.target_term = v["target_term"].get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw InputError("sidecar entry \"" + term + "\": " + ex.what());
    }
    if (text::trim(e.explication).empty()) throw InputError("sidecar entry \"" + term + "\": empty explication");
    out.emplace(term, std::move(e));
  }
  return out;
}

inline Sidecar load_sidecar(const std::filesystem::path& path) {
  try {
    return sidecar_from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

enum class ExplicationSource { kManualFile, kJudge };

struct BuildOptions {
  ExplicationSource source = ExplicationSource::kManualFile;
  const Sidecar* sidecar = nullptr;
  JudgeClient* judge = nullptr;
  std::string id_prefix = "m";
  Domain domain = Domain::kLiterary;
  CorpusMetadata metadata;
};

inline std::string parse_explication(std::string_view raw) { return parse_labeled_line(raw, "explication"); }

// Spans come from the first occurrence of the term. Exact duplicates
// (same src and focus_term) are collapsed. Ids are <prefix><0001...> in
// input order.
inline Corpus build_corpus(const std::vector<Candidate>& candidates, const BuildOptions& opt) {
  if (opt.source == ExplicationSource::kManualFile && opt.sidecar == nullptr) {
    throw InputError("build_corpus: manual explications need a sidecar file");
  }
  if (opt.source == ExplicationSource::kJudge && opt.judge == nullptr) {
    throw JudgeError("build_corpus: judge explications need a judge backend");
  }
  Corpus corpus;
  corpus.metadata = opt.metadata;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t next = 1;
  for (const auto& c : candidates) {
    if (!c.category) throw InputError("build_corpus: candidate \"" + c.focus_term + "\" (" + c.origin + ") has no category");
    if (!seen.emplace(c.src, c.focus_term).second) {
      spdlog::info("duplicate candidate \"{}\" ({}) skipped", c.focus_term, c.origin);
      continue;
    }
    Instance inst;
    char id[32];
    std::snprintf(id, sizeof id, "%04zu", next++);
    inst.id = opt.id_prefix + id;
    inst.source_text = c.src;
    inst.reference_text = c.tgt;
    inst.category = *c.category;
    inst.domain = opt.domain;

    const auto start = text::find(c.src, c.focus_term);
    if (!start) throw InputError("build_corpus: focus_term \"" + c.focus_term + "\" not in src (" + c.origin + ")");
    if (text::count_occurrences(c.src, c.focus_term) > 1) {
      spdlog::info("{}: \"{}\" occurs more than once in src, using the first occurrence", inst.id, c.focus_term);
    }
    inst.source_span = {*start, *start + text::length(c.focus_term)};

    std::optional<std::string> target_term;
    if (opt.source == ExplicationSource::kManualFile) {
      auto it = opt.sidecar->find(c.focus_term);
      if (it == opt.sidecar->end()) throw InputError("build_corpus: no explication for term \"" + c.focus_term + "\"");
      inst.explication = it->second.explication;
      inst.standard_equivalent = it->second.standard_equivalent;
      target_term = it->second.target_term;
    } else {
      auto req = opt.judge->make_request(TemplateId::kExplicate,
                                         {{"SOURCE_SENTENCE", c.src}, {"FOCUS_TERM", c.focus_term}});
      inst.explication = opt.judge->ask(std::move(req), parse_explication, "reminders/explication.txt").value;
      inst.explication_origin = "machine";
      if (opt.sidecar) {
        if (auto it = opt.sidecar->find(c.focus_term); it != opt.sidecar->end()) {
          inst.standard_equivalent = it->second.standard_equivalent;
          target_term = it->second.target_term;
        }
      }
    }

    if (target_term && !target_term->empty()) {
      auto pos = text::find(c.tgt, *target_term);
      if (!pos) pos = text::find(text::to_lower_ascii(c.tgt), text::to_lower_ascii(*target_term));
      if (pos) inst.reference_span = Span{*pos, *pos + text::length(*target_term)};
      else spdlog::info("{}: target term \"{}\" not found in reference, no reference span", inst.id, *target_term);
    }
    validate_instance(inst, inst.id);
    corpus.instances.push_back(std::move(inst));
  }
  return corpus;
}

}  // namespace culteval
