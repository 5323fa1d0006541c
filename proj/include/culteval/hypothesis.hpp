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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "culteval/error.hpp"
#include "culteval/io.hpp"

namespace culteval {

enum class PromptMode { kZeroShot, kOneShot };

inline std::string_view to_string(PromptMode m) { return m == PromptMode::kZeroShot ? "zero_shot" : "one_shot"; }

inline std::optional<PromptMode> parse_prompt_mode(std::string_view s) {
  if (s == "zero_shot" || s == "0shot" || s == "0-shot") return PromptMode::kZeroShot;
  if (s == "one_shot" || s == "1shot" || s == "1-shot") return PromptMode::kOneShot;
  return std::nullopt;
}

// A system's translation of one instance.
struct Hypothesis {
  std::string instance_id;
  std::string system_id;
  std::string text;
  PromptMode mode = PromptMode::kZeroShot;

  bool operator==(const Hypothesis&) const = default;
};

inline nlohmann::json to_json(const Hypothesis& h) {
  return {{"instance_id", h.instance_id}, {"system_id", h.system_id}, {"mode", to_string(h.mode)}, {"text", h.text}};
}

// JSON-Lines {instance_id, system_id, mode, text}; at most one hypothesis
// per (instance, system, mode).
inline std::vector<Hypothesis> load_hypotheses(const std::filesystem::path& path) {
  std::vector<Hypothesis> out;
  std::map<std::tuple<std::string, std::string, PromptMode>, std::size_t> seen;
  for (const auto& [line, j] : io::read_jsonl(path)) {
    const std::string where = path.string() + ":" + std::to_string(line);
    Hypothesis h;
    try {
      h.instance_id = j.at("instance_id").get<std::string>();
      h.system_id = j.at("system_id").get<std::string>();
      h.text = j.at("text").get<std::string>();
      const auto mode = j.value("mode", std::string("zero_shot"));
      auto m = parse_prompt_mode(mode);
      if (!m) throw InputError(where + ": unknown mode \"" + mode + "\"");
      h.mode = *m;
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    auto [it, inserted] = seen.emplace(std::tuple{h.instance_id, h.system_id, h.mode}, line);
    if (!inserted) {
      throw InputError(path.string() + ": duplicate hypothesis for " + h.instance_id + "/" + h.system_id + " on lines " +
                       std::to_string(it->second) + " and " + std::to_string(line));
    }
    out.push_back(std::move(h));
  }
  return out;
}

inline void save_hypotheses(const std::vector<Hypothesis>& hyps, const std::filesystem::path& path) {
  std::vector<nlohmann::json> rows;
  for (const auto& h : hyps) rows.push_back(to_json(h));
  io::write_jsonl(path, rows);
}

inline std::set<std::string> system_ids(const std::vector<Hypothesis>& hyps) {
  std::set<std::string> ids;
  for (const auto& h : hyps) ids.insert(h.system_id);
  return ids;
}

}  // namespace culteval
