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

// Prompt assets and rendering.
//
// Prompt text lives in asset files, never in code:
//   <assets>/prompts/<template>.system.txt
//   <assets>/prompts/<template>.user.txt
// Placeholders are written {{NAME}} with NAME in [A-Z0-9_]. Substituted
// values are inserted verbatim and never re-scanned.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <spdlog/spdlog.h>

#include "culteval/error.hpp"
#include "culteval/hash.hpp"
#include "culteval/io.hpp"

#ifndef CULTEVAL_ASSET_DIR
#define CULTEVAL_ASSET_DIR "assets"
#endif

namespace culteval {

enum class TemplateId {
  kMining,
  kTaxonomy,
  kDispatcher,
  kValidator,
  kFidelity,
  kFidelityNoReference,
  kClarity,
  kTranslate0Shot,
  kTranslate1Shot,
  kErrorClassifier,
  kScreen,
  kPerturb,
  kExplicate,
};

struct TemplateInfo {
  TemplateId id;
  std::string_view name;
  std::vector<std::string_view> placeholders;  // declared set, checked against the asset on load
};

inline const std::vector<TemplateInfo>& template_registry() {
  static const std::vector<TemplateInfo> registry = {
      {TemplateId::kMining, "mining", {"RAW_TEXT_CHUNK"}},
      {TemplateId::kTaxonomy, "taxonomy", {"SOURCE_SENTENCE", "FOCUS_TERM"}},
      {TemplateId::kDispatcher, "dispatcher", {"SOURCE_WITH_BRACKETS"}},
      {TemplateId::kValidator, "validator", {"PROTOCOL_LABEL", "SOURCE", "TERM", "EXPLICATION", "HYPOTHESIS"}},
      {TemplateId::kFidelity, "fidelity", {"DYNAMIC_INSTRUCTION", "PROTOCOL_LABEL", "SOURCE", "REFERENCE", "HYPOTHESIS"}},
      {TemplateId::kFidelityNoReference, "fidelity_no_reference", {"DYNAMIC_INSTRUCTION", "PROTOCOL_LABEL", "SOURCE", "HYPOTHESIS"}},
      {TemplateId::kClarity, "clarity", {"SOURCE", "HYPOTHESIS"}},
      {TemplateId::kTranslate0Shot, "translate_0shot", {"SOURCE"}},
      {TemplateId::kTranslate1Shot, "translate_1shot", {"DEMO_SOURCE", "DEMO_TRANSLATION", "SOURCE"}},
      {TemplateId::kErrorClassifier, "error_classifier", {"SOURCE", "TERM", "EXPLICATION", "HYPOTHESIS"}},
      {TemplateId::kScreen, "screen", {"CRITERION", "SOURCE", "TERM", "REFERENCE"}},
      {TemplateId::kPerturb, "perturb", {"SOURCE", "TERM", "EXPLICATION", "HYPOTHESIS", "REALIZED_SPAN", "ERROR_DEFINITION"}},
      {TemplateId::kExplicate, "explicate", {"SOURCE_SENTENCE", "FOCUS_TERM"}},
  };
  return registry;
}

inline std::string_view to_string(TemplateId id) {
  for (const auto& info : template_registry()) {
    if (info.id == id) return info.name;
  }
  return "?";
}

inline std::optional<TemplateId> parse_template_id(std::string_view name) {
  for (const auto& info : template_registry()) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

using Bindings = std::map<std::string, std::string>;

// Placeholder names in order of first appearance. A "{{" that does not open
// a well-formed placeholder is a template error.
inline std::vector<std::string> scan_placeholders(std::string_view tmpl) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = tmpl.find("{{", pos)) != std::string_view::npos) {
    const auto close = tmpl.find("}}", pos + 2);
    if (close == std::string_view::npos) throw InputError("unterminated placeholder at offset " + std::to_string(pos));
    const auto name = tmpl.substr(pos + 2, close - pos - 2);
    if (name.empty()) throw InputError("empty placeholder at offset " + std::to_string(pos));
    for (char c : name) {
      if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) {
        throw InputError("malformed placeholder '{{" + std::string(name) + "}}'");
      }
    }
    if (std::find(names.begin(), names.end(), name) == names.end()) names.emplace_back(name);
    pos = close + 2;
  }
  return names;
}

struct PromptTemplate {
  TemplateId id = TemplateId::kValidator;
  std::string system_text;
  std::string user_text;

  std::vector<std::string> placeholders() const {
    auto names = scan_placeholders(system_text);
    for (auto& n : scan_placeholders(user_text)) {
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(std::move(n));
    }
    return names;
  }
};

struct RenderedPrompt {
  std::string system;
  std::string user;

  // Canonical single-string form; this is what golden files and transcripts store.
  std::string text() const { return "[System]\n" + system + "\n\n[User]\n" + user + "\n"; }
};

namespace detail {

inline std::string substitute(std::string_view tmpl, const Bindings& bindings) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  for (;;) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      return out;
    }
    const auto close = tmpl.find("}}", open + 2);
    out.append(tmpl.substr(pos, open - pos));
    const std::string name(tmpl.substr(open + 2, close - open - 2));
    out.append(bindings.at(name));
    pos = close + 2;
  }
}

}  // namespace detail

// Renders both halves of a template. A placeholder without a binding is an
// error; a binding without a placeholder only warns.
inline RenderedPrompt render_prompt(const PromptTemplate& tmpl, const Bindings& bindings) {
  const auto names = tmpl.placeholders();
  for (const auto& name : names) {
    if (!bindings.contains(name)) {
      throw InputError("template '" + std::string(to_string(tmpl.id)) + "': missing binding for placeholder " + name);
    }
  }
  for (const auto& [key, _] : bindings) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      spdlog::warn("template '{}': unused binding {}", to_string(tmpl.id), key);
    }
  }
  return {detail::substitute(tmpl.system_text, bindings), detail::substitute(tmpl.user_text, bindings)};
}

// Asset root resolution: explicit path, then $CULTEVAL_ASSETS, then the
// compiled-in default.
inline std::filesystem::path default_asset_dir() {
  if (const char* env = std::getenv("CULTEVAL_ASSETS"); env && *env) return env;
  return CULTEVAL_ASSET_DIR;
}

// Every prompt, guideline, criterion and reminder asset, loaded once.
class PromptLibrary {
 public:
  static PromptLibrary load(const std::filesystem::path& root = default_asset_dir()) {
    PromptLibrary lib;
    lib.root_ = root;
    for (const auto& info : template_registry()) {
      PromptTemplate t;
      t.id = info.id;
      t.system_text = lib.read_asset("prompts/" + std::string(info.name) + ".system.txt");
      t.user_text = lib.read_asset("prompts/" + std::string(info.name) + ".user.txt");
      std::set<std::string> declared(info.placeholders.begin(), info.placeholders.end());
      const auto found = t.placeholders();
      std::set<std::string> actual(found.begin(), found.end());
      if (declared != actual) {
        throw InputError("prompt asset '" + std::string(info.name) + "' placeholders do not match the declared set");
      }
      lib.templates_.emplace(info.id, std::move(t));
    }
    for (const auto* name : {"prompts/fidelity_protocol_a.txt", "prompts/fidelity_protocol_b.txt",
                             "criteria/insufficient_cultural_salience.txt", "criteria/weak_contextual_support.txt",
                             "criteria/semantic_misalignment.txt", "reminders/decision.txt", "reminders/score.txt",
                             "reminders/json.txt", "reminders/protocol.txt", "reminders/labels.txt",
                             "reminders/rewrite.txt", "reminders/explication.txt"}) {
      lib.extras_.emplace(name, lib.read_asset(name));
    }
    return lib;
  }

  const PromptTemplate& get(TemplateId id) const { return templates_.at(id); }

  // Non-template asset by relative path, e.g. "reminders/score.txt".
  const std::string& asset(const std::string& relative) const {
    auto it = extras_.find(relative);
    if (it == extras_.end()) throw InputError("unknown asset " + relative);
    return it->second;
  }

  RenderedPrompt render(TemplateId id, const Bindings& bindings) const { return render_prompt(get(id), bindings); }

  // SHA-256 of every asset file, keyed by relative path (for run manifests).
  const std::map<std::string, std::string>& hashes() const { return hashes_; }

  const std::filesystem::path& root() const { return root_; }

 private:
  // Asset files end with one newline; that newline is not part of the text.
  std::string read_asset(const std::string& relative) {
    auto content = io::read_file(root_ / relative);
    hashes_[relative] = sha256_hex(content);
    if (!content.empty() && content.back() == '\n') content.pop_back();
    return content;
  }

  std::filesystem::path root_;
  std::map<TemplateId, PromptTemplate> templates_;
  std::map<std::string, std::string> extras_;
  std::map<std::string, std::string> hashes_;
};

}  // namespace culteval
