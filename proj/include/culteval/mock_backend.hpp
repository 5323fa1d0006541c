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

// Scripted judge backend for offline runs.
//
// Script format (JSON):
//   {
//     "rules": [
//       {"template": "validator",
//        "when": {"HYPOTHESIS": {"contains": "Mid-Autumn"}},
//        "respond": "Reasoning: ok\nDecision: VALID"},
//       {"template": "fidelity", "choose": ["Score: 4", "Score: 5"]},
//       {"template": "clarity", "sequence": ["Score: 2", "Score: 3"]},
//       {"template": "translate_0shot", "echo": "SOURCE"},
//       {"template": "validator", "fail_times": 2, "respond": "..."}
//     ],
//     "default": {"validator": "Reasoning: ok\nDecision: VALID"}
//   }
//
// The first rule whose template and every `when` predicate match answers.
// Predicates: equals, contains, not_contains, prefix, regex. `respond` may be
// any JSON value (non-strings exercise the malformed-payload path). `choose`
// picks by a hash of the rendered user message, so it is deterministic and
// independent of call order. `sequence` advances per call and then repeats
// its last entry. `fail_times` makes the first N matching calls throw
// BackendUnavailable.

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "culteval/error.hpp"
#include "culteval/hash.hpp"
#include "culteval/io.hpp"
#include "culteval/judge.hpp"

namespace culteval {

class MockBackend : public JudgeBackend {
 public:
  MockBackend() = default;
  explicit MockBackend(const json& script) { load(script); }

  static std::shared_ptr<MockBackend> from_file(const std::filesystem::path& path) {
    json script;
    try {
      script = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
      throw InputError(path.string() + ": invalid mock script: " + e.what());
    }
    return std::make_shared<MockBackend>(script);
  }

  void load(const json& script) {
    std::lock_guard lock(mu_);
    if (script.contains("rules")) {
      for (const auto& r : script.at("rules")) rules_.push_back(parse_rule(r));
    }
    if (script.contains("default")) {
      for (const auto& [name, value] : script.at("default").items()) {
        if (!parse_template_id(name)) throw InputError("mock script: unknown template '" + name + "'");
        defaults_[name] = value;
      }
    }
  }

  // Appends one rule given in the script's rule syntax.
  void add_rule(const json& rule) {
    std::lock_guard lock(mu_);
    rules_.push_back(parse_rule(rule));
  }

  std::string describe() const override { return "mock"; }

  json complete(const JudgeRequest& request, const RenderedPrompt& prompt) override {
    std::lock_guard lock(mu_);
    ++calls_;
    const std::string name(to_string(request.template_id));
    ++calls_by_template_[name];
    for (auto& rule : rules_) {
      if (!matches(rule, name, request.bindings)) continue;
      if (rule.failures_left > 0) {
        --rule.failures_left;
        throw BackendUnavailable("scripted failure");
      }
      if (!rule.echo.empty()) {
        auto it = request.bindings.find(rule.echo);
        if (it == request.bindings.end()) throw Error("mock echo: no binding " + rule.echo);
        return it->second;
      }
      if (!rule.choose.empty()) return rule.choose[fnv1a64(prompt.user) % rule.choose.size()];
      if (!rule.sequence.empty()) {
        const auto i = std::min(rule.calls++, rule.sequence.size() - 1);
        return rule.sequence[i];
      }
      return rule.respond;
    }
    auto it = defaults_.find(name);
    if (it != defaults_.end()) return it->second;
    throw Error("mock script has no answer for template '" + name + "'");
  }

  std::size_t calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }

  std::size_t calls(TemplateId id) const {
    std::lock_guard lock(mu_);
    auto it = calls_by_template_.find(std::string(to_string(id)));
    return it == calls_by_template_.end() ? 0 : it->second;
  }

 private:
  struct Predicate {
    std::string binding;
    std::string op;
    std::string value;
    std::optional<std::regex> re;
  };

  struct Rule {
    std::string template_name;
    std::vector<Predicate> when;
    json respond;
    std::vector<json> choose;
    std::vector<json> sequence;
    std::string echo;
    int failures_left = 0;
    std::size_t calls = 0;
  };

  static Rule parse_rule(const json& r) {
    Rule rule;
    rule.template_name = r.at("template").get<std::string>();
    if (!parse_template_id(rule.template_name)) {
      throw InputError("mock script: unknown template '" + rule.template_name + "'");
    }
    if (r.contains("when")) {
      for (const auto& [binding, preds] : r.at("when").items()) {
        for (const auto& [op, value] : preds.items()) {
          Predicate p{binding, op, value.get<std::string>(), std::nullopt};
          if (op == "regex") {
            p.re = std::regex(p.value);
          } else if (op != "equals" && op != "contains" && op != "not_contains" && op != "prefix") {
            throw InputError("mock script: unknown predicate '" + op + "'");
          }
          rule.when.push_back(std::move(p));
        }
      }
    }
    if (r.contains("respond")) rule.respond = r.at("respond");
    if (r.contains("choose")) rule.choose = r.at("choose").get<std::vector<json>>();
    if (r.contains("sequence")) rule.sequence = r.at("sequence").get<std::vector<json>>();
    rule.echo = r.value("echo", "");
    rule.failures_left = r.value("fail_times", 0);
    if (rule.respond.is_null() && rule.choose.empty() && rule.sequence.empty() && rule.echo.empty() &&
        !r.contains("respond")) {
      throw InputError("mock script: rule for '" + rule.template_name + "' has no answer");
    }
    return rule;
  }

  static bool matches(const Rule& rule, const std::string& name, const Bindings& bindings) {
    if (rule.template_name != name) return false;
    for (const auto& p : rule.when) {
      auto it = bindings.find(p.binding);
      const std::string value = it == bindings.end() ? std::string() : it->second;
      bool ok = false;
      if (p.op == "equals") ok = value == p.value;
      else if (p.op == "contains") ok = value.find(p.value) != std::string::npos;
      else if (p.op == "not_contains") ok = value.find(p.value) == std::string::npos;
      else if (p.op == "prefix") ok = value.starts_with(p.value);
      else if (p.op == "regex") ok = std::regex_search(value, *p.re);
      if (!ok) return false;
    }
    return true;
  }

  mutable std::mutex mu_;
  std::vector<Rule> rules_;
  std::map<std::string, json> defaults_;
  std::size_t calls_ = 0;
  std::map<std::string, std::size_t> calls_by_template_;
};

// Returns the SOURCE binding unchanged; the identity "translation system".
class EchoBackend : public JudgeBackend {
 public:
  std::string describe() const override { return "echo"; }
  json complete(const JudgeRequest& request, const RenderedPrompt&) override {
    auto it = request.bindings.find("SOURCE");
    if (it == request.bindings.end()) throw Error("echo backend: request has no SOURCE binding");
    return it->second;
  }
};

}  // namespace culteval
