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

// Judge orchestration: requests, transcripts, the response cache, retrying
// client, and the strict parsers for judge answers.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "culteval/error.hpp"
#include "culteval/hash.hpp"
#include "culteval/io.hpp"
#include "culteval/prompt.hpp"
#include "culteval/text.hpp"

namespace culteval {

using nlohmann::json;

// Judges always decode greedily; the flag exists so transcripts record it.
struct DecodeConfig {
  bool deterministic = true;
  int max_tokens = 1024;
};

struct JudgeRequest {
  TemplateId template_id = TemplateId::kValidator;
  Bindings bindings;
  std::string model_id;
  DecodeConfig decode;
  // Non-empty only on a repair re-query: a format reminder appended to the
  // user message.
  std::string reminder;
};

// Content hash of the request. Binding values are trimmed first so that
// incidental whitespace does not defeat the cache.
inline std::string cache_key(const JudgeRequest& req) {
  json canon;
  canon["template"] = to_string(req.template_id);
  json b = json::object();
  for (const auto& [k, v] : req.bindings) b[k] = text::trim(v);
  canon["bindings"] = b;
  canon["model"] = req.model_id;
  if (!req.reminder.empty()) canon["repair"] = req.reminder;
  return sha256_hex(canon.dump());
}

struct JudgeTranscript {
  JudgeRequest request;
  std::string rendered_prompt;
  std::string raw_response;
  json parsed;  // filled by the caller that parsed raw_response
  std::string cache_key;
  double latency_ms = 0.0;
  int retries = 0;
  bool from_cache = false;
};

inline json to_json(const JudgeTranscript& t) {
  return {{"template", to_string(t.request.template_id)},
          {"bindings", t.request.bindings},
          {"model", t.request.model_id},
          {"deterministic", t.request.decode.deterministic},
          {"max_tokens", t.request.decode.max_tokens},
          {"reminder", t.request.reminder},
          {"rendered_prompt", t.rendered_prompt},
          {"raw_response", t.raw_response},
          {"parsed", t.parsed},
          {"cache_key", t.cache_key},
          {"latency_ms", t.latency_ms},
          {"retries", t.retries}};
}

inline JudgeTranscript transcript_from_json(const json& j) {
  JudgeTranscript t;
  auto id = parse_template_id(j.at("template").get<std::string>());
  if (!id) throw InputError("transcript has unknown template " + j.at("template").dump());
  t.request.template_id = *id;
  t.request.bindings = j.at("bindings").get<Bindings>();
  t.request.model_id = j.at("model").get<std::string>();
  t.request.decode.deterministic = j.value("deterministic", true);
  t.request.decode.max_tokens = j.value("max_tokens", 1024);
  t.request.reminder = j.value("reminder", "");
  t.rendered_prompt = j.at("rendered_prompt").get<std::string>();
  t.raw_response = j.at("raw_response").get<std::string>();
  t.parsed = j.value("parsed", json());
  t.cache_key = j.at("cache_key").get<std::string>();
  t.latency_ms = j.value("latency_ms", 0.0);
  t.retries = j.value("retries", 0);
  return t;
}

// Thread-safe transcript cache, optionally mirrored to a directory as
// content-addressed files (<dir>/<key[0:2]>/<key>.json). A write is visible
// to every later read of the same key.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<JudgeTranscript> get(const std::string& key) const {
    {
      std::shared_lock lock(mu_);
      auto it = memory_.find(key);
      if (it != memory_.end()) return it->second;
    }
    if (!dir_) return std::nullopt;
    const auto path = file_for(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    auto t = transcript_from_json(json::parse(io::read_file(path)));
    std::unique_lock lock(mu_);
    memory_.emplace(key, t);
    return t;
  }

  void put(const JudgeTranscript& t) {
    std::unique_lock lock(mu_);
    memory_[t.cache_key] = t;
    if (dir_) io::write_file(file_for(t.cache_key), to_json(t).dump(2) + "\n");
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return memory_.size();
  }

 private:
  std::filesystem::path file_for(const std::string& key) const { return *dir_ / key.substr(0, 2) / (key + ".json"); }

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  mutable std::map<std::string, JudgeTranscript> memory_;
};

// A judge endpoint. complete() returns the completion payload; anything
// other than a JSON string is rejected by the client as malformed.
// Transient failures are reported by throwing BackendUnavailable.
class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  virtual std::string describe() const = 0;
  virtual json complete(const JudgeRequest& request, const RenderedPrompt& prompt) = 0;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_delay{500};
  double backoff_factor = 2.0;
  std::chrono::milliseconds max_delay{8000};
};

struct JudgeOptions {
  std::string model_id = "mock";
  DecodeConfig decode;
  RetryPolicy retry;
  bool use_cache = true;
};

// Raised when a judge interaction cannot produce a parseable answer. Carries
// every transcript collected on the way.
class JudgeFailure : public JudgeError {
 public:
  JudgeFailure(const std::string& what, std::vector<JudgeTranscript> transcripts)
      : JudgeError(what), transcripts_(std::move(transcripts)) {}
  const std::vector<JudgeTranscript>& transcripts() const { return transcripts_; }

 private:
  std::vector<JudgeTranscript> transcripts_;
};

template <typename T>
struct Verdict {
  T value;
  std::vector<JudgeTranscript> transcripts;  // one, or two after a repair
};

class JudgeClient {
 public:
  JudgeClient(std::shared_ptr<const PromptLibrary> prompts, std::shared_ptr<JudgeBackend> backend,
              JudgeOptions options = {}, std::shared_ptr<ResponseCache> cache = std::make_shared<ResponseCache>())
      : prompts_(std::move(prompts)), backend_(std::move(backend)), options_(std::move(options)), cache_(std::move(cache)) {}

  const PromptLibrary& prompts() const { return *prompts_; }
  const JudgeOptions& options() const { return options_; }
  const std::string& model_id() const { return options_.model_id; }
  std::string backend_description() const { return backend_->describe(); }
  std::size_t backend_calls() const { return backend_calls_.load(); }

  JudgeRequest make_request(TemplateId id, Bindings bindings) const {
    return {id, std::move(bindings), options_.model_id, options_.decode, {}};
  }

  // Renders, consults the cache, and calls the backend with bounded
  // exponential backoff on BackendUnavailable.
  JudgeTranscript query(const JudgeRequest& request) {
    JudgeTranscript t;
    t.request = request;
    t.cache_key = cache_key(request);
    if (options_.use_cache) {
      if (auto hit = cache_->get(t.cache_key)) {
        hit->from_cache = true;
        return *hit;
      }
    }
    auto prompt = prompts_->render(request.template_id, request.bindings);
    prompt.user += request.reminder;
    t.rendered_prompt = prompt.text();

    auto delay = options_.retry.initial_delay;
    const auto start = std::chrono::steady_clock::now();
    json payload;
    for (int attempt = 0;; ++attempt) {
      try {
        backend_calls_.fetch_add(1);
        payload = backend_->complete(request, prompt);
        break;
      } catch (const BackendUnavailable& e) {
        if (attempt >= options_.retry.max_retries) {
          throw JudgeError("judge backend unavailable after " + std::to_string(attempt) + " retries: " + e.what());
        }
        spdlog::debug("judge backend failed ({}), retry {} in {} ms", e.what(), attempt + 1, delay.count());
        if (delay.count() > 0) std::this_thread::sleep_for(delay);
        delay = std::min(options_.retry.max_delay,
                         std::chrono::milliseconds(static_cast<long long>(static_cast<double>(delay.count()) *
                                                                          options_.retry.backoff_factor)));
        t.retries = attempt + 1;
      }
    }
    t.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!payload.is_string()) {
      throw MalformedPayload("judge backend returned a non-text payload: " + payload.dump().substr(0, 200));
    }
    t.raw_response = payload.get<std::string>();
    if (options_.use_cache) cache_->put(t);
    return t;
  }

  // Queries and parses. On ParseError, re-queries once with the reminder
  // asset appended; a second ParseError is a JudgeFailure.
  template <typename Parser>
  auto ask(JudgeRequest request, Parser&& parse, const std::string& reminder_asset)
      -> Verdict<decltype(parse(std::string_view{}))> {
    using T = decltype(parse(std::string_view{}));
    std::vector<JudgeTranscript> transcripts;
    transcripts.push_back(query(request));
    try {
      T value = parse(transcripts.back().raw_response);
      return {std::move(value), std::move(transcripts)};
    } catch (const ParseError& first) {
      spdlog::debug("unparseable {} response, re-querying: {}", to_string(request.template_id), first.what());
    }
    request.reminder = "\n" + prompts_->asset(reminder_asset);
    transcripts.push_back(query(request));
    try {
      T value = parse(transcripts.back().raw_response);
      return {std::move(value), std::move(transcripts)};
    } catch (const ParseError& second) {
      throw JudgeFailure("unparseable " + std::string(to_string(request.template_id)) +
                             " response after repair: " + second.what(),
                         std::move(transcripts));
    }
  }

 private:
  std::shared_ptr<const PromptLibrary> prompts_;
  std::shared_ptr<JudgeBackend> backend_;
  JudgeOptions options_;
  std::shared_ptr<ResponseCache> cache_;
  std::atomic<std::size_t> backend_calls_{0};
};

// ---------------------------------------------------------------------------
// Answer grammars. Each parser either returns an in-range value or throws
// ParseError; there is no fallback value.

namespace detail {

// Line with markdown emphasis and leading list/heading markers removed.
inline std::string strip_markup(std::string_view line) {
  std::string out;
  for (char c : line) {
    if (c != '*' && c != '`') out.push_back(c);
  }
  auto first = out.find_first_not_of(" \t#->");
  return first == std::string::npos ? std::string() : out.substr(first);
}

// Index of the last line whose stripped form starts with "<field>:"
// (case-insensitive), with the text after the colon.
inline std::optional<std::pair<std::size_t, std::string>> last_field(const std::vector<std::string>& lines,
                                                                     std::string_view field) {
  for (std::size_t i = lines.size(); i-- > 0;) {
    const auto s = strip_markup(lines[i]);
    const auto lower = text::to_lower_ascii(s);
    if (lower.size() > field.size() && lower.compare(0, field.size(), field) == 0) {
      auto rest = std::string_view(s).substr(field.size());
      auto ws = rest.find_first_not_of(" \t");
      if (ws != std::string_view::npos && rest[ws] == ':') return std::pair{i, text::trim(rest.substr(ws + 1))};
    }
  }
  return std::nullopt;
}

// Text of the last "Reasoning:" field up to (not including) line `stop`.
inline std::string reasoning_before(const std::vector<std::string>& lines, std::size_t stop) {
  std::vector<std::string> head(lines.begin(), lines.begin() + static_cast<long>(stop));
  auto r = last_field(head, "reasoning");
  if (!r) return {};
  std::string out = r->second;
  for (std::size_t i = r->first + 1; i < stop; ++i) {
    out += "\n";
    out += lines[i];
  }
  return text::trim(out);
}

inline std::vector<std::string> upper_words(std::string_view s) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) {
      cur.push_back(static_cast<char>(c >= 'a' ? c - 32 : c));
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

}  // namespace detail

struct ValidityVerdict {
  bool valid = false;
  std::string reasoning;
};

// Final "Decision:" line, case-insensitive. The line must name exactly one
// of VALID / INVALID.
inline ValidityVerdict parse_validity(std::string_view raw) {
  const auto lines = text::split_lines(raw);
  auto decision = detail::last_field(lines, "decision");
  if (!decision) throw ParseError("no Decision line");
  bool saw_valid = false, saw_invalid = false;
  for (const auto& w : detail::upper_words(decision->second)) {
    saw_valid |= (w == "VALID");
    saw_invalid |= (w == "INVALID");
  }
  if (saw_valid == saw_invalid) throw ParseError("ambiguous Decision line: " + decision->second);
  return {saw_valid, detail::reasoning_before(lines, decision->first)};
}

struct ScoreVerdict {
  int score = 0;
  std::string reasoning;
};

// Final "Score:" line; accepts "4", "[4]", "4/5", "4." and nothing looser.
inline ScoreVerdict parse_score(std::string_view raw) {
  const auto lines = text::split_lines(raw);
  auto field = detail::last_field(lines, "score");
  if (!field) throw ParseError("no Score line");
  static const std::regex pattern(R"(^\[?\s*([0-9]{1,3})\s*\]?\s*(/\s*5)?\s*\.?$)");
  std::smatch m;
  if (!std::regex_match(field->second, m, pattern)) throw ParseError("unreadable score: " + field->second);
  const int score = std::stoi(m[1].str());
  if (score < 1 || score > 5) throw ParseError("score out of range 1..5: " + std::to_string(score));
  return {score, detail::reasoning_before(lines, field->first)};
}

// Two-label decision used by corpus screening ("Decision: PASS|FAIL").
inline bool parse_pass_fail(std::string_view raw) {
  const auto lines = text::split_lines(raw);
  auto decision = detail::last_field(lines, "decision");
  if (!decision) throw ParseError("no Decision line");
  bool pass = false, fail = false;
  for (const auto& w : detail::upper_words(decision->second)) {
    pass |= (w == "PASS");
    fail |= (w == "FAIL");
  }
  if (pass == fail) throw ParseError("ambiguous Decision line: " + decision->second);
  return pass;
}

// Single-field answer such as "Rewritten: ..." or "Explication: ...".
inline std::string parse_labeled_line(std::string_view raw, std::string_view field) {
  const auto lines = text::split_lines(raw);
  auto f = detail::last_field(lines, field);
  if (!f || f->second.empty()) throw ParseError("no " + std::string(field) + " line");
  return f->second;
}

// JSON payload, tolerating a surrounding markdown code fence.
inline json parse_json_payload(std::string_view raw) {
  auto body = text::trim(raw);
  if (body.starts_with("```")) {
    const auto nl = body.find('\n');
    const auto fence = body.rfind("```");
    if (nl != std::string::npos && fence != std::string::npos && fence > nl) body = text::trim(body.substr(nl + 1, fence - nl - 1));
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace culteval
