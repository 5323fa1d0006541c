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

// Network backends (OpenAI-compatible chat endpoint, plain NMT endpoint) and
// the backend descriptor factory. Kept apart from judge.hpp so that code
// which only needs the mock does not pull in the HTTP client.

#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "culteval/error.hpp"
#include "culteval/judge.hpp"
#include "culteval/mock_backend.hpp"

namespace culteval {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // path prefix, may be empty
};

inline Endpoint split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw InputError("not a URL: " + std::string(url));
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) return {std::string(url), ""};
  return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

namespace detail {

inline bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

inline json post_json(const Endpoint& ep, const std::string& path, const json& body, const httplib::Headers& headers,
                      int timeout_s) {
  httplib::Client client(ep.origin);
  client.set_connection_timeout(timeout_s, 0);
  client.set_read_timeout(timeout_s, 0);
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) throw BackendUnavailable(ep.origin + path + ": " + httplib::to_string(res.error()));
  if (transient_status(res->status)) {
    throw BackendUnavailable(ep.origin + path + ": HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) throw Error(ep.origin + path + ": HTTP " + std::to_string(res->status) + ": " + res->body);
  try {
    return json::parse(res->body);
  } catch (const json::parse_error&) {
    throw MalformedPayload(ep.origin + path + ": response is not JSON");
  }
}

}  // namespace detail

// Chat-completions endpoint. The API key is read from an environment
// variable at call time and never stored in transcripts.
class ChatHttpBackend : public JudgeBackend {
 public:
  ChatHttpBackend(std::string url, std::string model, std::string key_env = "CULTEVAL_API_KEY", int timeout_s = 120)
      : url_(std::move(url)), endpoint_(split_url(url_)), model_(std::move(model)), key_env_(std::move(key_env)),
        timeout_s_(timeout_s) {}

  std::string describe() const override { return "chat:" + url_; }

  json complete(const JudgeRequest& request, const RenderedPrompt& prompt) override {
    json body = {{"model", model_},
                 {"messages", json::array({{{"role", "system"}, {"content", prompt.system}},
                                           {{"role", "user"}, {"content", prompt.user}}})},
                 {"max_tokens", request.decode.max_tokens}};
    if (request.decode.deterministic) {
      body["temperature"] = 0;
      body["top_p"] = 1;
    }
    httplib::Headers headers;
    if (const char* key = std::getenv(key_env_.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    const auto path = endpoint_.path.empty() ? std::string("/v1/chat/completions") : endpoint_.path;
    auto reply = detail::post_json(endpoint_, path, body, headers, timeout_s_);
    try {
      return reply.at("choices").at(0).at("message").at("content");
    } catch (const json::exception&) {
      throw MalformedPayload("chat response without choices[0].message.content");
    }
  }

 private:
  std::string url_;
  Endpoint endpoint_;
  std::string model_;
  std::string key_env_;
  int timeout_s_;
};

// Non-chat translation endpoint: POST {"source": ...} -> {"translation": ...}.
class NmtHttpBackend : public JudgeBackend {
 public:
  explicit NmtHttpBackend(std::string url, int timeout_s = 120)
      : url_(std::move(url)), endpoint_(split_url(url_)), timeout_s_(timeout_s) {}

  std::string describe() const override { return "nmt:" + url_; }

  json complete(const JudgeRequest& request, const RenderedPrompt&) override {
    auto it = request.bindings.find("SOURCE");
    if (it == request.bindings.end()) throw Error("nmt backend: request has no SOURCE binding");
    auto reply = detail::post_json(endpoint_, endpoint_.path.empty() ? "/" : endpoint_.path, {{"source", it->second}},
                                   {}, timeout_s_);
    if (!reply.contains("translation")) throw MalformedPayload("nmt response without 'translation'");
    return reply["translation"];
  }

 private:
  std::string url_;
  Endpoint endpoint_;
  int timeout_s_;
};

// Descriptors: "mock:<script.json>", "echo", "nmt:<url>", or an http(s) URL
// of a chat-completions endpoint.
inline std::shared_ptr<JudgeBackend> make_backend(std::string_view descriptor, const std::string& model_id) {
  if (descriptor.starts_with("mock:")) return MockBackend::from_file(std::string(descriptor.substr(5)));
  if (descriptor == "echo") return std::make_shared<EchoBackend>();
  if (descriptor.starts_with("nmt:")) return std::make_shared<NmtHttpBackend>(std::string(descriptor.substr(4)));
  if (descriptor.starts_with("http://") || descriptor.starts_with("https://")) {
    return std::make_shared<ChatHttpBackend>(std::string(descriptor), model_id);
  }
  throw InputError("unknown backend descriptor '" + std::string(descriptor) + "'");
}

}  // namespace culteval
