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

// Pluggable external scorers (learned metrics live behind this boundary).
//
// Wire contract, per segment: request {"source", "hypothesis", "reference"?}
// and response {"score": number}.
//  - "cmd:<shell command>": one process per batch; requests are written to
//    stdin as JSON Lines and one response line per request is read back.
//  - "http(s)://...": one POST per segment.
// Failures are reported per segment, never turned into a zero.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "culteval/error.hpp"
#include "culteval/http_backend.hpp"
#include "culteval/parallel.hpp"
#include "culteval/text.hpp"

namespace culteval {

struct SegmentInput {
  std::string source;
  std::string hypothesis;
  std::optional<std::string> reference;
};

struct SegmentResult {
  std::optional<double> score;
  std::string error;  // set iff score is empty

  bool ok() const { return score.has_value(); }
};

namespace detail {

inline json segment_request(const SegmentInput& in) {
  json j = {{"source", in.source}, {"hypothesis", in.hypothesis}};
  if (in.reference) j["reference"] = *in.reference;
  return j;
}

inline SegmentResult read_score(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    return {std::nullopt, "non-JSON response: " + body.substr(0, 120)};
  }
  if (!j.is_object() || !j.contains("score") || !j["score"].is_number()) {
    return {std::nullopt, "non-numeric response: " + body.substr(0, 120)};
  }
  const double v = j["score"].get<double>();
  if (!std::isfinite(v)) return {std::nullopt, "non-finite score"};
  return {v, {}};
}

// Runs `/bin/sh -c command`, feeding `input` on stdin; returns stdout and the
// exit status.
inline std::pair<std::string, int> run_command(const std::string& command, const std::string& input) {
  ::signal(SIGPIPE, SIG_IGN);
  int to_child[2], from_child[2];
  if (::pipe(to_child) != 0) throw BackendUnavailable("pipe() failed");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw BackendUnavailable("pipe() failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw BackendUnavailable("fork() failed");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  std::thread writer([fd = to_child[1], &input] {
    std::size_t off = 0;
    while (off < input.size()) {
      const auto n = ::write(fd, input.data() + off, input.size() - off);
      if (n <= 0) break;
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  });
  std::string output;
  char buf[4096];
  for (;;) {
    const auto n = ::read(from_child[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(from_child[0]);
  writer.join();
  int status = 0;
  ::waitpid(pid, &status, 0);
  return {output, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

}  // namespace detail

class ExternalScorer {
 public:
  using Fn = std::function<double(const SegmentInput&)>;

  // In-process scorer; exceptions from fn become per-segment errors.
  static ExternalScorer from_function(std::string name, Fn fn, double scale = 1.0) {
    ExternalScorer s;
    s.name_ = std::move(name);
    s.fn_ = std::move(fn);
    s.scale_ = scale;
    return s;
  }

  const std::string& name() const { return name_; }
  // Upper end of the score range, used when classifying score drops.
  double scale() const { return scale_; }
  void set_scale(double scale) { scale_ = scale; }
  void set_parallelism(std::size_t p) { parallelism_ = std::max<std::size_t>(p, 1); }

  std::vector<SegmentResult> score(const std::vector<SegmentInput>& segments) const {
    std::vector<SegmentResult> out(segments.size());
    if (fn_) {
      for (std::size_t i = 0; i < segments.size(); ++i) {
        try {
          out[i] = {fn_(segments[i]), {}};
        } catch (const std::exception& e) {
          out[i] = {std::nullopt, e.what()};
        }
      }
    } else if (!command_.empty()) {
      score_command(segments, out);
    } else {
      parallel_for(segments.size(), parallelism_, [&](std::size_t i) { out[i] = score_http(segments[i]); });
    }
    return out;
  }

  SegmentResult score_one(const SegmentInput& segment) const { return score({segment}).front(); }

 private:
  friend ExternalScorer register_external_scorer(std::string_view descriptor);

  void score_command(const std::vector<SegmentInput>& segments, std::vector<SegmentResult>& out) const {
    std::string input;
    for (const auto& s : segments) input += detail::segment_request(s).dump() + "\n";
    std::pair<std::string, int> result;
    try {
      result = detail::run_command(command_, input);
    } catch (const std::exception& e) {
      for (auto& r : out) r = {std::nullopt, std::string("scorer process failed: ") + e.what()};
      return;
    }
    auto lines = text::split_lines(result.first);
    while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i < lines.size()) {
        out[i] = detail::read_score(lines[i]);
      } else {
        out[i] = {std::nullopt, "scorer produced no output for segment (exit status " + std::to_string(result.second) + ")"};
      }
    }
  }

  SegmentResult score_http(const SegmentInput& segment) const {
    try {
      httplib::Client client(endpoint_.origin);
      client.set_connection_timeout(10, 0);
      client.set_read_timeout(60, 0);
      auto res = client.Post(endpoint_.path.empty() ? "/" : endpoint_.path, detail::segment_request(segment).dump(),
                             "application/json");
      if (!res) return {std::nullopt, "unreachable scorer " + endpoint_.origin + ": " + httplib::to_string(res.error())};
      if (res->status != 200) return {std::nullopt, "scorer HTTP " + std::to_string(res->status)};
      return detail::read_score(res->body);
    } catch (const std::exception& e) {
      return {std::nullopt, e.what()};
    }
  }

  std::string name_;
  Fn fn_;
  std::string command_;
  Endpoint endpoint_;
  double scale_ = 1.0;
  std::size_t parallelism_ = 4;
};

// Descriptor: "[name=]cmd:<command>" or "[name=]http(s)://host/path".
inline ExternalScorer register_external_scorer(std::string_view descriptor) {
  ExternalScorer s;
  std::string_view target = descriptor;
  const auto eq = descriptor.find('=');
  const auto colon = descriptor.find(':');
  if (eq != std::string_view::npos && (colon == std::string_view::npos || eq < colon)) {
    s.name_ = std::string(descriptor.substr(0, eq));
    target = descriptor.substr(eq + 1);
  } else {
    s.name_ = "external";
  }
  if (target.starts_with("cmd:")) {
    s.command_ = std::string(target.substr(4));
    if (s.command_.empty()) throw InputError("external scorer: empty command");
  } else if (target.starts_with("http://") || target.starts_with("https://")) {
    s.endpoint_ = split_url(target);
  } else {
    throw InputError("external scorer: unsupported descriptor '" + std::string(descriptor) + "'");
  }
  return s;
}

}  // namespace culteval
