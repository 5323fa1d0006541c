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

// Run directories and manifests. A run id is a content hash of the command,
// its effective configuration, input hashes, prompt-asset hashes and the
// judge model, so identical runs get identical ids. Timestamps live in the
// manifest only, never in reports.

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "culteval/error.hpp"
#include "culteval/hash.hpp"
#include "culteval/io.hpp"

namespace culteval {

inline constexpr const char* kVersion = "0.1.0";

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, std::string> inputs;  // path -> sha256
  std::map<std::string, std::string> assets;  // relative path -> sha256
  std::string judge_model;
  std::string backend;
  std::vector<std::string> outputs;
  std::string started_at;
  std::string finished_at;
  int exit_status = 0;

  void add_input(const std::filesystem::path& path) { inputs[path.string()] = sha256_hex(io::read_file(path)); }

  // Config keys that affect where or how fast a run happens but not what it
  // produces; they are left out of the run id.
  static bool execution_only(const std::string& key) {
    return key == "out" || key == "parallelism" || key == "log-level" || key == "cache" || key == "config";
  }

  std::string run_id() const {
    nlohmann::json semantic = nlohmann::json::object();
    for (const auto& [k, v] : config.items()) {
      if (!execution_only(k)) semantic[k] = v;
    }
    const nlohmann::json id = {{"command", command}, {"config", semantic},     {"inputs", inputs},
                               {"assets", assets},   {"model", judge_model}, {"version", kVersion}};
    return sha256_hex(id.dump()).substr(0, 16);
  }

  nlohmann::json to_json() const {
    return {{"run_id", run_id()},     {"tool_version", kVersion}, {"command", command},
            {"config", config},       {"inputs", inputs},         {"prompt_assets", assets},
            {"judge_model", judge_model}, {"backend", backend},   {"started_at", started_at},
            {"finished_at", finished_at}, {"exit_status", exit_status}, {"outputs", outputs}};
  }
};

// Owns an output directory for the lifetime of one invocation. A second
// concurrent owner fails on the lock file.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    lock_ = dir_ / ".lock";
    const int fd = ::open(lock_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
      if (errno == EEXIST) {
        throw InputError("run directory " + dir_.string() + " is in use (remove " + lock_.string() + " if stale)");
      }
      throw Error("cannot lock " + dir_.string() + ": " + std::strerror(errno));
    }
    const auto pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto w = ::write(fd, pid.data(), pid.size());
    ::close(fd);
  }

  RunDirectory(const RunDirectory&) = delete;
  RunDirectory& operator=(const RunDirectory&) = delete;

  ~RunDirectory() {
    std::error_code ec;
    std::filesystem::remove(lock_, ec);
  }

  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
  std::filesystem::path lock_;
};

}  // namespace culteval
