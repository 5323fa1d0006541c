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

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "culteval/acre.hpp"
#include "culteval/corpus.hpp"
#include "culteval/error_taxonomy.hpp"
#include "culteval/hypothesis.hpp"
#include "culteval/judge.hpp"
#include "culteval/meta_eval.hpp"
#include "culteval/mock_backend.hpp"
#include "culteval/prompt.hpp"
#include "culteval/surface_metrics.hpp"

#ifndef CULTEVAL_DATA_DIR
#define CULTEVAL_DATA_DIR "data"
#endif

namespace testing_support {

namespace ce = culteval;

inline std::filesystem::path data(const std::string& relative) {
  return std::filesystem::path(CULTEVAL_DATA_DIR) / relative;
}

inline std::shared_ptr<const ce::PromptLibrary> prompts() {
  static const auto lib = std::make_shared<const ce::PromptLibrary>(ce::PromptLibrary::load());
  return lib;
}

// Judge client over a mock script; retries never sleep.
inline ce::JudgeClient mock_client(std::shared_ptr<ce::JudgeBackend> backend, bool cache = true) {
  ce::JudgeOptions opt;
  opt.retry.initial_delay = std::chrono::milliseconds(0);
  opt.use_cache = cache;
  return ce::JudgeClient(prompts(), std::move(backend), opt);
}

inline ce::JudgeClient mock_client(const std::string& script, bool cache = true) {
  return mock_client(ce::MockBackend::from_file(data(script)), cache);
}

inline ce::JudgeClient mock_client_json(const nlohmann::json& script, bool cache = true) {
  return mock_client(std::make_shared<ce::MockBackend>(script), cache);
}

// Hypotheses of one system.
inline std::vector<ce::Hypothesis> of_system(const std::vector<ce::Hypothesis>& all, const std::string& system) {
  std::vector<ce::Hypothesis> out;
  for (const auto& h : all) {
    if (h.system_id == system) out.push_back(h);
  }
  return out;
}

// Fresh temporary directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("culteval-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
