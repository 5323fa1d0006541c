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

// Hypothesis generation from translation backends. Prompts carry the
// source sentence only; one-shot runs add a demonstration pair that must
// not come from the evaluated corpus.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "culteval/corpus.hpp"
#include "culteval/error.hpp"
#include "culteval/hypothesis.hpp"
#include "culteval/io.hpp"
#include "culteval/judge.hpp"
#include "culteval/parallel.hpp"
#include "culteval/text.hpp"

namespace culteval {

struct Demonstration {
  std::string id;
  std::string source;
  std::string translation;
};

// {"id": ..., "source": ..., "translation": ...}
inline Demonstration load_demonstration(const std::filesystem::path& path) {
  try {
    const auto j = nlohmann::json::parse(io::read_file(path));
    Demonstration d{j.at("id").get<std::string>(), j.at("source").get<std::string>(),
                    j.at("translation").get<std::string>()};
    if (d.source.empty() || d.translation.empty()) throw InputError(path.string() + ": empty demonstration");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

struct TranslationRun {
  std::string system_id;
  std::string backend;  // descriptor, recorded in outputs
  PromptMode mode = PromptMode::kZeroShot;
  std::optional<Demonstration> demo;
  std::size_t parallelism = 1;
};

struct TranslationFailure {
  std::string instance_id;
  std::string message;
};

struct TranslationResult {
  std::vector<Hypothesis> hypotheses;  // corpus order, successes only
  std::vector<TranslationFailure> failures;
  std::vector<JudgeTranscript> transcripts;
};

inline bool prompt_free_backend(std::string_view descriptor) { return descriptor.starts_with("nmt:"); }

inline TranslationResult translate_corpus(const Corpus& corpus, TranslationRun run, JudgeClient& client) {
  if (run.system_id.empty()) throw InputError("translate_corpus: empty system id");
  if (prompt_free_backend(run.backend) && run.mode == PromptMode::kOneShot) {
    spdlog::warn("backend {} takes no prompt; recording mode as zero_shot", run.backend);
    run.mode = PromptMode::kZeroShot;
    run.demo.reset();
  }
  if (run.mode == PromptMode::kOneShot) {
    if (!run.demo) throw InputError("one_shot mode needs a held-out demonstration");
    if (corpus.find(run.demo->id)) {
      throw InputError("demonstration id \"" + run.demo->id + "\" is part of the evaluated corpus");
    }
  }

  const std::size_t n = corpus.size();
  std::vector<std::optional<JudgeTranscript>> done(n);
  std::vector<std::string> errors(n);
  parallel_for(n, run.parallelism, [&](std::size_t i) {
    const auto& inst = corpus.instances[i];
    JudgeRequest req = run.mode == PromptMode::kZeroShot
                           ? client.make_request(TemplateId::kTranslate0Shot, {{"SOURCE", inst.source_text}})
                           : client.make_request(TemplateId::kTranslate1Shot, {{"DEMO_SOURCE", run.demo->source},
                                                                               {"DEMO_TRANSLATION", run.demo->translation},
                                                                               {"SOURCE", inst.source_text}});
    try {
      done[i] = client.query(req);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  TranslationResult out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& inst = corpus.instances[i];
    if (!done[i]) {
      out.failures.push_back({inst.id, errors[i]});
      continue;
    }
    const auto& t = *done[i];
    if (t.rendered_prompt.find(inst.reference_text) != std::string::npos ||
        t.rendered_prompt.find(inst.explication) != std::string::npos) {
      throw Error("translation prompt for " + inst.id + " leaks the reference or explication");
    }
    auto hyp = text::trim(t.raw_response);
    if (hyp.empty()) {
      out.failures.push_back({inst.id, "empty translation"});
    } else {
      out.hypotheses.push_back({inst.id, run.system_id, std::move(hyp), run.mode});
    }
    out.transcripts.push_back(t);
  }
  return out;
}

}  // namespace culteval
