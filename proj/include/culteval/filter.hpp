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

// Post-annotation filtering of benchmark instances.
//
// Three exclusion rules, checked in this order; the first that fires is the
// instance's single rejection reason:
//   insufficient_cultural_salience  judge only
//   weak_contextual_support         context shorter than min_context_chars,
//                                   then the judge when one is given
//   semantic_misalignment           no reference-side span, then the judge
//                                   when one is given

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "culteval/corpus.hpp"
#include "culteval/judge.hpp"

namespace culteval {

enum class RejectReason { kInsufficientCulturalSalience, kWeakContextualSupport, kSemanticMisalignment };

inline std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kInsufficientCulturalSalience: return "insufficient_cultural_salience";
    case RejectReason::kWeakContextualSupport: return "weak_contextual_support";
    case RejectReason::kSemanticMisalignment: return "semantic_misalignment";
  }
  return "?";
}

struct FilterConfig {
  bool salience = false;
  bool context = false;
  bool alignment = false;
  std::size_t min_context_chars = 4;
};

struct Rejection {
  std::string id;
  RejectReason reason;
};

struct FilterResult {
  Corpus kept;
  std::vector<Rejection> rejected;
  std::vector<JudgeTranscript> transcripts;
};

inline FilterResult filter_instances(const Corpus& corpus, const FilterConfig& rules, JudgeClient* judge = nullptr) {
  if (rules.salience && judge == nullptr) {
    throw JudgeError("filter: the cultural-salience rule needs a judge backend");
  }
  FilterResult result;
  result.kept.metadata = corpus.metadata;

  auto screen = [&](const Instance& inst, RejectReason reason) {
    const auto criterion = judge->prompts().asset("criteria/" + std::string(to_string(reason)) + ".txt");
    auto req = judge->make_request(TemplateId::kScreen, {{"CRITERION", criterion},
                                                         {"SOURCE", inst.source_text},
                                                         {"TERM", inst.source_term()},
                                                         {"REFERENCE", inst.reference_text}});
    auto verdict = judge->ask(std::move(req), parse_pass_fail, "reminders/decision.txt");
    for (auto& t : verdict.transcripts) result.transcripts.push_back(std::move(t));
    return !verdict.value;  // FAIL means the exclusion criterion holds
  };

  for (const auto& inst : corpus.instances) {
    std::optional<RejectReason> reason;
    if (rules.salience && screen(inst, RejectReason::kInsufficientCulturalSalience)) {
      reason = RejectReason::kInsufficientCulturalSalience;
    }
    if (!reason && rules.context) {
      const auto context = text::length(inst.source_text) - inst.source_span.length();
      if (context < rules.min_context_chars || (judge && screen(inst, RejectReason::kWeakContextualSupport))) {
        reason = RejectReason::kWeakContextualSupport;
      }
    }
    if (!reason && rules.alignment) {
      if (!inst.reference_span || (judge && screen(inst, RejectReason::kSemanticMisalignment))) {
        reason = RejectReason::kSemanticMisalignment;
      }
    }
    if (reason) {
      result.rejected.push_back({inst.id, *reason});
    } else {
      result.kept.instances.push_back(inst);
    }
  }
  return result;
}

}  // namespace culteval
