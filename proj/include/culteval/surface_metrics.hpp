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

// Overlap baselines: sentence/corpus BLEU, ChrF++, and the span check.
//
// Tokenization is text::tokenize (whitespace + punctuation + per-ideograph).
// BLEU uses effective order: n-gram orders for which the hypothesis has no
// n-grams at all are left out of the geometric mean, so short segments are
// not zeroed by construction.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <spdlog/spdlog.h>

#include "culteval/corpus.hpp"
#include "culteval/error.hpp"
#include "culteval/text.hpp"

namespace culteval {

struct MetricScore {
  std::string metric_id;  // "bleu", "chrf_pp", or an external scorer name
  double value = 0.0;     // [0, 100]
  enum class Granularity { kSentence, kCorpus } granularity = Granularity::kSentence;
};

enum class BleuSmoothing {
  kNone,
  kAddOne,  // (m + 1) / (t + 1) for n > 1
};

struct BleuStats {
  std::vector<std::size_t> matches;  // clipped matches per order, index n-1
  std::vector<std::size_t> totals;   // hypothesis n-grams per order
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& o) {
    if (matches.size() < o.matches.size()) {
      matches.resize(o.matches.size());
      totals.resize(o.totals.size());
    }
    for (std::size_t i = 0; i < o.matches.size(); ++i) {
      matches[i] += o.matches[i];
      totals[i] += o.totals[i];
    }
    hyp_len += o.hyp_len;
    ref_len += o.ref_len;
    return *this;
  }
};

namespace detail {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

inline NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i), tokens.begin() + static_cast<long>(i + n))]++;
  }
  return counts;
}

}  // namespace detail

// Closest reference length; ties go to the shorter reference.
inline BleuStats bleu_stats(const std::vector<std::string>& hyp, const std::vector<std::vector<std::string>>& refs,
                            int max_n) {
  if (refs.empty()) throw InputError("bleu: empty reference set");
  if (max_n < 1) throw InputError("bleu: max_n must be >= 1");
  BleuStats stats;
  stats.matches.assign(static_cast<std::size_t>(max_n), 0);
  stats.totals.assign(static_cast<std::size_t>(max_n), 0);
  stats.hyp_len = hyp.size();
  std::size_t best = refs.front().size();
  for (const auto& r : refs) {
    const auto diff = [&](std::size_t len) { return len > hyp.size() ? len - hyp.size() : hyp.size() - len; };
    if (diff(r.size()) < diff(best) || (diff(r.size()) == diff(best) && r.size() < best)) best = r.size();
  }
  stats.ref_len = best;
  for (int n = 1; n <= max_n; ++n) {
    const auto hyp_counts = detail::count_ngrams(hyp, static_cast<std::size_t>(n));
    detail::NgramCounts max_ref;
    for (const auto& r : refs) {
      for (const auto& [gram, c] : detail::count_ngrams(r, static_cast<std::size_t>(n))) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, c);
      }
    }
    for (const auto& [gram, c] : hyp_counts) {
      stats.totals[static_cast<std::size_t>(n - 1)] += c;
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) stats.matches[static_cast<std::size_t>(n - 1)] += std::min(c, it->second);
    }
  }
  return stats;
}

// BLEU in [0, 100] from accumulated statistics.
inline double bleu_from_stats(const BleuStats& stats, BleuSmoothing smoothing) {
  if (stats.hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  int effective = 0;
  for (std::size_t i = 0; i < stats.totals.size(); ++i) {
    const auto t = stats.totals[i];
    if (t == 0) continue;
    const auto m = stats.matches[i];
    double p = 0.0;
    if (smoothing == BleuSmoothing::kAddOne && i > 0) {
      p = (static_cast<double>(m) + 1.0) / (static_cast<double>(t) + 1.0);
    } else {
      if (m == 0) return 0.0;
      p = static_cast<double>(m) / static_cast<double>(t);
    }
    log_sum += std::log(p);
    ++effective;
  }
  if (effective == 0) return 0.0;
  const double bp = stats.hyp_len < stats.ref_len
                        ? std::exp(1.0 - static_cast<double>(stats.ref_len) / static_cast<double>(stats.hyp_len))
                        : 1.0;
  return 100.0 * bp * std::exp(log_sum / effective);
}

// Sentence-level BLEU. An empty hypothesis scores 0 with a warning.
inline MetricScore bleu(std::string_view hypothesis, const std::vector<std::string>& references, int max_n = 4,
                        BleuSmoothing smoothing = BleuSmoothing::kAddOne) {
  if (references.empty()) throw InputError("bleu: empty reference set");
  const auto hyp = text::tokenize(hypothesis);
  if (hyp.empty()) {
    spdlog::warn("bleu: empty hypothesis scored 0");
    return {"bleu", 0.0, MetricScore::Granularity::kSentence};
  }
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(text::tokenize(r));
  return {"bleu", bleu_from_stats(bleu_stats(hyp, refs, max_n), smoothing), MetricScore::Granularity::kSentence};
}

// Corpus BLEU over aligned segments; each segment has its own reference set.
inline MetricScore corpus_bleu(const std::vector<std::string>& hypotheses,
                               const std::vector<std::vector<std::string>>& references, int max_n = 4,
                               BleuSmoothing smoothing = BleuSmoothing::kNone) {
  if (hypotheses.size() != references.size()) throw InputError("corpus_bleu: hypothesis/reference count mismatch");
  BleuStats total;
  total.matches.assign(static_cast<std::size_t>(std::max(max_n, 1)), 0);
  total.totals.assign(static_cast<std::size_t>(std::max(max_n, 1)), 0);
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    std::vector<std::vector<std::string>> refs;
    for (const auto& r : references[i]) refs.push_back(text::tokenize(r));
    total += bleu_stats(text::tokenize(hypotheses[i]), refs, max_n);
  }
  return {"bleu", bleu_from_stats(total, smoothing), MetricScore::Granularity::kCorpus};
}

struct ChrfOptions {
  int char_n = 6;
  int word_n = 2;
  double beta = 2.0;
};

namespace detail {

template <typename Seq>
std::map<Seq, std::size_t> sequence_ngrams(const std::vector<typename Seq::value_type>& items, std::size_t n) {
  std::map<Seq, std::size_t> out;
  if (items.size() < n) return out;
  for (std::size_t i = 0; i + n <= items.size(); ++i) out[Seq(items.begin() + static_cast<long>(i), items.begin() + static_cast<long>(i + n))]++;
  return out;
}

struct OrderStats {
  std::size_t hyp = 0, ref = 0, match = 0;
};

template <typename Counts>
OrderStats order_stats(const Counts& h, const Counts& r) {
  OrderStats s;
  for (const auto& [g, c] : h) {
    s.hyp += c;
    auto it = r.find(g);
    if (it != r.end()) s.match += std::min(c, it->second);
  }
  for (const auto& [g, c] : r) s.ref += c;
  return s;
}

}  // namespace detail

// ChrF++: character n-grams (whitespace removed) of orders 1..char_n plus
// word n-grams of orders 1..word_n. Precision and recall are averaged over
// the orders where both sides have at least one n-gram, then combined as
// F-beta. Empty input is an error.
inline MetricScore chrf_pp(std::string_view hypothesis, std::string_view reference, const ChrfOptions& opt = {}) {
  if (hypothesis.empty() || reference.empty()) throw InputError("chrf_pp: empty input");
  auto strip = [](std::string_view s) {
    std::vector<char32_t> out;
    for (char32_t c : text::decode_utf8(s)) {
      if (!text::is_space(c)) out.push_back(c);
    }
    return out;
  };
  const auto hc = strip(hypothesis);
  const auto rc = strip(reference);
  const auto hw = text::tokenize(hypothesis);
  const auto rw = text::tokenize(reference);

  std::vector<detail::OrderStats> orders;
  for (int n = 1; n <= opt.char_n; ++n) {
    orders.push_back(detail::order_stats(detail::sequence_ngrams<std::u32string>(hc, static_cast<std::size_t>(n)),
                                         detail::sequence_ngrams<std::u32string>(rc, static_cast<std::size_t>(n))));
  }
  for (int n = 1; n <= opt.word_n; ++n) {
    orders.push_back(detail::order_stats(detail::count_ngrams(hw, static_cast<std::size_t>(n)),
                                         detail::count_ngrams(rw, static_cast<std::size_t>(n))));
  }
  double p = 0.0, r = 0.0;
  int effective = 0;
  for (const auto& o : orders) {
    if (o.hyp == 0 || o.ref == 0) continue;
    p += static_cast<double>(o.match) / static_cast<double>(o.hyp);
    r += static_cast<double>(o.match) / static_cast<double>(o.ref);
    ++effective;
  }
  double f = 0.0;
  if (effective > 0) {
    p /= effective;
    r /= effective;
    const double b2 = opt.beta * opt.beta;
    const double denom = b2 * p + r;
    if (denom > 0.0) f = (1.0 + b2) * p * r / denom;
  }
  return {"chrf_pp", 100.0 * f, MetricScore::Granularity::kSentence};
}

enum class SpanMatch { kExact, kNormalized };

// True iff the reference-side rendering of the cultural span occurs in the
// hypothesis. Instances without a reference span never match.
inline bool span_realized(std::string_view hypothesis, const Instance& instance, SpanMatch mode) {
  if (hypothesis.empty()) return false;
  const auto term = instance.reference_term();
  if (!term || term->empty()) return false;
  if (mode == SpanMatch::kExact) return hypothesis.find(*term) != std::string_view::npos;
  const auto needle = text::normalize(*term);
  if (needle.empty()) return false;
  return text::normalize(hypothesis).find(needle) != std::string::npos;
}

// Byte range of `needle` in `haystack`: exact match first, then ASCII
// case-insensitive. Used to edit a realized span in place.
inline std::optional<std::pair<std::size_t, std::size_t>> locate_span(std::string_view haystack,
                                                                      std::string_view needle) {
  if (needle.empty()) return std::nullopt;
  auto pos = haystack.find(needle);
  if (pos == std::string_view::npos) {
    pos = text::to_lower_ascii(haystack).find(text::to_lower_ascii(needle));
  }
  if (pos == std::string_view::npos) return std::nullopt;
  return std::pair{pos, pos + needle.size()};
}

}  // namespace culteval
