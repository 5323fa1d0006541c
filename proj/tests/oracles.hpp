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

// Independent reference implementations used only by the tests. They favour
// the literal definition over speed: linear scans instead of maps, counting
// instead of sorting, long double sums.

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

// UTF-8 to code points; the inputs here are always well formed.
inline std::u32string decode(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto b = static_cast<unsigned char>(s[i]);
    int len = b < 0x80 ? 1 : (b >> 5) == 6 ? 2 : (b >> 4) == 14 ? 3 : 4;
    char32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

// Tokenizer restricted to the alphabet the random tests draw from: ASCII,
// CJK unified ideographs and the ideographic full stop and comma.
inline std::vector<std::u32string> tokens(std::string_view s) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t c : decode(s)) {
    const bool space = c == U' ' || c == U'\t' || c == U'\n';
    const bool single = (c < 0x80 && std::string_view("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~").find(static_cast<char>(c)) !=
                                         std::string_view::npos) ||
                        (c >= 0x4E00 && c <= 0x9FFF) || c == 0x3001 || c == 0x3002;
    if (space || single) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      if (single) out.push_back(std::u32string(1, c));
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T>
std::vector<std::vector<T>> grams(const std::vector<T>& xs, std::size_t n) {
  std::vector<std::vector<T>> out;
  for (std::size_t i = 0; i + n <= xs.size(); ++i) out.emplace_back(xs.begin() + i, xs.begin() + i + n);
  return out;
}

template <typename T>
std::size_t count_of(const std::vector<std::vector<T>>& pool, const std::vector<T>& g) {
  std::size_t c = 0;
  for (const auto& x : pool) c += (x == g);
  return c;
}

// Clipped matches: every distinct hypothesis n-gram contributes
// min(count in hyp, count in ref).
template <typename T>
std::size_t clipped(const std::vector<std::vector<T>>& h, const std::vector<std::vector<T>>& r) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    bool first = true;
    for (std::size_t j = 0; j < i; ++j) first &= !(h[j] == h[i]);
    if (!first) continue;
    m += std::min(count_of(h, h[i]), count_of(r, h[i]));
  }
  return m;
}

// Sentence BLEU with one reference: add-one smoothing above unigrams,
// geometric mean over orders with at least one hypothesis n-gram.
inline double bleu(std::string_view hyp, std::string_view ref) {
  const auto h = tokens(hyp), r = tokens(ref);
  if (h.empty()) return 0.0;
  long double logs = 0;
  int orders = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto hg = grams(h, n), rg = grams(r, n);
    if (hg.empty()) continue;
    const long double m = clipped(hg, rg), t = hg.size();
    const long double p = n == 1 ? m / t : (m + 1) / (t + 1);
    if (p == 0) return 0.0;
    logs += std::log(p);
    ++orders;
  }
  const long double bp = h.size() < r.size() ? std::exp(1.0L - static_cast<long double>(r.size()) / h.size()) : 1.0L;
  return static_cast<double>(100 * bp * std::exp(logs / orders));
}

// chrF++ with beta 2: char orders 1..6 on whitespace-free text, word orders
// 1..2, precision and recall averaged over orders both sides populate.
inline double chrf_pp(std::string_view hyp, std::string_view ref) {
  auto chars = [](std::string_view s) {
    std::vector<char32_t> out;
    for (char32_t c : decode(s)) {
      if (c != U' ' && c != U'\t' && c != U'\n') out.push_back(c);
    }
    return out;
  };
  const auto hc = chars(hyp), rc = chars(ref);
  const auto hw = tokens(hyp), rw = tokens(ref);
  long double p = 0, r = 0;
  int orders = 0;
  auto add = [&](auto hg, auto rg) {
    if (hg.empty() || rg.empty()) return;
    const long double m = clipped(hg, rg);
    p += m / hg.size();
    r += m / rg.size();
    ++orders;
  };
  for (std::size_t n = 1; n <= 6; ++n) add(grams(hc, n), grams(rc, n));
  for (std::size_t n = 1; n <= 2; ++n) add(grams(hw, n), grams(rw, n));
  if (orders == 0) return 0.0;
  p /= orders;
  r /= orders;
  if (p + r == 0) return 0.0;
  return static_cast<double>(100 * 5 * p * r / (4 * p + r));
}

// Textbook single-pass formula in extended precision.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const long double n = x.size();
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

// Rank of x[i] = 1 + (# smaller) + (# equal others) / 2.
inline std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      less += x[j] < x[i];
      equal += (j != i && x[j] == x[i]);
    }
    out[i] = 1.0 + static_cast<double>(less) + static_cast<double>(equal) / 2.0;
  }
  return out;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

// First name in the fixed order that occurs in the set.
inline std::string primary(const std::set<std::string>& labels) {
  static const char* order[] = {"Omission",       "Literalization", "SenseError",        "Neutralization",
                                "MisSubstitution", "PragmaticShift", "OverInterpretation"};
  for (const char* name : order) {
    if (labels.contains(name)) return name;
  }
  return "";
}

}  // namespace oracle
