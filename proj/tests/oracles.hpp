// Copyright 2026 The Tempora Authors
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

// Slow, obviously-correct reference implementations shared by the unit and
// acceptance suites. Nothing here calls into the code under test except for
// plain data types.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "tempora/types.hpp"

namespace tempora::oracle {

/// IoU by direct interval arithmetic in extended precision.
inline double iou(const TimeInterval& a, const TimeInterval& b) {
  const long double lo = std::max<long double>(a.onset, b.onset);
  const long double hi = std::min<long double>(a.offset, b.offset);
  const long double inter = std::max<long double>(0.0L, hi - lo);
  const long double uni = (static_cast<long double>(a.offset) - a.onset) +
                          (static_cast<long double>(b.offset) - b.onset) - inter;
  if (uni <= 0.0L) return a == b ? 1.0 : 0.0;
  return static_cast<double>(inter / uni);
}

/// Maximum matching size by trying every assignment of left vertices.
inline std::size_t brute_force_matching(const std::vector<std::vector<bool>>& edge) {
  const std::size_t n_left = edge.size();
  const std::size_t n_right = n_left ? edge[0].size() : 0;
  std::vector<bool> used(n_right, false);
  std::size_t best = 0;
  auto rec = [&](auto&& self, std::size_t i, std::size_t matched) -> void {
    if (matched + (n_left - i) <= best) return;
    if (i == n_left) {
      best = std::max(best, matched);
      return;
    }
    for (std::size_t j = 0; j < n_right; ++j) {
      if (edge[i][j] && !used[j]) {
        used[j] = true;
        self(self, i + 1, matched + 1);
        used[j] = false;
      }
    }
    self(self, i + 1, matched);
  };
  rec(rec, 0, 0);
  return best;
}

inline std::string fold(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c);
  }
  return out;
}

/// Fixed-collar eligibility with exact label matching.
inline std::vector<std::vector<bool>> eligibility(const std::vector<Event>& preds,
                                                  const std::vector<Event>& refs,
                                                  double collar) {
  std::vector<std::vector<bool>> edge(preds.size(), std::vector<bool>(refs.size(), false));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < refs.size(); ++j) {
      edge[i][j] = fold(preds[i].label) == fold(refs[j].label) &&
                   std::abs(preds[i].interval.onset - refs[j].interval.onset) <= collar + 1e-9 &&
                   std::abs(preds[i].interval.offset - refs[j].interval.offset) <= collar + 1e-9;
    }
  }
  return edge;
}

/// Mean of rows, accumulated per distinct id in long double.
inline std::vector<double> set_mean(const std::vector<std::vector<float>>& rows,
                                    const std::vector<std::uint32_t>& ids) {
  std::vector<std::size_t> count(rows.size(), 0);
  for (auto id : ids) ++count[id];
  const std::size_t dim = rows.empty() ? 0 : rows[0].size();
  std::vector<double> out(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    long double s = 0.0L;
    for (std::size_t r = 0; r < rows.size(); ++r) s += static_cast<long double>(count[r]) * rows[r][d];
    out[d] = static_cast<double>(s / ids.size());
  }
  return out;
}

/// log N(x; mu, sigma^2) via the density itself.
inline double gaussian_logpdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::log(std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi)));
}

inline double mean(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

inline double pop_std(const std::vector<double>& v) {
  const double m = mean(v);
  long double s = 0.0L;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(static_cast<double>(s / v.size()));
}

}  // namespace tempora::oracle
