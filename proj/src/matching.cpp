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

#include "tempora/matching.hpp"

#include "tempora/error.hpp"

namespace tempora {
namespace {

class Kuhn {
 public:
  Kuhn(std::size_t n_left, std::size_t n_right, const std::vector<std::vector<int>>& adj)
      : adj_(adj), match_left_(n_left, kUnmatched), match_right_(n_right, kUnmatched),
        visited_(n_right, 0) {}

  std::vector<int> run() {
    for (std::size_t u = 0; u < match_left_.size(); ++u) {
      ++stamp_;
      augment(static_cast<int>(u));
    }
    return match_left_;
  }

 private:
  bool augment(int u) {
    for (int v : adj_[static_cast<std::size_t>(u)]) {
      auto& seen = visited_[static_cast<std::size_t>(v)];
      if (seen == stamp_) continue;
      seen = stamp_;
      int& owner = match_right_[static_cast<std::size_t>(v)];
      if (owner == kUnmatched || augment(owner)) {
        owner = u;
        match_left_[static_cast<std::size_t>(u)] = v;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> match_left_;
  std::vector<int> match_right_;
  std::vector<unsigned> visited_;
  unsigned stamp_ = 0;
};

}  // namespace

std::vector<int> max_bipartite_matching(std::size_t n_left, std::size_t n_right,
                                        const std::vector<std::vector<int>>& adjacency) {
  if (adjacency.size() != n_left) {
    throw Error(Errc::kLengthMismatch, "adjacency has " + std::to_string(adjacency.size()) +
                                           " rows for " + std::to_string(n_left) + " left vertices");
  }
  for (const auto& row : adjacency) {
    for (int v : row) {
      if (v < 0 || static_cast<std::size_t>(v) >= n_right) {
        throw Error(Errc::kInvalidArgument, "adjacency references vertex " + std::to_string(v));
      }
    }
  }
  return Kuhn(n_left, n_right, adjacency).run();
}

}  // namespace tempora
