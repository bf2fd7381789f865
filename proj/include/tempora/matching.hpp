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

#pragma once

#include <cstddef>
#include <vector>

namespace tempora {

inline constexpr int kUnmatched = -1;

/// Maximum-cardinality matching on a bipartite graph given as adjacency lists
/// from left vertices to right vertices (augmenting paths, O(V*E)).
/// Returns, per left vertex, the matched right vertex or kUnmatched.
std::vector<int> max_bipartite_matching(std::size_t n_left, std::size_t n_right,
                                        const std::vector<std::vector<int>>& adjacency);

}  // namespace tempora
