// Copyright 2026 The Basinsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BASINSEP_RNG_HPP_
#define BASINSEP_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace basinsep {

// A label on the derivation path of a random stream. Labels are either
// strings ("task", "mixed") or integers (trial index); the two kinds never
// collide ("1" != 1).
struct PathLabel {
  enum class Kind { text, index };
  Kind kind;
  std::string text;
  std::uint64_t index;

  PathLabel(const char* s) : kind(Kind::text), text(s), index(0) {}
  PathLabel(std::string_view s) : kind(Kind::text), text(s), index(0) {}
  PathLabel(std::uint64_t i) : kind(Kind::index), index(i) {}
  PathLabel(int i) : kind(Kind::index), index(static_cast<std::uint64_t>(i)) {}
  PathLabel(long i) : kind(Kind::index), index(static_cast<std::uint64_t>(i)) {}
  PathLabel(unsigned int i) : kind(Kind::index), index(i) {}
};

// Deterministic stream of pseudo-random draws identified by a 64-bit root
// seed and a path of labels. Equal (root, path) pairs always yield identical
// draw sequences; distinct paths yield independent-looking streams. Child
// derivation depends only on the path, never on how many draws the parent
// has consumed, so trials can be reseeded and run in any order.
class RngStream {
 public:
  static RngStream from_root(std::uint64_t root_seed);

  RngStream child(const PathLabel& label) const;

  // Uniform real in [0, 1).
  double uniform();

  // Single draw from N(0, sigma^2). sigma = 0 returns 0 exactly.
  double gaussian(double sigma);

  // Uniform integer in [0, n). Requires n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

  std::uint64_t next_u64();

  std::uint64_t key() const { return key_; }

 private:
  explicit RngStream(std::uint64_t key);

  std::uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Builds the stream for (root_seed, path). An empty path is valid and names
// the root stream itself.
RngStream derive_stream(std::uint64_t root_seed,
                        const std::vector<PathLabel>& path);

}  // namespace basinsep

#endif  // BASINSEP_RNG_HPP_
