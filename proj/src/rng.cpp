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

#include "basinsep/rng.hpp"

#include <stdexcept>

namespace basinsep {
namespace {

constexpr std::uint64_t kRootTag = 0x8af7b4a1c53d20e9ULL;
constexpr std::uint64_t kTextTag = 0x517cc1b727220a95ULL;
constexpr std::uint64_t kIndexTag = 0x2545f4914f6cdd1dULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t label_hash(const PathLabel& label) {
  if (label.kind == PathLabel::Kind::text) {
    return splitmix64(kTextTag ^ fnv1a64(label.text));
  }
  return splitmix64(kIndexTag ^ splitmix64(label.index));
}

}  // namespace

RngStream::RngStream(std::uint64_t key) : key_(key), engine_(key) {}

RngStream RngStream::from_root(std::uint64_t root_seed) {
  return RngStream(splitmix64(root_seed ^ kRootTag));
}

RngStream RngStream::child(const PathLabel& label) const {
  return RngStream(splitmix64(key_ ^ label_hash(label)));
}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::gaussian(double sigma) {
  if (sigma < 0.0) {
    throw std::invalid_argument("gaussian: sigma must be >= 0");
  }
  if (sigma == 0.0) return 0.0;
  return sigma * normal_(engine_);
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_index: n must be >= 1");
  }
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

RngStream derive_stream(std::uint64_t root_seed,
                        const std::vector<PathLabel>& path) {
  RngStream stream = RngStream::from_root(root_seed);
  for (const PathLabel& label : path) {
    stream = stream.child(label);
  }
  return stream;
}

}  // namespace basinsep
