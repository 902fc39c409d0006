// Copyright 2026 The stablematch Authors
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

#include "stablematch/random_source.hpp"

#include <string>

#include "stablematch/errors.hpp"

namespace stablematch {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SeededSource::uniform01() {
  // 53 random mantissa bits; identical on every standard library.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t SeededSource::choice(std::size_t count) {
  if (count == 0) throw Error("choice over an empty range");
  const std::uint64_t n = count;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

double ScriptedSource::uniform01() {
  if (next_uniform_ >= uniforms_.size()) throw Error("scripted uniforms exhausted");
  return uniforms_[next_uniform_++];
}

std::size_t ScriptedSource::choice(std::size_t count) {
  if (next_choice_ >= choices_.size()) throw Error("scripted choices exhausted");
  const std::size_t c = choices_[next_choice_++];
  if (c >= count) {
    throw Error("scripted choice " + std::to_string(c) + " out of range " +
                std::to_string(count));
  }
  return c;
}

std::size_t EnumeratingSource::draw(std::size_t arity) {
  if (arity == 0) throw Error("choice over an empty range");
  if (depth_ < path_.size()) {
    if (path_[depth_].second != arity) {
      throw Error("random decision tree changed shape between replays");
    }
    return path_[depth_++].first;
  }
  path_.emplace_back(0, arity);
  ++depth_;
  return 0;
}

double EnumeratingSource::uniform01() {
  const std::size_t k = draw(grid_points_);
  return (static_cast<double>(k) + 0.5) / static_cast<double>(grid_points_);
}

std::size_t EnumeratingSource::choice(std::size_t count) { return draw(count); }

double EnumeratingSource::probability() const {
  double p = 1.0;
  for (std::size_t d = 0; d < depth_; ++d) p /= static_cast<double>(path_[d].second);
  return p;
}

bool EnumeratingSource::advance() {
  path_.resize(depth_);
  depth_ = 0;
  while (!path_.empty()) {
    auto& [taken, arity] = path_.back();
    if (taken + 1 < arity) {
      ++taken;
      return true;
    }
    path_.pop_back();
  }
  return false;
}

}  // namespace stablematch
