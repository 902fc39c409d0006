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

#ifndef STABLEMATCH_RANDOM_SOURCE_HPP_
#define STABLEMATCH_RANDOM_SOURCE_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace stablematch {

// Every random decision of an online algorithm goes through this interface.
// Swapping the source lets the same algorithm be sampled or have its whole
// support enumerated.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  // Uniform on [0, 1).
  virtual double uniform01() = 0;
  // Uniform on {0, ..., count - 1}; count >= 1.
  virtual std::size_t choice(std::size_t count) = 0;
};

// SplitMix64 finaliser over (seed, index); used to give every Monte Carlo
// trial and probe run an independent stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

class SeededSource final : public RandomSource {
 public:
  explicit SeededSource(std::uint64_t seed) : engine_(seed) {}
  double uniform01() override;
  std::size_t choice(std::size_t count) override;

 private:
  std::mt19937_64 engine_;
};

// Replays fixed values; throws when a script runs dry.
class ScriptedSource final : public RandomSource {
 public:
  ScriptedSource(std::vector<double> uniforms, std::vector<std::size_t> choices = {})
      : uniforms_(std::move(uniforms)), choices_(std::move(choices)) {}
  double uniform01() override;
  std::size_t choice(std::size_t count) override;

 private:
  std::vector<double> uniforms_;
  std::vector<std::size_t> choices_;
  std::size_t next_uniform_ = 0;
  std::size_t next_choice_ = 0;
};

// Depth-first walk over every branch of the random decisions. Continuous
// draws are discretised to `grid_points` quantile midpoints. Usage:
//   EnumeratingSource src(32);
//   do { run(src); use(src.probability()); } while (src.advance());
class EnumeratingSource final : public RandomSource {
 public:
  explicit EnumeratingSource(std::size_t grid_points = 32) : grid_points_(grid_points) {}
  double uniform01() override;
  std::size_t choice(std::size_t count) override;

  // Probability of the branch taken by the last run.
  double probability() const;
  // Moves to the next branch; false once every branch has been visited.
  bool advance();

 private:
  std::size_t draw(std::size_t arity);

  std::size_t grid_points_;
  std::vector<std::pair<std::size_t, std::size_t>> path_;  // (taken, arity)
  std::size_t depth_ = 0;
};

}  // namespace stablematch

#endif  // STABLEMATCH_RANDOM_SOURCE_HPP_
