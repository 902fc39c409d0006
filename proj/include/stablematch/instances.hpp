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

#ifndef STABLEMATCH_INSTANCES_HPP_
#define STABLEMATCH_INSTANCES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stablematch/market.hpp"
#include "stablematch/online.hpp"

namespace stablematch {

enum class Family {
  kFig1,
  kProp311,
  kFig6Pair,
  kKvvPair,
  kTriangular,
  kAdversaryBegin,
  kAdversaryFull,
  kRandom,
  kRandomVertexWeighted,
};

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view name);

struct GeneratorSpec {
  Family family = Family::kFig1;
  double kappa0 = 0.5;       // prop311
  std::size_t n = 3;         // triangular
  double W = 10.0;           // adversary
  std::size_t l = 3;         // adversary
  std::size_t variant = 0;   // which member of a two-instance family
  std::uint64_t seed = 0;    // random families and adversary probing
  std::size_t buyers = 3;    // random families
  std::size_t sellers = 3;
  int min_value = 0;
  int max_value = 10;
  std::size_t probe_trials = 1000;
  std::string algorithm = "greedy-free-disposal";  // adversary_full probe
};

OnlineInstance generate(const GeneratorSpec& spec);

// Buyers Alice, Bob, Claire; sellers Dori (cost 6) and Edward (cost 10).
Market fig1_market();

// Surplus [[k, 0], [0, 1 - k]] and its canonical allocation: the first pair
// matched at price 0, the second pair left apart.
Market prop311_market(double kappa0);
Allocation prop311_allocation(const Market& market);

// Two edge-arrival instances sharing the first edge Alice-Dori. The second
// edge is Bob-Dori in the first instance and Alice-Edward in the second.
std::array<OnlineInstance, 2> fig6_pair();

// Two vertex-arrival instances: A is adjacent to both sellers, B to one.
std::array<OnlineInstance, 2> kvv_pair();

OnlineInstance triangular(std::size_t n);

OnlineInstance adversary_begin(double W, std::size_t l);
// heavy_on_alpha[k] selects the seller that receives the weight-W buyer B_k.
OnlineInstance adversary_full(double W, const std::vector<bool>& heavy_on_alpha);

struct AdversaryProbe {
  OnlineInstance instance;
  std::vector<std::size_t> alpha_count;  // probe runs matching A_k to alpha_k
  std::vector<std::size_t> beta_count;
  std::vector<bool> heavy_on_alpha;
};

AdversaryProbe probe_adversary(const OnlineAlgorithm& alg, double W, std::size_t l,
                               std::size_t probe_trials, std::uint64_t seed);
OnlineInstance build_adversary_full(const OnlineAlgorithm& alg, double W, std::size_t l,
                                    std::size_t probe_trials, std::uint64_t seed);

// Uniform integer surpluses in [lo, hi], as h = a with zero costs.
Market random_market(std::size_t buyers, std::size_t sellers, int lo, int hi,
                     std::uint64_t seed);
// Each seller draws one weight in [max(lo, 1), hi]; each edge is present with
// probability 1/2.
Market random_vertex_weighted_market(std::size_t buyers, std::size_t sellers, int lo,
                                     int hi, std::uint64_t seed);

std::string instance_to_json(const OnlineInstance& instance);
OnlineInstance instance_from_json(std::string_view text);
OnlineInstance load_instance(const std::filesystem::path& path);
void save_instance(const OnlineInstance& instance, const std::filesystem::path& path);

}  // namespace stablematch

#endif  // STABLEMATCH_INSTANCES_HPP_
