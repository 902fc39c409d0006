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

#ifndef STABLEMATCH_TABLES_HPP_
#define STABLEMATCH_TABLES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stablematch/evaluation.hpp"
#include "stablematch/online.hpp"

namespace stablematch {

struct TablesConfig {
  std::uint64_t seed = 2026;
  std::size_t sweep = 100;    // random instances per setting
  std::size_t trials = 20000; // Monte Carlo trials for adversary cells
  std::size_t probe_trials = 2000;
};

// One cell of a guarantee table.
//   status is one of verified-lower-bound, verified-collapse, estimate, open.
struct TableCell {
  Metric metric = Metric::kLambda;
  Mode mode = Mode::kPost;
  std::string claim;        // reference guarantee, e.g. "1/2" or "0"
  std::string algorithm;
  double measured = 0.0;
  std::optional<double> std_error;
  std::string status;
  std::string detail;
  bool violated = false;
  std::optional<OnlineInstance> witness;
};

struct TablesResult {
  std::vector<TableCell> vertex_weighted;
  std::vector<TableCell> free_disposal;
  bool ok() const;
};

TablesResult compute_tables(const TablesConfig& config);

std::string table_csv(const std::vector<TableCell>& cells);

}  // namespace stablematch

#endif  // STABLEMATCH_TABLES_HPP_
