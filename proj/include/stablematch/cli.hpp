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

#ifndef STABLEMATCH_CLI_HPP_
#define STABLEMATCH_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace stablematch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundViolation = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCapacity = 3;

// Runs the command line tool. args excludes the program name. Machine output
// goes to out (or the -o file), human summaries to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablematch

#endif  // STABLEMATCH_CLI_HPP_
