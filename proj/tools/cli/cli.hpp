// Copyright 2026 The slerev Authors
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


#ifndef SLEREV_CLI_CLI_HPP
#define SLEREV_CLI_CLI_HPP

#include <ostream>

namespace slerev::cli {

enum ExitCode : int {
  kExitPass = 0,
  /// Statistical failure; for `validate`, a partial-sum threshold violation.
  kExitFail = 1,
  kExitInconclusive = 2,
  /// Unreadable or invalid configuration, and any other error that stops a run.
  kExitConfig = 3,
  kExitUnsupported = 4,
};

/// Entry point of the slerev tool with injectable streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slerev::cli

#endif  // SLEREV_CLI_CLI_HPP
