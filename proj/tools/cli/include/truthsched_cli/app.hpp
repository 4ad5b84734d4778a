// Copyright 2026 The truthsched Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace truthsched::cli {

enum ExitCode : int {
  kExitClean = 0,
  kExitViolations = 1,  // truthcheck found violations, or lb-verify failed a check
  kExitUsage = 2,
};

/// Environment variable naming the directory relative -o paths resolve in.
inline constexpr const char* kOutDirEnv = "TRUTHSCHED_OUT_DIR";

/// Runs one command line (args[0] is the program name). Tables go to `out`
/// unless -o names a file; diagnostics go to `err`.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace truthsched::cli
