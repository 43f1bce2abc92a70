// Copyright 2026 The eicic Authors
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

// Command-line front end: generate, solve, evaluate, sweep, oracle-check.

#ifndef EICIC_CLI_HPP
#define EICIC_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace eicic::cli {

enum ExitCode {
  kOk = 0,
  kUsage = 2,      // bad flags or missing --seed
  kConfig = 3,     // unreadable or malformed spec / instance
  kSize = 4,       // oracle enumeration too large
  kInternal = 5,   // infeasible output or unexpected failure
  kCheckFailed = 6,  // oracle-check ran but some verification failed
};

// `args` excludes the program name. Failures print one line
// "error: <code>: <message>" to `err`, where <code> is usage, config, size,
// infeasible or internal.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eicic::cli

#endif  // EICIC_CLI_HPP
