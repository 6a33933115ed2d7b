// Copyright 2026 The condyn Authors
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

#ifndef CONDYN_COMMANDS_HPP
#define CONDYN_COMMANDS_HPP

#include <ostream>

namespace condyn::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kVerificationFailure = 2,
    kResourceGuard = 3,
};

/// Entry point of the `condyn` tool: subcommands trajectory, ensemble, scaling, ghz, verify.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace condyn::cli

#endif  // CONDYN_COMMANDS_HPP
