// Copyright 2026 The effchsh Authors
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

#ifndef EFFCHSH_CLI_H
#define EFFCHSH_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace effchsh::cli {

inline constexpr const char *kToolVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    /// A proven bound failed while its assumption held.
    kTheoremBreach = 2,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace effchsh::cli

#endif  // EFFCHSH_CLI_H
