// Copyright 2026 The algcool Authors
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

namespace algcool::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfig = 2,     // unreadable file, bad config, DSL parse error
  kNumerical = 3,  // optimizer failed to reach the requested fidelity or produced non-finite values
};

/// Runs one subcommand (analyze | simulate | scan | grape | parse-check).
/// args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace algcool::cli
