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

namespace algcool::parallel {

/// Environment variable that overrides the OpenMP thread count.
inline constexpr const char* kThreadsEnv = "ALGCOOL_NUM_THREADS";

/// Applies ALGCOOL_NUM_THREADS (if set and positive) to the OpenMP runtime.
/// Returns the thread count in effect afterwards.
int configure_threads_from_env();

int max_threads();
void set_threads(int n);

}  // namespace algcool::parallel
