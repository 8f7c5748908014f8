// Copyright 2026 The labelaudit Authors.
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

// Command-line front end. Kept in a library so tests can drive it in-process.

#ifndef LABELAUDIT_TOOLS_CLI_H_
#define LABELAUDIT_TOOLS_CLI_H_

#include <ostream>

namespace labelaudit {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace labelaudit

#endif  // LABELAUDIT_TOOLS_CLI_H_
