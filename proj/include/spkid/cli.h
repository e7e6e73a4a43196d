// include/spkid/cli.h

// Copyright 2026 The spkid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKID_CLI_H_
#define SPKID_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "spkid/error.h"

namespace spkid {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;
// Library errors exit with kExitErrorBase + ErrorCode.
inline constexpr int kExitErrorBase = 10;

int ExitCodeFor(ErrorCode code);

// Entry point of the spkid tool. Returns the process exit status.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace spkid

#endif  // SPKID_CLI_H_
