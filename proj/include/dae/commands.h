// Copyright 2026 The DAE Factuality Authors
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

// The `dae` command-line surface. Exposed as a library call so the commands
// can be driven in-process.

#ifndef DAE_COMMANDS_H_
#define DAE_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace dae {

// `args` excludes the program name. Returns the process exit status:
// 0 on success, 1 on a categorized runtime error, 2 on a usage error.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Shortest round-trip decimal form, always with a fraction or exponent
// ("1.0", "0.75", "1e-05").
std::string FormatNumber(double value);

}  // namespace dae

#endif  // DAE_COMMANDS_H_
