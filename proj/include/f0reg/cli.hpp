// f0reg/cli.hpp
//
// Copyright 2026  The f0reg Authors
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

#ifndef F0REG_CLI_HPP_
#define F0REG_CLI_HPP_

#include <iosfwd>

namespace f0reg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

/// Runs the `f0reg` command line.  Normal output goes to `out`, diagnostics
/// to `err`.  Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int main(int argc, const char* const* argv);

}  // namespace f0reg::cli

#endif  // F0REG_CLI_HPP_
