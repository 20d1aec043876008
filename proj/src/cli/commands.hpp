// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO channel modelling and capacity analysis
// Copyright (C) 2026 The losmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LOSMIMO_CLI_COMMANDS_HPP
#define LOSMIMO_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace losmimo::cli
{
    // Process exit codes
    enum ExitCode : int
    {
        EXIT_OK = 0,
        EXIT_CONFIG = 2,      // configuration or argument error
        EXIT_DEGENERATE = 3,  // degenerate geometry
        EXIT_INCOMPATIBLE = 4, // mode or variable not supported by the scene
        EXIT_NUMERICAL = 5    // numerical validity failure
    };

    // Runs one command line (args exclude the program name). Tables go to --out or to `out`,
    // diagnostics to `err`.
    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

    // "start:step:stop" (inclusive, tolerant to rounding) or a comma separated list
    std::vector<double> parse_grid(const std::string &text);
}

#endif
