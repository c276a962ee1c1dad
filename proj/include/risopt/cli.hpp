// SPDX-License-Identifier: Apache-2.0
//
// risopt: joint beamforming and RIS phase-shift optimization for MIMO downlinks
// Copyright (C) 2026 The risopt authors
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

#pragma once

#include <iosfwd>

namespace risopt {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_io = 3,
    exit_numerical = 4,
};

/// Entry point of the `risopt` executable: run | sweep | selftest | gradcheck.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace risopt
