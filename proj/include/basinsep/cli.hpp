// Copyright 2026 The Basinsep Authors
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

#ifndef BASINSEP_CLI_HPP_
#define BASINSEP_CLI_HPP_

#include <iosfwd>

#include "basinsep/config.hpp"

namespace basinsep {

// Executes the configured command, writing CSV artifacts and a manifest into
// config.out_dir and a short summary to `log`. Returns the process exit
// code: 0 on success, nonzero on config violations, failed self-checks, or
// non-finite values in outputs.
int run_command(const RunConfig& config, std::ostream& log);

}  // namespace basinsep

#endif  // BASINSEP_CLI_HPP_
