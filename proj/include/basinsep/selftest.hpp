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

#ifndef BASINSEP_SELFTEST_HPP_
#define BASINSEP_SELFTEST_HPP_

#include <iosfwd>

namespace basinsep {

struct SelftestResult {
  int passed = 0;
  int failed = 0;
};

// Runs every module's invariant checks, printing one line per check.
SelftestResult run_selftests(std::ostream& log);

}  // namespace basinsep

#endif  // BASINSEP_SELFTEST_HPP_
