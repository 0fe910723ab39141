// SPDX-License-Identifier: Apache-2.0
//
// blindris: blind cascaded-channel estimation for RIS-assisted mmWave uplinks
// Copyright (C) 2026 The blindris authors
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

#ifndef BLINDRIS_SELFTEST_HPP
#define BLINDRIS_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace blindris::selftest {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Quick oracle checks run by `blindris selftest`: kernel equivalence,
// Kronecker/vec identity, cascade factorization, sensing-matrix consistency,
// coherence decoupling, objective gradient vs finite differences, S-OMP vs
// exhaustive search, and one noiseless end-to-end trial.
std::vector<Check> run(std::uint64_t seed);

} // namespace blindris::selftest

#endif
