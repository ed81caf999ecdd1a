// SPDX-License-Identifier: Apache-2.0
//
// qcs - quantized compressive sensing toolkit
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

#include <cstdint>
#include <string>
#include <vector>

namespace qcs {

/// Full runs the documented trial counts; Quick cuts them for the self-test.
enum class AcceptanceScale
{
    Full,
    Quick
};

struct CriterionResult
{
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail; ///< measured quantities, for the report line
    double seconds = 0.0;
};

inline constexpr int kNumCriteria = 11;

/// Runs criterion id (1..kNumCriteria). Exceptions are caught and reported as failures.
CriterionResult check_criterion(int id, AcceptanceScale scale, std::uint64_t seed = 20240601);

/// One report line: "[PASS] 3 name (1.2 s): detail".
std::string format_result(const CriterionResult &r);

} // namespace qcs
