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

// Runs every acceptance criterion at full scale; one PASS/FAIL line each.
// Optional arguments restrict the run to the listed criterion ids.

#include "qcs/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char **argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > qcs::kNumCriteria) {
            std::cerr << "acceptance: criterion id out of range: " << argv[i] << "\n";
            return 2;
        }
        ids.push_back(id);
    }
    if (ids.empty())
        for (int i = 1; i <= qcs::kNumCriteria; ++i)
            ids.push_back(i);

    int failed = 0;
    for (int id : ids) {
        const qcs::CriterionResult r = qcs::check_criterion(id, qcs::AcceptanceScale::Full);
        std::cout << qcs::format_result(r) << std::endl;
        failed += r.passed ? 0 : 1;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " acceptance criteria passed" << std::endl;
    return failed ? 1 : 0;
}
