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

#include "qcs/numerics.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qcs {

/// Invalid experiment configuration (unknown key, malformed value, empty sweep).
class ConfigError : public ParameterError
{
public:
    using ParameterError::ParameterError;
};

/*!
 * Parameters of one Monte-Carlo sweep.
 *
 * scalars and sweeps are pre-populated by default_config() with every key the
 * experiment understands; set() refuses unknown keys.
 */
struct ExperimentConfig
{
    std::string experiment;
    std::map<std::string, double> scalars;
    std::map<std::string, std::vector<double>> sweeps;
    int trials = 1;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 0; ///< 0 uses the hardware concurrency

    void validate() const;
    double scalar(const std::string &key) const;
    const std::vector<double> &sweep(const std::string &key) const;

    /// Applies key=value. Keys: trials, seed, out, threads, a scalar name, or
    /// sweep.<name> (also accepted bare when unambiguous) with a comma list.
    void set(const std::string &key, const std::string &value);
};

std::vector<std::string> experiment_names();

/// Defaults for a named experiment; throws ConfigError for unknown names.
ExperimentConfig default_config(const std::string &experiment);

/// Reduced trial counts and grids for fast runs.
ExperimentConfig quick_config(const std::string &experiment);

/// "quick", "default" or "full" (larger trial counts); throws ConfigError otherwise.
ExperimentConfig preset_config(const std::string &experiment, const std::string &preset);

/// Reads flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string &path);

/// One CSV row: experiment, trial (-1 for aggregates), parameter values, metric, value.
struct ExperimentRecord
{
    std::string experiment;
    int trial = -1;
    std::vector<std::string> params;
    std::string metric;
    double value = 0.0;
};

struct RecordSet
{
    std::string experiment;
    std::vector<std::string> param_names;
    std::vector<ExperimentRecord> rows;

    /// Rows matching metric, trial and (name, value) parameter filters.
    std::vector<const ExperimentRecord *>
    select(const std::string &metric, int trial,
           const std::vector<std::pair<std::string, std::string>> &filters = {}) const;

    /// Value of the single matching row; throws if there is not exactly one.
    double value(const std::string &metric, int trial,
                 const std::vector<std::pair<std::string, std::string>> &filters = {}) const;
};

/// Shortest round-trip formatting used for parameter cells ("%.17g" for values).
std::string format_number(double v);

std::string to_csv(const RecordSet &records);

/// Writes <dir>/<experiment>.csv (creating dir) and returns the path.
std::string write_csv(const RecordSet &records, const std::string &dir);

RecordSet run_bpdq_sweep(const ExperimentConfig &cfg);
RecordSet run_saturation_sweep(const ExperimentConfig &cfg);
RecordSet run_biht_sweep(const ExperimentConfig &cfg);
RecordSet run_sigma_delta_sweep(const ExperimentConfig &cfg);
RecordSet run_noise_tradeoff(const ExperimentConfig &cfg);
RecordSet run_pocs_decay(const ExperimentConfig &cfg);
RecordSet run_bounds(const ExperimentConfig &cfg);

/// Dispatches on cfg.experiment.
RecordSet run_experiment(const ExperimentConfig &cfg);

} // namespace qcs
