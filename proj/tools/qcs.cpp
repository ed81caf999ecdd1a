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

// qcs: experiment harness. Each experiment subcommand writes <out>/<name>.csv.
// Exit status: 0 success, 1 experiment failure, 2 configuration error.

#include "qcs/acceptance.hpp"
#include "qcs/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitExperiment = 1;
constexpr int kExitConfig = 2;

struct Options
{
    std::string preset = "default";
    std::string config_file;
    std::optional<long> n, k, trials, threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::vector<std::string> sweeps;
    std::vector<std::string> sets;
};

std::pair<std::string, std::string> split_assignment(const std::string &text, const char *flag)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw qcs::ConfigError(std::string(flag) + " expects name=value, got '" + text + "'");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

qcs::ExperimentConfig build_config(const std::string &experiment, const Options &o)
{
    qcs::ExperimentConfig cfg = qcs::preset_config(experiment, o.preset);
    if (const char *env = std::getenv("QCS_OUTPUT_DIR"); env && *env)
        cfg.out_dir = env;
    if (!o.config_file.empty())
        for (const auto &[key, value] : qcs::read_config_file(o.config_file))
            cfg.set(key, value);
    if (o.n)
        cfg.set("n", std::to_string(*o.n));
    if (o.k)
        cfg.set("k", std::to_string(*o.k));
    if (o.trials)
        cfg.set("trials", std::to_string(*o.trials));
    if (o.threads)
        cfg.set("threads", std::to_string(*o.threads));
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.out)
        cfg.set("out", *o.out);
    for (const auto &s : o.sweeps) {
        const auto [name, list] = split_assignment(s, "--sweep");
        cfg.set("sweep." + name, list);
    }
    for (const auto &s : o.sets) {
        const auto [key, value] = split_assignment(s, "--set");
        cfg.set(key, value);
    }
    cfg.validate();
    return cfg;
}

int run_experiment_command(const std::string &experiment, const Options &o)
{
    const qcs::ExperimentConfig cfg = build_config(experiment, o);
    const qcs::RecordSet rs = qcs::run_experiment(cfg);
    const std::string path = qcs::write_csv(rs, cfg.out_dir);
    std::cout << "wrote " << path << " (" << rs.rows.size() << " records)\n";
    return kExitOk;
}

int run_selftest(bool full, std::uint64_t seed, const std::vector<int> &only)
{
    std::vector<int> ids = only;
    if (ids.empty())
        for (int i = 1; i <= qcs::kNumCriteria; ++i)
            ids.push_back(i);
    int failed = 0;
    for (int id : ids) {
        const qcs::CriterionResult r =
            qcs::check_criterion(id, full ? qcs::AcceptanceScale::Full : qcs::AcceptanceScale::Quick, seed);
        std::cout << qcs::format_result(r) << std::endl;
        failed += r.passed ? 0 : 1;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed\n";
    return failed ? kExitExperiment : kExitOk;
}

void add_experiment_options(CLI::App *cmd, Options &o)
{
    cmd->add_option("--preset", o.preset, "Trial-count preset")
        ->check(CLI::IsMember({"quick", "default", "full"}));
    cmd->add_option("--config", o.config_file, "Flat key = value config file (flags win)");
    cmd->add_option("--n", o.n, "Ambient dimension");
    cmd->add_option("--k", o.k, "Sparsity");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
    cmd->add_option("--seed", o.seed, "Base seed");
    cmd->add_option("--out", o.out, "Output directory (default $QCS_OUTPUT_DIR or .)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = hardware concurrency");
    cmd->add_option("--sweep", o.sweeps, "Sweep override name=v1,v2,... (repeatable)");
    cmd->add_option("--set", o.sets, "Scalar override key=value (repeatable)");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Quantized compressive sensing experiment harness"};
    app.require_subcommand(1);

    Options opts;
    std::vector<std::pair<std::string, CLI::App *>> experiments;
    for (const std::string &name : qcs::experiment_names()) {
        CLI::App *cmd = app.add_subcommand(name, "Run the " + name + " experiment and write CSV");
        add_experiment_options(cmd, opts);
        experiments.emplace_back(name, cmd);
    }

    bool full = false;
    std::uint64_t selftest_seed = 20240601;
    std::vector<int> only;
    CLI::App *selftest = app.add_subcommand("selftest", "Run the acceptance criteria at reduced scale");
    selftest->add_flag("--full", full, "Use the full trial counts");
    selftest->add_option("--seed", selftest_seed, "Base seed");
    selftest->add_option("--only", only, "Criterion ids to run")->check(CLI::Range(1, qcs::kNumCriteria));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (selftest->parsed())
            return run_selftest(full, selftest_seed, only);
        for (const auto &[name, cmd] : experiments)
            if (cmd->parsed())
                return run_experiment_command(name, opts);
    } catch (const qcs::ParameterError &e) {
        std::cerr << "qcs: configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "qcs: experiment failed: " << e.what() << "\n";
        return kExitExperiment;
    }
    return kExitConfig;
}
