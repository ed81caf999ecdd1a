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

#include "qcs/experiments.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace qcs;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("qcs_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("experiment names and documented defaults", "[experiments]")
{
    const std::vector<std::string> expected = {"bpdq-sweep",        "saturation-sweep", "biht-sweep",
                                               "sigma-delta-sweep", "noise-tradeoff",   "pocs-decay",
                                               "bounds"};
    auto names = experiment_names();
    std::sort(names.begin(), names.end());
    auto sorted = expected;
    std::sort(sorted.begin(), sorted.end());
    CHECK(names == sorted);

    const ExperimentConfig b = default_config("bpdq-sweep");
    CHECK(b.scalar("n") == 1024);
    CHECK(b.scalar("k") == 16);
    CHECK(b.scalar("delta_ratio") == 40);
    CHECK(b.sweep("p") == std::vector<double>{2, 4, 10});

    const ExperimentConfig sd = default_config("sigma-delta-sweep");
    CHECK(sd.scalar("n") == 1000);
    CHECK(sd.scalar("k") == 10);
    CHECK(sd.scalar("delta") == 0.01);
    CHECK(sd.sweep("m") == std::vector<double>{100, 200, 400, 800});

    const ExperimentConfig s = default_config("saturation-sweep");
    CHECK(s.scalar("n") == 1024);
    CHECK(s.scalar("m") == 384);
    CHECK(s.scalar("B") == 4);

    CHECK(default_config("biht-sweep").sweep("ratio") == std::vector<double>{0.1, 0.7, 1.5});
    CHECK(default_config("noise-tradeoff").sweep("isnr") == std::vector<double>{35, 20, 10, 5});

    for (const auto &name : expected) {
        CHECK_NOTHROW(default_config(name).validate());
        CHECK_NOTHROW(quick_config(name).validate());
        CHECK(preset_config(name, "full").trials >= preset_config(name, "default").trials);
    }
    CHECK_THROWS_AS(default_config("no-such-experiment"), ConfigError);
    CHECK_THROWS_AS(preset_config("bounds", "huge"), ConfigError);
}

TEST_CASE("ExperimentConfig::set", "[experiments]")
{
    ExperimentConfig c = default_config("bpdq-sweep");
    c.set("trials", "7");
    c.set("seed", "123");
    c.set("n", "256");
    c.set("sweep.p", "2, 4");
    c.set("mk", "10,20");
    c.set("out", "/tmp/x");
    CHECK(c.trials == 7);
    CHECK(c.seed == 123);
    CHECK(c.scalar("n") == 256);
    CHECK(c.sweep("p") == std::vector<double>{2, 4});
    CHECK(c.sweep("mk") == std::vector<double>{10, 20});
    CHECK(c.out_dir == "/tmp/x");

    CHECK_THROWS_AS(c.set("bogus", "1"), ConfigError);
    CHECK_THROWS_AS(c.set("sweep.bogus", "1"), ConfigError);
    CHECK_THROWS_AS(c.set("n", "12abc"), ConfigError);
    CHECK_THROWS_AS(c.set("n", ""), ConfigError);
    CHECK_THROWS_AS(c.set("sweep.p", ""), ConfigError);
    CHECK_THROWS_AS(c.set("trials", "-2"), ConfigError);

    ExperimentConfig bad = default_config("bounds");
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(bad.scalar("nope"), ConfigError);
}

TEST_CASE("read_config_file", "[experiments]")
{
    const fs::path dir = scratch_dir("config");
    fs::create_directories(dir);
    const fs::path file = dir / "sweep.cfg";
    std::ofstream(file) << "# comment line\n"
                        << "trials = 3\n"
                        << "\n"
                        << "sweep.p = 2,10   # trailing comment\n"
                        << "  n=512\n";
    const auto kv = read_config_file(file.string());
    CHECK(kv.size() == 3);
    CHECK(kv.at("trials") == "3");
    CHECK(kv.at("sweep.p") == "2,10");
    CHECK(kv.at("n") == "512");

    std::ofstream(dir / "broken.cfg") << "no equals sign here\n";
    CHECK_THROWS_AS(read_config_file((dir / "broken.cfg").string()), ConfigError);
    CHECK_THROWS_AS(read_config_file((dir / "missing.cfg").string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("CSV formatting", "[experiments]")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(40) == "40");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");

    RecordSet rs{"demo", {"p", "label"}, {}};
    rs.rows.push_back({"demo", 0, {"2", "a,b"}, "snr_db", 1.0 / 3.0});
    rs.rows.push_back({"demo", -1, {"2", "say \"hi\""}, "mean_snr_db", 2.0});
    const std::string csv = to_csv(rs);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "experiment,trial,p,label,metric,value");
    std::getline(in, line);
    CHECK(line == "demo,0,2,\"a,b\",snr_db,0.33333333333333331");
    std::getline(in, line);
    CHECK(line == "demo,-1,2,\"say \"\"hi\"\"\",mean_snr_db,2");
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.back() == '\n');

    CHECK(rs.value("snr_db", 0, {{"p", "2"}}) == 1.0 / 3.0);
    CHECK(rs.select("snr_db", 1).empty());
    CHECK_THROWS(rs.value("nothing", 0));
}

TEST_CASE("write_csv creates the directory", "[experiments]")
{
    const fs::path dir = scratch_dir("write") / "nested";
    RecordSet rs{"demo", {"x"}, {{"demo", 0, {"1"}, "v", 0.5}}};
    const std::string path = write_csv(rs, dir.string());
    CHECK(fs::path(path) == dir / "demo.csv");
    CHECK(slurp(path) == to_csv(rs));
    fs::remove_all(dir.parent_path());
}

TEST_CASE("experiments are deterministic and stay on their grids", "[experiments][property]")
{
    for (const std::string &name : experiment_names()) {
        DYNAMIC_SECTION(name)
        {
            ExperimentConfig cfg = quick_config(name);
            cfg.trials = 2;
            cfg.seed = 77;
            cfg.threads = 1;
            const RecordSet a = run_experiment(cfg);
            const RecordSet b = run_experiment(cfg);
            CHECK(to_csv(a) == to_csv(b));
            cfg.threads = 2;
            CHECK(to_csv(run_experiment(cfg)) == to_csv(a));
            cfg.seed = 78;
            if (name != "noise-tradeoff" && name != "bounds")
                CHECK(to_csv(run_experiment(cfg)) != to_csv(a));

            REQUIRE_FALSE(a.rows.empty());
            for (const ExperimentRecord &r : a.rows) {
                REQUIRE(r.experiment == name);
                REQUIRE(r.params.size() == a.param_names.size());
                REQUIRE(r.trial >= -1);
                REQUIRE(r.trial < cfg.trials);
                for (std::size_t i = 0; i < r.params.size(); ++i) {
                    const auto it = cfg.sweeps.find(a.param_names[i]);
                    if (it == cfg.sweeps.end() || r.params[i].empty())
                        continue;
                    std::set<std::string> grid;
                    for (double v : it->second)
                        grid.insert(format_number(v));
                    INFO(a.param_names[i] << " = " << r.params[i]);
                    REQUIRE(grid.count(r.params[i]) == 1);
                }
            }
        }
    }
}

TEST_CASE("run_experiment rejects bad configurations", "[experiments]")
{
    ExperimentConfig cfg = quick_config("pocs-decay");
    cfg.set("sweep.m", "1,2");
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    ExperimentConfig sd = quick_config("sigma-delta-sweep");
    sd.set("k", "100000");
    CHECK_THROWS_AS(run_experiment(sd), ConfigError);

    ExperimentConfig unknown = quick_config("bounds");
    unknown.experiment = "nope";
    CHECK_THROWS_AS(run_experiment(unknown), ConfigError);
}
