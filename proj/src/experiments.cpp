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

#include "qcs/metrics.hpp"
#include "qcs/quantize.hpp"
#include "qcs/recon.hpp"
#include "qcs/sigma_delta.hpp"
#include "qcs/signals.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace qcs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string &key, const std::string &text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("config: value for '" + key + "' is not a number: '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string &key, const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, item));
    if (out.empty())
        throw ConfigError("config: sweep '" + key + "' is empty");
    return out;
}

} // namespace

// ------------------------------------------------------------------ config

void ExperimentConfig::validate() const
{
    if (trials < 1)
        throw ConfigError("config: trials must be >= 1");
    if (threads < 0)
        throw ConfigError("config: threads must be >= 0");
    for (const auto &[name, values] : sweeps)
        if (values.empty())
            throw ConfigError("config: sweep '" + name + "' is empty");
    for (const auto &[name, v] : scalars)
        if (!std::isfinite(v))
            throw ConfigError("config: scalar '" + name + "' is not finite");
}

double ExperimentConfig::scalar(const std::string &key) const
{
    const auto it = scalars.find(key);
    if (it == scalars.end())
        throw ConfigError("config: unknown scalar '" + key + "' for " + experiment);
    return it->second;
}

const std::vector<double> &ExperimentConfig::sweep(const std::string &key) const
{
    const auto it = sweeps.find(key);
    if (it == sweeps.end())
        throw ConfigError("config: unknown sweep '" + key + "' for " + experiment);
    return it->second;
}

void ExperimentConfig::set(const std::string &raw_key, const std::string &value)
{
    const std::string key = trim(raw_key);
    if (key == "trials") {
        const double v = parse_double(key, value);
        if (v < 1 || v != std::floor(v) || v > 1e9)
            throw ConfigError("config: trials must be a positive integer");
        trials = static_cast<int>(v);
    } else if (key == "seed") {
        const std::string t = trim(value);
        std::uint64_t s = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
            throw ConfigError("config: seed must be a non-negative integer");
        seed = s;
    } else if (key == "out") {
        out_dir = trim(value);
        if (out_dir.empty())
            throw ConfigError("config: out must not be empty");
    } else if (key == "threads") {
        const double v = parse_double(key, value);
        if (v < 0 || v != std::floor(v) || v > 4096)
            throw ConfigError("config: threads must be a non-negative integer");
        threads = static_cast<int>(v);
    } else if (key.rfind("sweep.", 0) == 0) {
        const std::string name = key.substr(6);
        if (!sweeps.count(name))
            throw ConfigError("config: unknown sweep '" + name + "' for " + experiment);
        sweeps[name] = parse_list(name, value);
    } else if (scalars.count(key)) {
        scalars[key] = parse_double(key, value);
    } else if (sweeps.count(key)) {
        sweeps[key] = parse_list(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "' for " + experiment);
    }
}

std::vector<std::string> experiment_names()
{
    return {"bpdq-sweep",       "saturation-sweep", "biht-sweep", "sigma-delta-sweep",
            "noise-tradeoff", "pocs-decay",       "bounds"};
}

ExperimentConfig default_config(const std::string &experiment)
{
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "bpdq-sweep") {
        c.scalars = {{"n", 1024}, {"k", 16}, {"delta_ratio", 40}, {"zeta", 2}};
        c.sweeps = {{"p", {2, 4, 10}}, {"mk", {10, 15, 20, 25, 30, 35, 40}}};
        c.trials = 50;
    } else if (experiment == "saturation-sweep") {
        c.scalars = {{"n", 1024}, {"m", 384}, {"k", 20}, {"B", 4}};
        c.sweeps = {{"S", {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0}},
                    {"class", {0, 0.4, 0.8}}};
        c.trials = 20;
    } else if (experiment == "biht-sweep") {
        c.scalars = {{"n", 128}, {"k", 4}, {"eta", 1}};
        c.sweeps = {{"ratio", {0.1, 0.7, 1.5}}};
        c.trials = 100;
    } else if (experiment == "sigma-delta-sweep") {
        c.scalars = {{"n", 1000}, {"k", 10}, {"delta", 0.01}, {"floor", 0.5}};
        c.sweeps = {{"m", {100, 200, 400, 800}}, {"r", {1, 2, 3}}};
        c.trials = 30;
    } else if (experiment == "noise-tradeoff") {
        c.scalars = {{"n", 1024}, {"k", 16}, {"R", 2048}, {"max_bits", 16}, {"delta_rip", 0.2},
                     {"kappa", 0}, {"mc", 0}};
        c.sweeps = {{"isnr", {35, 20, 10, 5}}};
        c.trials = 100;
    } else if (experiment == "pocs-decay") {
        c.scalars = {{"k", 2}, {"delta", 0.05}};
        c.sweeps = {{"m", {8, 16, 32, 64, 128, 256, 512}}};
        c.trials = 50;
    } else if (experiment == "bounds") {
        c.scalars = {{"n", 1024}, {"k", 16}, {"m", 256}, {"B", 4}, {"R", 1024}, {"lp", 0.5},
                     {"delta", 1}};
        c.sweeps = {{"R", {64, 128, 256, 512, 1024, 2048, 4096}},
                    {"m", {16, 32, 64, 128, 256, 512, 1024}},
                    {"p", {2, 4, 6, 8, 10}}};
        c.trials = 1;
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    return c;
}

ExperimentConfig quick_config(const std::string &experiment)
{
    ExperimentConfig c = default_config(experiment);
    if (experiment == "bpdq-sweep") {
        c.scalars["n"] = 128;
        c.scalars["k"] = 4;
        c.sweeps["mk"] = {10, 40};
        c.sweeps["p"] = {2, 10};
        c.trials = 4;
    } else if (experiment == "saturation-sweep") {
        c.scalars["n"] = 128;
        c.scalars["m"] = 64;
        c.scalars["k"] = 4;
        c.sweeps["S"] = {0.5, 1.0, 2.0, 4.0};
        c.sweeps["class"] = {0};
        c.trials = 3;
    } else if (experiment == "biht-sweep") {
        c.scalars["n"] = 64;
        c.scalars["k"] = 2;
        c.trials = 10;
    } else if (experiment == "sigma-delta-sweep") {
        c.scalars["n"] = 200;
        c.scalars["k"] = 4;
        c.sweeps["m"] = {40, 80, 160};
        c.trials = 3;
    } else if (experiment == "noise-tradeoff") {
        c.trials = 5;
    } else if (experiment == "pocs-decay") {
        c.sweeps["m"] = {8, 32, 128};
        c.trials = 10;
    }
    return c;
}

ExperimentConfig preset_config(const std::string &experiment, const std::string &preset)
{
    if (preset == "quick")
        return quick_config(experiment);
    ExperimentConfig c = default_config(experiment);
    if (preset == "default")
        return c;
    if (preset != "full")
        throw ConfigError("unknown preset '" + preset + "' (quick, default, full)");
    if (experiment == "bpdq-sweep")
        c.trials = 500;
    else if (experiment == "biht-sweep")
        c.trials = 1000;
    else if (experiment == "saturation-sweep" || experiment == "sigma-delta-sweep")
        c.trials = 100;
    else if (experiment == "pocs-decay")
        c.trials = 200;
    return c;
}

std::map<std::string, std::string> read_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

// ----------------------------------------------------------------- records

std::vector<const ExperimentRecord *>
RecordSet::select(const std::string &metric, int trial,
                  const std::vector<std::pair<std::string, std::string>> &filters) const
{
    std::vector<std::size_t> cols;
    for (const auto &f : filters) {
        const auto it = std::find(param_names.begin(), param_names.end(), f.first);
        if (it == param_names.end())
            throw ParameterError("RecordSet::select: unknown parameter " + f.first);
        cols.push_back(static_cast<std::size_t>(it - param_names.begin()));
    }
    std::vector<const ExperimentRecord *> out;
    for (const auto &r : rows) {
        if (r.metric != metric || r.trial != trial)
            continue;
        bool ok = true;
        for (std::size_t j = 0; j < cols.size() && ok; ++j)
            ok = r.params[cols[j]] == filters[j].second;
        if (ok)
            out.push_back(&r);
    }
    return out;
}

double RecordSet::value(const std::string &metric, int trial,
                        const std::vector<std::pair<std::string, std::string>> &filters) const
{
    const auto hits = select(metric, trial, filters);
    if (hits.size() != 1)
        throw ParameterError("RecordSet::value: " + std::to_string(hits.size()) +
                             " rows match metric " + metric);
    return hits.front()->value;
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw ParameterError("format_number: formatting failed");
    return std::string(buf, ptr);
}

namespace {

std::string format_value(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

} // namespace

std::string to_csv(const RecordSet &rs)
{
    std::string out = "experiment,trial";
    for (const auto &p : rs.param_names)
        out += "," + csv_field(p);
    out += ",metric,value\n";
    for (const auto &r : rs.rows) {
        out += csv_field(r.experiment) + "," + std::to_string(r.trial);
        for (const auto &p : r.params)
            out += "," + csv_field(p);
        out += "," + csv_field(r.metric) + "," + format_value(r.value) + "\n";
    }
    return out;
}

std::string write_csv(const RecordSet &rs, const std::string &dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    const fs::path path = fs::path(dir) / (rs.experiment + ".csv");
    std::ofstream outf(path, std::ios::binary);
    if (!outf)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    outf << to_csv(rs);
    if (!outf)
        throw std::runtime_error("write to '" + path.string() + "' failed");
    return path.string();
}

// ----------------------------------------------------------------- harness

namespace {

using Params = std::vector<std::string>;

class TrialSink
{
public:
    TrialSink(std::string experiment, int trial) : experiment_(std::move(experiment)), trial_(trial)
    {
    }

    void add(const Params &params, const std::string &metric, double value)
    {
        rows_.push_back({experiment_, trial_, params, metric, value});
    }

    std::vector<ExperimentRecord> take() { return std::move(rows_); }

private:
    std::string experiment_;
    int trial_;
    std::vector<ExperimentRecord> rows_;
};

using TrialFn = std::function<void(int trial, RngStream &rng, TrialSink &sink)>;

// Runs trials in parallel; rows are concatenated in trial order.
std::vector<ExperimentRecord> run_trials(const ExperimentConfig &cfg, const TrialFn &fn)
{
    const int trials = cfg.trials;
    std::vector<std::vector<ExperimentRecord>> per_trial(static_cast<std::size_t>(trials));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    const RngStream base(cfg.seed);

    auto worker = [&]() {
        for (int t = next++; t < trials; t = next++) {
            try {
                RngStream rng = base.child(static_cast<std::uint64_t>(t));
                TrialSink sink(cfg.experiment, t);
                fn(t, rng, sink);
                per_trial[t] = sink.take();
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };

    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, trials);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<ExperimentRecord> rows;
    for (auto &v : per_trial)
        for (auto &r : v)
            rows.push_back(std::move(r));
    return rows;
}

// Appends trial = -1 rows "mean_<metric>" for every (params, metric) group of
// per-trial rows, in first-appearance order. NaN values are skipped.
void append_means(RecordSet &rs, const std::set<std::string> &skip = {})
{
    struct Acc
    {
        Params params;
        std::string metric;
        double sum = 0.0;
        int count = 0;
    };
    std::vector<Acc> groups;
    std::map<std::pair<Params, std::string>, std::size_t> index;
    for (const auto &r : rs.rows) {
        if (r.trial < 0 || skip.count(r.metric))
            continue;
        const auto key = std::make_pair(r.params, r.metric);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, groups.size()).first;
            groups.push_back({r.params, r.metric});
        }
        if (!std::isnan(r.value)) {
            groups[it->second].sum += r.value;
            groups[it->second].count += 1;
        }
    }
    for (const auto &g : groups)
        rs.rows.push_back({rs.experiment, -1, g.params, "mean_" + g.metric,
                           g.count ? g.sum / g.count : kNaN});
}

std::string num(double v)
{
    return format_number(v);
}

Eigen::Index as_count(const std::string &key, double v)
{
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e7)
        throw ConfigError("config: '" + key + "' must be a positive integer");
    return static_cast<Eigen::Index>(v);
}

Eigen::Index count_scalar(const ExperimentConfig &cfg, const std::string &key)
{
    return as_count(key, cfg.scalar(key));
}

void require_config(bool ok, const std::string &msg)
{
    if (!ok)
        throw ConfigError("config: " + msg);
}

} // namespace

// -------------------------------------------------------------- experiments

RecordSet run_bpdq_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    const Eigen::Index n = count_scalar(cfg, "n"), k = count_scalar(cfg, "k");
    const double ratio = cfg.scalar("delta_ratio"), zeta = cfg.scalar("zeta");
    const auto &ps = cfg.sweep("p");
    const auto &mks = cfg.sweep("mk");
    require_config(k <= n, "k must not exceed n");
    require_config(ratio > 0.0 && zeta >= 0.0, "delta_ratio must be > 0 and zeta >= 0");
    for (double p : ps)
        require_config(p >= 2.0, "p values must be >= 2");
    for (double mk : mks)
        as_count("mk", mk);

    constexpr int kBins = 40;
    RecordSet rs{cfg.experiment, {"mk", "p"}, {}};
    rs.rows = run_trials(cfg, [&](int, RngStream &rng, TrialSink &sink) {
        for (std::size_t ci = 0; ci < mks.size(); ++ci) {
            RngStream cell = rng.child(ci);
            const Eigen::Index m = static_cast<Eigen::Index>(mks[ci]) * k;
            const Vector x = gen_sparse(n, k, false, cell).dense();
            const Matrix A = gaussian_matrix(m, n, 1.0, cell);
            const Vector y = A * x;
            const double delta = y.cwiseAbs().maxCoeff() / ratio;
            const Vector q = quantize_uniform(y, delta);
            for (double p : ps) {
                const Params prm{num(mks[ci]), num(p)};
                SolverResult res;
                try {
                    res = bpdq(A, q, p, epsilon_p(m, delta, p, zeta), SolverConfig{});
                } catch (const NumericalError &) {
                    sink.add(prm, "failed", 1.0);
                    continue;
                }
                const Vector r = (A * res.x_hat - q) / delta;
                std::vector<double> hist(kBins, 0.0);
                Eigen::Index half = 0;
                for (Eigen::Index i = 0; i < m; ++i) {
                    half += std::abs(r[i]) <= 0.5;
                    const int b = std::clamp(static_cast<int>(std::floor((r[i] + 1.0) / 2.0 * kBins)),
                                             0, kBins - 1);
                    hist[b] += 1.0 / static_cast<double>(m);
                }
                sink.add(prm, "snr_db", snr_db(x, res.x_hat));
                sink.add(prm, "frac_half", static_cast<double>(half) / static_cast<double>(m));
                sink.add(prm, "converged", res.converged ? 1.0 : 0.0);
                sink.add(prm, "iterations", res.iterations);
                for (int b = 0; b < kBins; ++b)
                    sink.add(prm, "hist_" + std::to_string(b), hist[b]);
            }
        }
    });
    append_means(rs);
    // Histograms are reported pooled over trials only.
    std::erase_if(rs.rows, [](const ExperimentRecord &r) {
        return r.trial >= 0 && r.metric.rfind("hist_", 0) == 0;
    });
    return rs;
}

RecordSet run_saturation_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    const Eigen::Index n = count_scalar(cfg, "n"), m = count_scalar(cfg, "m"),
                       k = count_scalar(cfg, "k");
    const int bits = static_cast<int>(count_scalar(cfg, "B"));
    const auto &Ss = cfg.sweep("S");
    const auto &classes = cfg.sweep("class");
    require_config(k <= n, "k must not exceed n");
    for (double S : Ss)
        require_config(S > 0.0, "S values must be > 0");
    for (double c : classes)
        require_config(c == 0.0 || (c > 0.0 && c < 2.0),
                       "class is 0 (exactly sparse) or a weak-lp index in (0, 2)");

    const std::pair<SaturationMode, const char *> modes[] = {{SaturationMode::Ignore, "ignore"},
                                                             {SaturationMode::Reject, "reject"},
                                                             {SaturationMode::Consistent, "consistent"}};
    RecordSet rs{cfg.experiment, {"class", "S", "mode"}, {}};
    rs.rows = run_trials(cfg, [&](int, RngStream &rng, TrialSink &sink) {
        for (std::size_t ci = 0; ci < classes.size(); ++ci) {
            RngStream cell = rng.child(ci);
            const Vector x = classes[ci] == 0.0 ? gen_sparse(n, k, true, cell).dense()
                                                : gen_compressible_weak_lp(n, classes[ci], cell);
            const Matrix A = gaussian_matrix(m, n, 1.0, cell);
            const Vector y = A * x;
            for (double S : Ss) {
                const FiniteRangeQuantizer fr(bits, S);
                const FiniteRangeOutput out = fr.quantize(y);
                const double rate = static_cast<double>((out.saturated.array() != 0).count()) /
                                    static_cast<double>(m);
                sink.add({num(classes[ci]), num(S), ""}, "sat_rate", rate);
                for (const auto &[mode, name] : modes) {
                    const Params prm{num(classes[ci]), num(S), name};
                    try {
                        const SolverResult res =
                            reconstruct_saturation(A, out.q, out.saturated, mode, fr, SolverConfig{});
                        sink.add(prm, "snr_db", snr_db(x, res.x_hat));
                        sink.add(prm, "converged", res.converged ? 1.0 : 0.0);
                    } catch (const std::exception &) {
                        sink.add(prm, "failed", 1.0);
                    }
                }
            }
        }
    });
    append_means(rs);

    // Peak mean SNR over the S grid per (class, mode).
    for (double c : classes) {
        for (const auto &[mode, name] : modes) {
            double best = -kInfinity, best_S = kNaN;
            for (double S : Ss) {
                const auto hits = rs.select("mean_snr_db", -1, {{"class", num(c)}, {"S", num(S)}, {"mode", name}});
                if (hits.size() == 1 && hits[0]->value > best) {
                    best = hits[0]->value;
                    best_S = S;
                }
            }
            rs.rows.push_back({rs.experiment, -1, {num(c), "", name}, "peak_mean_snr_db", best});
            rs.rows.push_back({rs.experiment, -1, {num(c), "", name}, "argmax_S", best_S});
        }
    }
    return rs;
}

RecordSet run_biht_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    const Eigen::Index n = count_scalar(cfg, "n"), k = count_scalar(cfg, "k");
    const double eta = cfg.scalar("eta");
    const auto &ratios = cfg.sweep("ratio");
    require_config(k <= n, "k must not exceed n");
    require_config(eta > 0.0, "eta must be > 0");
    for (double r : ratios)
        require_config(r > 0.0 && std::llround(r * n) >= 1, "ratio must give m >= 1");

    RecordSet rs{cfg.experiment, {"ratio"}, {}};
    rs.rows = run_trials(cfg, [&](int, RngStream &rng, TrialSink &sink) {
        for (std::size_t ci = 0; ci < ratios.size(); ++ci) {
            RngStream cell = rng.child(ci);
            const auto m = static_cast<Eigen::Index>(std::llround(ratios[ci] * n));
            const Vector x = gen_sparse(n, k, true, cell).dense();
            const Matrix A = gaussian_matrix(m, n, 1.0, cell);
            const Vector q = quantize_sign(A * x);
            SolverConfig sc;
            sc.eta = eta;
            const SolverResult res = biht(A, q, k, sc);
            const double eps_s = res.x_hat.norm() > 0.0 ? angular_distance(x, res.x_hat) : 0.5;
            const Params prm{num(ratios[ci])};
            sink.add(prm, "eps_S", eps_s);
            sink.add(prm, "eps_H", res.residual);
            sink.add(prm, "consistent", res.residual == 0.0 ? 1.0 : 0.0);
            sink.add(prm, "iterations", res.iterations);
        }
    });

    // Correlations per panel, pooled raw, and pooled within panel (each panel
    // centered; panels where eps_H is constant carry no information and are skipped).
    std::vector<double> all_h, all_s, cen_h, cen_s;
    for (double r : ratios) {
        std::vector<double> h, s;
        for (int t = 0; t < cfg.trials; ++t) {
            h.push_back(rs.value("eps_H", t, {{"ratio", num(r)}}));
            s.push_back(rs.value("eps_S", t, {{"ratio", num(r)}}));
        }
        all_h.insert(all_h.end(), h.begin(), h.end());
        all_s.insert(all_s.end(), s.begin(), s.end());
        if (h.size() < 2)
            continue;
        rs.rows.push_back({rs.experiment, -1, {num(r)}, "pearson_eps_H_eps_S", pearson_correlation(h, s)});
        if (std::all_of(h.begin(), h.end(), [&](double v) { return v == h.front(); }))
            continue;
        const double mh = mean(h), ms = mean(s);
        for (std::size_t i = 0; i < h.size(); ++i) {
            cen_h.push_back(h[i] - mh);
            cen_s.push_back(s[i] - ms);
        }
    }
    append_means(rs, {"pearson_eps_H_eps_S"});
    if (all_h.size() >= 2)
        rs.rows.push_back({rs.experiment, -1, {""}, "pearson_eps_H_eps_S", pearson_correlation(all_h, all_s)});
    rs.rows.push_back({rs.experiment, -1, {""}, "pearson_within_panel",
                       cen_h.size() >= 2 ? pearson_correlation(cen_h, cen_s) : 0.0});
    return rs;
}

RecordSet run_sigma_delta_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    const Eigen::Index n = count_scalar(cfg, "n"), k = count_scalar(cfg, "k");
    const double delta = cfg.scalar("delta"), floor = cfg.scalar("floor");
    const auto &ms = cfg.sweep("m");
    const auto &rs_order = cfg.sweep("r");
    require_config(k <= n, "k must not exceed n");
    require_config(delta > 0.0, "delta must be > 0");
    require_config(floor >= 0.0 && floor <= 5.0, "floor must lie in [0, 5]");
    for (double m : ms)
        require_config(as_count("m", m) >= k, "m values must be >= k");
    for (double r : rs_order)
        require_config(r >= 1 && r <= 6 && r == std::floor(r), "r values must be integers in [1, 6]");

    std::vector<std::string> methods = {"pcm_l1", "pcm_canonical"};
    for (double r : rs_order)
        methods.push_back("sd_r" + num(r));

    RecordSet rs{cfg.experiment, {"m", "method"}, {}};
    rs.rows = run_trials(cfg, [&](int, RngStream &rng, TrialSink &sink) {
        for (std::size_t ci = 0; ci < ms.size(); ++ci) {
            RngStream cell = rng.child(ci);
            const auto m = static_cast<Eigen::Index>(ms[ci]);
            const SparseSignal sig = gen_sparse_floored(n, k, floor, cell);
            const Vector x = sig.dense();
            const Matrix A = gaussian_matrix(m, n, 1.0, cell);
            const Vector y = A * x;
            auto record = [&](const std::string &method, const Vector &xh, const Support *T) {
                const Params prm{num(ms[ci]), method};
                sink.add(prm, "error", (x - xh).norm());
                if (T)
                    sink.add(prm, "support_ok", *T == sig.support ? 1.0 : 0.0);
            };
            try {
                const Vector q = quantize_uniform(y, delta);
                const SolverResult l1 = bpdn(A, q, epsilon_p(m, delta, 2.0, 2.0), SolverConfig{});
                record("pcm_l1", l1.x_hat, nullptr);
                const TwoStageResult two = two_stage_sd_recover(A, q, k, 0, SDCodebook(1, delta), SolverConfig{});
                record("pcm_canonical", two.result.x_hat, &two.support);
            } catch (const NumericalError &) {
                sink.add({num(ms[ci]), "pcm"}, "failed", 1.0);
            }
            for (double rr : rs_order) {
                const int r = static_cast<int>(rr);
                const std::string method = "sd_r" + num(rr);
                try {
                    const SDCodebook cb(required_levels(y.cwiseAbs().maxCoeff(), delta, r), delta);
                    const SDState st = sd_quantize_greedy(y, r, cb);
                    const TwoStageResult two = two_stage_sd_recover(A, st.q, k, r, cb, SolverConfig{});
                    record(method, two.result.x_hat, &two.support);
                    if (two.support == sig.support) {
                        const Matrix F = sobolev_dual(restrict_columns(A, two.support).transpose(), r);
                        sink.add({num(ms[ci]), method}, "error_bound", dual_noise_gain(F, r) * st.u.norm());
                    }
                    sink.add({num(ms[ci]), method}, "u_inf_over_delta", st.u.cwiseAbs().maxCoeff() / delta);
                } catch (const NumericalError &) {
                    sink.add({num(ms[ci]), method}, "failed", 1.0);
                }
            }
        }
    });
    append_means(rs);

    for (const auto &method : methods) {
        std::vector<double> xs, ys;
        for (double m : ms) {
            const auto hits = rs.select("mean_error", -1, {{"m", num(m)}, {"method", method}});
            if (hits.size() == 1 && hits[0]->value > 0.0) {
                xs.push_back(m / static_cast<double>(k));
                ys.push_back(hits[0]->value);
            }
        }
        rs.rows.push_back({rs.experiment, -1, {"", method}, "loglog_slope",
                           xs.size() >= 2 ? loglog_slope(xs, ys) : kNaN});
    }
    return rs;
}

RecordSet run_noise_tradeoff(const ExperimentConfig &cfg)
{
    cfg.validate();
    const double n = static_cast<double>(count_scalar(cfg, "n"));
    const double k = static_cast<double>(count_scalar(cfg, "k"));
    const double R = cfg.scalar("R");
    const int max_bits = static_cast<int>(count_scalar(cfg, "max_bits"));
    const double delta_rip = cfg.scalar("delta_rip"), kappa = cfg.scalar("kappa");
    const bool mc = cfg.scalar("mc") != 0.0;
    const auto &isnrs = cfg.sweep("isnr");
    require_config(k <= n, "k must not exceed n");
    require_config(R >= k, "R must be >= k");
    require_config(delta_rip >= 0.0 && delta_rip < 1.0 && kappa >= 0.0,
                   "delta_rip must lie in [0, 1) and kappa >= 0");

    auto params_for = [&](double isnr) {
        NoiseTradeoffParams P = tradeoff_params_from_isnr(n, k, isnr);
        P.delta = delta_rip;
        P.kappa = kappa;
        return P;
    };

    RecordSet rs{cfg.experiment, {"isnr", "B"}, {}};
    if (mc) {
        // Oracle-assisted decoding with A_ij ~ N(0, 1/m) and a B-bit finite-range
        // quantizer loaded at S = sqrt(6) times the measurement standard deviation.
        const auto ni = static_cast<Eigen::Index>(n), ki = static_cast<Eigen::Index>(k);
        rs.rows = run_trials(cfg, [&](int, RngStream &rng, TrialSink &sink) {
            for (std::size_t ci = 0; ci < isnrs.size(); ++ci) {
                const double sigma2 = k / (n * std::pow(10.0, isnrs[ci] / 10.0));
                for (int B = 1; B <= max_bits; ++B) {
                    const auto m = static_cast<Eigen::Index>(std::floor(R / B));
                    if (m < ki)
                        break;
                    RngStream cell = rng.child(ci * 1000 + static_cast<std::size_t>(B));
                    // Fixed energy ||x||^2 = k, so the loading factor holds for every draw.
                    const SparseSignal sig = gen_sparse(ni, ki, true, cell);
                    const Vector x = std::sqrt(k) * sig.dense();
                    const Matrix A = gaussian_matrix(m, ni, 1.0 / std::sqrt(static_cast<double>(m)), cell);
                    NoiseSpec noise;
                    noise.signal_noise_sigma = std::sqrt(sigma2);
                    const Vector y = measure(A, x, noise, cell);
                    const double S = std::sqrt(6.0 * (k + n * sigma2) / static_cast<double>(m));
                    const FiniteRangeQuantizer fr(B, S);
                    const Vector xh = oracle_assisted(A, fr.quantize(y).q, sig.support);
                    sink.add({num(isnrs[ci]), num(B)}, "mc_sq_error", (xh - x).squaredNorm());
                }
            }
        });
        append_means(rs);
    }
    for (double isnr : isnrs) {
        const NoiseTradeoffParams P = params_for(isnr);
        for (int B = 1; B <= max_bits; ++B) {
            const double m = std::floor(R / B);
            if (m < k)
                break;
            rs.rows.push_back({rs.experiment, -1, {num(isnr), num(B)}, "m", m});
            rs.rows.push_back({rs.experiment, -1, {num(isnr), num(B)}, "bound", noise_tradeoff_bound(B, m, P)});
        }
        const BitDepthChoice best = optimal_bit_depth(R, P);
        rs.rows.push_back({rs.experiment, -1, {num(isnr), ""}, "optimal_bits", static_cast<double>(best.bits)});
        rs.rows.push_back({rs.experiment, -1, {num(isnr), ""}, "optimal_bound", best.bound});
    }
    return rs;
}

RecordSet run_pocs_decay(const ExperimentConfig &cfg)
{
    cfg.validate();
    const Eigen::Index k = count_scalar(cfg, "k");
    const double delta = cfg.scalar("delta");
    const auto &ms = cfg.sweep("m");
    require_config(delta > 0.0, "delta must be > 0");
    for (double m : ms)
        require_config(as_count("m", m) > k, "m values must exceed k");

    RecordSet rs{cfg.experiment, {"m", "method"}, {}};
    rs.rows = run_trials(cfg, [&](int, RngStream &rng, TrialSink &sink) {
        for (std::size_t ci = 0; ci < ms.size(); ++ci) {
            RngStream cell = rng.child(ci);
            const auto m = static_cast<Eigen::Index>(ms[ci]);
            const Vector x = gaussian_vector(k, 1.0, cell);
            const Matrix A = gaussian_matrix(m, k, 1.0, cell);
            const UniformQuantizer uq(delta);
            const Vector q = uq.quantize(A * x);
            const PocsResult pocs = consistent_pocs(A, q, uq, SolverConfig{});
            const Vector lin = least_squares(A, q);
            sink.add({num(ms[ci]), "pocs"}, "sq_error", (pocs.x - x).squaredNorm());
            sink.add({num(ms[ci]), "pocs"}, "consistent", pocs.consistent ? 1.0 : 0.0);
            sink.add({num(ms[ci]), "linear"}, "sq_error", (lin - x).squaredNorm());
        }
    });
    append_means(rs);
    for (const char *method : {"pocs", "linear"}) {
        std::vector<double> xs, ys;
        for (double m : ms) {
            const double mse = rs.value("mean_sq_error", -1, {{"m", num(m)}, {"method", method}});
            rs.rows.push_back({rs.experiment, -1, {num(m), method}, "rmse", std::sqrt(mse)});
            xs.push_back(m);
            ys.push_back(std::sqrt(mse));
        }
        rs.rows.push_back({rs.experiment, -1, {"", method}, "loglog_slope",
                           xs.size() >= 2 ? loglog_slope(xs, ys) : kNaN});
    }
    return rs;
}

RecordSet run_bounds(const ExperimentConfig &cfg)
{
    cfg.validate();
    BoundParams base;
    base.n = cfg.scalar("n");
    base.k = cfg.scalar("k");
    base.m = cfg.scalar("m");
    base.B = cfg.scalar("B");
    base.R = cfg.scalar("R");
    base.delta = cfg.scalar("delta");
    const double lp = cfg.scalar("lp");

    RecordSet rs{cfg.experiment, {"kind", "variable", "x", "label"}, {}};
    for (BoundKind kind : all_bound_kinds()) {
        BoundParams P = base;
        std::string variable;
        switch (kind) {
        case BoundKind::BallCovering:
        case BoundKind::SparseTc:
            variable = "R";
            break;
        case BoundKind::LpBallEntropy:
            variable = "R";
            P.p = lp;
            break;
        case BoundKind::ScalarCells:
        case BoundKind::LinearDecay:
        case BoundKind::OnebitLower:
            variable = "m";
            break;
        case BoundKind::BpdqDecay:
            variable = "p";
            break;
        }
        try {
            const BoundCurve c = bound_curve(kind, P, variable, cfg.sweep(variable));
            for (std::size_t i = 0; i < c.x.size(); ++i)
                rs.rows.push_back({rs.experiment, -1, {c.kind, c.variable, num(c.x[i]), c.label}, "bound", c.y[i]});
        } catch (const ConfigError &) {
            throw;
        } catch (const ParameterError &e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    return rs;
}

RecordSet run_experiment(const ExperimentConfig &cfg)
{
    const std::string &e = cfg.experiment;
    if (e == "bpdq-sweep")
        return run_bpdq_sweep(cfg);
    if (e == "saturation-sweep")
        return run_saturation_sweep(cfg);
    if (e == "biht-sweep")
        return run_biht_sweep(cfg);
    if (e == "sigma-delta-sweep")
        return run_sigma_delta_sweep(cfg);
    if (e == "noise-tradeoff")
        return run_noise_tradeoff(cfg);
    if (e == "pocs-decay")
        return run_pocs_decay(cfg);
    if (e == "bounds")
        return run_bounds(cfg);
    throw ConfigError("unknown experiment '" + e + "'");
}

} // namespace qcs
