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

#include "qcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qcs {

double snr_db(const Vector &x, const Vector &x_hat)
{
    if (x.size() != x_hat.size())
        throw ParameterError("snr_db: length mismatch");
    const double nx = x.norm();
    if (nx == 0.0)
        throw ParameterError("snr_db: reference signal is zero");
    const double err = (x - x_hat).norm();
    if (err == 0.0)
        return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(nx / err);
}

double angular_distance(const Vector &u, const Vector &v)
{
    if (u.size() != v.size())
        throw ParameterError("angular_distance: length mismatch");
    const double nu = u.norm(), nv = v.norm();
    if (nu == 0.0 || nv == 0.0)
        throw ParameterError("angular_distance: zero vector");
    const double c = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
    return std::acos(c) / std::numbers::pi;
}

double hamming_distance(const Vector &q1, const Vector &q2)
{
    if (q1.size() != q2.size())
        throw ParameterError("hamming_distance: length mismatch");
    if (q1.size() == 0)
        throw ParameterError("hamming_distance: empty input");
    Eigen::Index diff = 0;
    for (Eigen::Index i = 0; i < q1.size(); ++i) {
        if ((q1[i] != 1.0 && q1[i] != -1.0) || (q2[i] != 1.0 && q2[i] != -1.0))
            throw ParameterError("hamming_distance: entries must be +-1");
        diff += (q1[i] != q2[i]);
    }
    return static_cast<double>(diff) / static_cast<double>(q1.size());
}

QcReport qc_check(const Matrix &A, const Vector &x_hat, const Vector &q, double delta)
{
    if (A.cols() != x_hat.size() || A.rows() != q.size())
        throw ParameterError("qc_check: dimension mismatch");
    if (!(delta > 0.0))
        throw ParameterError("qc_check: delta must be > 0");
    const Vector r = q - A * x_hat;
    const double worst = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    return {worst <= 0.5 * delta + 1e-9, std::max(0.0, worst - 0.5 * delta)};
}

// ----------------------------------------------------------------- bounds

namespace {

struct KindName
{
    BoundKind kind;
    const char *name;
};

constexpr KindName kKindNames[] = {
    {BoundKind::BallCovering, "ball_covering"}, {BoundKind::LpBallEntropy, "lp_ball_entropy"},
    {BoundKind::SparseTc, "sparse_tc"},         {BoundKind::ScalarCells, "scalar_cells"},
    {BoundKind::LinearDecay, "linear_decay"},   {BoundKind::OnebitLower, "onebit_lower"},
    {BoundKind::BpdqDecay, "bpdq_decay"},
};

void require(bool ok, const char *msg)
{
    if (!ok)
        throw ParameterError(msg);
}

} // namespace

BoundKind parse_bound_kind(const std::string &name)
{
    for (const auto &kn : kKindNames)
        if (name == kn.name)
            return kn.kind;
    throw ParameterError("unknown bound kind: " + name);
}

std::string bound_kind_name(BoundKind kind)
{
    for (const auto &kn : kKindNames)
        if (kind == kn.kind)
            return kn.name;
    throw ParameterError("unknown bound kind");
}

std::vector<BoundKind> all_bound_kinds()
{
    std::vector<BoundKind> out;
    for (const auto &kn : kKindNames)
        out.push_back(kn.kind);
    return out;
}

void BoundParams::validate(BoundKind kind) const
{
    require(n >= 1 && m >= 1 && k >= 1, "BoundParams: n, m, k must be >= 1");
    require(k <= n, "BoundParams: k must not exceed n");
    require(delta_rip > 0.0 && delta_rip < 1.0, "BoundParams: delta_rip must lie in (0, 1)");
    require(mu_p > 0.0, "BoundParams: mu_p must be > 0");
    require(R >= 0.0 && B >= 0.0, "BoundParams: rates must be >= 0");
    if (kind == BoundKind::LpBallEntropy)
        require(p > 0.0 && p < 1.0 && R >= 1.0, "BoundParams: lp_ball_entropy needs 0 < p < 1, R >= 1");
    if (kind == BoundKind::BpdqDecay)
        require(p >= 1.0 && delta > 0.0, "BoundParams: bpdq_decay needs p >= 1, delta > 0");
}

double bound_value(BoundKind kind, const BoundParams &P)
{
    P.validate(kind);
    switch (kind) {
    case BoundKind::BallCovering:
        return std::exp2(-P.R / P.n);
    case BoundKind::LpBallEntropy: {
        const double e = 1.0 / P.p - 0.5;
        if (P.R <= std::log2(P.n))
            return 1.0;
        if (P.R <= P.n)
            return std::pow(std::log2(P.n / P.R + 1.0) / P.R, e);
        return std::exp2(-P.R / P.n) * std::pow(P.n, -e);
    }
    case BoundKind::SparseTc:
        return std::exp2(-P.R / P.k) * P.n / P.k;
    case BoundKind::ScalarCells:
        return std::exp2(-P.B) * P.k / P.m;
    case BoundKind::LinearDecay:
        return std::exp2(-P.B) * P.k / std::sqrt(P.m);
    case BoundKind::OnebitLower:
        return P.k / (P.m + std::pow(P.k, 1.5));
    case BoundKind::BpdqDecay:
        return P.delta / std::sqrt(P.p + 1.0);
    }
    throw ParameterError("unknown bound kind");
}

BoundCurve bound_curve(BoundKind kind, const BoundParams &base, const std::string &variable,
                       const std::vector<double> &values)
{
    if (values.empty())
        throw ParameterError("bound_curve: empty sweep");
    BoundCurve c;
    c.kind = bound_kind_name(kind);
    c.variable = variable;
    for (double v : values) {
        BoundParams P = base;
        if (variable == "n")
            P.n = v;
        else if (variable == "m")
            P.m = v;
        else if (variable == "k")
            P.k = v;
        else if (variable == "B")
            P.B = v;
        else if (variable == "R")
            P.R = v;
        else if (variable == "p")
            P.p = v;
        else if (variable == "delta")
            P.delta = v;
        else
            throw ParameterError("bound_curve: unknown sweep variable " + variable);
        c.x.push_back(v);
        c.y.push_back(bound_value(kind, P));
    }
    return c;
}

// -------------------------------------------------- noise/bit-depth tradeoff

void NoiseTradeoffParams::validate() const
{
    require(n >= 1 && k >= 1 && k <= n, "NoiseTradeoffParams: need 1 <= k <= n");
    require(signal_energy >= 0.0 && noise_energy_support >= 0.0,
            "NoiseTradeoffParams: energies must be >= 0");
    require(kappa >= 0.0, "NoiseTradeoffParams: kappa must be >= 0");
    require(delta >= 0.0 && delta < 1.0, "NoiseTradeoffParams: delta must lie in [0, 1)");
}

NoiseTradeoffParams tradeoff_params_from_isnr(double n, double k, double isnr_db)
{
    NoiseTradeoffParams P;
    P.n = n;
    P.k = k;
    P.signal_energy = k;
    P.noise_energy_support = (k / n) * k * std::pow(10.0, -isnr_db / 10.0);
    P.kappa = 0.0;
    P.delta = 0.2;
    P.validate();
    return P;
}

double noise_tradeoff_bound(int B, double m, const NoiseTradeoffParams &P)
{
    P.validate();
    require(B >= 1, "noise_tradeoff_bound: B must be >= 1");
    require(m >= P.k, "noise_tradeoff_bound: need m >= k");
    const double q = std::exp2(-2.0 * B);
    const double value = 2.0 * q * (P.k / m) * P.signal_energy +
                         2.0 * (q + 1.0) * (P.n / m) * P.noise_energy_support + P.k * m * P.kappa;
    return value / (1.0 - P.delta);
}

BitDepthChoice optimal_bit_depth(double R, const NoiseTradeoffParams &P)
{
    P.validate();
    require(std::isfinite(R) && R >= P.k, "optimal_bit_depth: rate admits no (B, m) pair with m >= k");
    BitDepthChoice best{0, 0.0, std::numeric_limits<double>::infinity()};
    for (int B = 1; std::floor(R / B) >= P.k; ++B) {
        const double m = std::floor(R / B);
        const double v = noise_tradeoff_bound(B, m, P);
        if (v < best.bound)
            best = {B, m, v};
    }
    if (best.bits == 0)
        throw ParameterError("optimal_bit_depth: no admissible (B, m) pair");
    return best;
}

// --------------------------------------------------------------- statistics

double mean(const std::vector<double> &v)
{
    if (v.empty())
        throw ParameterError("mean: empty input");
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw ParameterError("loglog_slope: need two or more paired samples");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw ParameterError("loglog_slope: samples must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const double mx = mean(lx), my = mean(ly);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0)
        throw ParameterError("loglog_slope: x samples are all equal");
    return sxy / sxx;
}

double pearson_correlation(const std::vector<double> &x, const std::vector<double> &y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw ParameterError("pearson_correlation: need two or more paired samples");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace qcs
