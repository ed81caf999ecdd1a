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

#include <string>
#include <vector>

namespace qcs {

/// 20 log10(||x|| / ||x - x_hat||); +infinity on exact recovery.
double snr_db(const Vector &x, const Vector &x_hat);

/// arccos(<u, v>) / pi after normalizing both inputs.
double angular_distance(const Vector &u, const Vector &v);

/// Fraction of positions where two +-1 vectors disagree.
double hamming_distance(const Vector &q1, const Vector &q2);

struct QcReport
{
    bool consistent = false;
    double max_violation = 0.0; ///< max_i (|q_i - (A x_hat)_i| - delta/2)_+
};

/// ||q - A x_hat||_inf <= delta/2, with 1e-9 slack.
QcReport qc_check(const Matrix &A, const Vector &x_hat, const Vector &q, double delta);

// ----------------------------------------------------------------- bounds

/// Order-of-magnitude error laws, evaluated with unit leading constant.
enum class BoundKind
{
    BallCovering,  ///< 2^{-R/n}
    LpBallEntropy, ///< three-regime entropy law of the unit l_p ball
    SparseTc,      ///< 2^{-R/k} n / k
    ScalarCells,   ///< 2^{-B} k / m
    LinearDecay,   ///< 2^{-B} k / sqrt(m)
    OnebitLower,   ///< k / (m + k^{3/2})
    BpdqDecay,     ///< delta / sqrt(p + 1)
};

inline constexpr const char *kShapeOnlyLabel = "shape-only, constant unknown";

BoundKind parse_bound_kind(const std::string &name);
std::string bound_kind_name(BoundKind kind);
std::vector<BoundKind> all_bound_kinds();

struct BoundParams
{
    double n = 1024;
    double m = 256;
    double k = 16;
    double B = 4;
    double R = 1024;
    double delta_rip = 0.5;
    double mu_p = 1.0;
    double p = 2.0;     ///< l_p index for LpBallEntropy (0 < p < 1) and BpdqDecay (p >= 2)
    double delta = 1.0; ///< quantizer bin width for BpdqDecay

    void validate(BoundKind kind) const;
};

double bound_value(BoundKind kind, const BoundParams &params);

struct BoundCurve
{
    std::string kind;
    std::string label = kShapeOnlyLabel;
    std::string variable;
    std::vector<double> x;
    std::vector<double> y;
};

/// Samples bound_value while sweeping one BoundParams field ("n", "m", "k", "B",
/// "R", "p" or "delta").
BoundCurve bound_curve(BoundKind kind, const BoundParams &base, const std::string &variable,
                       const std::vector<double> &values);

// -------------------------------------------------- noise/bit-depth tradeoff

struct NoiseTradeoffParams
{
    double n = 1024;
    double k = 16;
    double signal_energy = 16;     ///< E||x||^2
    double noise_energy_support = 0; ///< E||xi_x restricted to T||^2
    double kappa = 0.0;
    double delta = 0.2;

    void validate() const;
};

/// Documented configuration for the ISNR sweep: E||x||^2 = k, ISNR = 20 log10(||x|| / ||xi_x||)
/// over all n entries, of which the support carries the fraction k/n.
NoiseTradeoffParams tradeoff_params_from_isnr(double n, double k, double isnr_db);

/// (1/(1-delta)) [2^{1-2B} (k/m) E||x||^2 + 2 (2^{-2B} + 1) (n/m) E||xi|_T||^2 + k m kappa].
double noise_tradeoff_bound(int B, double m, const NoiseTradeoffParams &params);

struct BitDepthChoice
{
    int bits;
    double m;
    double bound;
};

/// Minimizer over integer B >= 1 at m = floor(R / B) >= k; ties go to the smaller B.
BitDepthChoice optimal_bit_depth(double R, const NoiseTradeoffParams &params);

// --------------------------------------------------------------- statistics

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

double pearson_correlation(const std::vector<double> &x, const std::vector<double> &y);

double mean(const std::vector<double> &v);

} // namespace qcs
