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

#include <limits>
#include <variant>
#include <vector>

namespace qcs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Gaussian integrals are truncated at this many standard deviations.
inline constexpr double kGaussianTruncation = 12.0;

// ------------------------------------------------------------------ uniform

/// Midpoint quantizer with thresholds j*delta and levels (j + 1/2)*delta.
/// Inputs on a threshold go to the upper bin.
class UniformQuantizer
{
public:
    explicit UniformQuantizer(double delta);

    double delta() const { return delta_; }
    double quantize(double y) const;
    Vector quantize(const Vector &y) const;

private:
    double delta_;
};

Vector quantize_uniform(const Vector &y, double delta);

// ------------------------------------------------------------- finite range

struct FiniteRangeOutput
{
    Vector q;
    Eigen::VectorXi saturated; ///< +1 / -1 where the input clipped high / low, else 0
};

/// 2^B-level midpoint quantizer on [-S, S] with delta = S * 2^{1-B}.
class FiniteRangeQuantizer
{
public:
    FiniteRangeQuantizer(int bits, double saturation);

    int bits() const { return bits_; }
    double saturation() const { return saturation_; }
    double delta() const { return delta_; }

    FiniteRangeOutput quantize(const Vector &y) const;

private:
    int bits_;
    double saturation_;
    double delta_;
};

FiniteRangeOutput quantize_finite_range(const Vector &y, const FiniteRangeQuantizer &fr);

// --------------------------------------------------------------------- sign

/// +1 where y_i >= 0 (including -0.0), -1 otherwise.
Vector quantize_sign(const Vector &y);

struct SignQuantizer
{
};

// ----------------------------------------------------------- SD codebook

/// Symmetric mid-rise codebook {+-(j - 1/2) delta : j = 1..L}.
class SDCodebook
{
public:
    SDCodebook(int levels_per_side, double delta);

    int levels_per_side() const { return levels_; }
    double delta() const { return delta_; }
    double max_level() const { return (levels_ - 0.5) * delta_; }

    /// Nearest codebook point. Ties round up, so 0 maps to +delta/2; inputs
    /// outside the codebook range clip to the extreme level.
    double quantize(double v) const;

    /// All 2L points, ascending.
    std::vector<double> points() const;

private:
    int levels_;
    double delta_;
};

// -------------------------------------------------------------- source pdfs

struct GaussianSource
{
    double sigma = 1.0;
};

struct UniformSource
{
    double a = 0.0;
    double b = 1.0;
};

using SourcePdf = std::variant<GaussianSource, UniformSource>;

void validate_source(const SourcePdf &pdf);
double source_density(const SourcePdf &pdf, double t);

/// Support of the source, with Gaussian tails truncated at kGaussianTruncation sigma.
std::pair<double, double> source_range(const SourcePdf &pdf);

/// E[X | a <= X <= b]; the interval is clipped to the source support.
double conditional_mean(const SourcePdf &pdf, double a, double b);

// ---------------------------------------------------------------- Lloyd-Max

/// Scalar quantizer given by ascending levels and the thresholds between them.
struct LloydMaxQuantizer
{
    std::vector<double> levels;
    std::vector<double> thresholds; ///< levels.size() - 1 entries
    int sweeps = 0;

    double quantize(double y) const;
    Vector quantize(const Vector &y) const;
};

/// Thrown when the fixed-point iteration exhausts its sweep budget.
class LloydMaxError : public NumericalError
{
public:
    LloydMaxError(const std::string &what, LloydMaxQuantizer last)
        : NumericalError(what), last_iterate(std::move(last))
    {
    }

    LloydMaxQuantizer last_iterate;
};

/// Lloyd-Max fixed point for a 2^B-level quantizer (1 <= B <= 8), started at
/// equal-probability quantiles and iterated until no level moves by tol or more.
LloydMaxQuantizer lloyd_max(const SourcePdf &pdf, int bits, double tol = 1e-12,
                            int max_sweeps = 100000);

/// Mean squared error of a threshold/level quantizer on the source, by quadrature.
double quantizer_distortion(const SourcePdf &pdf, const std::vector<double> &thresholds,
                            const std::vector<double> &levels);

// ---------------------------------------------------------------- compander

/// Compressor of the distortion-optimal quantizer for a N(0, sigma0^2) source:
/// the CDF of N(0, 3 sigma0^2).
double gaussian_compressor(double lambda, double sigma0);

/// Non-uniform quantizer G^{-1} o Q_delta o G with delta = 2^{-B}.
class CompanderQuantizer
{
public:
    CompanderQuantizer(int bits, double sigma0);

    int bits() const { return bits_; }
    double sigma0() const { return sigma0_; }
    double delta() const { return delta_; }
    int num_levels() const { return 1 << bits_; }

    double compress(double lambda) const;
    double compress_derivative(double lambda) const;
    double expand(double u) const;

    /// Bin index in [0, 2^B) of an input.
    int bin_index(double y) const;

    /// Level of bin j, G^{-1}((j + 1/2) delta).
    double level(int j) const;

    /// Bin j as [lo, hi]; the outer bins are infinite.
    std::pair<double, double> bin(int j) const;

    double quantize(double y) const;
    Vector quantize(const Vector &y) const;

private:
    int bits_;
    double sigma0_;
    double delta_;
    double scale_; // sqrt(3) * sigma0
};

/// ||phi||_{1/3} = (int phi^{1/3})^3 for the N(0, sigma0^2) density, = 6 sqrt(3) pi sigma0^2.
double gaussian_one_third_norm(double sigma0);

/// High-resolution distortion (2^{-2B} / 12) ||phi||_{1/3} of the optimal quantizer.
double panter_dite_distortion(const GaussianSource &pdf, int bits);

/*!
 * Q_p re-mapping of a compander level: the minimizer over the level's bin of
 * int |t - lambda|^p phi(t) dt.
 *
 * p = 2 returns the level itself and p = infinity the bin midpoint; these are
 * handled symbolically. Other p use bisection on the increasing derivative.
 * Unbounded outer bins are truncated at +-kGaussianTruncation sigma0.
 */
double qp_map(double level, double p, const CompanderQuantizer &cq);

/// Numeric minimizer of int_a^b |t - lambda|^p phi(t) dt for N(0, sigma0^2), any p >= 1.
double lp_bin_center(double a, double b, double p, double sigma0);

/// (delta / (2 (p+1)^{1/p})) (m + zeta (p+1) sqrt(m))^{1/p}; p = infinity gives delta / 2.
double epsilon_p(Eigen::Index m, double delta, double p, double zeta);

struct WeightedEpsilon
{
    double epsilon;
    Vector weights;
    Vector qp; ///< Q_p applied to each measurement
};

/// Weights w_i = G'(Q_p(q_i))^{(p-2)/p} and the radius
/// eps^p = m 2^{-Bp} / ((p+1) 2^p) ||phi||_{1/3}. An asymptotic (large m, B) estimate.
WeightedEpsilon epsilon_pw_and_weights(const Vector &q, double p, int bits,
                                       const CompanderQuantizer &cq);

/// Diagnostic ||w||_inf / (m^{-1/p} ||w||_p).
double weight_conditioning(const Vector &w, double p);

// ------------------------------------------------------------ tagged union

using QuantizerSpec = std::variant<UniformQuantizer, FiniteRangeQuantizer, SignQuantizer,
                                   LloydMaxQuantizer, CompanderQuantizer, SDCodebook>;

/// Memoryless application of any quantizer (the SD codebook is applied per sample).
Vector apply_quantizer(const QuantizerSpec &spec, const Vector &y);

} // namespace qcs
