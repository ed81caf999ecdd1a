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

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace qcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Invalid parameters passed to any public operation (bad sizes, out-of-range values).
class ParameterError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (non-convergence, rank deficiency, bracket failure).
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Throws ParameterError if any entry is NaN or infinite.
void require_finite(const Matrix &M, const char *what);
void require_finite(const Vector &v, const char *what);

/*!
 * Reproducible random stream.
 *
 * Generator: xoshiro256** seeded through splitmix64. Normal variates use the
 * Box-Muller transform on two 53-bit uniforms (the second variate of each pair
 * is cached). The draw sequence depends only on the seed, never on the
 * platform's <random> implementation, so CSV outputs are bit-reproducible.
 *
 * A stream is single-owner. Parallel trials use child(index), which derives an
 * independent stream from (seed, index).
 */
class RngStream
{
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal.
    double normal();

    /// Uniform integer in [0, bound), unbiased (bound >= 1).
    std::uint64_t below(std::uint64_t bound);

    /// Independent stream keyed by (seed, index).
    RngStream child(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// m x n matrix of i.i.d. N(0, sigma^2) entries, drawn in row-major order.
/// sigma == 0 yields the zero matrix.
Matrix gaussian_matrix(Eigen::Index m, Eigen::Index n, double sigma, RngStream &rng);

/// Vector of i.i.d. N(0, sigma^2) entries.
Vector gaussian_vector(Eigen::Index n, double sigma, RngStream &rng);

/// Thin singular value decomposition M = U diag(S) V^T with S non-increasing.
struct Svd
{
    Matrix U;
    Vector S;
    Matrix V;
};

Svd svd(const Matrix &M);

/// Singular values only, non-increasing.
Vector singular_values(const Matrix &M);

/// Largest singular value, i.e. the 2->2 operator norm.
double operator_norm(const Matrix &M);

/// Relative cutoff below which singular values count as zero.
inline constexpr double kRankCutoff = 1e-12;

/// Moore-Penrose pseudo-inverse with the kRankCutoff * sigma_max numerical rank.
Matrix pseudo_inverse(const Matrix &M);

/// Minimum-norm minimizer of ||A x - b||_2.
Vector least_squares(const Matrix &A, const Vector &b);

/// ||v||_p for p >= 1, including p = infinity.
double lp_norm(const Vector &v, double p);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)> &f, double a, double b, double tol = 1e-10);

/// Standard normal density, CDF, upper tail and quantile.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double u);

} // namespace qcs
