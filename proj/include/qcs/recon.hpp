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
#include "qcs/quantize.hpp"
#include "qcs/sigma_delta.hpp"
#include "qcs/signals.hpp"

namespace qcs {

struct SolverConfig
{
    int max_outer_iters = 2000;
    double rel_change_tol = 1e-6;
    int inner_max_iters = 500;
    double inner_tol = 1e-9;
    double rho = 1.0;      ///< splitting penalty
    double eta = 1.0;      ///< BIHT step scale
    double gamma = 0.0;    ///< l1 prox step; 0 selects it from the data

    void validate() const;
};

struct SolverResult
{
    Vector x_hat;
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;           ///< ||x_hat||_1
    double residual = 0.0;            ///< fidelity residual, e.g. ||A x_hat - q||_p
    double half_space_violation = 0.0; ///< largest saturation-constraint excess, if any
};

/*!
 * Euclidean projection of a onto {v : ||v - q||_p <= eps}.
 *
 * p = 2 scales radially and p = infinity clips componentwise. For 2 < p < inf
 * the KKT system v_i = q_i + sign(d_i) t_i, t_i + lambda p t_i^{p-1} = |d_i| is
 * solved by a safeguarded Newton iteration on the multiplier lambda, each t_i
 * by Newton from an upper bound. lambda_hint warm-starts the multiplier and
 * receives the final value.
 */
Vector project_lp_ball(const Vector &a, const Vector &q, double p, double eps,
                       int max_iters = 500, double tol = 1e-9, double *lambda_hint = nullptr);

/// Constraint set on v = A z: rows flagged in_ball lie in an l_p ball around
/// center, the remaining rows in the intervals [lower_i, upper_i].
struct MeasurementConstraint
{
    Vector center;
    double p = 2.0;
    double eps = 0.0;
    std::vector<char> in_ball;
    Vector lower;
    Vector upper;

    static MeasurementConstraint ball(const Vector &q, double p, double eps);
    void validate(Eigen::Index m) const;
};

/// min ||z||_1 s.t. A z in C, by Douglas-Rachford on the (z, v) product space.
SolverResult l1_constrained(const Matrix &A, const MeasurementConstraint &C,
                            const SolverConfig &cfg);

/// min ||z||_1 s.t. ||q - A z||_p <= eps.
SolverResult bpdq(const Matrix &A, const Vector &q, double p, double eps, const SolverConfig &cfg);

/// bpdq with p = 2.
SolverResult bpdn(const Matrix &A, const Vector &q, double eps, const SolverConfig &cfg);

/// Weighted l_p decoder for compander-quantized data, reduced to bpdq on
/// (diag(w) A, diag(w) Q_p(q)) with the weighted radius.
SolverResult gbpdn(const Matrix &A, const Vector &q, double p, const CompanderQuantizer &cq,
                   int bits, const SolverConfig &cfg);

enum class SaturationMode
{
    Ignore,
    Reject,
    Consistent
};

/// Decoders for finite-range data. All use the l2 radius epsilon_p(m_used, delta, 2, 2).
SolverResult reconstruct_saturation(const Matrix &A, const Vector &q, const Eigen::VectorXi &mask,
                                    SaturationMode mode, const FiniteRangeQuantizer &fr,
                                    const SolverConfig &cfg);

/// Keeps the k largest-magnitude entries; ties go to the lower index.
Vector hard_threshold(const Vector &z, Eigen::Index k);

/// Indices of the k largest-magnitude entries (same tie rule), ascending.
Support top_k_support(const Vector &z, Eigen::Index k);

/// ||(q o Az)_-||_norm with norm 1 or 2.
double one_sided_penalty(const Vector &Az, const Vector &q, int norm);

/*!
 * Binary iterative hard thresholding from z = 0 with step eta / (2m).
 *
 * Stops at sign consistency or when the budget runs out. Returns the iterate
 * with the smallest one-sided l1 penalty (after normalization), scaled to unit
 * norm; residual holds its normalized Hamming error.
 */
SolverResult biht(const Matrix &A, const Vector &q, Eigen::Index k, const SolverConfig &cfg);

struct PocsResult
{
    Vector x;
    int sweeps = 0;
    bool consistent = false;
    double max_violation = 0.0; ///< max_i (|(A x)_i - q_i| - delta/2)_+
};

/// Cyclic projections onto the slabs |(A z)_i - q_i| <= delta / 2, started at
/// the least-squares solution.
PocsResult consistent_pocs(const Matrix &A, const Vector &q, const UniformQuantizer &uq,
                           const SolverConfig &cfg);

/// Stage-2 decoder on a known support: x_T = (D^{-r} A_T)^+ D^{-r} q, zeros elsewhere.
Vector sobolev_decode(const Matrix &A, const Vector &q, const Support &T, int order);

struct TwoStageResult
{
    SolverResult result; ///< x_hat is the stage-2 estimate; counters are from stage 1
    Vector stage1;
    Support support;
};

/// Stage 1: bpdn with eps = (delta/2) 2^r sqrt(m) and the top-k support.
/// Stage 2: sobolev_decode on that support.
TwoStageResult two_stage_sd_recover(const Matrix &A, const Vector &q, Eigen::Index k, int order,
                                    const SDCodebook &cb, const SolverConfig &cfg);

/// Least squares on a known support, zeros elsewhere.
Vector oracle_assisted(const Matrix &A, const Vector &q, const Support &T);

} // namespace qcs
