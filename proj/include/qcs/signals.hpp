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

#include <vector>

namespace qcs {

/// Index set into a vector; kept sorted ascending where produced by this library.
using Support = std::vector<Eigen::Index>;

/// k-sparse vector in R^n stored as (support, values).
struct SparseSignal
{
    Eigen::Index n = 0;
    Support support;
    Vector values;

    Eigen::Index k() const { return static_cast<Eigen::Index>(support.size()); }
    Vector dense() const;

    /// Throws ParameterError unless |T| = k <= n, indices distinct and in range,
    /// and every coefficient on T is nonzero.
    void validate() const;
};

/// Standard deviations of the signal-domain and measurement-domain noise.
struct NoiseSpec
{
    double signal_noise_sigma = 0.0;
    double sensing_noise_sigma = 0.0;

    void validate() const;
};

/// k-sparse signal with a uniformly random support and N(0,1) coefficients,
/// optionally scaled to unit l2 norm.
SparseSignal gen_sparse(Eigen::Index n, Eigen::Index k, bool normalize, RngStream &rng);

/// Same support law, coefficients N(0,1) conditioned on |x_i| >= floor
/// (rejection sampling). Used where support recovery needs a magnitude floor.
SparseSignal gen_sparse_floored(Eigen::Index n, Eigen::Index k, double floor, RngStream &rng);

/// Deterministic weak-l_p profile: sorted magnitudes i^{-1/p}, random signs,
/// random positions, unit l2 norm. Requires 0 < p < 2.
Vector gen_compressible_weak_lp(Eigen::Index n, double p, RngStream &rng);

/// A (x + xi_x) + xi_s with i.i.d. normal noise per NoiseSpec. Noise is only
/// drawn for nonzero sigmas, so the noiseless model consumes no randomness.
Vector measure(const Matrix &A, const Vector &x, const NoiseSpec &noise, RngStream &rng);

/// Columns of A indexed by T.
Matrix restrict_columns(const Matrix &A, const Support &T);

/// Places values on T in a zero vector of length n.
Vector scatter(Eigen::Index n, const Support &T, const Vector &values);

} // namespace qcs
