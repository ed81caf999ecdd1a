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

#include <vector>

namespace qcs {

/*!
 * r-th power of the m x m first-order difference matrix D (ones on the
 * diagonal, -1 on the subdiagonal). D^{-1} is the lower-triangular all-ones
 * matrix, so inverse powers reduce to cumulative sums and are never formed
 * by explicit inversion.
 */
class DifferenceOperator
{
public:
    DifferenceOperator(Eigen::Index size, int order);

    Eigen::Index size() const { return size_; }
    int order() const { return order_; }

    Vector apply(const Vector &v) const;         ///< D^r v
    Vector apply_inverse(const Vector &v) const; ///< D^{-r} v

    Matrix apply_inverse(const Matrix &M) const;       ///< D^{-r} M, column by column
    Matrix right_apply(const Matrix &M) const;         ///< M D^r
    Matrix right_apply_inverse(const Matrix &M) const; ///< M D^{-r}

    Matrix materialize() const;         ///< D^r as a dense matrix
    Matrix materialize_inverse() const; ///< D^{-r} as a dense matrix

private:
    void check(Eigen::Index len) const;

    Eigen::Index size_;
    int order_;
};

/// Output of one greedy run: D^r u = c - q.
struct SDState
{
    Vector c;
    Vector q;
    Vector u;
    std::vector<Vector> aux; ///< aux[j-1] = u^{(j)} = D^{-j}(c - q), j = 1..r; aux[r-1] == u
};

/// Greedy r-th order scheme: q_i = Q(sum_{j=1}^r (-1)^{j-1} C(r,j) u_{i-j} + c_i),
/// u_i = (same sum) + c_i - q_i, with u_i = 0 for i <= 0.
SDState sd_quantize_greedy(const Vector &c, int order, const SDCodebook &cb);

/// ||c||_inf <= delta (L - 2^{r-1} + 1/2), the sufficient condition for ||u||_inf <= delta / 2.
bool check_stability_condition(const Vector &c, int order, const SDCodebook &cb);

/// Smallest L with L > max_abs / delta + 2^{r-1} - 1/2.
int required_levels(double max_abs_measurement, double delta, int order);

/// r-th order Sobolev dual (D^{-r} Phi^T)^+ D^{-r} of an n x N frame Phi;
/// order 0 gives the canonical dual. Throws NumericalError if Phi^T is rank deficient.
Matrix sobolev_dual(const Matrix &Phi, int order);

/// ||F D^r||_{2->2} for an n x N dual frame F.
double dual_noise_gain(const Matrix &F, int order);

/// Singular values of D^{-r} (m x m), non-increasing.
Vector dminusr_singular_values(Eigen::Index m, int order);

} // namespace qcs
