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

#include "qcs/sigma_delta.hpp"

#include <cmath>

namespace qcs {

DifferenceOperator::DifferenceOperator(Eigen::Index size, int order) : size_(size), order_(order)
{
    if (size < 1)
        throw ParameterError("DifferenceOperator: size must be >= 1");
    if (order < 0 || order > 30)
        throw ParameterError("DifferenceOperator: order must lie in [0, 30]");
}

void DifferenceOperator::check(Eigen::Index len) const
{
    if (len != size_)
        throw ParameterError("DifferenceOperator: dimension mismatch");
}

Vector DifferenceOperator::apply(const Vector &v) const
{
    check(v.size());
    Vector w = v;
    for (int p = 0; p < order_; ++p)
        for (Eigen::Index i = size_ - 1; i > 0; --i)
            w[i] -= w[i - 1];
    return w;
}

Vector DifferenceOperator::apply_inverse(const Vector &v) const
{
    check(v.size());
    Vector w = v;
    for (int p = 0; p < order_; ++p)
        for (Eigen::Index i = 1; i < size_; ++i)
            w[i] += w[i - 1];
    return w;
}

Matrix DifferenceOperator::apply_inverse(const Matrix &M) const
{
    check(M.rows());
    Matrix W = M;
    for (int p = 0; p < order_; ++p)
        for (Eigen::Index i = 1; i < size_; ++i)
            W.row(i) += W.row(i - 1);
    return W;
}

Matrix DifferenceOperator::right_apply(const Matrix &M) const
{
    check(M.cols());
    // (M D)_{:,j} = M_{:,j} - M_{:,j+1}; the last column is unchanged.
    Matrix W = M;
    for (int p = 0; p < order_; ++p)
        for (Eigen::Index j = 0; j + 1 < size_; ++j)
            W.col(j) -= W.col(j + 1);
    return W;
}

Matrix DifferenceOperator::right_apply_inverse(const Matrix &M) const
{
    check(M.cols());
    // (M D^{-1})_{:,j} = sum_{i >= j} M_{:,i}: suffix sums over columns.
    Matrix W = M;
    for (int p = 0; p < order_; ++p)
        for (Eigen::Index j = size_ - 2; j >= 0; --j)
            W.col(j) += W.col(j + 1);
    return W;
}

Matrix DifferenceOperator::materialize() const
{
    return right_apply(Matrix::Identity(size_, size_));
}

Matrix DifferenceOperator::materialize_inverse() const
{
    return apply_inverse(Matrix(Matrix::Identity(size_, size_)));
}

SDState sd_quantize_greedy(const Vector &c, int order, const SDCodebook &cb)
{
    if (order < 1 || order > 30)
        throw ParameterError("sd_quantize_greedy: order must lie in [1, 30]");
    require_finite(c, "sd_quantize_greedy");
    const Eigen::Index m = c.size();

    // Signed binomial weights (-1)^{j-1} C(r, j).
    std::vector<double> w(static_cast<std::size_t>(order) + 1, 0.0);
    double binom = 1.0;
    for (int j = 1; j <= order; ++j) {
        binom = binom * (order - j + 1) / j;
        w[j] = (j % 2 == 1) ? binom : -binom;
    }

    SDState s;
    s.c = c;
    s.q.resize(m);
    s.u.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int j = 1; j <= order && j <= i; ++j)
            acc += w[j] * s.u[i - j];
        const double v = acc + c[i];
        s.q[i] = cb.quantize(v);
        s.u[i] = v - s.q[i];
    }

    s.aux.resize(static_cast<std::size_t>(order));
    Vector running = c - s.q;
    for (int j = 1; j < order; ++j) {
        for (Eigen::Index i = 1; i < m; ++i)
            running[i] += running[i - 1];
        s.aux[j - 1] = running;
    }
    s.aux[order - 1] = s.u;
    return s;
}

bool check_stability_condition(const Vector &c, int order, const SDCodebook &cb)
{
    if (order < 1 || order > 30)
        throw ParameterError("check_stability_condition: order must lie in [1, 30]");
    const double bound =
        cb.delta() * (cb.levels_per_side() - std::ldexp(1.0, order - 1) + 0.5);
    const double cmax = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
    return cmax <= bound;
}

int required_levels(double max_abs_measurement, double delta, int order)
{
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ParameterError("required_levels: delta must be finite and > 0");
    if (!(max_abs_measurement >= 0.0) || !std::isfinite(max_abs_measurement))
        throw ParameterError("required_levels: max_abs_measurement must be finite and >= 0");
    if (order < 0 || order > 30)
        throw ParameterError("required_levels: order must lie in [0, 30]");
    const double x = max_abs_measurement / delta + std::ldexp(1.0, order - 1) - 0.5;
    const double L = std::floor(x) + 1.0;
    if (L > 1e9)
        throw ParameterError("required_levels: codebook size overflows");
    return static_cast<int>(std::max(1.0, L));
}

Matrix sobolev_dual(const Matrix &Phi, int order)
{
    const Eigen::Index n = Phi.rows(), N = Phi.cols();
    if (n < 1 || N < n)
        throw ParameterError("sobolev_dual: need an n x N frame with N >= n >= 1");
    require_finite(Phi, "sobolev_dual");
    const DifferenceOperator D(N, order);
    const Matrix M = D.apply_inverse(Matrix(Phi.transpose())); // N x n

    const Svd d = svd(M);
    if (d.S.size() < n || !(d.S[n - 1] > kRankCutoff * d.S[0]))
        throw NumericalError("sobolev_dual: frame is rank deficient");
    // Full column rank, so the pseudo-inverse is V diag(1/S) U^T.
    const Matrix P = d.V * d.S.cwiseInverse().asDiagonal() * d.U.transpose(); // n x N
    return D.right_apply_inverse(P);
}

double dual_noise_gain(const Matrix &F, int order)
{
    return operator_norm(DifferenceOperator(F.cols(), order).right_apply(F));
}

Vector dminusr_singular_values(Eigen::Index m, int order)
{
    return singular_values(DifferenceOperator(m, order).materialize_inverse());
}

} // namespace qcs
