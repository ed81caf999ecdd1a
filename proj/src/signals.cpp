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

#include "qcs/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcs {

Vector SparseSignal::dense() const
{
    return scatter(n, support, values);
}

void SparseSignal::validate() const
{
    if (values.size() != k())
        throw ParameterError("SparseSignal: support and values differ in length");
    if (k() > n)
        throw ParameterError("SparseSignal: k > n");
    Support sorted = support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ParameterError("SparseSignal: repeated support index");
    for (auto i : sorted)
        if (i < 0 || i >= n)
            throw ParameterError("SparseSignal: support index out of range");
    for (Eigen::Index j = 0; j < values.size(); ++j)
        if (values[j] == 0.0 || !std::isfinite(values[j]))
            throw ParameterError("SparseSignal: zero or non-finite coefficient on the support");
}

void NoiseSpec::validate() const
{
    if (!(signal_noise_sigma >= 0.0) || !std::isfinite(signal_noise_sigma) ||
        !(sensing_noise_sigma >= 0.0) || !std::isfinite(sensing_noise_sigma))
        throw ParameterError("NoiseSpec: sigmas must be finite and >= 0");
}

namespace {

Support random_support(Eigen::Index n, Eigen::Index k, RngStream &rng)
{
    if (k < 1 || k > n)
        throw ParameterError("sparse signal: need 1 <= k <= n");
    // Partial Fisher-Yates over the index range.
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    Support T(idx.begin(), idx.begin() + k);
    std::sort(T.begin(), T.end());
    return T;
}

} // namespace

SparseSignal gen_sparse(Eigen::Index n, Eigen::Index k, bool normalize, RngStream &rng)
{
    SparseSignal s;
    s.n = n;
    s.support = random_support(n, k, rng);
    s.values.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double v;
        do {
            v = rng.normal();
        } while (v == 0.0);
        s.values[j] = v;
    }
    if (normalize)
        s.values /= s.values.norm();
    return s;
}

SparseSignal gen_sparse_floored(Eigen::Index n, Eigen::Index k, double floor, RngStream &rng)
{
    if (!(floor >= 0.0) || floor > 5.0)
        throw ParameterError("gen_sparse_floored: floor must lie in [0, 5]");
    SparseSignal s;
    s.n = n;
    s.support = random_support(n, k, rng);
    s.values.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double v;
        do {
            v = rng.normal();
        } while (std::abs(v) < floor || v == 0.0);
        s.values[j] = v;
    }
    return s;
}

Vector gen_compressible_weak_lp(Eigen::Index n, double p, RngStream &rng)
{
    if (n < 1)
        throw ParameterError("gen_compressible_weak_lp: n must be >= 1");
    if (!(p > 0.0 && p < 2.0))
        throw ParameterError("gen_compressible_weak_lp: p must lie in (0, 2)");
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
        std::swap(perm[i], perm[j]);
    }
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double magnitude = std::pow(static_cast<double>(i + 1), -1.0 / p);
        const double sign = (rng.next_u64() >> 63) ? -1.0 : 1.0;
        x[perm[i]] = sign * magnitude;
    }
    return x / x.norm();
}

Vector measure(const Matrix &A, const Vector &x, const NoiseSpec &noise, RngStream &rng)
{
    if (A.cols() != x.size())
        throw ParameterError("measure: A.cols() != x.size()");
    noise.validate();
    if (noise.signal_noise_sigma == 0.0 && noise.sensing_noise_sigma == 0.0)
        return A * x;
    Vector xn = x;
    if (noise.signal_noise_sigma > 0.0)
        xn += gaussian_vector(x.size(), noise.signal_noise_sigma, rng);
    Vector y = A * xn;
    if (noise.sensing_noise_sigma > 0.0)
        y += gaussian_vector(A.rows(), noise.sensing_noise_sigma, rng);
    return y;
}

Matrix restrict_columns(const Matrix &A, const Support &T)
{
    Matrix AT(A.rows(), static_cast<Eigen::Index>(T.size()));
    for (std::size_t j = 0; j < T.size(); ++j) {
        if (T[j] < 0 || T[j] >= A.cols())
            throw ParameterError("restrict_columns: index out of range");
        AT.col(static_cast<Eigen::Index>(j)) = A.col(T[j]);
    }
    return AT;
}

Vector scatter(Eigen::Index n, const Support &T, const Vector &values)
{
    if (static_cast<Eigen::Index>(T.size()) != values.size())
        throw ParameterError("scatter: support and values differ in length");
    Vector x = Vector::Zero(n);
    for (std::size_t j = 0; j < T.size(); ++j) {
        if (T[j] < 0 || T[j] >= n)
            throw ParameterError("scatter: index out of range");
        x[T[j]] = values[static_cast<Eigen::Index>(j)];
    }
    return x;
}

} // namespace qcs
