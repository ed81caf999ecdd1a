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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

using namespace qcs;
using Catch::Approx;

namespace {

std::vector<double> sorted_magnitudes(const Vector &x)
{
    std::vector<double> m(x.data(), x.data() + x.size());
    for (double &v : m)
        v = std::abs(v);
    std::sort(m.rbegin(), m.rend());
    return m;
}

} // namespace

TEST_CASE("gen_sparse: normalization and support", "[signals]")
{
    RngStream rng(1);
    const SparseSignal s = gen_sparse(4, 4, true, rng);
    CHECK(std::abs(s.dense().norm() - 1.0) <= 1e-15);

    RngStream r2(2024);
    const SparseSignal big = gen_sparse(1024, 16, false, r2);
    CHECK(big.k() == 16);
    CHECK(std::set<Eigen::Index>(big.support.begin(), big.support.end()).size() == 16);
    CHECK(std::is_sorted(big.support.begin(), big.support.end()));
    CHECK((big.dense().array() != 0.0).count() == 16);

    CHECK_THROWS_AS(gen_sparse(4, 5, false, rng), ParameterError);
    CHECK_THROWS_AS(gen_sparse(4, 0, false, rng), ParameterError);
}

TEST_CASE("gen_sparse: support indices are uniform", "[signals]")
{
    RngStream rng(77);
    const int draws = 10000, n = 32;
    std::vector<int> counts(n, 0);
    for (int t = 0; t < draws; ++t)
        counts[gen_sparse(n, 1, false, rng).support[0]]++;
    const double p = 1.0 / n;
    const double expect = draws * p, sd = std::sqrt(draws * p * (1 - p));
    double chi2 = 0.0;
    for (int c : counts) {
        CHECK(std::abs(c - expect) <= 5.0 * sd);
        chi2 += (c - expect) * (c - expect) / expect;
    }
    // 31 degrees of freedom; 99.99th percentile is about 70.
    CHECK(chi2 < 70.0);
}

TEST_CASE("gen_sparse: invariants over random parameters", "[signals][property]")
{
    RngStream rng(4);
    for (int t = 0; t < 500; ++t) {
        const auto n = static_cast<Eigen::Index>(1 + rng.below(200));
        const auto k = static_cast<Eigen::Index>(1 + rng.below(static_cast<std::uint64_t>(n)));
        const SparseSignal s = gen_sparse(n, k, t % 2 == 0, rng);
        REQUIRE_NOTHROW(s.validate());
        CHECK(s.k() == k);
    }
}

TEST_CASE("gen_sparse_floored respects the magnitude floor", "[signals]")
{
    RngStream rng(9);
    const SparseSignal s = gen_sparse_floored(1000, 50, 0.5, rng);
    REQUIRE_NOTHROW(s.validate());
    CHECK(s.values.cwiseAbs().minCoeff() >= 0.5);
    CHECK_THROWS_AS(gen_sparse_floored(10, 2, 6.0, rng), ParameterError);
}

TEST_CASE("SparseSignal::validate rejects broken signals", "[signals]")
{
    SparseSignal s;
    s.n = 4;
    s.support = {1, 1};
    s.values = Vector::Ones(2);
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s.support = {1, 4};
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s.support = {0, 3};
    s.values[1] = 0.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("gen_compressible_weak_lp: profile and decay", "[signals]")
{
    RngStream rng(3);
    const auto m3 = sorted_magnitudes(gen_compressible_weak_lp(3, 1.0, rng));
    CHECK(m3[0] / m3[1] == Approx(2.0));
    CHECK(m3[0] / m3[2] == Approx(3.0));

    const Vector x = gen_compressible_weak_lp(1024, 0.4, rng);
    CHECK(x.norm() == Approx(1.0));
    const auto mags = sorted_magnitudes(x);
    for (std::size_t i = 1; i < mags.size(); ++i)
        REQUIRE(mags[i] < mags[i - 1]);

    // Least-squares slope of log|x|_(i) against log i.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double N = static_cast<double>(mags.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const double lx = std::log(i + 1.0), ly = std::log(mags[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    CHECK(std::abs(slope - (-1.0 / 0.4)) <= 1e-6);
}

TEST_CASE("measure: noiseless cases and linearity", "[signals]")
{
    RngStream rng(6);
    const Vector x = gaussian_vector(5, 1.0, rng);
    CHECK(measure(Matrix::Identity(5, 5), x, NoiseSpec{}, rng).isApprox(x));
    const Matrix A = gaussian_matrix(7, 5, 1.0, rng);
    CHECK(measure(A, Vector::Zero(5), NoiseSpec{}, rng).isZero(0.0));

    for (int t = 0; t < 20; ++t) {
        const Vector u = gaussian_vector(5, 1.0, rng), v = gaussian_vector(5, 1.0, rng);
        const double a = rng.normal(), b = rng.normal();
        const Vector lhs = measure(A, a * u + b * v, NoiseSpec{}, rng);
        const Vector rhs = a * measure(A, u, NoiseSpec{}, rng) + b * measure(A, v, NoiseSpec{}, rng);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }

    CHECK_THROWS_AS(measure(A, Vector::Zero(4), NoiseSpec{}, rng), ParameterError);
    CHECK_THROWS_AS(measure(A, x, NoiseSpec{-1.0, 0.0}, rng), ParameterError);
}

TEST_CASE("measure: signal noise folds with factor n", "[signals]")
{
    // With N(0,1) entries each component of A xi has variance n sigma^2.
    RngStream rng(12);
    const Eigen::Index m = 200, n = 100;
    double sum2 = 0.0;
    long count = 0;
    for (int t = 0; t < 100; ++t) {
        const Matrix A = gaussian_matrix(m, n, 1.0, rng);
        const Vector y = measure(A, Vector::Zero(n), NoiseSpec{1.0, 0.0}, rng);
        sum2 += y.squaredNorm();
        count += m;
    }
    CHECK(sum2 / count == Approx(static_cast<double>(n)).epsilon(0.10));
}

TEST_CASE("restrict_columns and scatter", "[signals]")
{
    const Matrix A = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();
    const Matrix AT = restrict_columns(A, {2, 0});
    CHECK(AT.isApprox((Matrix(2, 2) << 3, 1, 6, 4).finished()));
    const Vector x = scatter(4, {1, 3}, (Vector(2) << 5, -1).finished());
    CHECK(x.isApprox((Vector(4) << 0, 5, 0, -1).finished()));
    CHECK_THROWS_AS(scatter(2, {2}, Vector::Ones(1)), ParameterError);
}
