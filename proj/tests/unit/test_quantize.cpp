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

#include "qcs/quantize.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace qcs;
using Catch::Approx;

namespace {

double gauss_pdf(double t, double sigma) { return normal_pdf(t / sigma) / sigma; }

// Minimizer of f over [lo, hi] by a coarse grid followed by a fine grid
// around the best coarse point.
template <class F> double grid_argmin(F f, double lo, double hi, int points = 2001)
{
    auto scan = [&](double a, double b) {
        double best = a, fbest = f(a);
        for (int i = 1; i < points; ++i) {
            const double t = a + (b - a) * i / (points - 1);
            const double ft = f(t);
            if (ft < fbest) {
                fbest = ft;
                best = t;
            }
        }
        return best;
    };
    const double step = (hi - lo) / (points - 1);
    const double coarse = scan(lo, hi);
    return scan(std::max(lo, coarse - step), std::min(hi, coarse + step));
}

} // namespace

TEST_CASE("quantize_uniform: midpoint convention", "[quantize]")
{
    CHECK(quantize_uniform((Vector(1) << 0.0).finished(), 1.0)[0] == 0.5);
    const Vector q = quantize_uniform((Vector(2) << -0.2, 0.7).finished(), 1.0);
    CHECK(q[0] == -0.5);
    CHECK(q[1] == 0.5);
    CHECK_THROWS_AS(UniformQuantizer(0.0), ParameterError);
}

TEST_CASE("quantize_uniform: error bound and idempotence", "[quantize][property]")
{
    RngStream rng(21);
    const double delta = 0.37;
    const Vector y = gaussian_vector(100000, 10.0, rng);
    const Vector q = quantize_uniform(y, delta);
    CHECK((y - q).cwiseAbs().maxCoeff() <= delta / 2);
    CHECK((quantize_uniform(q, delta) - q).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quantize_finite_range: step, saturation and agreement with uniform", "[quantize]")
{
    const FiniteRangeQuantizer fr(4, 1.0);
    CHECK(fr.delta() == 0.125);

    const FiniteRangeOutput hi = quantize_finite_range((Vector(2) << 10.0, -10.0).finished(), fr);
    CHECK(hi.q[0] == 1.0 - 0.0625);
    CHECK(hi.saturated[0] == 1);
    CHECK(hi.q[1] == -1.0 + 0.0625);
    CHECK(hi.saturated[1] == -1);

    RngStream rng(5);
    Vector y(100000);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = -1.0 + 2.0 * rng.uniform();
    const FiniteRangeOutput out = quantize_finite_range(y, fr);
    const Vector uq = quantize_uniform(y, fr.delta());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (std::abs(y[i]) < 1.0) {
            REQUIRE(out.saturated[i] == 0);
            REQUIRE(out.q[i] == uq[i]);
        }
    }
    CHECK_THROWS_AS(FiniteRangeQuantizer(0, 1.0), ParameterError);
    CHECK_THROWS_AS(FiniteRangeQuantizer(3, -1.0), ParameterError);
}

TEST_CASE("quantize_sign: zero convention, scale invariance, loop oracle", "[quantize]")
{
    const Vector s = quantize_sign((Vector(4) << 0.0, -0.0, 3.2, -1.0).finished());
    CHECK(s.isApprox((Vector(4) << 1, 1, 1, -1).finished()));

    RngStream rng(8);
    const Vector y = gaussian_vector(1000, 1.0, rng);
    CHECK((quantize_sign(3.7 * y).array() == quantize_sign(y).array()).all());
    const Vector q = quantize_sign(y);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        REQUIRE(q[i] == (y[i] >= 0.0 ? 1.0 : -1.0));
}

TEST_CASE("SDCodebook: symmetric points without zero", "[quantize]")
{
    const SDCodebook cb(3, 0.5);
    const auto pts = cb.points();
    REQUIRE(pts.size() == 6);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i] != 0.0);
        CHECK(pts[i] == -pts[pts.size() - 1 - i]);
        if (i > 0)
            CHECK(pts[i] > pts[i - 1]);
    }
    CHECK(cb.quantize(0.0) == 0.25);
    CHECK(cb.quantize(100.0) == cb.max_level());
    CHECK(cb.quantize(-100.0) == -cb.max_level());
    CHECK_THROWS_AS(SDCodebook(0, 1.0), ParameterError);
}

TEST_CASE("lloyd_max: uniform source against a grid-search oracle", "[quantize]")
{
    // B = 1 on U(0,1): levels are the conditional means of the two cells,
    // so the distortion is t^3/12 + (1-t)^3/12 as a function of the threshold.
    const double t_star = grid_argmin([](double t) { return (t * t * t + std::pow(1 - t, 3)) / 12.0; }, 0.0, 1.0);
    const LloydMaxQuantizer q1 = lloyd_max(UniformSource{0.0, 1.0}, 1);
    REQUIRE(q1.thresholds.size() == 1);
    CHECK(q1.thresholds[0] == Approx(t_star).margin(1e-6));
    CHECK(q1.thresholds[0] == Approx(0.5).margin(1e-10));
    CHECK(q1.levels[0] == Approx(0.25).margin(1e-10));
    CHECK(q1.levels[1] == Approx(0.75).margin(1e-10));

    const LloydMaxQuantizer q3 = lloyd_max(UniformSource{0.0, 1.0}, 3);
    REQUIRE(q3.levels.size() == 8);
    for (int j = 0; j < 8; ++j)
        CHECK(q3.levels[j] == Approx((j + 0.5) / 8.0).margin(1e-9));
    for (int j = 0; j < 7; ++j)
        CHECK(q3.thresholds[j] == Approx((j + 1) / 8.0).margin(1e-9));
}

TEST_CASE("lloyd_max: Gaussian one-bit levels", "[quantize]")
{
    const LloydMaxQuantizer q = lloyd_max(GaussianSource{1.0}, 1);
    const double analytic = std::sqrt(2.0 / std::numbers::pi);
    const double quad = integrate([](double t) { return t * normal_pdf(t); }, 0.0, 12.0) / 0.5;
    CHECK(quad == Approx(analytic).margin(1e-9));
    CHECK(q.levels[1] == Approx(analytic).margin(1e-9));
    CHECK(q.levels[0] == Approx(-analytic).margin(1e-9));
}

TEST_CASE("lloyd_max: both optimality conditions hold", "[quantize][property]")
{
    const double tol = 1e-12;
    for (const SourcePdf &pdf : {SourcePdf{GaussianSource{1.3}}, SourcePdf{UniformSource{-1.0, 3.0}}}) {
        for (int B = 1; B <= 4; ++B) {
            const LloydMaxQuantizer q = lloyd_max(pdf, B, tol);
            const auto [lo, hi] = source_range(pdf);
            for (std::size_t j = 0; j + 1 < q.levels.size(); ++j)
                CHECK(std::abs(q.thresholds[j] - 0.5 * (q.levels[j] + q.levels[j + 1])) <= 10 * tol);
            for (std::size_t j = 0; j < q.levels.size(); ++j) {
                const double a = j == 0 ? lo : q.thresholds[j - 1];
                const double b = j + 1 == q.levels.size() ? hi : q.thresholds[j];
                CHECK(q.levels[j] == Approx(conditional_mean(pdf, a, b)).margin(1e-8));
            }
        }
    }
}

TEST_CASE("lloyd_max: beats uniform quantizers on a Gaussian source", "[quantize][property]")
{
    const GaussianSource g{1.0};
    for (int B = 1; B <= 3; ++B) {
        const LloydMaxQuantizer lm = lloyd_max(g, B);
        const double d_lm = quantizer_distortion(g, lm.thresholds, lm.levels);
        const int L = 1 << B;
        for (double delta = 0.1; delta <= 2.0; delta += 0.05) {
            std::vector<double> t, l;
            for (int j = 0; j < L; ++j)
                l.push_back((j - L / 2 + 0.5) * delta);
            for (int j = 1; j < L; ++j)
                t.push_back((j - L / 2) * delta);
            CHECK(d_lm <= quantizer_distortion(g, t, l) + 1e-12);
        }
    }
}

TEST_CASE("lloyd_max: exhausted budget reports the last iterate", "[quantize]")
{
    try {
        (void)lloyd_max(GaussianSource{1.0}, 4, 1e-14, 1);
        FAIL("expected LloydMaxError");
    } catch (const LloydMaxError &e) {
        CHECK(e.last_iterate.levels.size() == 16);
    }
    CHECK_THROWS_AS(lloyd_max(GaussianSource{1.0}, 9), ParameterError);
    CHECK_THROWS_AS(lloyd_max(UniformSource{1.0, 0.0}, 2), ParameterError);
}

TEST_CASE("gaussian_compressor: symmetry and derivative", "[quantize]")
{
    const double s0 = 1.7;
    CHECK(gaussian_compressor(0.0, s0) == 0.5);
    for (double l : {0.1, 1.0, 2.5, 7.0})
        CHECK(gaussian_compressor(l, s0) + gaussian_compressor(-l, s0) == Approx(1.0).margin(1e-15));

    // G' = phi^{1/3} / int phi^{1/3}.
    auto cube_root_pdf = [&](double t) { return std::cbrt(gauss_pdf(t, s0)); };
    const double mass = integrate(cube_root_pdf, -40 * s0, 40 * s0);
    const CompanderQuantizer cq(4, s0);
    CHECK(cq.compress_derivative(s0) == Approx(cube_root_pdf(s0) / mass).margin(1e-8));

    const double h = 1e-5;
    const double fd = (gaussian_compressor(s0 + h, s0) - gaussian_compressor(s0 - h, s0)) / (2 * h);
    CHECK(fd == Approx(cq.compress_derivative(s0)).margin(1e-8));
}

TEST_CASE("CompanderQuantizer: round trip and compressed-domain consistency", "[quantize][property]")
{
    const double s0 = 0.8;
    const CompanderQuantizer cq(3, s0);
    for (double l = -8 * s0; l <= 8 * s0; l += 0.01)
        REQUIRE(std::abs(cq.expand(cq.compress(l)) - l) <= 1e-9);

    RngStream rng(31);
    const Vector y = gaussian_vector(20000, 2.0 * s0, rng);
    const Vector q = cq.quantize(y);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        REQUIRE(std::abs(cq.compress(y[i]) - cq.compress(q[i])) <= std::ldexp(1.0, -4) + 1e-15);

    for (int j = 1; j < cq.num_levels(); ++j)
        CHECK(cq.level(j) > cq.level(j - 1));
    CHECK(cq.level(0) == Approx(-cq.level(cq.num_levels() - 1)).margin(1e-12));
}

TEST_CASE("panter_dite_distortion: closed form and scaling", "[quantize]")
{
    // ||phi||_{1/3} from quadrature, compared with the closed form 6 sqrt(3) pi sigma0^2.
    for (double s0 : {1.0, 0.3, 2.5}) {
        const double mass = integrate([&](double t) { return std::cbrt(gauss_pdf(t, s0)); }, -40 * s0, 40 * s0);
        const double norm = mass * mass * mass;
        CHECK(gaussian_one_third_norm(s0) == Approx(norm).epsilon(1e-6));
        CHECK(norm == Approx(6.0 * std::numbers::sqrt3 * std::numbers::pi * s0 * s0).epsilon(1e-6));
    }
    CHECK(panter_dite_distortion(GaussianSource{1.0}, 0) ==
          Approx(std::numbers::sqrt3 * std::numbers::pi / 2.0).epsilon(1e-12));
    const GaussianSource g{0.7};
    CHECK(panter_dite_distortion(g, 2) / panter_dite_distortion(g, 4) == Approx(16.0).epsilon(1e-14));
    CHECK_THROWS_AS(panter_dite_distortion(g, -1), ParameterError);
}

TEST_CASE("panter_dite_distortion approaches Lloyd-Max distortion at high rate", "[quantize]")
{
    const GaussianSource g{1.0};
    const LloydMaxQuantizer lm = lloyd_max(g, 6);
    const double d = quantizer_distortion(g, lm.thresholds, lm.levels);
    CHECK(d / panter_dite_distortion(g, 6) == Approx(1.0).margin(0.05));
}

TEST_CASE("qp_map: p = 2, p = infinity and p = 4 against a grid oracle", "[quantize]")
{
    const double s0 = 1.0;
    const CompanderQuantizer cq(3, s0);
    const int j = 5;
    const double level = cq.level(j);
    const auto [lo, hi] = cq.bin(j);

    CHECK(qp_map(level, 2.0, cq) == level);
    CHECK(qp_map(level, kInfinity, cq) == Approx(0.5 * (lo + hi)).margin(1e-15));

    auto objective = [&](double lambda) {
        return integrate([&](double t) { return std::pow(std::abs(t - lambda), 4) * gauss_pdf(t, s0); }, lo, hi,
                         1e-14);
    };
    const double oracle = grid_argmin(objective, lo, hi);
    CHECK(std::abs(qp_map(level, 4.0, cq) - oracle) <= 1e-6);
    CHECK_THROWS_AS(qp_map(level, 1.5, cq), ParameterError);
}

TEST_CASE("qp_map is non-decreasing in the bin index", "[quantize][property]")
{
    const CompanderQuantizer cq(4, 1.3);
    for (double p : {2.0, 3.0, 4.0, 10.0, kInfinity}) {
        double prev = -kInfinity;
        for (int j = 0; j < cq.num_levels(); ++j) {
            const double v = qp_map(cq.level(j), p, cq);
            const auto [lo, hi] = cq.bin(j);
            CHECK(v >= prev);
            CHECK(v >= std::max(lo, -kGaussianTruncation * 1.3) - 1e-12);
            CHECK(v <= std::min(hi, kGaussianTruncation * 1.3) + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("epsilon_p: special cases and frozen values", "[quantize]")
{
    for (Eigen::Index m : {1, 10, 250}) {
        const double d = 0.3;
        CHECK(epsilon_p(m, d, 2.0, 0.0) == Approx(d * std::sqrt(m / 12.0)).epsilon(1e-14));
        CHECK(epsilon_p(m, d, kInfinity, 1.0) == d / 2);
    }
    CHECK(epsilon_p(0, 0.1, 3.0, 2.0) == 0.0);

    // Direct evaluation of (delta / (2 (p+1)^{1/p})) (m + zeta (p+1) sqrt(m))^{1/p}.
    auto direct = [](double m, double d, double p, double z) {
        return d / (2.0 * std::pow(p + 1.0, 1.0 / p)) * std::pow(m + z * (p + 1.0) * std::sqrt(m), 1.0 / p);
    };
    CHECK(epsilon_p(1000, 0.05, 4.0, 2.0) == Approx(direct(1000, 0.05, 4, 2)).epsilon(1e-14));
    CHECK(epsilon_p(1000, 0.05, 4.0, 2.0) == Approx(0.10070018527636634).epsilon(1e-14));
    CHECK(epsilon_p(100, 1.0, 2.0, 2.0) == Approx(3.651483716701108).epsilon(1e-14));

    CHECK_THROWS_AS(epsilon_p(-1, 0.1, 2.0, 0.0), ParameterError);
    CHECK_THROWS_AS(epsilon_p(10, 0.1, 0.5, 0.0), ParameterError);
    CHECK_THROWS_AS(epsilon_p(10, 0.1, 2.0, -1.0), ParameterError);
}

TEST_CASE("epsilon_pw_and_weights: limits and symmetry", "[quantize]")
{
    const double s0 = 1.0;
    const int B = 4;
    const CompanderQuantizer cq(B, s0);
    RngStream rng(41);
    const Vector q = cq.quantize(gaussian_vector(64, s0, rng));

    const WeightedEpsilon e2 = epsilon_pw_and_weights(q, 2.0, B, cq);
    CHECK((e2.weights.array() == 1.0).all());
    CHECK(e2.epsilon == Approx(std::sqrt(64.0 * panter_dite_distortion(GaussianSource{s0}, B))).epsilon(1e-12));
    CHECK(e2.qp.isApprox(q));

    const WeightedEpsilon big = epsilon_pw_and_weights(q, 1e4, B, cq);
    CHECK(big.epsilon == Approx(std::ldexp(1.0, -B) / 2).epsilon(2e-3));
    CHECK(epsilon_pw_and_weights(q, kInfinity, B, cq).epsilon == std::ldexp(1.0, -B) / 2);

    const Vector pair = (Vector(2) << cq.level(2), cq.level(cq.num_levels() - 3)).finished();
    const WeightedEpsilon e4 = epsilon_pw_and_weights(pair, 4.0, B, cq);
    CHECK(e4.weights[0] == Approx(e4.weights[1]).epsilon(1e-10));
    CHECK(e4.weights.minCoeff() > 0.0);

    CHECK_THROWS_AS(epsilon_pw_and_weights(q, 4.0, B + 1, cq), ParameterError);
}

TEST_CASE("weight_conditioning", "[quantize]")
{
    CHECK(weight_conditioning(Vector::Ones(10), 4.0) == Approx(1.0));
    const Vector w = (Vector(2) << 1.0, 0.0).finished();
    CHECK(weight_conditioning(w, 2.0) == Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(weight_conditioning(Vector(0), 2.0), ParameterError);
}

TEST_CASE("apply_quantizer dispatches every quantizer", "[quantize]")
{
    const Vector y = (Vector(3) << -0.3, 0.0, 0.9).finished();
    CHECK(apply_quantizer(UniformQuantizer(0.5), y).isApprox(quantize_uniform(y, 0.5)));
    CHECK(apply_quantizer(SignQuantizer{}, y).isApprox(quantize_sign(y)));
    const FiniteRangeQuantizer fr(2, 0.5);
    CHECK(apply_quantizer(fr, y).isApprox(quantize_finite_range(y, fr).q));
    const CompanderQuantizer cq(3, 1.0);
    CHECK(apply_quantizer(cq, y).isApprox(cq.quantize(y)));
    const SDCodebook cb(2, 0.5);
    const Vector sd = apply_quantizer(cb, y);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        CHECK(sd[i] == cb.quantize(y[i]));
}
