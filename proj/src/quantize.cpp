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

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qcs {

namespace {

void require_positive(double v, const char *what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ParameterError(std::string(what) + " must be finite and > 0");
}

double midpoint_quantize(double y, double delta)
{
    return delta * std::floor(y / delta) + 0.5 * delta;
}

} // namespace

// ------------------------------------------------------------------ uniform

UniformQuantizer::UniformQuantizer(double delta) : delta_(delta)
{
    require_positive(delta, "UniformQuantizer: delta");
}

double UniformQuantizer::quantize(double y) const
{
    return midpoint_quantize(y, delta_);
}

Vector UniformQuantizer::quantize(const Vector &y) const
{
    return y.unaryExpr([this](double v) { return midpoint_quantize(v, delta_); });
}

Vector quantize_uniform(const Vector &y, double delta)
{
    return UniformQuantizer(delta).quantize(y);
}

// ------------------------------------------------------------- finite range

FiniteRangeQuantizer::FiniteRangeQuantizer(int bits, double saturation)
    : bits_(bits), saturation_(saturation)
{
    if (bits < 1 || bits > 30)
        throw ParameterError("FiniteRangeQuantizer: bits must lie in [1, 30]");
    require_positive(saturation, "FiniteRangeQuantizer: saturation");
    delta_ = std::ldexp(saturation, 1 - bits);
}

FiniteRangeOutput FiniteRangeQuantizer::quantize(const Vector &y) const
{
    FiniteRangeOutput out{Vector(y.size()), Eigen::VectorXi::Zero(y.size())};
    const double half_levels = std::ldexp(1.0, bits_ - 1);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double v = y[i];
        if (v >= saturation_) {
            out.q[i] = saturation_ - 0.5 * delta_;
            out.saturated[i] = 1;
        } else if (v <= -saturation_) {
            out.q[i] = -saturation_ + 0.5 * delta_;
            out.saturated[i] = -1;
        } else {
            // Rounding in v / delta can land on the outer edge; clamp the index.
            const double j = std::clamp(std::floor(v / delta_), -half_levels, half_levels - 1.0);
            out.q[i] = (j + 0.5) * delta_;
        }
    }
    return out;
}

FiniteRangeOutput quantize_finite_range(const Vector &y, const FiniteRangeQuantizer &fr)
{
    return fr.quantize(y);
}

// --------------------------------------------------------------------- sign

Vector quantize_sign(const Vector &y)
{
    return y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
}

// ----------------------------------------------------------- SD codebook

SDCodebook::SDCodebook(int levels_per_side, double delta) : levels_(levels_per_side), delta_(delta)
{
    if (levels_per_side < 1)
        throw ParameterError("SDCodebook: levels_per_side must be >= 1");
    require_positive(delta, "SDCodebook: delta");
}

double SDCodebook::quantize(double v) const
{
    // Nearest point of the mid-rise grid is the uniform midpoint quantizer.
    const double top = max_level();
    return std::clamp(midpoint_quantize(v, delta_), -top, top);
}

std::vector<double> SDCodebook::points() const
{
    std::vector<double> pts;
    pts.reserve(2 * static_cast<std::size_t>(levels_));
    for (int j = levels_; j >= 1; --j)
        pts.push_back(-(j - 0.5) * delta_);
    for (int j = 1; j <= levels_; ++j)
        pts.push_back((j - 0.5) * delta_);
    return pts;
}

// -------------------------------------------------------------- source pdfs

void validate_source(const SourcePdf &pdf)
{
    if (const auto *g = std::get_if<GaussianSource>(&pdf)) {
        require_positive(g->sigma, "GaussianSource: sigma");
    } else {
        const auto &u = std::get<UniformSource>(pdf);
        if (!(u.b > u.a) || !std::isfinite(u.a) || !std::isfinite(u.b))
            throw ParameterError("UniformSource: need finite a < b");
    }
}

double source_density(const SourcePdf &pdf, double t)
{
    if (const auto *g = std::get_if<GaussianSource>(&pdf))
        return normal_pdf(t / g->sigma) / g->sigma;
    const auto &u = std::get<UniformSource>(pdf);
    return (t >= u.a && t <= u.b) ? 1.0 / (u.b - u.a) : 0.0;
}

std::pair<double, double> source_range(const SourcePdf &pdf)
{
    if (const auto *g = std::get_if<GaussianSource>(&pdf))
        return {-kGaussianTruncation * g->sigma, kGaussianTruncation * g->sigma};
    const auto &u = std::get<UniformSource>(pdf);
    return {u.a, u.b};
}

namespace {

// P(a <= Z <= b) for standard normal Z, computed on the side that avoids cancellation.
double normal_mass(double a, double b)
{
    if (a >= 0.0)
        return normal_sf(a) - normal_sf(b);
    if (b <= 0.0)
        return normal_cdf(b) - normal_cdf(a);
    return 1.0 - normal_cdf(a) - normal_sf(b);
}

} // namespace

double conditional_mean(const SourcePdf &pdf, double a, double b)
{
    if (!(a < b))
        throw ParameterError("conditional_mean: need a < b");
    if (const auto *g = std::get_if<GaussianSource>(&pdf)) {
        const double s = g->sigma;
        const double za = a / s, zb = b / s;
        const double mass = normal_mass(za, zb);
        if (!(mass > 0.0)) {
            if (std::isfinite(a) && std::isfinite(b))
                return 0.5 * (a + b);
            throw NumericalError("conditional_mean: interval carries no probability mass");
        }
        const double pa = std::isfinite(za) ? normal_pdf(za) : 0.0;
        const double pb = std::isfinite(zb) ? normal_pdf(zb) : 0.0;
        return s * (pa - pb) / mass;
    }
    const auto &u = std::get<UniformSource>(pdf);
    const double lo = std::max(a, u.a), hi = std::min(b, u.b);
    if (!(lo < hi))
        throw NumericalError("conditional_mean: interval outside the uniform support");
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- Lloyd-Max

double LloydMaxQuantizer::quantize(double y) const
{
    const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), y);
    // Inputs on a threshold go to the upper bin, as in the uniform quantizer.
    const auto j = static_cast<std::size_t>(it - thresholds.begin());
    return levels[j];
}

Vector LloydMaxQuantizer::quantize(const Vector &y) const
{
    return y.unaryExpr([this](double v) { return quantize(v); });
}

LloydMaxQuantizer lloyd_max(const SourcePdf &pdf, int bits, double tol, int max_sweeps)
{
    validate_source(pdf);
    if (bits < 1 || bits > 8)
        throw ParameterError("lloyd_max: bits must lie in [1, 8]");
    require_positive(tol, "lloyd_max: tol");
    if (max_sweeps < 1)
        throw ParameterError("lloyd_max: max_sweeps must be >= 1");

    const int N = 1 << bits;
    LloydMaxQuantizer lm;
    lm.levels.resize(N);
    lm.thresholds.resize(N - 1);

    // Equal-probability start.
    for (int j = 0; j < N; ++j) {
        const double u = (j + 0.5) / N;
        if (const auto *g = std::get_if<GaussianSource>(&pdf)) {
            lm.levels[j] = g->sigma * normal_quantile(u);
        } else {
            const auto &us = std::get<UniformSource>(pdf);
            lm.levels[j] = us.a + u * (us.b - us.a);
        }
    }

    const bool gaussian = std::holds_alternative<GaussianSource>(pdf);
    const auto [lo, hi] = gaussian ? std::pair{-kInfinity, kInfinity} : source_range(pdf);

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (int j = 0; j + 1 < N; ++j)
            lm.thresholds[j] = 0.5 * (lm.levels[j] + lm.levels[j + 1]);
        double moved = 0.0;
        for (int j = 0; j < N; ++j) {
            const double a = j == 0 ? lo : lm.thresholds[j - 1];
            const double b = j + 1 == N ? hi : lm.thresholds[j];
            const double c = conditional_mean(pdf, a, b);
            moved = std::max(moved, std::abs(c - lm.levels[j]));
            lm.levels[j] = c;
        }
        lm.sweeps = sweep;
        if (moved < tol) {
            for (int j = 0; j + 1 < N; ++j)
                lm.thresholds[j] = 0.5 * (lm.levels[j] + lm.levels[j + 1]);
            return lm;
        }
    }
    throw LloydMaxError("lloyd_max: no convergence within the sweep budget", lm);
}

double quantizer_distortion(const SourcePdf &pdf, const std::vector<double> &thresholds,
                            const std::vector<double> &levels)
{
    validate_source(pdf);
    if (levels.empty() || thresholds.size() + 1 != levels.size())
        throw ParameterError("quantizer_distortion: need levels.size() == thresholds.size() + 1");
    const auto [lo, hi] = source_range(pdf);
    double total = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double a = std::max(lo, j == 0 ? lo : thresholds[j - 1]);
        const double b = std::min(hi, j + 1 == levels.size() ? hi : thresholds[j]);
        if (!(a < b))
            continue;
        const double l = levels[j];
        total += integrate([&](double t) { return (t - l) * (t - l) * source_density(pdf, t); },
                           a, b, 1e-13);
    }
    return total;
}

// ---------------------------------------------------------------- compander

double gaussian_compressor(double lambda, double sigma0)
{
    require_positive(sigma0, "gaussian_compressor: sigma0");
    return normal_cdf(lambda / (std::numbers::sqrt3 * sigma0));
}

CompanderQuantizer::CompanderQuantizer(int bits, double sigma0) : bits_(bits), sigma0_(sigma0)
{
    if (bits < 1 || bits > 16)
        throw ParameterError("CompanderQuantizer: bits must lie in [1, 16]");
    require_positive(sigma0, "CompanderQuantizer: sigma0");
    delta_ = std::ldexp(1.0, -bits);
    scale_ = std::numbers::sqrt3 * sigma0;
}

double CompanderQuantizer::compress(double lambda) const
{
    return normal_cdf(lambda / scale_);
}

double CompanderQuantizer::compress_derivative(double lambda) const
{
    return normal_pdf(lambda / scale_) / scale_;
}

double CompanderQuantizer::expand(double u) const
{
    return scale_ * normal_quantile(u);
}

int CompanderQuantizer::bin_index(double y) const
{
    const int j = static_cast<int>(std::floor(compress(y) / delta_));
    return std::clamp(j, 0, num_levels() - 1);
}

double CompanderQuantizer::level(int j) const
{
    if (j < 0 || j >= num_levels())
        throw ParameterError("CompanderQuantizer::level: bin index out of range");
    return expand((j + 0.5) * delta_);
}

std::pair<double, double> CompanderQuantizer::bin(int j) const
{
    if (j < 0 || j >= num_levels())
        throw ParameterError("CompanderQuantizer::bin: bin index out of range");
    const double lo = j == 0 ? -kInfinity : expand(j * delta_);
    const double hi = j + 1 == num_levels() ? kInfinity : expand((j + 1) * delta_);
    return {lo, hi};
}

double CompanderQuantizer::quantize(double y) const
{
    return level(bin_index(y));
}

Vector CompanderQuantizer::quantize(const Vector &y) const
{
    return y.unaryExpr([this](double v) { return quantize(v); });
}

double gaussian_one_third_norm(double sigma0)
{
    require_positive(sigma0, "gaussian_one_third_norm: sigma0");
    return 6.0 * std::numbers::sqrt3 * std::numbers::pi * sigma0 * sigma0;
}

double panter_dite_distortion(const GaussianSource &pdf, int bits)
{
    if (bits < 0)
        throw ParameterError("panter_dite_distortion: bits must be >= 0");
    return std::ldexp(1.0, -2 * bits) / 12.0 * gaussian_one_third_norm(pdf.sigma);
}

double lp_bin_center(double a, double b, double p, double sigma0)
{
    require_positive(sigma0, "lp_bin_center: sigma0");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw ParameterError("lp_bin_center: need finite a < b");
    if (!(p >= 1.0) || !std::isfinite(p))
        throw ParameterError("lp_bin_center: p must be finite and >= 1");

    // The derivative of the objective in lambda is, up to a positive factor,
    //   D(lambda) = int_a^lambda (lambda-t)^{p-1} phi - int_lambda^b (t-lambda)^{p-1} phi.
    // Distances are scaled by the bin width and phi by its value at the point
    // nearest the origin, so the integrands stay O(1) in remote bins.
    const double width = b - a;
    const double r = (a > 0.0) ? a : (b < 0.0 ? b : 0.0);
    const double s2 = 2.0 * sigma0 * sigma0;
    auto weight = [&](double t) { return std::exp(-(t * t - r * r) / s2); };
    auto D = [&](double lam) {
        const double left = integrate(
            [&](double t) { return std::pow((lam - t) / width, p - 1.0) * weight(t); }, a, lam,
            1e-13);
        const double right = integrate(
            [&](double t) { return std::pow((t - lam) / width, p - 1.0) * weight(t); }, lam, b,
            1e-13);
        return left - right;
    };

    double lo = a, hi = b;
    if (!(D(lo) < 0.0) || !(D(hi) > 0.0))
        throw NumericalError("lp_bin_center: derivative does not change sign over the bin");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (D(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

std::pair<double, double> truncated_bin(const CompanderQuantizer &cq, int j)
{
    auto [lo, hi] = cq.bin(j);
    const double cap = kGaussianTruncation * cq.sigma0();
    return {std::max(lo, -cap), std::min(hi, cap)};
}

int level_bin(double level, const CompanderQuantizer &cq)
{
    const int j = cq.bin_index(level);
    if (std::abs(cq.level(j) - level) > 1e-9 * (1.0 + std::abs(level)))
        throw ParameterError("qp_map: value is not a level of the quantizer");
    return j;
}

double qp_map_bin(int j, double level, double p, const CompanderQuantizer &cq)
{
    if (p == 2.0)
        return level;
    const auto [lo, hi] = truncated_bin(cq, j);
    if (std::isinf(p))
        return 0.5 * (lo + hi);
    return lp_bin_center(lo, hi, p, cq.sigma0());
}

} // namespace

double qp_map(double level, double p, const CompanderQuantizer &cq)
{
    if (!(p >= 2.0))
        throw ParameterError("qp_map: p must be >= 2");
    return qp_map_bin(level_bin(level, cq), level, p, cq);
}

double epsilon_p(Eigen::Index m, double delta, double p, double zeta)
{
    if (m < 0)
        throw ParameterError("epsilon_p: m must be >= 0");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw ParameterError("epsilon_p: delta must be finite and >= 0");
    if (!(p >= 1.0))
        throw ParameterError("epsilon_p: p must be >= 1");
    if (!(zeta >= 0.0) || !std::isfinite(zeta))
        throw ParameterError("epsilon_p: zeta must be finite and >= 0");
    if (m == 0)
        return 0.0;
    if (std::isinf(p))
        return 0.5 * delta;
    const double md = static_cast<double>(m);
    return delta / (2.0 * std::pow(p + 1.0, 1.0 / p)) *
           std::pow(md + zeta * (p + 1.0) * std::sqrt(md), 1.0 / p);
}

WeightedEpsilon epsilon_pw_and_weights(const Vector &q, double p, int bits,
                                       const CompanderQuantizer &cq)
{
    if (!(p >= 2.0))
        throw ParameterError("epsilon_pw_and_weights: p must be >= 2");
    if (bits != cq.bits())
        throw ParameterError("epsilon_pw_and_weights: bit depth differs from the quantizer's");
    const Eigen::Index m = q.size();
    WeightedEpsilon out{0.0, Vector(m), Vector(m)};

    // Only 2^B distinct bins exist, so Q_p is cached per bin.
    std::map<int, double> cache;
    const double exponent = std::isinf(p) ? 1.0 : (p - 2.0) / p;
    for (Eigen::Index i = 0; i < m; ++i) {
        const int j = level_bin(q[i], cq);
        auto it = cache.find(j);
        if (it == cache.end())
            it = cache.emplace(j, qp_map_bin(j, q[i], p, cq)).first;
        out.qp[i] = it->second;
        out.weights[i] = exponent == 0.0 ? 1.0 : std::pow(cq.compress_derivative(it->second), exponent);
    }

    if (m == 0)
        return out;
    if (std::isinf(p)) {
        out.epsilon = 0.5 * cq.delta();
        return out;
    }
    const double log_eps_p = std::log(static_cast<double>(m)) - (bits * p + p) * std::numbers::ln2 -
                             std::log(p + 1.0) + std::log(gaussian_one_third_norm(cq.sigma0()));
    out.epsilon = std::exp(log_eps_p / p);
    return out;
}

double weight_conditioning(const Vector &w, double p)
{
    if (w.size() == 0)
        throw ParameterError("weight_conditioning: empty weight vector");
    if (!(p >= 1.0))
        throw ParameterError("weight_conditioning: p must be >= 1");
    const double inf_norm = w.cwiseAbs().maxCoeff();
    if (std::isinf(p))
        return 1.0;
    const double m = static_cast<double>(w.size());
    const double lp = std::pow(w.cwiseAbs().array().pow(p).sum(), 1.0 / p);
    return inf_norm / (std::pow(m, -1.0 / p) * lp);
}

// ------------------------------------------------------------ tagged union

Vector apply_quantizer(const QuantizerSpec &spec, const Vector &y)
{
    struct Visitor
    {
        const Vector &y;
        Vector operator()(const UniformQuantizer &u) const { return u.quantize(y); }
        Vector operator()(const FiniteRangeQuantizer &f) const { return f.quantize(y).q; }
        Vector operator()(const SignQuantizer &) const { return quantize_sign(y); }
        Vector operator()(const LloydMaxQuantizer &l) const { return l.quantize(y); }
        Vector operator()(const CompanderQuantizer &c) const { return c.quantize(y); }
        Vector operator()(const SDCodebook &cb) const
        {
            return y.unaryExpr([&cb](double v) { return cb.quantize(v); });
        }
    };
    return std::visit(Visitor{y}, spec);
}

} // namespace qcs
