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

#include "qcs/numerics.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numbers>

namespace qcs {

void require_finite(const Matrix &M, const char *what)
{
    if (!M.allFinite())
        throw ParameterError(std::string(what) + ": non-finite entry");
}

void require_finite(const Vector &v, const char *what)
{
    if (!v.allFinite())
        throw ParameterError(std::string(what) + ": non-finite entry");
}

// ---------------------------------------------------------------- RngStream

namespace {

std::uint64_t splitmix64(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed)
{
    std::uint64_t sm = seed;
    for (auto &s : s_)
        s = splitmix64(sm);
}

std::uint64_t RngStream::next_u64()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 1 - uniform() lies in (0, 1], so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t RngStream::below(std::uint64_t bound)
{
    if (bound == 0)
        throw ParameterError("RngStream::below: bound must be >= 1");
    // Rejection on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

RngStream RngStream::child(std::uint64_t index) const
{
    std::uint64_t sm = seed_ ^ 0x6a09e667f3bcc909ULL;
    const std::uint64_t a = splitmix64(sm);
    sm = index + 0xbb67ae8584caa73bULL;
    const std::uint64_t b = splitmix64(sm);
    return RngStream(a ^ rotl(b, 23));
}

Matrix gaussian_matrix(Eigen::Index m, Eigen::Index n, double sigma, RngStream &rng)
{
    if (m < 1 || n < 1)
        throw ParameterError("gaussian_matrix: dimensions must be >= 1");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw ParameterError("gaussian_matrix: sigma must be finite and >= 0");
    Matrix A(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            A(i, j) = sigma * rng.normal();
    if (sigma == 0.0)
        A.setZero(); // avoids -0.0 entries
    return A;
}

Vector gaussian_vector(Eigen::Index n, double sigma, RngStream &rng)
{
    if (n < 0)
        throw ParameterError("gaussian_vector: negative length");
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = sigma * rng.normal();
    return v;
}

// ---------------------------------------------------------------- SVD family

Svd svd(const Matrix &M)
{
    require_finite(M, "svd");
    if (M.size() == 0)
        return {Matrix(M.rows(), 0), Vector(0), Matrix(M.cols(), 0)};
    Eigen::BDCSVD<Matrix> dec(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw NumericalError("svd: decomposition did not converge");
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Vector singular_values(const Matrix &M)
{
    require_finite(M, "singular_values");
    if (M.size() == 0)
        return Vector(0);
    Eigen::BDCSVD<Matrix> dec(M);
    if (dec.info() != Eigen::Success)
        throw NumericalError("singular_values: decomposition did not converge");
    return dec.singularValues();
}

double operator_norm(const Matrix &M)
{
    const Vector s = singular_values(M);
    return s.size() ? s[0] : 0.0;
}

Matrix pseudo_inverse(const Matrix &M)
{
    const Svd d = svd(M);
    Matrix P = Matrix::Zero(M.cols(), M.rows());
    if (d.S.size() == 0 || d.S[0] == 0.0)
        return P;
    const double cut = kRankCutoff * d.S[0];
    for (Eigen::Index j = 0; j < d.S.size(); ++j) {
        if (d.S[j] <= cut)
            break;
        P.noalias() += (d.V.col(j) / d.S[j]) * d.U.col(j).transpose();
    }
    return P;
}

Vector least_squares(const Matrix &A, const Vector &b)
{
    if (A.rows() != b.size())
        throw ParameterError("least_squares: A.rows() != b.size()");
    require_finite(b, "least_squares");
    const Svd d = svd(A);
    Vector x = Vector::Zero(A.cols());
    if (d.S.size() == 0 || d.S[0] == 0.0)
        return x;
    const double cut = kRankCutoff * d.S[0];
    const Vector Utb = d.U.transpose() * b;
    for (Eigen::Index j = 0; j < d.S.size(); ++j) {
        if (d.S[j] <= cut)
            break;
        x += d.V.col(j) * (Utb[j] / d.S[j]);
    }
    return x;
}

double lp_norm(const Vector &v, double p)
{
    if (!(p >= 1.0))
        throw ParameterError("lp_norm: p must be >= 1");
    if (v.size() == 0)
        return 0.0;
    const double top = v.cwiseAbs().maxCoeff();
    if (std::isinf(p) || top == 0.0)
        return top;
    if (p == 2.0)
        return v.norm();
    if (p == 1.0)
        return v.cwiseAbs().sum();
    // Scaling by the largest entry keeps large p from under- or overflowing.
    return top * std::pow((v.cwiseAbs() / top).array().pow(p).sum(), 1.0 / p);
}

// ---------------------------------------------------------------- quadrature

namespace {

struct SimpsonPanel
{
    double a, b, fa, fm, fb, whole;
};

double simpson_recurse(const std::function<double(double)> &f, const SimpsonPanel &p, double tol,
                       int depth)
{
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_recurse(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
           simpson_recurse(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)> &f, double a, double b, double tol)
{
    if (!(tol > 0.0))
        throw ParameterError("integrate: tolerance must be positive");
    if (a == b)
        return 0.0;
    if (a > b)
        return -integrate(f, b, a, tol);
    // A fixed pre-split keeps narrow peaks from being skipped by the first panel.
    constexpr int kPanels = 16;
    const double h = (b - a) / kPanels;
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == kPanels) ? b : lo + h;
        const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += simpson_recurse(f, {lo, hi, flo, fmid, fhi, whole}, tol / kPanels, 50);
    }
    return total;
}

// ---------------------------------------------------------------- normal law

double normal_pdf(double x)
{
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_sf(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_quantile(double u)
{
    if (!(u > 0.0 && u < 1.0)) {
        if (u == 0.0)
            return -std::numeric_limits<double>::infinity();
        if (u == 1.0)
            return std::numeric_limits<double>::infinity();
        throw ParameterError("normal_quantile: argument outside [0, 1]");
    }
    // Acklam's rational approximation, then Halley steps on the tail
    // probability of the nearer side.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    const double lower = u < 0.5 ? u : 1.0 - u;
    double x;
    if (lower < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(lower));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = lower - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    // x now approximates the quantile of `lower` (x <= 0).
    for (int it = 0; it < 3; ++it) {
        const double e = normal_cdf(x) - lower;
        const double g = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x = x - g / (1.0 + 0.5 * x * g);
    }
    return u < 0.5 ? x : -x;
}

} // namespace qcs
