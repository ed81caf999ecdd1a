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

#include "qcs/recon.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcs {

void SolverConfig::validate() const
{
    if (max_outer_iters < 1 || inner_max_iters < 1)
        throw ParameterError("SolverConfig: iteration budgets must be >= 1");
    if (!(rel_change_tol > 0.0) || !(inner_tol > 0.0))
        throw ParameterError("SolverConfig: tolerances must be positive");
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw ParameterError("SolverConfig: rho must be finite and > 0");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw ParameterError("SolverConfig: eta must be finite and > 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw ParameterError("SolverConfig: gamma must be finite and >= 0");
}

// ------------------------------------------------------------ l_p projection

namespace {

// t^e for the exponents met here; integer exponents avoid std::pow.
struct PowerFn
{
    double e;
    int ie;

    explicit PowerFn(double exponent)
        : e(exponent), ie(exponent == std::floor(exponent) && exponent <= 64.0
                              ? static_cast<int>(exponent)
                              : -1)
    {
    }

    double operator()(double t) const
    {
        if (ie < 0)
            return std::pow(t, e);
        double r = 1.0, b = t;
        for (int n = ie; n > 0; n >>= 1) {
            if (n & 1)
                r *= b;
            b *= b;
        }
        return r;
    }
};

// Projection of a vector with all |d_i| <= 1 onto the l_p ball of radius
// eps around 0, for 2 < p < inf. Returns the magnitudes t_i.
Vector lp_magnitudes(const Vector &absd, double p, double eps, int max_iters, double tol,
                     double &lambda)
{
    const PowerFn pw_pm1(p - 1.0), pw_pm2(p - 2.0), pw_p(p);
    const double target = std::pow(eps, p);
    const Eigen::Index m = absd.size();
    Vector t(m);

    // Returns S(lambda) = sum t_i^p and fills dS/dlambda.
    auto evaluate = [&](double lam, double &dS) {
        double S = 0.0;
        dS = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double di = absd[i];
            if (di == 0.0) {
                t[i] = 0.0;
                continue;
            }
            // Both bounds exceed the root of the convex increasing
            // h(t) = t + lam p t^{p-1} - d, so Newton descends monotonically.
            double ti = std::min(di, std::pow(di / (lam * p), 1.0 / (p - 1.0)));
            double hp = 1.0;
            for (int it = 0; it < 100; ++it) {
                const double tp1 = pw_pm1(ti);
                const double h = ti + lam * p * tp1 - di;
                hp = 1.0 + lam * p * (p - 1.0) * pw_pm2(ti);
                const double step = h / hp;
                ti -= step;
                if (ti <= 0.0) {
                    ti = 0.0;
                    break;
                }
                if (std::abs(step) <= 1e-16 * ti)
                    break;
            }
            t[i] = ti;
            const double tp1 = pw_pm1(ti);
            S += pw_p(ti);
            dS += p * tp1 * (-p * tp1 / hp);
        }
        return S;
    };

    double dS = 0.0;
    double lam = lambda > 0.0 && std::isfinite(lambda) ? lambda : 1.0;
    double lo = 0.0, hi = kInfinity;
    double S = evaluate(lam, dS);
    // Bracket the root in lambda; S decreases from ||d||_p^p at 0 to 0.
    int guard = 0;
    while (S > target && guard++ < 400) {
        lo = lam;
        lam *= 4.0;
        S = evaluate(lam, dS);
    }
    if (S > target)
        throw NumericalError("project_lp_ball: multiplier bracket not found");
    hi = lam;
    guard = 0;
    while (lo == 0.0 && guard++ < 400) {
        const double trial = hi / 4.0;
        double dtrial;
        const double St = evaluate(trial, dtrial);
        if (St > target) {
            lo = trial;
        } else {
            hi = trial;
        }
    }
    if (lo == 0.0)
        throw NumericalError("project_lp_ball: multiplier bracket not found");

    // Newton on log S against log lambda, safeguarded by bisection in log lambda.
    lam = std::sqrt(lo * hi);
    for (int it = 0; it < max_iters; ++it) {
        S = evaluate(lam, dS);
        if (std::abs(S / target - 1.0) <= tol)
            break;
        if (S > target)
            lo = lam;
        else
            hi = lam;
        double next = -1.0;
        if (S > 0.0 && dS < 0.0) {
            const double slope = dS * lam / S; // d log S / d log lambda
            next = lam * std::exp((std::log(target) - std::log(S)) / slope);
        }
        if (!(next > lo && next < hi))
            next = std::sqrt(lo * hi);
        if (hi / lo - 1.0 < 1e-15)
            break;
        lam = next;
    }
    lambda = lam;
    return t;
}

} // namespace

Vector project_lp_ball(const Vector &a, const Vector &q, double p, double eps, int max_iters,
                       double tol, double *lambda_hint)
{
    if (a.size() != q.size())
        throw ParameterError("project_lp_ball: a and q differ in length");
    if (!(p >= 2.0))
        throw ParameterError("project_lp_ball: p must be >= 2");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ParameterError("project_lp_ball: eps must be finite and >= 0");
    if (max_iters < 1 || !(tol > 0.0))
        throw ParameterError("project_lp_ball: need max_iters >= 1 and tol > 0");

    const Vector d = a - q;
    if (std::isinf(p))
        return q + d.cwiseMax(-eps).cwiseMin(eps);
    if (eps == 0.0)
        return q;
    if (lp_norm(d, p) <= eps)
        return a;
    if (p == 2.0)
        return q + d * (eps / d.norm());

    // Normalize by the largest entry; lambda scales as s^{p-2}.
    const double s = d.cwiseAbs().maxCoeff();
    const double scale_lambda = std::pow(s, p - 2.0);
    double lam = (lambda_hint && *lambda_hint > 0.0) ? *lambda_hint * scale_lambda : 1.0;
    const Vector t = lp_magnitudes(d.cwiseAbs() / s, p, eps / s, max_iters, tol, lam);
    if (lambda_hint)
        *lambda_hint = lam / scale_lambda;
    Vector v(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        v[i] = q[i] + (d[i] < 0.0 ? -s * t[i] : s * t[i]);
    return v;
}

// ------------------------------------------------------- constraint sets

MeasurementConstraint MeasurementConstraint::ball(const Vector &q, double p, double eps)
{
    MeasurementConstraint C;
    C.center = q;
    C.p = p;
    C.eps = eps;
    C.in_ball.assign(static_cast<std::size_t>(q.size()), 1);
    C.lower = Vector::Constant(q.size(), -kInfinity);
    C.upper = Vector::Constant(q.size(), kInfinity);
    return C;
}

void MeasurementConstraint::validate(Eigen::Index m) const
{
    if (center.size() != m || lower.size() != m || upper.size() != m ||
        static_cast<Eigen::Index>(in_ball.size()) != m)
        throw ParameterError("MeasurementConstraint: sizes differ from the number of rows");
    if (!(p >= 2.0))
        throw ParameterError("MeasurementConstraint: p must be >= 2");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ParameterError("MeasurementConstraint: eps must be finite and >= 0");
    require_finite(center, "MeasurementConstraint center");
    for (Eigen::Index i = 0; i < m; ++i)
        if (!in_ball[i] && !(lower[i] <= upper[i]))
            throw ParameterError("MeasurementConstraint: empty interval");
}

namespace {

struct ConstraintEval
{
    double ball_residual = 0.0;
    double half_space_violation = 0.0;
};

class ConstraintSet
{
public:
    ConstraintSet(const MeasurementConstraint &C, double scale)
        : p_(C.p), eps_(C.eps * scale)
    {
        for (Eigen::Index i = 0; i < C.center.size(); ++i) {
            if (C.in_ball[i])
                ball_.push_back(i);
            else
                free_.push_back(i);
        }
        center_.resize(static_cast<Eigen::Index>(ball_.size()));
        for (std::size_t j = 0; j < ball_.size(); ++j)
            center_[static_cast<Eigen::Index>(j)] = C.center[ball_[j]] * scale;
        lower_ = C.lower * scale;
        upper_ = C.upper * scale;
    }

    Vector project(const Vector &v, int max_iters, double tol)
    {
        Vector out = v;
        if (!ball_.empty()) {
            Vector sub(center_.size());
            for (std::size_t j = 0; j < ball_.size(); ++j)
                sub[static_cast<Eigen::Index>(j)] = v[ball_[j]];
            const Vector proj = project_lp_ball(sub, center_, p_, eps_, max_iters, tol, &lambda_);
            for (std::size_t j = 0; j < ball_.size(); ++j)
                out[ball_[j]] = proj[static_cast<Eigen::Index>(j)];
        }
        for (auto i : free_)
            out[i] = std::clamp(v[i], lower_[i], upper_[i]);
        return out;
    }

    ConstraintEval evaluate(const Vector &v) const
    {
        ConstraintEval e;
        if (!ball_.empty()) {
            Vector r(center_.size());
            for (std::size_t j = 0; j < ball_.size(); ++j)
                r[static_cast<Eigen::Index>(j)] = v[ball_[j]] - center_[static_cast<Eigen::Index>(j)];
            e.ball_residual = lp_norm(r, p_);
        }
        for (auto i : free_)
            e.half_space_violation = std::max(
                e.half_space_violation, std::max(lower_[i] - v[i], v[i] - upper_[i]));
        return e;
    }

    double eps() const { return eps_; }
    double center_norm() const { return ball_.empty() ? 0.0 : lp_norm(center_, p_); }
    double bound_scale() const
    {
        double s = 0.0;
        for (auto i : free_) {
            if (std::isfinite(lower_[i]))
                s = std::max(s, std::abs(lower_[i]));
            if (std::isfinite(upper_[i]))
                s = std::max(s, std::abs(upper_[i]));
        }
        return s;
    }

private:
    double p_;
    double eps_;
    std::vector<Eigen::Index> ball_;
    std::vector<Eigen::Index> free_;
    Vector center_;
    Vector lower_, upper_;
    double lambda_ = 0.0;
};

double estimate_operator_norm(const Matrix &A)
{
    Vector v(A.cols());
    for (Eigen::Index j = 0; j < v.size(); ++j)
        v[j] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(j));
    double prev = 0.0, est = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double nv = v.norm();
        if (nv == 0.0)
            return 0.0;
        v /= nv;
        const Vector w = A.transpose() * (A * v);
        est = std::sqrt(w.norm());
        if (it > 5 && std::abs(est - prev) <= 1e-6 * est)
            break;
        prev = est;
        v = w;
    }
    return est;
}

// Projection onto the graph {(s, v) : v = B s}.
class GraphProjector
{
public:
    explicit GraphProjector(const Matrix &B) : B_(B), wide_(B.rows() < B.cols())
    {
        if (wide_) {
            Matrix G = B * B.transpose();
            G.diagonal().array() += 1.0;
            llt_.compute(G);
        } else {
            Matrix G = B.transpose() * B;
            G.diagonal().array() += 1.0;
            llt_.compute(G);
        }
        if (llt_.info() != Eigen::Success)
            throw NumericalError("graph projection: factorization failed");
    }

    void project(const Vector &a, const Vector &b, Vector &s, Vector &v) const
    {
        if (wide_) {
            const Vector w = llt_.solve(b - B_ * a);
            s = a + B_.transpose() * w;
            v = b - w;
        } else {
            s = llt_.solve(a + B_.transpose() * b);
            v = B_ * s;
        }
    }

private:
    const Matrix &B_;
    bool wide_;
    Eigen::LLT<Matrix> llt_;
};

constexpr double kAutoGammaFactor = 0.01;

Vector soft_threshold(const Vector &r, double gamma)
{
    return r.unaryExpr([gamma](double x) {
        return x > gamma ? x - gamma : (x < -gamma ? x + gamma : 0.0);
    });
}

} // namespace

SolverResult l1_constrained(const Matrix &A, const MeasurementConstraint &C, const SolverConfig &cfg)
{
    cfg.validate();
    const Eigen::Index m = A.rows(), n = A.cols();
    if (m < 1 || n < 1)
        throw ParameterError("l1_constrained: empty sensing matrix");
    require_finite(A, "l1_constrained");
    C.validate(m);

    SolverResult res;
    res.x_hat = Vector::Zero(n);

    // Zero is the l1-minimal point whenever it is feasible.
    {
        ConstraintSet unit(C, 1.0);
        const ConstraintEval e0 = unit.evaluate(Vector::Zero(m));
        if (e0.ball_residual <= C.eps && e0.half_space_violation <= 0.0) {
            res.converged = true;
            res.residual = e0.ball_residual;
            return res;
        }
    }

    const double norm = estimate_operator_norm(A);
    if (norm == 0.0) {
        // Only z = 0 is reachable and it is infeasible.
        ConstraintSet unit(C, 1.0);
        const ConstraintEval e0 = unit.evaluate(Vector::Zero(m));
        res.residual = e0.ball_residual;
        res.half_space_violation = e0.half_space_violation;
        return res;
    }
    const double scale = std::sqrt(cfg.rho) / norm;
    const Matrix B = A * scale;
    ConstraintSet set(C, scale);
    const GraphProjector graph(B);

    double gamma = cfg.gamma;
    if (gamma == 0.0) {
        // Scale of the l1 dual: correlation of the columns with the nearest feasible v to 0.
        const Vector v0 = set.project(Vector::Zero(m), cfg.inner_max_iters, cfg.inner_tol);
        gamma = kAutoGammaFactor * std::max((B.transpose() * v0).cwiseAbs().maxCoeff(), 1e-300);
    }

    const double ball_slack =
        set.eps() > 0.0 ? 1e-4 * set.eps() : 1e-9 * (1.0 + set.center_norm());
    const double hs_slack = 1e-7 * (1.0 + set.bound_scale());

    Vector zs = Vector::Zero(n), zv = Vector::Zero(m);
    Vector xs(n), xv(m), ys = Vector::Zero(n), yv(m), ys_prev = Vector::Zero(n);
    ConstraintEval eval;
    int it = 0;
    for (it = 1; it <= cfg.max_outer_iters; ++it) {
        graph.project(zs, zv, xs, xv);
        ys = soft_threshold(2.0 * xs - zs, gamma);
        yv = set.project(2.0 * xv - zv, cfg.inner_max_iters, cfg.inner_tol);
        zs += ys - xs;
        zv += yv - xv;

        const double change = (ys - ys_prev).norm() / std::max(ys.norm(), 1e-300);
        ys_prev = ys;
        if (change < cfg.rel_change_tol) {
            eval = set.evaluate(B * ys);
            if (eval.ball_residual <= set.eps() + ball_slack &&
                eval.half_space_violation <= hs_slack) {
                res.converged = true;
                break;
            }
        }
    }
    res.iterations = std::min(it, cfg.max_outer_iters);
    res.x_hat = ys;
    res.objective = ys.lpNorm<1>();
    ConstraintSet unit(C, 1.0);
    const ConstraintEval fin = unit.evaluate(A * ys);
    res.residual = fin.ball_residual;
    res.half_space_violation = std::max(0.0, fin.half_space_violation);
    return res;
}

SolverResult bpdq(const Matrix &A, const Vector &q, double p, double eps, const SolverConfig &cfg)
{
    if (A.rows() != q.size())
        throw ParameterError("bpdq: A.rows() != q.size()");
    if (!(p >= 2.0))
        throw ParameterError("bpdq: p must lie in [2, inf]");
    if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ParameterError("bpdq: eps must be finite and >= 0");
    return l1_constrained(A, MeasurementConstraint::ball(q, p, eps), cfg);
}

SolverResult bpdn(const Matrix &A, const Vector &q, double eps, const SolverConfig &cfg)
{
    return bpdq(A, q, 2.0, eps, cfg);
}

SolverResult gbpdn(const Matrix &A, const Vector &q, double p, const CompanderQuantizer &cq,
                   int bits, const SolverConfig &cfg)
{
    if (A.rows() != q.size())
        throw ParameterError("gbpdn: A.rows() != q.size()");
    const WeightedEpsilon we = epsilon_pw_and_weights(q, p, bits, cq);
    const Matrix Aw = we.weights.asDiagonal() * A;
    const Vector qw = we.weights.cwiseProduct(we.qp);
    return bpdq(Aw, qw, p, we.epsilon, cfg);
}

SolverResult reconstruct_saturation(const Matrix &A, const Vector &q, const Eigen::VectorXi &mask,
                                    SaturationMode mode, const FiniteRangeQuantizer &fr,
                                    const SolverConfig &cfg)
{
    const Eigen::Index m = A.rows();
    if (q.size() != m || mask.size() != m)
        throw ParameterError("reconstruct_saturation: A, q and mask disagree in size");
    for (Eigen::Index i = 0; i < m; ++i)
        if (mask[i] < -1 || mask[i] > 1)
            throw ParameterError("reconstruct_saturation: mask entries must be -1, 0 or +1");
    const double delta = fr.delta(), S = fr.saturation();

    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < m; ++i)
        if (mask[i] == 0)
            rows.push_back(i);
    const auto used = static_cast<Eigen::Index>(rows.size());

    switch (mode) {
    case SaturationMode::Ignore:
        return bpdn(A, q, epsilon_p(m, delta, 2.0, 2.0), cfg);
    case SaturationMode::Reject: {
        if (used == 0)
            throw ParameterError("reconstruct_saturation: no usable measurements");
        Matrix Ar(used, A.cols());
        Vector qr(used);
        for (Eigen::Index j = 0; j < used; ++j) {
            Ar.row(j) = A.row(rows[j]);
            qr[j] = q[rows[j]];
        }
        return bpdn(Ar, qr, epsilon_p(used, delta, 2.0, 2.0), cfg);
    }
    case SaturationMode::Consistent: {
        MeasurementConstraint C = MeasurementConstraint::ball(q, 2.0, epsilon_p(used, delta, 2.0, 2.0));
        for (Eigen::Index i = 0; i < m; ++i) {
            if (mask[i] == 1) {
                C.in_ball[i] = 0;
                C.lower[i] = S - delta;
            } else if (mask[i] == -1) {
                C.in_ball[i] = 0;
                C.upper[i] = -S + delta;
            }
        }
        return l1_constrained(A, C, cfg);
    }
    }
    throw ParameterError("reconstruct_saturation: unknown mode");
}

// ------------------------------------------------------------------ 1-bit

Support top_k_support(const Vector &z, Eigen::Index k)
{
    if (k < 0 || k > z.size())
        throw ParameterError("top_k_support: need 0 <= k <= n");
    Support idx(static_cast<std::size_t>(z.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&z](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(z[a]), mb = std::abs(z[b]);
        return ma > mb || (ma == mb && a < b);
    });
    idx.resize(static_cast<std::size_t>(k));
    std::sort(idx.begin(), idx.end());
    return idx;
}

Vector hard_threshold(const Vector &z, Eigen::Index k)
{
    Vector out = Vector::Zero(z.size());
    for (auto i : top_k_support(z, k))
        out[i] = z[i];
    return out;
}

double one_sided_penalty(const Vector &Az, const Vector &q, int norm)
{
    if (Az.size() != q.size())
        throw ParameterError("one_sided_penalty: length mismatch");
    if (norm != 1 && norm != 2)
        throw ParameterError("one_sided_penalty: norm must be 1 or 2");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        const double neg = std::min(q[i] * Az[i], 0.0);
        acc += norm == 1 ? -neg : neg * neg;
    }
    return norm == 1 ? acc : std::sqrt(acc);
}

namespace {

double sign_mismatch(const Vector &Az, const Vector &q)
{
    Eigen::Index bad = 0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        bad += ((Az[i] >= 0.0 ? 1.0 : -1.0) != q[i]);
    return static_cast<double>(bad) / static_cast<double>(q.size());
}

} // namespace

SolverResult biht(const Matrix &A, const Vector &q, Eigen::Index k, const SolverConfig &cfg)
{
    cfg.validate();
    const Eigen::Index m = A.rows(), n = A.cols();
    if (q.size() != m || m < 1)
        throw ParameterError("biht: A.rows() != q.size()");
    if (k < 1 || k > n)
        throw ParameterError("biht: need 1 <= k <= n");
    for (Eigen::Index i = 0; i < m; ++i)
        if (q[i] != 1.0 && q[i] != -1.0)
            throw ParameterError("biht: measurements must be +-1");
    require_finite(A, "biht");

    const double step = cfg.eta / (2.0 * static_cast<double>(m));
    Vector z = Vector::Zero(n);
    Vector Az = Vector::Zero(m);
    Vector best = z;
    double best_pen = kInfinity, best_dh = sign_mismatch(Az, q);

    SolverResult res;
    int it = 0;
    for (it = 1; it <= cfg.max_outer_iters; ++it) {
        const Vector sgn = quantize_sign(Az);
        z = hard_threshold(z + step * (A.transpose() * (q - sgn)), k);
        Az = A * z;
        const double dh = sign_mismatch(Az, q);
        const double nz = z.norm();
        const double pen = nz > 0.0 ? one_sided_penalty(Az, q, 1) / nz : kInfinity;
        if (pen < best_pen || (best_pen == kInfinity && nz > 0.0)) {
            best_pen = pen;
            best = z;
            best_dh = dh;
        }
        if (dh == 0.0) {
            res.converged = true;
            break;
        }
    }
    res.iterations = std::min(it, cfg.max_outer_iters);
    const double nb = best.norm();
    res.x_hat = nb > 0.0 ? Vector(best / nb) : best;
    res.objective = res.x_hat.lpNorm<1>();
    res.residual = best_dh;
    return res;
}

// ------------------------------------------------------------ consistency

PocsResult consistent_pocs(const Matrix &A, const Vector &q, const UniformQuantizer &uq,
                           const SolverConfig &cfg)
{
    cfg.validate();
    const Eigen::Index m = A.rows();
    if (q.size() != m)
        throw ParameterError("consistent_pocs: A.rows() != q.size()");
    require_finite(A, "consistent_pocs");
    require_finite(q, "consistent_pocs");
    const double h = 0.5 * uq.delta();
    constexpr double kTol = 1e-9;

    const Matrix At = A.transpose(); // contiguous rows
    const Vector row_norm2 = At.colwise().squaredNorm().transpose();

    PocsResult out;
    out.x = least_squares(A, q);
    auto violation = [&](const Vector &x) {
        const Vector r = A * x - q;
        return std::max(0.0, r.cwiseAbs().maxCoeff() - h);
    };
    out.max_violation = violation(out.x);
    while (out.max_violation > kTol && out.sweeps < cfg.max_outer_iters) {
        for (Eigen::Index i = 0; i < m; ++i) {
            if (row_norm2[i] == 0.0)
                continue;
            const double r = At.col(i).dot(out.x) - q[i];
            if (r > h)
                out.x -= At.col(i) * ((r - h) / row_norm2[i]);
            else if (r < -h)
                out.x -= At.col(i) * ((r + h) / row_norm2[i]);
        }
        ++out.sweeps;
        out.max_violation = violation(out.x);
    }
    out.consistent = out.max_violation <= kTol;
    return out;
}

// ------------------------------------------------------------ Sigma-Delta

Vector sobolev_decode(const Matrix &A, const Vector &q, const Support &T, int order)
{
    if (A.rows() != q.size())
        throw ParameterError("sobolev_decode: A.rows() != q.size()");
    if (T.empty())
        return Vector::Zero(A.cols());
    const Matrix AT = restrict_columns(A, T);
    const Matrix F = sobolev_dual(AT.transpose(), order);
    return scatter(A.cols(), T, F * q);
}

TwoStageResult two_stage_sd_recover(const Matrix &A, const Vector &q, Eigen::Index k, int order,
                                    const SDCodebook &cb, const SolverConfig &cfg)
{
    const Eigen::Index m = A.rows();
    if (q.size() != m)
        throw ParameterError("two_stage_sd_recover: A.rows() != q.size()");
    if (k < 1 || k > std::min(A.cols(), m))
        throw ParameterError("two_stage_sd_recover: need 1 <= k <= min(m, n)");
    if (order < 0)
        throw ParameterError("two_stage_sd_recover: order must be >= 0");
    const double eps = 0.5 * cb.delta() * std::ldexp(1.0, order) * std::sqrt(static_cast<double>(m));
    TwoStageResult out;
    out.result = bpdn(A, q, eps, cfg);
    out.stage1 = out.result.x_hat;
    out.support = top_k_support(out.stage1, k);
    out.result.x_hat = sobolev_decode(A, q, out.support, order);
    out.result.objective = out.result.x_hat.lpNorm<1>();
    return out;
}

Vector oracle_assisted(const Matrix &A, const Vector &q, const Support &T)
{
    if (A.rows() != q.size())
        throw ParameterError("oracle_assisted: A.rows() != q.size()");
    if (static_cast<Eigen::Index>(T.size()) > A.rows())
        throw ParameterError("oracle_assisted: support larger than the number of measurements");
    if (T.empty())
        return Vector::Zero(A.cols());
    const Matrix AT = restrict_columns(A, T);
    const Svd d = svd(AT);
    const auto t = static_cast<Eigen::Index>(T.size());
    if (!(d.S[t - 1] > kRankCutoff * d.S[0]))
        throw NumericalError("oracle_assisted: restricted matrix is rank deficient");
    const Vector xT = d.V * (d.U.transpose() * q).cwiseQuotient(d.S);
    return scatter(A.cols(), T, xT);
}

} // namespace qcs
