// Copyright 2026 The sfqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Weighted nonlinear least squares (bounded Levenberg-Marquardt) and the
// decay models used by the benchmarking protocols.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "sfqlab/errors.hpp"

namespace sfqlab {

struct DataPoint {
    double x = 0.0;
    double y = 0.0;
    double weight = 1.0;  // inverse variance
};

struct LeastSquaresOptions {
    int max_iterations = 200;
    double relative_step = 1e-10;
    double relative_cost = 1.49012e-8;  // MINPACK ftol
};

struct LeastSquaresResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double chi2 = 0.0;
    int iterations = 0;
    bool converged = false;

    double stderr_of(Eigen::Index k) const {
        const double v = covariance(k, k);
        return v > 0 ? std::sqrt(v) : 0.0;
    }
};

/// Model concept: `double value(double x, const Eigen::VectorXd &p) const`
/// and `void gradient(double x, const Eigen::VectorXd &p, Eigen::VectorXd &g) const`.
template <typename Model>
LeastSquaresResult least_squares(const Model &model, const std::vector<DataPoint> &data, Eigen::VectorXd p,
                                 const Eigen::VectorXd &lower, const Eigen::VectorXd &upper,
                                 const LeastSquaresOptions &opts = {}) {
    const auto n = static_cast<Eigen::Index>(data.size());
    const auto k = p.size();
    auto project = [&](Eigen::VectorXd v) {
        for (Eigen::Index i = 0; i < k; ++i) v(i) = std::clamp(v(i), lower(i), upper(i));
        return v;
    };
    auto residuals = [&](const Eigen::VectorXd &q) {
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto &d = data[static_cast<std::size_t>(i)];
            r(i) = std::sqrt(d.weight) * (d.y - model.value(d.x, q));
        }
        return r;
    };
    auto jacobian = [&](const Eigen::VectorXd &q) {
        Eigen::MatrixXd j(n, k);
        Eigen::VectorXd g(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto &d = data[static_cast<std::size_t>(i)];
            model.gradient(d.x, q, g);
            j.row(i) = std::sqrt(d.weight) * g.transpose();
        }
        return j;
    };

    p = project(p);
    Eigen::VectorXd r = residuals(p);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    LeastSquaresResult out;

    for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
        if (!std::isfinite(cost)) break;
        if (cost == 0.0) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd j = jacobian(p);
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        bool accepted = false;
        bool stalled = false;
        Eigen::VectorXd next = p;
        while (lambda < 1e16) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index i = 0; i < k; ++i) a(i, i) += lambda * std::max(jtj(i, i), 1e-12);
            next = project(p + a.ldlt().solve(g));
            const Eigen::VectorXd r_next = residuals(next);
            const double c_next = r_next.squaredNorm();
            if (std::isfinite(c_next) && c_next <= cost) {
                accepted = true;
                // flat directions (e.g. A and B once p sits on its bound) would
                // otherwise be walked forever at constant cost
                stalled = cost - c_next <= opts.relative_cost * cost;
                r = r_next;
                cost = c_next;
                lambda = std::max(lambda / 10.0, 1e-12);
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No step reduces the cost: p is a (bounded) local minimum.
            out.converged = true;
            break;
        }
        const double step = (next - p).norm();
        p = next;
        if (stalled || step <= opts.relative_step * (p.norm() + opts.relative_step)) {
            out.converged = true;
            ++out.iterations;
            break;
        }
    }

    out.params = p;
    out.chi2 = cost;
    const Eigen::MatrixXd j = jacobian(p);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const double dof = static_cast<double>(std::max<Eigen::Index>(n - k, 1));
    const double scale = n > k ? cost / dof : 1.0;
    out.covariance = jtj.completeOrthogonalDecomposition().pseudoInverse() * scale;
    return out;
}

// ---------------------------------------------------------------------------
// Decay models

enum class DecayForm {
    rb,      ///< A p^m + B
    purity,  ///< A u^(m-1) + B
};

struct ExponentialDecayModel {
    double shift = 0.0;  // exponent is m - shift

    double value(double m, const Eigen::VectorXd &q) const { return q(0) * std::pow(q(2), m - shift) + q(1); }
    void gradient(double m, const Eigen::VectorXd &q, Eigen::VectorXd &g) const {
        const double e = m - shift;
        const double pm = std::pow(q(2), e);
        g(0) = pm;
        g(1) = 1.0;
        g(2) = q(2) > 0 ? q(0) * e * pm / q(2) : 0.0;
    }
};

/// Fitted A, B and decay base p with standard errors.
struct DecayFit {
    double amplitude = 0.0;
    double offset = 0.0;
    double decay = 1.0;
    double amplitude_stderr = 0.0;
    double offset_stderr = 0.0;
    double decay_stderr = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
};

inline double tail_mean(const std::vector<DataPoint> &sorted) {
    const std::size_t take = std::max<std::size_t>(1, sorted.size() / 4);
    double s = 0.0;
    for (std::size_t i = sorted.size() - take; i < sorted.size(); ++i) s += sorted[i].y;
    return s / static_cast<double>(take);
}

inline DecayFit fit_decay(std::vector<DataPoint> points, DecayForm form) {
    std::set<double> distinct;
    for (const auto &p : points) distinct.insert(p.x);
    require(distinct.size() >= 3, "fit_decay: needs at least three distinct sequence lengths");
    std::sort(points.begin(), points.end(), [](const auto &a, const auto &b) { return a.x < b.x; });

    const ExponentialDecayModel model{form == DecayForm::purity ? 1.0 : 0.0};
    const double offset = tail_mean(points);
    const double amplitude = points.front().y - offset;

    // log-linear estimate of p from the points that still carry signal
    double decay = 1.0;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int used = 0;
        for (const auto &pt : points) {
            const double v = (pt.y - offset) / amplitude;
            if (!(std::abs(amplitude) > 1e-12) || !(v > 1e-9)) continue;
            const double x = pt.x - model.shift, y = std::log(v);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
            ++used;
        }
        const double denom = used * sxx - sx * sx;
        if (used >= 2 && denom > 0) decay = std::clamp(std::exp((used * sxy - sx * sy) / denom), 1e-6, 1.0);
    }

    Eigen::VectorXd p0(3), lo(3), hi(3);
    p0 << amplitude, offset, decay;
    const double inf = std::numeric_limits<double>::infinity();
    lo << -inf, -inf, 1e-12;
    hi << inf, inf, 1.0;
    const auto res = least_squares(model, points, p0, lo, hi);

    std::vector<double> xs, ys;
    for (const auto &pt : points) xs.push_back(pt.x), ys.push_back(pt.y);
    const std::vector<double> best(res.params.data(), res.params.data() + res.params.size());
    if (!res.converged) throw FitError("fit_decay: did not converge in 200 iterations", best, xs, ys);
    if (!(res.params(2) > 0.0 && res.params(2) <= 1.0))
        throw FitError("fit_decay: decay parameter outside (0, 1]", best, xs, ys);

    DecayFit fit;
    fit.amplitude = res.params(0);
    fit.offset = res.params(1);
    fit.decay = res.params(2);
    fit.amplitude_stderr = res.stderr_of(0);
    fit.offset_stderr = res.stderr_of(1);
    fit.decay_stderr = res.stderr_of(2);
    fit.residual_norm = std::sqrt(res.chi2);
    fit.iterations = res.iterations;
    return fit;
}

// ---------------------------------------------------------------------------
// Leakage rate-equation model: p2(m) = L1/(L1+L2) (1 - (1-L1-L2)^m) + c

struct LeakageModel {
    /// g(s) = (1 - (1-s)^m)/s and dg/ds, with a series near s = 0.
    static void growth(double m, double s, double &g, double &dg) {
        if (m * s < 1e-4) {
            const double c2 = m * (m - 1) / 2, c3 = c2 * (m - 2) / 3, c4 = c3 * (m - 3) / 4;
            g = m - c2 * s + c3 * s * s - c4 * s * s * s;
            dg = -c2 + 2 * c3 * s - 3 * c4 * s * s;
            return;
        }
        const double decay = std::exp(m * std::log1p(-s));
        g = -std::expm1(m * std::log1p(-s)) / s;
        dg = (m * decay / (1 - s) * s - (1 - decay)) / (s * s);
    }

    double value(double m, const Eigen::VectorXd &q) const {
        double g, dg;
        growth(m, q(0) + q(1), g, dg);
        return q(0) * g + q(2);
    }

    void gradient(double m, const Eigen::VectorXd &q, Eigen::VectorXd &out) const {
        double g, dg;
        growth(m, q(0) + q(1), g, dg);
        out(0) = g + q(0) * dg;
        out(1) = q(0) * dg;
        out(2) = 1.0;
    }
};

struct LeakageFit {
    double leakage = 0.0;   // L1 per Clifford
    double seepage = 0.0;   // L2 per Clifford
    double initial = 0.0;   // p2(0)
    double leakage_stderr = 0.0;
    double seepage_stderr = 0.0;
    double initial_stderr = 0.0;
    /// True when the curve carries no resolvable rate; `leakage` is then an
    /// upper bound taken from the curve maximum.
    bool degenerate = false;
};

inline LeakageFit fit_leakage(std::vector<DataPoint> points) {
    std::set<double> distinct;
    for (const auto &p : points) distinct.insert(p.x);
    require(distinct.size() >= 3, "fit_leakage: needs at least three distinct sequence lengths");
    std::sort(points.begin(), points.end(), [](const auto &a, const auto &b) { return a.x < b.x; });

    auto upper_bound = [&] {
        LeakageFit fit;
        fit.degenerate = true;
        const auto it = std::max_element(points.begin(), points.end(),
                                         [](const auto &a, const auto &b) { return a.y < b.y; });
        fit.leakage = std::max(0.0, it->y) / it->x;
        return fit;
    };

    const double y_max = std::max_element(points.begin(), points.end(), [](const auto &a, const auto &b) {
                             return a.y < b.y;
                         })->y;
    if (!(y_max > 0)) return upper_bound();

    // Initial slope from the shortest lengths, saturation from the maximum.
    const auto &a = points[0];
    const auto &b = points[1];
    const double slope = std::max((b.y - a.y) / (b.x - a.x), y_max / points.back().x);
    const double l1 = std::clamp(slope, 1e-9, 0.5);
    const double l2 = std::clamp(l1 / y_max - l1, 1e-9, 0.5);
    const double c0 = std::clamp(a.y - l1 * a.x, -1.0, 1.0);

    Eigen::VectorXd p0(3), lo(3), hi(3);
    p0 << l1, l2, c0;
    lo << 0.0, 0.0, -1.0;
    hi << 0.999, 0.999, 1.0;
    const auto res = least_squares(LeakageModel{}, points, p0, lo, hi);
    if (!res.converged || res.params(0) + res.params(1) < 1e-9 || res.params(0) + res.params(1) >= 1.0)
        return upper_bound();

    LeakageFit fit;
    fit.leakage = res.params(0);
    fit.seepage = res.params(1);
    fit.initial = res.params(2);
    fit.leakage_stderr = res.stderr_of(0);
    fit.seepage_stderr = res.stderr_of(1);
    fit.initial_stderr = res.stderr_of(2);
    return fit;
}

}  // namespace sfqlab
