#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace modsphere {

struct ModelFit {
    double a = 0;
    double b = 0;
    double c = 0;
    double rss = 0;  // residual sum of squares at the solution
    int iterations = 0;
};

namespace detail {

/// Solve M x = r for 3x3 M by Gaussian elimination with partial pivoting.
/// Returns false when the system is numerically singular.
inline bool solve3(std::array<std::array<double, 3>, 3> m,
                   std::array<double, 3> r, std::array<double, 3>& x) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int i = col + 1; i < 3; ++i)
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
        if (std::abs(m[piv][col]) < 1e-300) return false;
        std::swap(m[piv], m[col]);
        std::swap(r[piv], r[col]);
        for (int i = col + 1; i < 3; ++i) {
            const double f = m[i][col] / m[col][col];
            for (int j = col; j < 3; ++j) m[i][j] -= f * m[col][j];
            r[i] -= f * r[col];
        }
    }
    for (int i = 2; i >= 0; --i) {
        double s = r[i];
        for (int j = i + 1; j < 3; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }
    return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

}  // namespace detail

/**
 * Least squares for the model y = a - b/(x^2 + c) by Levenberg-Marquardt.
 * Requires at least 4 samples and keeps x^2 + c away from zero on the
 * sample set; a rank-deficient normal system raises SingularFit.
 */
inline ModelFit fit_shifted_inverse_square(
    const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 4)
        throw SingularFit("a 3-parameter fit needs at least 4 samples");
    double xmax = samples[0].first, ymax = samples[0].second;
    double ymin = samples[0].second, x2min = samples[0].first * samples[0].first;
    for (const auto& [x, y] : samples) {
        if (x > xmax) {
            xmax = x;
            ymax = y;
        }
        ymin = std::min(ymin, y);
        x2min = std::min(x2min, x * x);
    }
    double a = ymax + 0.125 * (ymax - ymin);
    double c = 1.0;
    double b = (a - samples[0].second) *
               (samples[0].first * samples[0].first + c);

    const auto rss_at = [&samples](double pa, double pb, double pc) {
        double s = 0;
        for (const auto& [x, y] : samples) {
            const double r = pa - pb / (x * x + pc) - y;
            s += r * r;
        }
        return s;
    };

    double rss = rss_at(a, b, c);
    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    for (; iter < 400 && !converged; ++iter) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (const auto& [x, y] : samples) {
            const double d = x * x + c;
            const double r = a - b / d - y;
            const std::array<double, 3> row{1.0, -1.0 / d, b / (d * d)};
            for (int i = 0; i < 3; ++i) {
                jtr[i] += row[i] * r;
                for (int j = 0; j < 3; ++j) jtj[i][j] += row[i] * row[j];
            }
        }
        bool stepped = false;
        for (int tries = 0; tries < 40; ++tries) {
            auto damped = jtj;
            for (int i = 0; i < 3; ++i)
                damped[i][i] += lambda * (jtj[i][i] > 0 ? jtj[i][i] : 1.0);
            std::array<double, 3> delta;
            if (!detail::solve3(damped, {-jtr[0], -jtr[1], -jtr[2]}, delta)) {
                lambda *= 10;
                continue;
            }
            const double na = a + delta[0], nb = b + delta[1],
                         nc = c + delta[2];
            if (nc + x2min <= 0 || !std::isfinite(nc)) {
                lambda *= 10;
                continue;
            }
            const double nrss = rss_at(na, nb, nc);
            if (nrss <= rss) {
                const double step =
                    std::abs(delta[0]) + std::abs(delta[1]) + std::abs(delta[2]);
                const double gain = rss - nrss;
                a = na;
                b = nb;
                c = nc;
                rss = nrss;
                lambda = std::max(lambda / 3, 1e-14);
                stepped = true;
                if (step < 1e-13 || gain < 1e-30) converged = true;
                break;
            }
            lambda *= 10;
        }
        if (!stepped) {
            if (lambda > 1e18)
                throw SingularFit("normal equations stayed singular");
            break;  // no productive step left; accept the current point
        }
    }
    return {a, b, c, rss, iter};
}

}  // namespace modsphere
