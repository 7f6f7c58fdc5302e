#pragma once

// Derivative-free minimizers and a bracketing root finder.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include "sta/error.hpp"

namespace sta {

inline constexpr int kMaxIterations = 10000;

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;  // false: iteration cap hit, best-so-far returned
};

/// Golden-section search on [lo, hi]; stops when the bracket is below rel_tol * (1 + |x|).
template <class F>
ScalarMinimum minimize_scalar(F&& f, double lo, double hi, double rel_tol = 1e-8) {
    require(hi > lo, Errc::invalid_argument, "minimize_scalar: empty bracket");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    ScalarMinimum out;
    for (out.iterations = 0; out.iterations < kMaxIterations; ++out.iterations) {
        if (b - a <= rel_tol * (1.0 + std::abs(0.5 * (a + b)))) {
            out.converged = true;
            break;
        }
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    out.x = fc < fd ? c : d;
    out.value = std::min(fc, fd);
    return out;
}

struct PlanarMinimum {
    std::array<double, 2> x{};
    double value = 0.0;
    int iterations = 0;
    bool converged = false;  // false: iteration cap hit, best-so-far returned
};

/// Nelder-Mead on R^2. `f` may return +inf to mark infeasible points.
/// Converges when the simplex diameter falls below rel_tol * (1 + |x_best|)
/// and the value spread below rel_tol * (1 + |f_best|).
template <class F>
PlanarMinimum minimize_2d(F&& f, std::array<double, 2> start, std::array<double, 2> step = {0.1, 0.1},
                          double rel_tol = 1e-8) {
    using Point = std::array<double, 2>;
    std::array<Point, 3> p{start, {start[0] + step[0], start[1]}, {start[0], start[1] + step[1]}};
    std::array<double, 3> fv{f(p[0]), f(p[1]), f(p[2])};

    auto lerp = [](const Point& a, const Point& b, double t) {
        return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
    };

    PlanarMinimum out;
    for (out.iterations = 0; out.iterations < kMaxIterations; ++out.iterations) {
        std::array<std::size_t, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
            if (fv[i] != fv[j]) return fv[i] < fv[j];
            return p[i] < p[j];
        });
        const Point best = p[idx[0]], mid = p[idx[1]], worst = p[idx[2]];
        const double fb = fv[idx[0]], fm = fv[idx[1]], fw = fv[idx[2]];

        double diameter = 0.0;
        for (const auto& q : {mid, worst}) diameter = std::max(diameter, std::hypot(q[0] - best[0], q[1] - best[1]));
        const double scale = 1.0 + std::hypot(best[0], best[1]);
        const bool flat = std::isfinite(fw) && std::abs(fw - fb) <= rel_tol * (1.0 + std::abs(fb));
        if (diameter <= rel_tol * scale && (flat || !std::isfinite(fb))) {
            out.converged = true;
            break;
        }
        if (diameter <= std::numeric_limits<double>::epsilon() * scale) {
            out.converged = true;
            break;
        }

        const Point centroid{0.5 * (best[0] + mid[0]), 0.5 * (best[1] + mid[1])};
        const Point reflected = lerp(centroid, worst, -1.0);
        const double fr = f(reflected);
        Point replacement = reflected;
        double freplacement = fr;
        bool shrink = false;
        if (fr < fb) {
            const Point expanded = lerp(centroid, worst, -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                replacement = expanded;
                freplacement = fe;
            }
        } else if (!(fr < fm)) {
            const bool outside = fr < fw;
            const Point contracted = outside ? lerp(centroid, worst, -0.5) : lerp(centroid, worst, 0.5);
            const double fc = f(contracted);
            if (fc < (outside ? fr : fw)) {
                replacement = contracted;
                freplacement = fc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (std::size_t k = 1; k < 3; ++k) {
                p[idx[k]] = lerp(best, p[idx[k]], 0.5);
                fv[idx[k]] = f(p[idx[k]]);
            }
        } else {
            p[idx[2]] = replacement;
            fv[idx[2]] = freplacement;
        }
    }
    std::size_t ib = 0;
    for (std::size_t k = 1; k < 3; ++k) {
        if (fv[k] < fv[ib] || (fv[k] == fv[ib] && p[k] < p[ib])) ib = k;
    }
    out.x = p[ib];
    out.value = fv[ib];
    return out;
}

/// Bisection for a sign change of f on [lo, hi]; returns the midpoint of the final bracket.
template <class F>
double find_root(F&& f, double lo, double hi, double rel_tol = 1e-14) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    require(std::signbit(flo) != std::signbit(fhi), Errc::domain, "find_root: bracket has no sign change");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace sta
