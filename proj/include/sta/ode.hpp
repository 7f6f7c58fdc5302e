#pragma once

// Fixed-step classical Runge-Kutta integration on a prescribed set of nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "sta/error.hpp"

namespace sta {

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double a, const State<N>& k) {
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
    return out;
}

template <std::size_t N>
bool all_finite(const State<N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// One classical RK4 step. `rhs(t, y)` returns dy/dt.
template <std::size_t N, class Rhs>
State<N> rk4_step(Rhs&& rhs, double t, const State<N>& y, double h) {
    const State<N> k1 = rhs(t, y);
    const State<N> k2 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
    const State<N> k3 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
    const State<N> k4 = rhs(t + h, detail::axpy(y, h, k3));
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// Trajectory at every node, starting from y0 at nodes[0]. One RK4 step per interval.
/// Throws Errc::blow_up when the state stops being finite.
template <std::size_t N, class Rhs>
std::vector<State<N>> ode_solve(Rhs&& rhs, const State<N>& y0, std::span<const double> nodes) {
    require(!nodes.empty(), Errc::invalid_argument, "ode_solve: empty node list");
    require(detail::all_finite(y0), Errc::blow_up, "ode_solve: non-finite initial state");
    std::vector<State<N>> out;
    out.reserve(nodes.size());
    out.push_back(y0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        State<N> next = rk4_step<N>(rhs, nodes[i - 1], out.back(), nodes[i] - nodes[i - 1]);
        if (!detail::all_finite(next)) {
            std::ostringstream msg;
            msg << "ode_solve: state became non-finite at t=" << nodes[i];
            throw Error(Errc::blow_up, msg.str());
        }
        out.push_back(next);
    }
    return out;
}

template <std::size_t N>
struct ConvergedTrajectory {
    std::vector<double> nodes;
    std::vector<State<N>> states;
    double last_change = 0.0;  // max difference between the final two refinements at shared nodes
    int doublings = 0;
    bool converged = false;
};

/// Solves on a uniform grid over [t0, t1], doubling the interval count until two successive
/// solutions differ by less than `tol` (max norm over the coarse nodes).
template <std::size_t N, class Rhs>
ConvergedTrajectory<N> ode_solve_converged(Rhs&& rhs, const State<N>& y0, double t0, double t1,
                                           std::size_t intervals, double tol, int max_doublings = 12) {
    require(intervals >= 1 && t1 > t0, Errc::invalid_argument, "ode_solve_converged: bad interval");
    auto make_nodes = [&](std::size_t m) {
        std::vector<double> nodes(m + 1);
        for (std::size_t i = 0; i <= m; ++i) nodes[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(m);
        nodes.back() = t1;
        return nodes;
    };
    ConvergedTrajectory<N> result;
    result.nodes = make_nodes(intervals);
    result.states = ode_solve<N>(rhs, y0, result.nodes);
    for (int d = 0; d < max_doublings; ++d) {
        intervals *= 2;
        auto nodes = make_nodes(intervals);
        auto states = ode_solve<N>(rhs, y0, nodes);
        double change = 0.0;
        for (std::size_t i = 0; i < result.states.size(); ++i) {
            for (std::size_t c = 0; c < N; ++c) change = std::max(change, std::abs(states[2 * i][c] - result.states[i][c]));
        }
        result.nodes = std::move(nodes);
        result.states = std::move(states);
        result.last_change = change;
        result.doublings = d + 1;
        if (change < tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace sta
