#pragma once

// The Ermakov equation b'' + Omega^2 b = 1 / b^3 (dimensionless), used in both directions:
// forward (omega^2 -> b by integration) and inverse (b -> omega^2 by substitution).
// Also the fictitious classical particle whose Newton equation is the Ermakov equation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <sstream>
#include <vector>

#include "sta/curve.hpp"
#include "sta/error.hpp"
#include "sta/ode.hpp"

namespace sta {

/// Smallest b the forward integrator accepts before declaring a collapse.
inline constexpr double kCollapseThreshold = 1e-9;

inline double omega2_from_curve(double b, double bddot) { return 1.0 / (b * b * b * b) - bddot / b; }

/// d(omega^2)/dt for omega^2 = 1/b^4 - b''/b.
inline double omega2_rate_from_curve(double b, double bdot, double bddot, double bdddot) {
    return -4.0 * bdot / (b * b * b * b * b) - bdddot / b + bddot * bdot / (b * b);
}

/// max |b'' + Omega^2 b - 1/b^3| over all sampled nodes.
inline double ermakov_residual(const ScalingCurve& curve, const FrequencyProfile& profile) {
    require(curve.grid.same_layout(profile.grid), Errc::grid_mismatch,
            "ermakov_residual: curve and profile live on different grids");
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double b = curve.b[i];
        worst = std::max(worst, std::abs(curve.bddot[i] + profile.omega2[i] * b - 1.0 / (b * b * b)));
    }
    return worst;
}

/// omega^2 = 1/b^4 - b''/b at every node. No impulses are added.
inline FrequencyProfile inverse_engineer(const ScalingCurve& curve) {
    curve.check_positive();
    FrequencyProfile out;
    out.grid = curve.grid;
    out.omega2.resize(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) out.omega2[i] = omega2_from_curve(curve.b[i], curve.bddot[i]);
    if (curve.has_third_derivative()) {
        out.omega2_rate.resize(curve.size());
        for (std::size_t i = 0; i < curve.size(); ++i) {
            out.omega2_rate[i] = omega2_rate_from_curve(curve.b[i], curve.bdot[i], curve.bddot[i], curve.bdddot[i]);
        }
    }
    const auto segments = out.grid.segments();
    for (std::size_t k = 0; k < segments.size(); ++k) {
        FrequencyPiece piece{out.grid[segments[k].first], out.grid[segments[k].last()], {}};
        if (curve.analytic && curve.analytic->pieces().size() == segments.size()) {
            auto analytic = curve.analytic;
            piece.omega2 = [analytic, k](double t) {
                const CurvePoint p = analytic->pieces()[k].eval(t);
                return omega2_from_curve(p.b, p.bddot);
            };
        } else {
            piece.omega2 = interpolate_segment(out.grid, k, out.omega2);
        }
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

/// Integrates b'' = 1/b^3 - Omega^2(t) b with RK4 on the profile's grid.
///
/// An impulse of strength D at time t_i keeps b continuous and changes the slope by
/// b'(t_i+) = b'(t_i-) - D b(t_i). Samples at t = 0 hold the post-impulse slope and samples at
/// t_f the pre-impulse slope; `bdot_initial` / `bdot_final` hold the outer values.
inline ScalingCurve forward_solve(const FrequencyProfile& profile, double b0, double bdot0) {
    profile.validate();
    require(b0 > 0.0 && std::isfinite(b0) && std::isfinite(bdot0), Errc::invalid_argument,
            "forward_solve: initial state must be finite with b0 > 0");
    const TimeGrid& grid = profile.grid;
    const auto nodes = grid.nodes();
    const auto segments = grid.segments();
    const double t_f = grid.duration();

    auto kick = [&](double t, State<2>& y) {
        for (const auto& imp : profile.impulses) {
            if (imp.time == t) y[1] -= imp.strength * y[0];
        }
    };

    ScalingCurve out;
    out.grid = grid;
    out.tag = "forward";
    out.b.resize(grid.size());
    out.bdot.resize(grid.size());
    out.bddot.resize(grid.size());
    out.bdot_initial = bdot0;

    State<2> y{b0, bdot0};
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto seg = segments[k];
        kick(nodes[seg.first], y);
        const auto& omega2 = profile.pieces[k].omega2;
        auto rhs = [&omega2](double t, const State<2>& s) -> State<2> {
            if (!(s[0] > kCollapseThreshold)) {
                std::ostringstream msg;
                msg << "forward_solve: b=" << s[0] << " collapsed at t=" << t;
                throw Error(Errc::collapse, msg.str());
            }
            return {s[1], 1.0 / (s[0] * s[0] * s[0]) - omega2(t) * s[0]};
        };
        const auto traj = ode_solve<2>(rhs, y, nodes.subspan(seg.first, seg.count));
        for (std::size_t j = 0; j < seg.count; ++j) {
            const std::size_t i = seg.first + j;
            out.b[i] = traj[j][0];
            out.bdot[i] = traj[j][1];
            out.bddot[i] = 1.0 / (traj[j][0] * traj[j][0] * traj[j][0]) - profile.omega2[i] * traj[j][0];
        }
        y = traj.back();
    }
    out.b0_plus_dot = out.bdot.front();
    out.bf_minus_dot = out.bdot.back();
    kick(t_f, y);
    out.bdot_final = y[1];
    out.check_positive();
    return out;
}

/// The fictitious particle at one instant: position b, velocity b', potential
/// U = (Omega^2 b^2 + 1/b^2) / 2, energy H = b'^2/2 + U, and the excitation above the
/// potential minimum U_min = Omega (reached at b = 1/sqrt(Omega)).
struct ClassicalAnalogyState {
    double b = 1.0;
    double bdot = 0.0;
    double U = 1.0;
    double H_cl = 1.0;
    double E_ex = 0.0;
};

inline ClassicalAnalogyState classical_state(double b, double bdot, double omega2, double t = 0.0) {
    const double omega = real_frequency(omega2, t);
    ClassicalAnalogyState s;
    s.b = b;
    s.bdot = bdot;
    s.U = 0.5 * (omega2 * b * b + 1.0 / (b * b));
    s.H_cl = 0.5 * bdot * bdot + s.U;
    s.E_ex = 0.5 * bdot * bdot + 0.5 * (omega2 * b * b + 1.0 / (b * b) - 2.0 * omega);
    return s;
}

/// Position of the potential minimum for frequency Omega: Omega = 1/b^2.
inline double bottom_position(double omega) { return 1.0 / std::sqrt(omega); }

struct ExcitationTrace {
    std::vector<ClassicalAnalogyState> states;
    std::vector<double> scaled_na;  // E^na = E_ex / 2 in units of hbar*omega0
};

/// Excitation energy of the classical analogue at every node. Requires omega^2 >= 0.
inline ExcitationTrace excitation_energy(const ScalingCurve& curve, const FrequencyProfile& profile) {
    require(curve.grid.same_layout(profile.grid), Errc::grid_mismatch,
            "excitation_energy: curve and profile live on different grids");
    require(profile.impulses.empty(), Errc::non_real_frequency,
            "excitation_energy: Dirac impulses have no real frequency");
    ExcitationTrace out;
    out.states.reserve(curve.size());
    out.scaled_na.reserve(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out.states.push_back(classical_state(curve.b[i], curve.bdot[i], profile.omega2[i], curve.grid[i]));
        out.scaled_na.push_back(0.5 * out.states.back().E_ex);
    }
    return out;
}

}  // namespace sta
