#pragma once

// Instantaneous and time-averaged energies of the n-th dynamical mode, impulse bookkeeping,
// non-adiabatic energy, power, and the closed-form bounds. Energies are in units of
// hbar*omega0, times in units of 1/omega0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "sta/curve.hpp"
#include "sta/error.hpp"
#include "sta/protocols.hpp"
#include "sta/quadrature.hpp"
#include "sta/trap.hpp"

namespace sta {

struct TimeAverages {
    double E = 0.0;   // averaged E_n including impulse contributions
    double E2 = 0.0;  // (2n+1)/2 * average of (1/b^2 + b'^2)
    double K = 0.0;
    double V = 0.0;   // includes impulse contributions
};

struct ImpulseContribution {
    double delta = 0.0;     // energy average carried by endpoint impulses
    double boundary = 0.0;  // partial-integration boundary term, equal to -delta
};

struct NonAdiabatic {
    std::vector<double> trace;
    double avg = 0.0;   // average of the trace
    double avg2 = 0.0;  // (1/2) average of (b'^2 + 1/b^2 - Omega)
    double initial = 0.0;  // at 0-, frequency omega0
    double final = 0.0;    // at t_f+, frequency omega_f
};

struct PowerTrace {
    std::vector<double> P;
    std::vector<double> P_rel;  // empty when C = 0 (no expansion)
    double C = 0.0;             // (n + 1/2)(Omega_f - 1) / t_f
    double integral = 0.0;      // integral of P over the smooth segments
    double jumps = 0.0;         // energy exchanged at frequency discontinuities (endpoints included)
    double peak_rel = std::numeric_limits<double>::quiet_NaN();      // max |P_rel|
    double integral_rel = std::numeric_limits<double>::quiet_NaN();  // integral of P_rel ds, s = t/t_f

    double total() const { return integral + jumps; }
};

struct LowerBound {
    double quadrature = 0.0;  // canonical value
    double closed_form = std::numeric_limits<double>::quiet_NaN();
    bool closed_form_valid = false;  // both arctanh arguments inside (-1, 1)
    bool consistent = false;         // valid and within 1e-6 relative of the quadrature
};

struct BangBangEnergies {
    double first = 0.0;   // on (0, t1)
    double second = 0.0;  // on (t1, t_f)
    double average = 0.0;
};

struct BoundReport {
    LowerBound E_nL;
    double Ena_L = 0.0;
    double tf_max = 0.0;  // longest bang-bang duration
    double E_min = 0.0;   // bang-bang average at tf_max
    // Asymptotic forms evaluated at the same (spec, t_f).
    double E_nL_short_time = 0.0;            // (2n+1) / (2 Omega_f t_f^2)
    double Ena_L_large_gamma = 0.0;          // 1 / (4 Omega_f t_f^2)
    double bang_bang_fast = 0.0;             // (2n+1) pi ln(2 gamma) / (16 Omega_f t_f^2)
    double free_expansion_duration = 0.0;    // 1 / sqrt(Omega_f)
    double free_expansion_energy = 0.0;      // n + 1/2
};

struct EnergyTrace {
    TimeGrid grid;
    std::vector<double> E, K, V;
    std::vector<double> Ena;  // empty when omega^2 < 0 somewhere or impulses are present
    std::vector<double> P;    // empty when impulses are present
    double avg_E = 0.0, avg_E2 = 0.0, avg_K = 0.0, avg_V = 0.0;
    double avg_Ena = std::numeric_limits<double>::quiet_NaN();
    double avg_Ena2 = std::numeric_limits<double>::quiet_NaN();
    double delta_delta = 0.0;
    double delta_boundary = 0.0;
    double E_initial = 0.0;  // at 0-, frequency omega0
    double E_final = 0.0;    // at t_f+, frequency omega_f

    bool has_na() const { return !Ena.empty(); }
    double virial_deviation() const { return std::abs(avg_K - avg_V) / avg_E; }
};

namespace detail {

inline void require_same_grid(const ScalingCurve& curve, const FrequencyProfile& profile, const char* who) {
    require(curve.grid.same_layout(profile.grid), Errc::grid_mismatch,
            std::string(who) + ": curve and profile live on different grids");
}

inline double mode_energy(double level, double b, double bdot, double omega2) {
    return 0.25 * level * (bdot * bdot + omega2 * b * b + 1.0 / (b * b));
}

}  // namespace detail

/// E_n, K_n, V_n at every node. Impulses are not sampled.
inline EnergyTrace instantaneous(const ScalingCurve& curve, const FrequencyProfile& profile, const TrapSpec& spec) {
    detail::require_same_grid(curve, profile, "instantaneous");
    const double k = 0.25 * spec.level_factor();
    EnergyTrace out;
    out.grid = curve.grid;
    out.E.resize(curve.size());
    out.K.resize(curve.size());
    out.V.resize(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double b = curve.b[i];
        out.K[i] = k * (curve.bdot[i] * curve.bdot[i] + 1.0 / (b * b));
        out.V[i] = k * b * b * profile.omega2[i];
        out.E[i] = out.K[i] + out.V[i];
    }
    out.E_initial = detail::mode_energy(spec.level_factor(), curve.b_initial(), curve.bdot_initial, 1.0);
    const double of = spec.final_frequency();
    out.E_final = detail::mode_energy(spec.level_factor(), curve.b_final(), curve.bdot_final, of * of);
    return out;
}

/// Time average of the energy deposited by the profile's Dirac impulses: sum of D b(t_i)^2 (2n+1)/4, over t_f.
inline double impulse_energy(const ScalingCurve& curve, const FrequencyProfile& profile, const TrapSpec& spec) {
    double sum = 0.0;
    const auto nodes = curve.grid.nodes();
    for (const auto& imp : profile.impulses) {
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), imp.time);
        require(it != nodes.end() && *it == imp.time, Errc::grid_mismatch, "impulse time is not a grid node");
        const double b = curve.b[static_cast<std::size_t>(it - nodes.begin())];
        sum += imp.strength * b * b;
    }
    return 0.25 * spec.level_factor() * sum / curve.duration();
}

/// Averages of E (direct route plus impulses), E2 (kinetic route), K and V.
inline TimeAverages averages(const EnergyTrace& trace, const ScalingCurve& curve, const FrequencyProfile& profile,
                             const TrapSpec& spec) {
    detail::require_same_grid(curve, profile, "averages");
    const double impulses = impulse_energy(curve, profile, spec);
    TimeAverages out;
    out.K = time_average(trace.grid, trace.K);
    out.V = time_average(trace.grid, trace.V) + impulses;
    out.E = time_average(trace.grid, trace.E) + impulses;
    std::vector<double> e2(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        e2[i] = 0.5 * spec.level_factor() * (1.0 / (curve.b[i] * curve.b[i]) + curve.bdot[i] * curve.bdot[i]);
    }
    out.E2 = time_average(curve.grid, e2);
    return out;
}

/// Impulse contribution from the one-sided slopes: (2n+1)/(4 t_f) [b'(t_f-) b(t_f) - b'(0+) b(0)].
inline ImpulseContribution impulse_contribution(const ScalingCurve& curve, const TrapSpec& spec) {
    ImpulseContribution out;
    out.delta = 0.25 * spec.level_factor() / curve.duration() *
                (curve.bf_minus_dot * curve.b_final() - curve.b0_plus_dot * curve.b_initial());
    out.boundary = -out.delta;
    return out;
}

/// Lower bound on the averaged energy at duration t_f: the kinetic-route average over the
/// quasi-optimal curve, by quadrature. The arctanh closed form is reported alongside when defined.
inline LowerBound lower_bound_avg_energy(const TrapSpec& spec, double t_f, std::size_t nodes = 20001) {
    const ScalingCurve curve = quasi_optimal(spec, t_f, nodes);
    std::vector<double> e2(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        e2[i] = 0.5 * spec.level_factor() * (1.0 / (curve.b[i] * curve.b[i]) + curve.bdot[i] * curve.bdot[i]);
    }
    LowerBound out;
    out.quadrature = time_average(curve.grid, e2);

    const double B = quasi_optimal_B(spec, t_f);
    const double a1 = (B * B + B - t_f * t_f) / t_f;
    const double a2 = B / t_f;
    out.closed_form_valid = std::abs(a1) < 1.0 && std::abs(a2) < 1.0;
    if (out.closed_form_valid) {
        out.closed_form = spec.level_factor() / (2.0 * t_f * t_f) *
                          ((B * B - t_f * t_f) - 2.0 * t_f * (std::atanh(a1) - std::atanh(a2)));
        out.consistent = std::abs(out.closed_form - out.quadrature) <= 1e-6 * std::abs(out.quadrature);
    }
    return out;
}

/// Ground-state non-adiabatic energy (1/4)(b'^2 + Omega^2 b^2 + 1/b^2) - Omega/2.
/// Throws NonRealFrequency if omega^2 < 0 anywhere or impulses are present. spec.n is ignored.
inline NonAdiabatic nonadiabatic_energy(const ScalingCurve& curve, const FrequencyProfile& profile,
                                        const TrapSpec& spec) {
    detail::require_same_grid(curve, profile, "nonadiabatic_energy");
    require(profile.impulses.empty(), Errc::non_real_frequency,
            "non-adiabatic energy undefined with Dirac impulses in omega^2");
    NonAdiabatic out;
    out.trace.resize(curve.size());
    std::vector<double> reduced(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double b = curve.b[i];
        const double bd = curve.bdot[i];
        const double omega = real_frequency(profile.omega2[i], curve.grid[i]);
        out.trace[i] = 0.25 * (bd * bd + profile.omega2[i] * b * b + 1.0 / (b * b)) - 0.5 * omega;
        reduced[i] = 0.5 * (bd * bd + 1.0 / (b * b) - omega);
    }
    out.avg = time_average(curve.grid, out.trace);
    out.avg2 = time_average(curve.grid, reduced);
    const double of = spec.final_frequency();
    out.initial = detail::mode_energy(1.0, curve.b_initial(), curve.bdot_initial, 1.0) - 0.5;
    out.final = detail::mode_energy(1.0, curve.b_final(), curve.bdot_final, of * of) - 0.5 * of;
    return out;
}

/// Smallest averaged non-adiabatic energy at duration t_f: (1/4) ((gamma - 1) / t_f)^2.
inline double na_lower_bound(const TrapSpec& spec, double t_f) {
    const double v = (spec.gamma() - 1.0) / t_f;
    return 0.25 * v * v;
}

namespace detail {

/// d(omega^2)/dt by second-order finite differences within each grid segment.
inline std::vector<double> differentiate_segments(const TimeGrid& grid, const std::vector<double>& y) {
    std::vector<double> out(y.size());
    const auto t = grid.nodes();
    for (const auto& seg : grid.segments()) {
        const std::size_t a = seg.first, z = seg.last();
        if (seg.count < 3) {
            const double slope = (y[z] - y[a]) / (t[z] - t[a]);
            for (std::size_t i = a; i <= z; ++i) out[i] = slope;
            continue;
        }
        for (std::size_t i = a + 1; i < z; ++i) {
            const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
            out[i] = (h0 * h0 * (y[i + 1] - y[i]) + h1 * h1 * (y[i] - y[i - 1])) / (h0 * h1 * (h0 + h1));
        }
        const double h = t[a + 1] - t[a];
        out[a] = (-3.0 * y[a] + 4.0 * y[a + 1] - y[a + 2]) / (2.0 * h);
        const double hz = t[z] - t[z - 1];
        out[z] = (3.0 * y[z] - 4.0 * y[z - 1] + y[z - 2]) / (2.0 * hz);
    }
    return out;
}

}  // namespace detail

/// P_n = (2n+1)/4 d(omega^2)/dt b^2, relative power P_rel = P_n / C_n, and the energy exchanged
/// at frequency jumps. Throws PowerUndefined when the profile carries Dirac impulses.
inline PowerTrace power(const ScalingCurve& curve, const FrequencyProfile& profile, const TrapSpec& spec) {
    detail::require_same_grid(curve, profile, "power");
    require(profile.impulses.empty(), Errc::power_undefined, "power is undefined across Dirac impulses in omega^2");
    const double k = 0.25 * spec.level_factor();
    const std::vector<double> rate =
        profile.has_rate() ? profile.omega2_rate : detail::differentiate_segments(profile.grid, profile.omega2);

    PowerTrace out;
    out.P.resize(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) out.P[i] = k * rate[i] * curve.b[i] * curve.b[i];
    out.integral = integrate(curve.grid, out.P);

    const auto segments = curve.grid.segments();
    const double of = spec.final_frequency();
    auto jump = [&](std::size_t i, double before, double after) { return k * curve.b[i] * curve.b[i] * (after - before); };
    out.jumps += jump(0, 1.0, profile.omega2.front());
    for (std::size_t s = 1; s < segments.size(); ++s) {
        out.jumps += jump(segments[s].first, profile.omega2[segments[s - 1].last()], profile.omega2[segments[s].first]);
    }
    out.jumps += jump(curve.size() - 1, profile.omega2.back(), of * of);

    const double t_f = curve.duration();
    out.C = 0.5 * spec.level_factor() * (of - 1.0) / t_f;
    if (out.C != 0.0) {
        out.P_rel.resize(curve.size());
        double peak = 0.0;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            out.P_rel[i] = out.P[i] / out.C;
            peak = std::max(peak, std::abs(out.P_rel[i]));
        }
        out.peak_rel = peak;
        out.integral_rel = integrate(curve.grid, out.P_rel) / t_f;
    }
    return out;
}

/// Energies of a two-step bang-bang protocol, constant on each segment.
inline BangBangEnergies bang_bang_energies(const TrapSpec& spec, double omega1, double omega2, double t1, double t2) {
    const double half_level = 0.5 * spec.level_factor();
    const double of = spec.final_frequency();
    BangBangEnergies out;
    out.first = 0.5 * half_level * (1.0 - omega1 * omega1);
    out.second = 0.5 * half_level * (of * of + omega2 * omega2) / of;
    out.average = (t1 * out.first + t2 * out.second) / (t1 + t2);
    return out;
}

inline BoundReport bounds(const TrapSpec& spec, double t_f) {
    const double of = spec.final_frequency();
    const double level = spec.level_factor();
    BoundReport out;
    out.E_nL = lower_bound_avg_energy(spec, t_f);
    out.Ena_L = na_lower_bound(spec, t_f);
    out.tf_max = bang_bang_max_duration(spec);
    out.E_min = level * (1.0 + of) / 4.0;
    out.E_nL_short_time = level / (2.0 * of * t_f * t_f);
    out.Ena_L_large_gamma = 1.0 / (4.0 * of * t_f * t_f);
    out.bang_bang_fast = level * std::numbers::pi * std::log(2.0 * spec.gamma()) / (16.0 * of * t_f * t_f);
    out.free_expansion_duration = 1.0 / std::sqrt(of);
    out.free_expansion_energy = 0.5 * level;
    return out;
}

/// Everything the module computes for one protocol. Non-adiabatic and power fields are filled
/// only where they are defined.
inline EnergyTrace analyze(const ScalingCurve& curve, const FrequencyProfile& profile, const TrapSpec& spec) {
    EnergyTrace out = instantaneous(curve, profile, spec);
    const TimeAverages avg = averages(out, curve, profile, spec);
    out.avg_E = avg.E;
    out.avg_E2 = avg.E2;
    out.avg_K = avg.K;
    out.avg_V = avg.V;
    const ImpulseContribution ic = impulse_contribution(curve, spec);
    out.delta_delta = profile.impulses.empty() ? 0.0 : ic.delta;
    out.delta_boundary = ic.boundary;
    if (profile.impulses.empty()) {
        if (profile.min_omega2() >= -kOmega2Tolerance) {
            NonAdiabatic na = nonadiabatic_energy(curve, profile, spec);
            out.Ena = std::move(na.trace);
            out.avg_Ena = na.avg;
            out.avg_Ena2 = na.avg2;
        }
        out.P = power(curve, profile, spec).P;
    }
    return out;
}

inline EnergyTrace analyze(const Protocol& p, const TrapSpec& spec) { return analyze(p.curve, p.profile, spec); }

}  // namespace sta
