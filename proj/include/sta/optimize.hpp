#pragma once

// Cap-duration search for the hybrid protocol (minimum averaged non-adiabatic energy with
// omega >= 0) and septic-coefficient search for the flattest power profile.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "sta/energies.hpp"
#include "sta/ermakov.hpp"
#include "sta/error.hpp"
#include "sta/minimize.hpp"
#include "sta/protocols.hpp"

namespace sta {

inline constexpr std::size_t kPowerNodes = 4001;

struct OptimizationResult {
    std::array<double, 2> params{};  // (tau_l, tau_s) or (c3, c4)
    double objective = std::numeric_limits<double>::infinity();
    bool feasible = false;
    int iterations = 0;
    bool converged = false;
    double start_objective = std::numeric_limits<double>::infinity();  // best multistart seed
};

// ---------------------------------------------------------------------------------------------
// Hybrid caps. Decision variables are searched as fractions (l, r) = (tau_l, tau_s) / t_f on the
// open triangle l, r > 0, l + r < 1.

namespace detail {

inline bool inside_cap_triangle(double t_f, double tau_l, double tau_s) {
    return tau_l > 0.0 && tau_s > 0.0 && tau_l < t_f - tau_s && t_f - tau_s < t_f;
}

inline std::vector<std::array<double, 2>> cap_seeds() {
    std::vector<std::array<double, 2>> out;
    for (double l : {0.01, 0.05, 0.2}) {
        for (double r : {0.01, 0.05, 0.2, 0.5, 0.8, 0.95}) {
            if (l + r < 1.0) out.push_back({l, r});
        }
    }
    return out;
}

}  // namespace detail

/// min omega^2 of the hybrid protocol; -inf outside the triangle.
inline double caps_min_omega2(const TrapSpec& spec, double t_f, double tau_l, double tau_s,
                              std::size_t nodes = kDefaultNodes) {
    if (!detail::inside_cap_triangle(t_f, tau_l, tau_s)) return -std::numeric_limits<double>::infinity();
    return inverse_engineer(hybrid_caps(spec, t_f, tau_l, tau_s, nodes)).min_omega2();
}

/// Averaged non-adiabatic energy of the hybrid protocol, +inf where omega^2 < 0 somewhere.
inline double caps_objective(const TrapSpec& spec, double t_f, double tau_l, double tau_s,
                             std::size_t nodes = kDefaultNodes) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!detail::inside_cap_triangle(t_f, tau_l, tau_s)) return inf;
    const ScalingCurve curve = hybrid_caps(spec, t_f, tau_l, tau_s, nodes);
    const FrequencyProfile profile = inverse_engineer(curve);
    if (profile.min_omega2() < -kOmega2Tolerance) return inf;
    return nonadiabatic_energy(curve, profile, spec).avg;
}

/// Cap pair maximizing min omega^2, i.e. the most feasible point. Used as a fallback seed and as
/// the feasibility oracle.
inline OptimizationResult caps_most_feasible(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    auto f = [&](const std::array<double, 2>& x) {
        const double m = caps_min_omega2(spec, t_f, x[0] * t_f, x[1] * t_f, nodes);
        return std::isfinite(m) ? -m : std::numeric_limits<double>::infinity();
    };
    OptimizationResult best;
    for (const auto& seed : detail::cap_seeds()) {
        const double v = f(seed);
        if (v < best.start_objective) best.start_objective = v;
    }
    for (const auto& seed : detail::cap_seeds()) {
        const PlanarMinimum m = minimize_2d(f, seed, {0.25 * seed[0], 0.25 * seed[1]}, 1e-10);
        if (m.value < best.objective || (m.value == best.objective && m.x < best.params)) {
            best.objective = m.value;
            best.params = m.x;
            best.iterations = m.iterations;
            best.converged = m.converged;
        }
    }
    best.feasible = best.objective <= kOmega2Tolerance;
    best.params = {best.params[0] * t_f, best.params[1] * t_f};
    best.objective = -best.objective;  // report max min omega^2
    best.start_objective = -best.start_objective;
    return best;
}

inline bool caps_feasible(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    return caps_most_feasible(spec, t_f, nodes).feasible;
}

/// Smallest t_f with a feasible cap pair, by bisection on [lo, hi] (lo infeasible, hi feasible).
inline double caps_feasibility_threshold(const TrapSpec& spec, double lo, double hi, double rel_tol = 1e-4,
                                         std::size_t nodes = kDefaultNodes) {
    require(!caps_feasible(spec, lo, nodes), Errc::domain, "caps_feasibility_threshold: lower end is feasible");
    require(caps_feasible(spec, hi, nodes), Errc::infeasible, "caps_feasibility_threshold: upper end is infeasible");
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (caps_feasible(spec, mid, nodes) ? hi : lo) = mid;
    }
    return hi;
}

/// Minimizes the averaged non-adiabatic energy of the hybrid protocol over (tau_l, tau_s) under
/// omega >= 0. `warm_start` adds one more seed, e.g. the optimum at a neighbouring t_f.
/// Throws Infeasible when no seed, and not the most feasible pair either, satisfies omega >= 0.
inline OptimizationResult optimize_caps(const TrapSpec& spec, double t_f,
                                        std::optional<std::array<double, 2>> warm_start = std::nullopt,
                                        std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    auto f = [&](const std::array<double, 2>& x) { return caps_objective(spec, t_f, x[0] * t_f, x[1] * t_f, nodes); };

    std::vector<std::array<double, 2>> seeds = detail::cap_seeds();
    if (warm_start) seeds.push_back({(*warm_start)[0] / t_f, (*warm_start)[1] / t_f});
    std::vector<std::pair<double, std::array<double, 2>>> feasible;
    for (const auto& s : seeds) {
        const double v = f(s);
        if (std::isfinite(v)) feasible.push_back({v, s});
    }
    if (feasible.empty()) {
        const OptimizationResult oracle = caps_most_feasible(spec, t_f, nodes);
        if (oracle.feasible) {
            const std::array<double, 2> s{oracle.params[0] / t_f, oracle.params[1] / t_f};
            const double v = f(s);
            if (std::isfinite(v)) feasible.push_back({v, s});
        }
    }
    if (feasible.empty()) {
        std::ostringstream msg;
        msg << "no cap pair keeps omega^2 >= 0 at t_f=" << t_f << " (gamma=" << spec.gamma() << ")";
        throw Error(Errc::infeasible, msg.str());
    }
    std::sort(feasible.begin(), feasible.end());

    OptimizationResult best;
    best.start_objective = feasible.front().first;
    // Refine the two best basins.
    const std::size_t refine = std::min<std::size_t>(2, feasible.size());
    for (std::size_t k = 0; k < refine; ++k) {
        const auto& s = feasible[k].second;
        const PlanarMinimum m = minimize_2d(f, s, {0.2 * s[0], 0.2 * s[1]}, 1e-9);
        if (m.value < best.objective || (m.value == best.objective && m.x < best.params)) {
            best.objective = m.value;
            best.params = m.x;
            best.iterations = m.iterations;
            best.converged = m.converged;
        }
    }
    best.params = {best.params[0] * t_f, best.params[1] * t_f};
    best.feasible = true;
    return best;
}

// ---------------------------------------------------------------------------------------------
// Septic power peak.

/// max |P_rel| of the septic protocol; +inf when b collapses.
inline double septic_power_peak(const TrapSpec& spec, double t_f, double c3, double c4,
                                std::size_t nodes = kPowerNodes) {
    try {
        const ScalingCurve curve = septic(spec, t_f, c3, c4, nodes);
        return power(curve, inverse_engineer(curve), spec).peak_rel;
    } catch (const Error& e) {
        if (e.code() == Errc::collapse) return std::numeric_limits<double>::infinity();
        throw;
    }
}

/// (c3, c4) reproducing the quintic within the septic family.
inline std::array<double, 2> quintic_septic_point(const TrapSpec& spec) {
    const double d = spec.gamma() - 1.0;
    return {10.0 * d, -15.0 * d};
}

/// Minimizes max |P_rel| over the septic coefficients, started from (0, 0) and from the quintic.
/// `start_objective` is the peak at (0, 0).
inline OptimizationResult optimize_septic_power(const TrapSpec& spec, double t_f, std::size_t nodes = kPowerNodes) {
    detail::require_duration(t_f);
    require(spec.gamma() != 1.0, Errc::invalid_argument, "optimize_septic_power: no expansion, P_rel undefined");
    auto f = [&](const std::array<double, 2>& x) { return septic_power_peak(spec, t_f, x[0], x[1], nodes); };
    const double scale = std::max(1.0, std::abs(spec.gamma() - 1.0));

    OptimizationResult best;
    best.start_objective = f({0.0, 0.0});
    for (const auto& s : {std::array<double, 2>{0.0, 0.0}, quintic_septic_point(spec)}) {
        const PlanarMinimum m = minimize_2d(f, s, {scale, scale}, 1e-10);
        if (m.value < best.objective || (m.value == best.objective && m.x < best.params)) {
            best.objective = m.value;
            best.params = m.x;
            best.iterations = m.iterations;
            best.converged = m.converged;
        }
    }
    best.feasible = std::isfinite(best.objective);
    return best;
}

}  // namespace sta
