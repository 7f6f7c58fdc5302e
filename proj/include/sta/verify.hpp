#pragma once

// The invariant suite: one Check per acceptance criterion plus supporting invariants. Shared by
// the `verify` subcommand and the acceptance test binary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "sta/energies.hpp"
#include "sta/ermakov.hpp"
#include "sta/optimize.hpp"
#include "sta/protocols.hpp"
#include "sta/trap.hpp"

namespace sta {

struct Check {
    std::string id;
    std::string name;
    bool pass = false;
    std::string measured;   // worst observed value(s)
    std::string tolerated;  // acceptance window
};

struct VerifyOptions {
    std::size_t nodes = kDefaultNodes;
    bool inject_e2_sign_error = false;  // mutation fixture: flips the sign of b'^2 in the kinetic route
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// A named protocol kept around for the suite-wide checks.
struct SuiteEntry {
    std::string label;
    Protocol protocol;
    TrapSpec spec;
    bool boundary_conditions = true;
};

inline double kinetic_route(const ScalingCurve& c, const TrapSpec& spec, bool flip) {
    std::vector<double> y(c.size());
    const double sgn = flip ? -1.0 : 1.0;
    for (std::size_t i = 0; i < c.size(); ++i) y[i] = 0.5 * spec.level_factor() * (1.0 / (c.b[i] * c.b[i]) + sgn * c.bdot[i] * c.bdot[i]);
    return time_average(c.grid, y);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::vector<double> log_space(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double w = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = std::exp(std::log(lo) + w * (std::log(hi) - std::log(lo)));
    }
    out.back() = hi;
    return out;
}

}  // namespace detail

/// Criteria 1-13, in order. Protocols built along the way feed criteria 12 and 13.
inline std::vector<Check> acceptance_checks(const VerifyOptions& opt = {}) {
    using detail::fmt;
    using detail::rel;
    const std::size_t N = opt.nodes;
    std::vector<Check> out;
    std::vector<detail::SuiteEntry> suite;
    const TrapSpec g10 = TrapSpec::dimensionless(10.0, 0);
    const TrapSpec g100 = TrapSpec::dimensionless(100.0, 0);
    const double pi = std::numbers::pi;

    // 1. virial relation
    {
        double worst = 0.0;
        std::string where;
        auto probe = [&](const std::string& label, Protocol p, bool keep = true) {
            const EnergyTrace e = analyze(p, g10);
            const double kin = detail::kinetic_route(p.curve, g10, opt.inject_e2_sign_error);
            const double d = std::max(e.virial_deviation(), rel(kin, e.avg_E));
            if (!(d <= worst)) {
                worst = d;
                where = label;
            }
            if (keep) suite.push_back({label, std::move(p), g10, true});
        };
        for (double tf : {0.1, 1.0, 10.0, 25.0}) {
            const std::string at = " t_f=" + fmt(tf);
            probe("quintic" + at, make_protocol({family::Quintic{}, tf, g10}, N));
            probe("septic(0,0)" + at, make_protocol({family::Septic{0.0, 0.0}, tf, g10}, N));
            probe("septic(78.5088,-459.7638)" + at, make_protocol({family::Septic{78.5088, -459.7638}, tf, g10}, N));
            probe("hybrid(0.1,0.1)" + at, make_protocol({family::HybridCaps{0.1 * tf, 0.1 * tf}, tf, g10}, N));
            probe("dirac" + at, dirac_impulse_protocol(g10, tf, N), false);
            if (tf <= bang_bang_max_duration(g10)) probe("bang-bang(w1=w2)" + at, bang_bang_for_duration(g10, tf, N).protocol);
        }
        probe("bang-bang(w1=w2=w0)", bang_bang(g10, 1.0, 1.0, N).protocol);
        out.push_back({"1", "virial relation |K-V|/E", worst < 1e-6, fmt(worst) + " (" + where + ")", "< 1e-6"});
    }

    // 2. equality chain for the Dirac-impulse protocol
    {
        double worst = 0.0;
        for (double tf : {0.3, 1.0, 3.0}) {
            const Protocol p = dirac_impulse_protocol(g10, tf, N);
            const EnergyTrace e = analyze(p, g10);
            const double kin = detail::kinetic_route(p.curve, g10, opt.inject_e2_sign_error);
            const double lb = lower_bound_avg_energy(g10, tf).quadrature;
            worst = std::max({worst, rel(e.avg_E, kin), rel(e.avg_E, lb), rel(kin, lb)});
        }
        out.push_back({"2", "Dirac equality chain avg_E = avg_E2 = E_nL", worst < 1e-6, fmt(worst), "< 1e-6 relative"});
    }

    // 3. impulse share of the energy at short times
    {
        const Protocol p = dirac_impulse_protocol(g100, 1e-3, N);
        const EnergyTrace e = analyze(p, g100);
        const double r = e.delta_delta / e.avg_E;
        out.push_back({"3", "impulse share delta/avg_E, gamma=100, t_f=1e-3", r >= 0.49 && r <= 0.51, fmt(r), "[0.49, 0.51]"});
    }

    // 4. short-time form of E_nL
    {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int n : {0, 3}) {
            const TrapSpec s = TrapSpec::dimensionless(100.0, n);
            const double tf = 1e-3;
            const double r = lower_bound_avg_energy(s, tf).quadrature / bounds(s, tf).E_nL_short_time;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        out.push_back({"4", "E_nL short-time ratio, gamma=100, t_f=1e-3, n in {0,3}", lo >= 0.98 && hi <= 1.02,
                       fmt(lo) + ".." + fmt(hi), "[0.98, 1.02]"});
    }

    // 5. longest bang-bang
    {
        const BangBang bb = bang_bang(g10, 0.0, std::sqrt(g10.final_frequency()), N);
        const EnergyTrace e = analyze(bb.protocol, g10);
        const TrapSpec si = TrapSpec::from_hz(2500.0, 25.0);
        const double tmax_s = from_dimensionless(si, bang_bang_max_duration(si));
        const double dt = std::abs(bb.duration() - 5.0 * pi);
        const double de = std::abs(e.avg_E - 0.2525);
        const double ds = std::abs(tmax_s - 1e-3);
        const bool ok = bb.t1 < 1e-12 && dt <= 1e-9 && de <= 1e-12 && ds <= 1e-9;
        out.push_back({"5", "bang-bang at omega2 = sqrt(omega0 omega_f)", ok,
                       "t1=" + fmt(bb.t1) + " |t_f-5pi|=" + fmt(dt) + " |avg_E-0.2525|=" + fmt(de) +
                           " |t_f^max-1ms|=" + fmt(ds) + "s",
                       "t1<1e-12, 1e-9, 1e-12, 1e-9 s"});
        suite.push_back({"bang-bang(0,sqrt(Omega_f))", bb.protocol, g10, true});
    }

    // 6. fast bang-bang
    {
        const BangBang bb = bang_bang(g100, 1e3, 1e3, N);
        const EnergyTrace e = analyze(bb.protocol, g100);
        const double r = e.avg_E / bounds(g100, bb.duration()).bang_bang_fast;
        out.push_back({"6", "fast bang-bang ratio, gamma=100, omega1=omega2=1e3 omega0", r >= 0.95 && r <= 1.05, fmt(r),
                       "[0.95, 1.05]"});
    }

    // 7. free-expansion limit
    {
        const BangBang bb = bang_bang_na(g100, 1e3, N);
        const EnergyTrace e = analyze(bb.protocol, g100);
        const BoundReport br = bounds(g100, bb.duration());
        const double rt = bb.duration() / br.free_expansion_duration;
        const double re = e.avg_E / br.free_expansion_energy;
        const bool ok = rt >= 0.95 && rt <= 1.05 && re >= 0.95 && re <= 1.05;
        out.push_back({"7", "omega1=0 limit, gamma=100, beta=1e3", ok, "t_f/gamma=" + fmt(rt) + " avg_E/(n+1/2)=" + fmt(re),
                       "[0.95, 1.05] each"});
        suite.push_back({"bang-bang-na(1e3)", bb.protocol, g100, true});
    }

    // 8. non-adiabatic bound over the sweep
    {
        double worst = std::numeric_limits<double>::infinity();  // min of avg_Ena / Ena_L
        double last_ratio = 0.0;
        std::optional<std::array<double, 2>> warm;
        for (double tf : detail::log_space(25.0, 2500.0, 20)) {
            const OptimizationResult r = optimize_caps(g10, tf, warm);
            warm = r.params;
            Protocol p = make_protocol({family::HybridCaps{r.params[0], r.params[1]}, tf, g10}, N);
            const double ena = analyze(p, g10).avg_Ena;
            const double ratio = ena / na_lower_bound(g10, tf);
            worst = std::min(worst, ratio);
            last_ratio = ratio;
            suite.push_back({"hybrid-optimized t_f=" + fmt(tf), std::move(p), g10, true});
        }
        const BoundReport br = bounds(g10, 1.0);
        for (double tf : detail::log_space(std::sqrt(g10.gamma2() - 1.0) * 1.0001, br.tf_max, 20)) {
            BangBang bb = bang_bang_na_for_duration(g10, tf, N);
            const double ena = analyze(bb.protocol, g10).avg_Ena;
            worst = std::min(worst, ena / na_lower_bound(g10, tf));
            suite.push_back({"bang-bang-na t_f=" + fmt(tf), std::move(bb.protocol), g10, true});
        }
        const bool ok = worst >= 1.0 - 1e-6 && last_ratio <= 2.0;
        out.push_back({"8", "avg_Ena >= Ena_L over the sweep; hybrid within x2 at largest t_f", ok,
                       "min ratio=" + fmt(worst) + " hybrid ratio at t_f=2500: " + fmt(last_ratio),
                       ">= 1-1e-6; <= 2"});
    }

    // 9. NA bang-bang matching times
    {
        const BangBang bb = bang_bang_na(g10, 1.0, N);
        const double d1 = std::abs(bb.t1 - 9.9), d2 = std::abs(bb.t2 - 0.099674);
        const double db = std::abs(bb.protocol.curve.b_final() - 10.0), dv = std::abs(bb.protocol.curve.bdot_final);
        const bool ok = d1 <= 1e-10 && d2 <= 1e-5 && db <= 1e-8 && dv <= 1e-8;
        out.push_back({"9", "NA bang-bang times, gamma=10, beta=1", ok,
                       "|t1-9.9|=" + fmt(d1) + " |t2-0.099674|=" + fmt(d2) + " |b-gamma|=" + fmt(db) + " |b'|=" + fmt(dv),
                       "1e-10, 1e-5, 1e-8, 1e-8"});
        suite.push_back({"bang-bang-na(1)", bb.protocol, g10, true});
    }

    // 10. power integral and Ermakov round trip
    {
        double worst_int = 0.0, worst_trip = 0.0;
        for (int n : {0, 2}) {
            const TrapSpec s = TrapSpec::dimensionless(10.0, n);
            for (const Family& f : {Family{family::Quintic{}}, Family{family::Septic{0.0, 0.0}},
                                    Family{family::Septic{78.5088, -459.7638}}}) {
                const Protocol p = make_protocol({f, 25.0, s}, N);
                const PowerTrace pw = power(p.curve, p.profile, s);
                worst_int = std::max(worst_int, rel(pw.integral, -0.495 * s.level_factor()));
                const ScalingCurve back = forward_solve(p.profile, 1.0, 0.0);
                for (std::size_t i = 0; i < back.size(); ++i) worst_trip = std::max(worst_trip, std::abs(back.b[i] - p.curve.b[i]));
            }
        }
        out.push_back({"10", "power integral -0.495(2n+1); forward(inverse(b)) = b", worst_int <= 1e-6 && worst_trip < 1e-6,
                       "int rel=" + fmt(worst_int) + " round trip=" + fmt(worst_trip), "1e-6 relative; < 1e-6"});
    }

    // 11. septic power optimization at the figure preset
    {
        const TrapSpec si = TrapSpec::from_hz(2500.0, 25.0);
        const TrapSpec s = TrapSpec::dimensionless(si.gamma(), 0);
        const double tf = to_dimensionless(si, 8e-3);
        const auto q = quintic_septic_point(s);
        const double quintic_peak = septic_power_peak(s, tf, q[0], q[1]);
        const double paper_peak = septic_power_peak(s, tf, 78.5088, -459.7638);
        const OptimizationResult r = optimize_septic_power(s, tf);
        const bool ok = r.objective <= quintic_peak && r.objective >= 1.0 && paper_peak <= quintic_peak;
        out.push_back({"11", "septic power peak at t_f=8 ms", ok,
                       "optimized=" + fmt(r.objective) + " at (" + fmt(r.params[0]) + "," + fmt(r.params[1]) +
                           ") reference=" + fmt(paper_peak) + " quintic=" + fmt(quintic_peak),
                       "1 <= optimized <= quintic; reference <= quintic"});
    }

    // 12. non-negative non-adiabatic energy, zero at the ends
    {
        double min_ena = std::numeric_limits<double>::infinity(), worst_end = 0.0;
        std::size_t admissible = 0;
        for (const auto& entry : suite) {
            const auto& pr = entry.protocol;
            if (!pr.profile.impulses.empty() || pr.profile.min_omega2() < -kOmega2Tolerance) continue;
            ++admissible;
            const NonAdiabatic na = nonadiabatic_energy(pr.curve, pr.profile, entry.spec);
            for (double v : na.trace) min_ena = std::min(min_ena, v);
            if (entry.boundary_conditions) worst_end = std::max({worst_end, std::abs(na.initial), std::abs(na.final)});
        }
        out.push_back({"12", "Ena >= 0 and Ena(0)=Ena(t_f)=0 over " + std::to_string(admissible) + " admissible protocols",
                       admissible > 0 && min_ena >= -1e-9 && worst_end <= 1e-9,
                       "min Ena=" + fmt(min_ena) + " max |Ena(end)|=" + fmt(worst_end), ">= -1e-9; <= 1e-9"});
    }

    // 13. mean-value bounds on b' and b''
    {
        double worst1 = std::numeric_limits<double>::infinity(), worst2 = worst1;
        for (const auto& entry : suite) {
            if (!entry.boundary_conditions) continue;
            const auto& c = entry.protocol.curve;
            const double tf = c.duration();
            const double g = entry.spec.gamma();
            double max_v = -std::numeric_limits<double>::infinity(), max_a = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                max_v = std::max(max_v, c.bdot[i]);
                max_a = std::max(max_a, std::abs(c.bddot[i]));
            }
            worst1 = std::min(worst1, max_v / ((g - 1.0) / tf));
            worst2 = std::min(worst2, max_a / (2.0 * (g - 1.0) / (tf * tf)));
        }
        const double eps = 1e-12;
        out.push_back({"13", "max b' >= (gamma-1)/t_f, max |b''| >= 2(gamma-1)/t_f^2 over " + std::to_string(suite.size()) + " curves",
                       worst1 >= 1.0 - eps && worst2 >= 1.0 - eps, "min ratios " + fmt(worst1) + ", " + fmt(worst2),
                       ">= 1 (round-off)"});
    }
    return out;
}

/// Supporting invariants beyond the acceptance criteria.
inline std::vector<Check> supporting_checks(const VerifyOptions& opt = {}) {
    using detail::fmt;
    std::vector<Check> out;
    const TrapSpec g10 = TrapSpec::dimensionless(10.0, 0);

    // Simpson order from three grids starting at opt.nodes (capped so round-off stays out of the way).
    {
        auto avg = [&](std::size_t n) {
            const ScalingCurve c = quintic(g10, 10.0, n);
            return detail::kinetic_route(c, g10, false);
        };
        const std::size_t n0 = std::clamp<std::size_t>(opt.nodes, 11, 401) | 1u;
        const double a = avg(n0), b = avg(2 * n0 - 1), c = avg(4 * n0 - 3);
        const double order = std::log2(std::abs(a - b) / std::abs(b - c));
        out.push_back({"S1", "quadrature convergence order from " + std::to_string(n0) + " nodes", order > 3.5 && order < 4.5,
                       fmt(order), "(3.5, 4.5)"});
    }
    // SI round trip
    {
        const TrapSpec si = TrapSpec::from_hz(2500.0, 25.0);
        const double t = 8e-3;
        const double back = from_dimensionless(si, to_dimensionless(si, t));
        const double e = energy_from_dimensionless(si, energy_to_dimensionless(si, 1e-30));
        const double worst = std::max(std::abs(back - t) / t, std::abs(e - 1e-30) / 1e-30);
        out.push_back({"S2", "SI <-> dimensionless round trip", worst <= 1e-12, fmt(worst), "<= 1e-12"});
    }
    // Closed-form lower bound where defined
    {
        const LowerBound lb = lower_bound_avg_energy(g10, 100.0);
        out.push_back({"S3", "arctanh closed form matches quadrature at t_f=100", lb.consistent,
                       fmt(std::abs(lb.closed_form - lb.quadrature) / lb.quadrature), "<= 1e-6"});
    }
    // Every protocol stays above the lower bound
    {
        double worst = std::numeric_limits<double>::infinity();
        for (double tf : {0.5, 2.0, 8.0, 30.0}) {
            const double lb = lower_bound_avg_energy(g10, tf).quadrature;
            for (const Family& f : {Family{family::Quintic{}}, Family{family::Septic{0.0, 0.0}}, Family{family::HybridCaps{0.2 * tf, 0.2 * tf}}}) {
                worst = std::min(worst, analyze(make_protocol({f, tf, g10}, opt.nodes), g10).avg_E / lb);
            }
            if (tf <= bang_bang_max_duration(g10)) {
                worst = std::min(worst, analyze(bang_bang_for_duration(g10, tf, opt.nodes).protocol, g10).avg_E / lb);
            }
        }
        out.push_back({"S4", "avg_E >= E_nL for quintic, septic, hybrid, bang-bang", worst >= 1.0 - 1e-6, fmt(worst), ">= 1-1e-6"});
    }
    return out;
}

/// One line per check; returns the number of failures.
inline int print_checks(const std::vector<Check>& checks, std::ostream& os) {
    int failures = 0;
    for (const auto& c : checks) {
        if (!c.pass) ++failures;
        os << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << c.measured << " (tolerated "
           << c.tolerated << ")\n";
    }
    return failures;
}

}  // namespace sta
