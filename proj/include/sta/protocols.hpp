#pragma once

// Constructors for every expansion protocol. Times and frequencies are dimensionless
// (units of 1/omega0 and omega0); the TrapSpec supplies gamma.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "sta/curve.hpp"
#include "sta/ermakov.hpp"
#include "sta/error.hpp"
#include "sta/minimize.hpp"
#include "sta/ode.hpp"
#include "sta/trap.hpp"

namespace sta {

/// A scaling function together with the frequency schedule that realizes it.
struct Protocol {
    ScalingCurve curve;
    FrequencyProfile profile;
};

namespace detail {

inline void require_duration(double t_f) {
    require(std::isfinite(t_f) && t_f > 0.0, Errc::invalid_argument, "protocol duration t_f must be > 0");
}

/// b(s) = sum_k c_k s^k with s = t / t_f, and its time derivatives.
inline CurvePoint evaluate_polynomial(const std::vector<double>& c, double t_f, double t) {
    const double s = t / t_f;
    double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        p3 = p3 * s + p2;
        p2 = p2 * s + p1;
        p1 = p1 * s + p0;
        p0 = p0 * s + c[k];
    }
    // p_j holds d^j/ds^j / j!
    return {p0, p1 / t_f, 2.0 * p2 / (t_f * t_f), 6.0 * p3 / (t_f * t_f * t_f)};
}

inline std::shared_ptr<const PiecewiseCurve> polynomial_curve(std::vector<double> coeffs, double t_f) {
    return std::make_shared<const PiecewiseCurve>(std::vector<CurvePiece>{
        {0.0, t_f, [c = std::move(coeffs), t_f](double t) { return evaluate_polynomial(c, t_f, t); }}});
}

/// sinh(w t) / w, continuous through w = 0.
inline double sinh_ratio(double w, double t) {
    const double z = w * t;
    if (std::abs(z) < 1e-4) return t * (1.0 + z * z / 6.0 + z * z * z * z / 120.0);
    return std::sinh(z) / w;
}

/// asinh(z) / z, continuous through z = 0.
inline double asinh_ratio(double z) {
    if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0 + 3.0 * z * z * z * z / 40.0;
    return std::asinh(z) / z;
}

inline FrequencyProfile constant_profile(const TimeGrid& grid, const std::vector<double>& levels) {
    const auto segments = grid.segments();
    require(levels.size() == segments.size(), Errc::invalid_argument, "one frequency level per segment required");
    FrequencyProfile out;
    out.grid = grid;
    out.omega2.resize(grid.size());
    out.omega2_rate.assign(grid.size(), 0.0);
    for (std::size_t k = 0; k < segments.size(); ++k) {
        for (std::size_t i = segments[k].first; i <= segments[k].last(); ++i) out.omega2[i] = levels[k];
        out.pieces.push_back({grid[segments[k].first], grid[segments[k].last()], [w2 = levels[k]](double) { return w2; }});
    }
    return out;
}

}  // namespace detail

/// Quintic b(s) = 1 + 10(g-1)s^3 - 15(g-1)s^4 + 6(g-1)s^5; meets b, b', b'' conditions at both ends.
inline ScalingCurve quintic(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    const double d = spec.gamma() - 1.0;
    return sample(detail::polynomial_curve({1.0, 0.0, 0.0, 10.0 * d, -15.0 * d, 6.0 * d}, t_f), nodes, "quintic");
}

/// Power-series coefficients (s^0..s^7) of the two-parameter septic family.
inline std::array<double, 8> septic_coefficients(double gamma, double c3, double c4) {
    return {1.0,
            0.0,
            0.0,
            c3,
            c4,
            -(21.0 + 6.0 * c3 + 3.0 * c4 - 21.0 * gamma),
            35.0 + 8.0 * c3 + 3.0 * c4 - 35.0 * gamma,
            -(15.0 + 3.0 * c3 + c4 - 15.0 * gamma)};
}

/// Septic polynomial with free (c3, c4); the remaining coefficients enforce all six end conditions.
/// Throws Errc::collapse if the chosen coefficients drive b through zero.
inline ScalingCurve septic(const TrapSpec& spec, double t_f, double c3, double c4,
                           std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    const auto c = septic_coefficients(spec.gamma(), c3, c4);
    return sample(detail::polynomial_curve({c.begin(), c.end()}, t_f), nodes, "septic");
}

/// B = sqrt(t_f^2 + gamma^2) - 1 of the quasi-optimal curve.
inline double quasi_optimal_B(const TrapSpec& spec, double t_f) {
    return std::sqrt(t_f * t_f + spec.gamma2()) - 1.0;
}

/// b(s) = sqrt((B^2 - t_f^2) s^2 + 2 B s + 1). Hits b(0)=1 and b(t_f)=gamma but not the slope
/// conditions; the one-sided slopes are B/t_f and (B^2 + B - t_f^2)/(gamma t_f).
inline ScalingCurve quasi_optimal(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    const double B = quasi_optimal_B(spec, t_f);
    const double a = B * B - t_f * t_f;
    auto eval = [a, B, t_f](double t) {
        const double s = t / t_f;
        const double q = a * s * s + 2.0 * B * s + 1.0;
        if (!(q > 0.0)) {
            std::ostringstream msg;
            msg << "quasi-optimal radicand " << q << " <= 0 at t=" << t;
            throw Error(Errc::domain, msg.str());
        }
        CurvePoint p;
        p.b = std::sqrt(q);
        p.bdot = (a * s + B) / (t_f * p.b);
        p.bddot = (a / (t_f * t_f) - p.bdot * p.bdot) / p.b;
        p.bdddot = -3.0 * p.bdot * p.bddot / p.b;
        return p;
    };
    auto curve = std::make_shared<const PiecewiseCurve>(std::vector<CurvePiece>{{0.0, t_f, eval}});
    return sample(curve, nodes, "quasi-optimal");
}

/// Quasi-optimal interior plus impulses D0 = -b'(0+)/b(0) at t=0 and Df = b'(t_f-)/b(t_f) at t_f,
/// which restore b'(0-) = b'(t_f+) = 0.
inline Protocol dirac_impulse_protocol(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    Protocol out{quasi_optimal(spec, t_f, nodes), {}};
    out.curve.tag = "dirac";
    out.profile = inverse_engineer(out.curve);
    const double d0 = -out.curve.b0_plus_dot / out.curve.b_initial();
    const double df = out.curve.bf_minus_dot / out.curve.b_final();
    out.profile.impulses = {{0.0, d0}, {t_f, df}};
    out.curve.bdot_initial = out.curve.b0_plus_dot + d0 * out.curve.b_initial();
    out.curve.bdot_final = out.curve.bf_minus_dot - df * out.curve.b_final();
    return out;
}

/// Cubic launching cap on [0, tau_l], the line (gamma-1)s + 1 in between, cubic stopping cap on
/// [t_f - tau_s, t_f]. Caps match b and b' at both of their ends.
inline ScalingCurve hybrid_caps(const TrapSpec& spec, double t_f, double tau_l, double tau_s,
                                std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    {
        std::ostringstream msg;
        msg << "hybrid caps need 0 < tau_l, 0 < tau_s, tau_l + tau_s < t_f (got tau_l=" << tau_l
            << ", tau_s=" << tau_s << ", t_f=" << t_f << ")";
        require(tau_l > 0.0 && tau_s > 0.0 && tau_l < t_f - tau_s && t_f - tau_s < t_f, Errc::invalid_argument, msg.str());
    }
    const double g = spec.gamma();
    const double v = (g - 1.0) / t_f;
    const double t_stop = t_f - tau_s;

    // b = 1 + v t^2 (2 tau_l - t) / tau_l^2
    auto launch = [v, L = tau_l](double t) {
        const double L2 = L * L;
        return CurvePoint{1.0 + v * t * t * (2.0 * L - t) / L2, v * t * (4.0 * L - 3.0 * t) / L2,
                          v * (4.0 * L - 6.0 * t) / L2, -6.0 * v / L2};
    };
    auto line = [v](double t) { return CurvePoint{1.0 + v * t, v, 0.0, 0.0}; };
    // with u = t_f - t: b = gamma - v u^2 (2 tau_s - u) / tau_s^2
    auto stop = [v, g, S = tau_s, t_f](double t) {
        const double u = t_f - t;
        const double S2 = S * S;
        return CurvePoint{g - v * u * u * (2.0 * S - u) / S2, v * u * (4.0 * S - 3.0 * u) / S2,
                          -v * (4.0 * S - 6.0 * u) / S2, -6.0 * v / S2};
    };
    auto curve = std::make_shared<const PiecewiseCurve>(
        std::vector<CurvePiece>{{0.0, tau_l, launch}, {tau_l, t_stop, line}, {t_stop, t_f, stop}});
    return sample(curve, nodes, "hybrid");
}

/// Power-series coefficients in s of the launching (f) and stopping (g) caps.
struct CapCoefficients {
    std::array<double, 4> launch{};
    std::array<double, 4> stop{};
};

inline CapCoefficients hybrid_cap_coefficients(const TrapSpec& spec, double t_f, double tau_l, double tau_s) {
    const double g = spec.gamma();
    const double d = g - 1.0;
    const double l = tau_l / t_f;
    const double r = tau_s / t_f;
    CapCoefficients c;
    c.launch = {1.0, 0.0, 2.0 * d / l, -d / (l * l)};
    // expand gamma - d (1-s)^2 (2r - 1 + s) / r^2 in powers of s
    const double k = d / (r * r);
    const double m = 2.0 * r - 1.0;
    // (1-s)^2 (m + s) = m + (1 - 2m) s + (m - 2) s^2 + s^3
    c.stop = {g - k * m, -k * (1.0 - 2.0 * m), -k * (m - 2.0), -k};
    return c;
}

/// Linear b with the bottom-tracking frequency omega = 1/b^2 (b'' = 0 solves the Ermakov equation).
/// The slope is (gamma-1)/t_f at both ends, so the boundary slope conditions are violated.
inline Protocol linear_bottom(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    const double v = (spec.gamma() - 1.0) / t_f;
    auto curve = std::make_shared<const PiecewiseCurve>(std::vector<CurvePiece>{
        {0.0, t_f, [v](double t) { return CurvePoint{1.0 + v * t, v, 0.0, 0.0}; }}});
    Protocol out{sample(curve, nodes, "linear"), {}};
    out.profile = inverse_engineer(out.curve);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Bang-bang: omega^2 = -omega1^2 on (0, t1), +omega2^2 on (t1, t1 + t2).

struct BangBangTimes {
    double t1 = 0.0;
    double t2 = 0.0;
    double duration() const { return t1 + t2; }
};

/// Switching durations from matching b and b' at t1. Requires omega1 >= 0 and
/// omega2 >= sqrt(omega0 omega_f) (dimensionless: omega2 >= 1/gamma).
inline BangBangTimes bang_bang_times(const TrapSpec& spec, double omega1, double omega2) {
    const double g2 = spec.gamma2();
    const double of = spec.final_frequency();
    require(g2 > 1.0, Errc::domain, "bang-bang needs gamma > 1");
    require(omega1 >= 0.0 && std::isfinite(omega1), Errc::domain, "bang-bang needs omega1 >= 0");
    require(omega2 > 0.0 && std::isfinite(omega2), Errc::domain, "bang-bang needs omega2 > 0");

    const double w1s = omega1 * omega1;
    const double w2s = omega2 * omega2;
    // gamma^2 omega2^2 - omega0^2, snapped to zero at the round-off level
    double excess = w2s - of;
    if (std::abs(excess) <= 8.0 * std::numeric_limits<double>::epsilon() * of) excess = 0.0;
    if (excess < 0.0) {
        std::ostringstream msg;
        msg << "bang-bang needs omega2 >= sqrt(omega0*omega_f) for t1 >= 0 (omega2=" << omega2
            << ", sqrt(omega0*omega_f)=" << std::sqrt(of) << ")";
        throw Error(Errc::domain, msg.str());
    }
    excess *= g2;

    BangBangTimes out;
    const double x = (g2 - 1.0) * excess / (g2 * (w2s + w1s) * (1.0 + w1s));
    const double y = std::sqrt(x);
    out.t1 = y * detail::asinh_ratio(omega1 * y);

    // sin^2(omega2 t2) and its complement, each formed directly so neither loses digits near 1
    const double denom = (w2s + w1s) * (g2 * g2 * w2s - 1.0);
    const double sin2 = w2s * (g2 - 1.0) * (g2 * w1s + 1.0) / denom;
    const double cos2 = excess * (g2 * w2s + w1s) / denom;
    if (!(sin2 >= 0.0 && cos2 >= 0.0)) {
        std::ostringstream msg;
        msg << "bang-bang arcsin argument " << sin2 << " outside [0, 1]";
        throw Error(Errc::domain, msg.str());
    }
    out.t2 = std::atan2(std::sqrt(sin2), std::sqrt(cos2)) / omega2;
    return out;
}

/// Longest bang-bang duration pi / (2 sqrt(omega0 omega_f)), reached at omega2 = sqrt(omega0 omega_f).
inline double bang_bang_max_duration(const TrapSpec& spec) {
    return std::numbers::pi / (2.0 * std::sqrt(spec.final_frequency()));
}

struct BangBang {
    Protocol protocol;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double duration() const { return t1 + t2; }
};

/// Closed-form Ermakov solutions on each constant-frequency segment.
inline BangBang bang_bang(const TrapSpec& spec, double omega1, double omega2, std::size_t nodes = kDefaultNodes) {
    const auto times = bang_bang_times(spec, omega1, omega2);
    const double t_f = times.duration();
    require(t_f > 0.0, Errc::domain, "bang-bang duration is zero");
    const double g2 = spec.gamma2();
    const double w1s = omega1 * omega1;

    // b^2 = 1 + A S^2, S = sinh(w1 t)/w1, A = 1 + w1^2
    auto expel = [w1 = omega1, w1s](double t) {
        const double A = 1.0 + w1s;
        const double S = detail::sinh_ratio(w1, t);
        const double C = std::cosh(w1 * t);
        CurvePoint p;
        p.b = std::sqrt(1.0 + A * S * S);
        p.bdot = A * S * C / p.b;
        const double q2 = 2.0 * A * (C * C + w1s * S * S);  // (b^2)''
        const double q3 = 8.0 * A * w1s * S * C;            // (b^2)'''
        p.bddot = (0.5 * q2 - p.bdot * p.bdot) / p.b;
        p.bdddot = (q3 - 6.0 * p.bdot * p.bddot) / (2.0 * p.b);
        return p;
    };
    // b^2 = gamma^2 + Cc sin^2(w2 u), u = t_f - t, Cc = (1 - gamma^4 w2^2) / (gamma^2 w2^2)
    auto confine = [w2 = omega2, g2, t_f](double t) {
        const double u = t_f - t;
        const double Cc = (1.0 - g2 * g2 * w2 * w2) / (g2 * w2 * w2);
        const double sn = std::sin(w2 * u);
        CurvePoint p;
        p.b = std::sqrt(g2 + Cc * sn * sn);
        p.bdot = -Cc * w2 * std::sin(2.0 * w2 * u) / (2.0 * p.b);
        const double q2 = 2.0 * Cc * w2 * w2 * std::cos(2.0 * w2 * u);
        const double q3 = 4.0 * Cc * w2 * w2 * w2 * std::sin(2.0 * w2 * u);
        p.bddot = (0.5 * q2 - p.bdot * p.bdot) / p.b;
        p.bdddot = (q3 - 6.0 * p.bdot * p.bddot) / (2.0 * p.b);
        return p;
    };

    std::vector<CurvePiece> pieces;
    std::vector<double> levels;
    if (times.t1 > 0.0) {
        pieces.push_back({0.0, times.t1, expel});
        levels.push_back(-w1s);
    }
    pieces.push_back({times.t1, t_f, confine});
    levels.push_back(omega2 * omega2);

    BangBang out;
    out.omega1 = omega1;
    out.omega2 = omega2;
    out.t1 = times.t1;
    out.t2 = times.t2;
    out.protocol.curve = sample(std::make_shared<const PiecewiseCurve>(std::move(pieces)), nodes, "bang-bang");
    out.protocol.profile = detail::constant_profile(out.protocol.curve.grid, levels);
    return out;
}

/// Bang-bang with omega1 = omega2 chosen so that t1 + t2 = t_f. Requires t_f <= the maximal duration.
inline BangBang bang_bang_for_duration(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    const double t_max = bang_bang_max_duration(spec);
    if (t_f > t_max) {
        std::ostringstream msg;
        msg << "bang-bang with omega1=omega2 cannot last " << t_f << " > t_f^max=" << t_max;
        throw Error(Errc::domain, msg.str());
    }
    const double w_min = std::sqrt(spec.final_frequency());
    auto excess = [&](double log_w) {
        const double w = std::exp(log_w);
        return bang_bang_times(spec, w, w).duration() - t_f;
    };
    if (!(bang_bang_times(spec, w_min, w_min).duration() > t_f)) return bang_bang(spec, w_min, w_min, nodes);
    double hi = std::log(2.0 * w_min);
    while (excess(hi) > 0.0) hi += std::log(2.0);
    const double w = std::exp(find_root(excess, std::log(w_min), hi, 1e-15));
    auto out = bang_bang(spec, w, w, nodes);
    out.protocol.curve.tag = "bang-bang";
    return out;
}

/// omega1 = 0 (free expansion) then omega2 = beta. Needs beta^2 gamma^4 > 1 and gamma^2 beta^2 >= 1.
inline BangBang bang_bang_na(const TrapSpec& spec, double beta, std::size_t nodes = kDefaultNodes) {
    const double g2 = spec.gamma2();
    {
        std::ostringstream msg;
        msg << "NA bang-bang needs beta > 0, beta^2 gamma^4 > 1 and gamma^2 beta^2 >= 1 (beta=" << beta << ")";
        const double lhs = g2 * beta * beta;
        require(beta > 0.0 && g2 * lhs > 1.0 &&
                    lhs >= 1.0 - 8.0 * std::numeric_limits<double>::epsilon(),
                Errc::domain, msg.str());
    }
    auto out = bang_bang(spec, 0.0, beta, nodes);
    out.protocol.curve.tag = "bang-bang-na";
    return out;
}

/// NA bang-bang with beta chosen so that t1 + t2 = t_f. Reachable durations lie in
/// (sqrt(gamma^2 - 1), gamma pi / 2].
inline BangBang bang_bang_na_for_duration(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    const double beta_min = std::sqrt(spec.final_frequency());
    const double t_max = bang_bang_times(spec, 0.0, beta_min).duration();
    const double t_min = std::sqrt(spec.gamma2() - 1.0);
    if (!(t_f > t_min && t_f <= t_max)) {
        std::ostringstream msg;
        msg << "NA bang-bang durations lie in (" << t_min << ", " << t_max << "], got " << t_f;
        throw Error(Errc::domain, msg.str());
    }
    auto excess = [&](double log_beta) {
        return bang_bang_times(spec, 0.0, std::exp(log_beta)).duration() - t_f;
    };
    if (!(t_max > t_f)) return bang_bang_na(spec, beta_min, nodes);
    double hi = std::log(2.0 * beta_min);
    while (excess(hi) > 0.0) hi += std::log(2.0);
    return bang_bang_na(spec, std::exp(find_root(excess, std::log(beta_min), hi, 1e-15)), nodes);
}

// ---------------------------------------------------------------------------------------------

struct ConstantPowerShot {
    Protocol protocol;
    double b_mismatch = 0.0;   // b(t_f) - gamma
    double bdot_final = 0.0;   // b'(t_f)
    double bddot_final = 0.0;  // b''(t_f)
};

/// Integrates b b''' - b'' b' + 4 b'/b^3 = 2 (1 - Omega_f) / t_f from b=1, b'=0, b''=0.
/// The end conditions at t_f are generally missed; the mismatch is reported.
inline ConstantPowerShot constant_power_shoot(const TrapSpec& spec, double t_f, std::size_t nodes = kDefaultNodes) {
    detail::require_duration(t_f);
    const double source = 2.0 * (1.0 - spec.final_frequency()) / t_f;
    auto third = [source](const State<3>& y) {
        return (source + y[2] * y[1] - 4.0 * y[1] / (y[0] * y[0] * y[0])) / y[0];
    };
    auto rhs = [&third](double t, const State<3>& y) -> State<3> {
        if (!(y[0] > kCollapseThreshold)) {
            std::ostringstream msg;
            msg << "constant-power shooting: b=" << y[0] << " collapsed at t=" << t;
            throw Error(Errc::collapse, msg.str());
        }
        return {y[1], y[2], third(y)};
    };
    ConstantPowerShot out;
    ScalingCurve& curve = out.protocol.curve;
    curve.grid = TimeGrid::uniform(t_f, nodes);
    curve.tag = "constant-power";
    const auto traj = ode_solve<3>(rhs, State<3>{1.0, 0.0, 0.0}, curve.grid.nodes());
    for (const auto& y : traj) {
        curve.b.push_back(y[0]);
        curve.bdot.push_back(y[1]);
        curve.bddot.push_back(y[2]);
        curve.bdddot.push_back(third(y));
    }
    curve.b0_plus_dot = curve.bdot_initial = curve.bdot.front();
    curve.bf_minus_dot = curve.bdot_final = curve.bdot.back();
    curve.check_positive();
    out.protocol.profile = inverse_engineer(curve);
    out.b_mismatch = curve.b.back() - spec.gamma();
    out.bdot_final = curve.bdot.back();
    out.bddot_final = curve.bddot.back();
    return out;
}

// ---------------------------------------------------------------------------------------------
// Generic construction for tools and sweeps.

namespace family {
struct Quintic {};
struct Septic {
    double c3 = 0.0;
    double c4 = 0.0;
};
struct QuasiOptimal {};
struct DiracImpulse {};
struct HybridCaps {
    double tau_l = 0.0;
    double tau_s = 0.0;
};
struct LinearBottom {};
/// omega1 = omega2 solved from t_f.
struct BangBangEqual {};
/// Explicit frequencies; t_f follows from them.
struct BangBang {
    double omega1 = 0.0;
    double omega2 = 0.0;
};
struct BangBangNA {
    double beta = 0.0;
};
struct ConstantPowerShoot {};
}  // namespace family

using Family = std::variant<family::Quintic, family::Septic, family::QuasiOptimal, family::DiracImpulse,
                            family::HybridCaps, family::LinearBottom, family::BangBangEqual, family::BangBang,
                            family::BangBangNA, family::ConstantPowerShoot>;

struct ProtocolParams {
    Family family;
    double t_f = 1.0;  // ignored by BangBang and BangBangNA, whose duration is derived
    TrapSpec spec;
};

inline std::string family_name(const Family& f) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, family::Quintic>) return "quintic";
            else if constexpr (std::is_same_v<T, family::Septic>) return "septic";
            else if constexpr (std::is_same_v<T, family::QuasiOptimal>) return "quasi-optimal";
            else if constexpr (std::is_same_v<T, family::DiracImpulse>) return "dirac";
            else if constexpr (std::is_same_v<T, family::HybridCaps>) return "hybrid";
            else if constexpr (std::is_same_v<T, family::LinearBottom>) return "linear";
            else if constexpr (std::is_same_v<T, family::BangBangEqual>) return "bang-bang";
            else if constexpr (std::is_same_v<T, family::BangBang>) return "bang-bang";
            else if constexpr (std::is_same_v<T, family::BangBangNA>) return "bang-bang-na";
            else return "constant-power";
        },
        f);
}

/// True for families whose curve meets b(0)=1, b'(0)=0, b(t_f)=gamma, b'(t_f)=0
/// (the Dirac family after its impulses).
inline bool meets_boundary_conditions(const Family& f) {
    return !std::holds_alternative<family::QuasiOptimal>(f) && !std::holds_alternative<family::LinearBottom>(f) &&
           !std::holds_alternative<family::ConstantPowerShoot>(f);
}

inline Protocol make_protocol(const ProtocolParams& params, std::size_t nodes = kDefaultNodes) {
    params.spec.validate();
    const auto& spec = params.spec;
    const double t_f = params.t_f;
    return std::visit(
        [&](const auto& v) -> Protocol {
            using T = std::decay_t<decltype(v)>;
            auto with_profile = [](ScalingCurve c) {
                Protocol p{std::move(c), {}};
                p.profile = inverse_engineer(p.curve);
                return p;
            };
            if constexpr (std::is_same_v<T, family::Quintic>) return with_profile(quintic(spec, t_f, nodes));
            else if constexpr (std::is_same_v<T, family::Septic>) return with_profile(septic(spec, t_f, v.c3, v.c4, nodes));
            else if constexpr (std::is_same_v<T, family::QuasiOptimal>) return with_profile(quasi_optimal(spec, t_f, nodes));
            else if constexpr (std::is_same_v<T, family::DiracImpulse>) return dirac_impulse_protocol(spec, t_f, nodes);
            else if constexpr (std::is_same_v<T, family::HybridCaps>)
                return with_profile(hybrid_caps(spec, t_f, v.tau_l, v.tau_s, nodes));
            else if constexpr (std::is_same_v<T, family::LinearBottom>) return linear_bottom(spec, t_f, nodes);
            else if constexpr (std::is_same_v<T, family::BangBangEqual>) return bang_bang_for_duration(spec, t_f, nodes).protocol;
            else if constexpr (std::is_same_v<T, family::BangBang>) return bang_bang(spec, v.omega1, v.omega2, nodes).protocol;
            else if constexpr (std::is_same_v<T, family::BangBangNA>) return bang_bang_na(spec, v.beta, nodes).protocol;
            else return constant_power_shoot(spec, t_f, nodes).protocol;
        },
        params.family);
}

}  // namespace sta
