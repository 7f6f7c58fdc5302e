#pragma once

// Trap endpoints and the unit convention.
//
// All library math runs in dimensionless units: time tau = omega0 * t,
// frequency Omega = omega / omega0 and energy e = E / (hbar * omega0).
// SI values only appear through TrapSpec at the boundary.

#include <cmath>
#include <numbers>
#include <sstream>

#include "sta/error.hpp"

namespace sta {

inline constexpr double kHbarSI = 1.054571817e-34;  // J s

struct TrapSpec {
    double omega0 = 1.0;   // rad/s
    double omega_f = 1.0;  // rad/s
    int n = 0;             // mode index
    double hbar = 1.0;     // J s; 1 in dimensionless mode

    /// omega0 = 1, omega_f = 1 / gamma^2, hbar = 1.
    static TrapSpec dimensionless(double gamma, int n = 0) {
        TrapSpec spec{1.0, 1.0 / (gamma * gamma), n, 1.0};
        spec.validate();
        return spec;
    }

    /// Ordinary frequencies in Hz, converted to angular frequencies.
    static TrapSpec from_hz(double f0_hz, double ff_hz, int n = 0, double hbar = kHbarSI) {
        TrapSpec spec{2.0 * std::numbers::pi * f0_hz, 2.0 * std::numbers::pi * ff_hz, n, hbar};
        spec.validate();
        return spec;
    }

    void validate() const {
        std::ostringstream msg;
        msg << "TrapSpec{omega0=" << omega0 << ", omega_f=" << omega_f << ", n=" << n << "}";
        require(std::isfinite(omega0) && omega0 > 0.0, Errc::invalid_argument,
                msg.str() + " requires omega0 > 0");
        require(std::isfinite(omega_f) && omega_f > 0.0, Errc::invalid_argument,
                msg.str() + " requires omega_f > 0");
        require(omega0 >= omega_f, Errc::invalid_argument,
                msg.str() + " requires omega0 >= omega_f (expansion)");
        require(n >= 0, Errc::invalid_argument, msg.str() + " requires n >= 0");
        require(hbar > 0.0, Errc::invalid_argument, msg.str() + " requires hbar > 0");
    }

    double gamma() const { return std::sqrt(omega0 / omega_f); }
    /// gamma^2 = omega0 / omega_f.
    double gamma2() const { return omega0 / omega_f; }
    /// Omega_f = omega_f / omega0 = 1 / gamma^2.
    double final_frequency() const { return omega_f / omega0; }
    /// 2n + 1
    double level_factor() const { return 2.0 * n + 1.0; }
};

inline double to_dimensionless(const TrapSpec& spec, double seconds) { return spec.omega0 * seconds; }
inline double from_dimensionless(const TrapSpec& spec, double tau) { return tau / spec.omega0; }

inline double frequency_to_dimensionless(const TrapSpec& spec, double omega) { return omega / spec.omega0; }
inline double frequency_from_dimensionless(const TrapSpec& spec, double omega) { return omega * spec.omega0; }

inline double energy_to_dimensionless(const TrapSpec& spec, double joules) {
    return joules / (spec.hbar * spec.omega0);
}
inline double energy_from_dimensionless(const TrapSpec& spec, double e) { return e * spec.hbar * spec.omega0; }

}  // namespace sta
