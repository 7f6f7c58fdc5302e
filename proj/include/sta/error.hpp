#pragma once

#include <stdexcept>
#include <string>

namespace sta {

enum class Errc {
    invalid_argument,
    grid_mismatch,
    domain,
    non_real_frequency,
    power_undefined,
    infeasible,
    collapse,
    blow_up,
};

inline const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::grid_mismatch: return "GridMismatch";
        case Errc::domain: return "DomainError";
        case Errc::non_real_frequency: return "NonRealFrequency";
        case Errc::power_undefined: return "PowerUndefined";
        case Errc::infeasible: return "Infeasible";
        case Errc::collapse: return "Collapse";
        case Errc::blow_up: return "BlowUp";
    }
    return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the contract that was violated.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline void require(bool condition, Errc code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

}  // namespace sta
