#pragma once

// Scaling functions b(t) and frequency schedules omega^2(t), in dimensionless units.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sta/error.hpp"
#include "sta/grid.hpp"

namespace sta {

/// omega^2 values in [-kOmega2Tolerance, 0) are treated as omega = 0.
inline constexpr double kOmega2Tolerance = 1e-12;

struct CurvePoint {
    double b = 1.0;
    double bdot = 0.0;
    double bddot = 0.0;
    double bdddot = 0.0;
};

/// One closed-form piece of b(t) on [t_begin, t_end].
struct CurvePiece {
    double t_begin = 0.0;
    double t_end = 0.0;
    std::function<CurvePoint(double)> eval;
};

/// Closed-form piecewise scaling function. Pieces are contiguous and non-degenerate.
class PiecewiseCurve {
public:
    PiecewiseCurve() = default;
    explicit PiecewiseCurve(std::vector<CurvePiece> pieces) : pieces_(std::move(pieces)) {
        require(!pieces_.empty(), Errc::invalid_argument, "curve needs at least one piece");
        require(pieces_.front().t_begin == 0.0, Errc::invalid_argument, "curve must start at t=0");
        for (std::size_t k = 0; k < pieces_.size(); ++k) {
            require(pieces_[k].t_end > pieces_[k].t_begin, Errc::invalid_argument, "curve piece has zero length");
            if (k > 0) {
                require(pieces_[k].t_begin == pieces_[k - 1].t_end, Errc::invalid_argument,
                        "curve pieces must be contiguous");
            }
        }
    }

    std::span<const CurvePiece> pieces() const { return pieces_; }
    double duration() const { return pieces_.back().t_end; }

    std::vector<double> breakpoints() const {
        std::vector<double> out{0.0};
        for (const auto& p : pieces_) out.push_back(p.t_end);
        return out;
    }

    /// Right-continuous lookup; t = t_f evaluates the last piece.
    CurvePoint evaluate(double t) const {
        for (const auto& p : pieces_) {
            if (t < p.t_end) return p.eval(t);
        }
        return pieces_.back().eval(t);
    }

private:
    std::vector<CurvePiece> pieces_;
};

/// A scaling function sampled on a TimeGrid.
struct ScalingCurve {
    TimeGrid grid;
    std::vector<double> b;
    std::vector<double> bdot;
    std::vector<double> bddot;
    std::vector<double> bdddot;  // empty when the third derivative is unknown

    // One-sided derivatives just inside the interval (0+ and t_f-).
    double b0_plus_dot = 0.0;
    double bf_minus_dot = 0.0;
    // Derivatives outside the interval (0- and t_f+); differ from the above only across
    // endpoint impulses.
    double bdot_initial = 0.0;
    double bdot_final = 0.0;

    std::string tag;
    std::shared_ptr<const PiecewiseCurve> analytic;  // closed form, when the protocol has one

    std::size_t size() const { return b.size(); }
    double duration() const { return grid.duration(); }
    double b_initial() const { return b.front(); }
    double b_final() const { return b.back(); }
    bool has_third_derivative() const { return bdddot.size() == b.size(); }

    void check_positive() const {
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!(b[i] > 0.0)) {
                std::ostringstream msg;
                msg << "scaling function b=" << b[i] << " <= 0 at t=" << grid[i] << " (" << tag << ")";
                throw Error(Errc::collapse, msg.str());
            }
        }
    }
};

/// Samples a closed-form curve; grid segment k corresponds to piece k.
inline ScalingCurve sample(std::shared_ptr<const PiecewiseCurve> curve, std::size_t nodes, std::string tag) {
    ScalingCurve out;
    out.grid = TimeGrid::piecewise(curve->breakpoints(), nodes);
    out.tag = std::move(tag);
    const auto pieces = curve->pieces();
    const auto t = out.grid.nodes();
    out.b.resize(t.size());
    out.bdot.resize(t.size());
    out.bddot.resize(t.size());
    out.bdddot.resize(t.size());
    const auto segments = out.grid.segments();
    for (std::size_t k = 0; k < segments.size(); ++k) {
        for (std::size_t i = segments[k].first; i <= segments[k].last(); ++i) {
            const CurvePoint p = pieces[k].eval(t[i]);
            out.b[i] = p.b;
            out.bdot[i] = p.bdot;
            out.bddot[i] = p.bddot;
            out.bdddot[i] = p.bdddot;
        }
    }
    out.b0_plus_dot = out.bdot.front();
    out.bf_minus_dot = out.bdot.back();
    out.bdot_initial = out.b0_plus_dot;
    out.bdot_final = out.bf_minus_dot;
    out.analytic = std::move(curve);
    out.check_positive();
    return out;
}

struct Impulse {
    double time = 0.0;
    double strength = 0.0;  // contributes strength * delta(t - time) to omega^2
};

/// omega^2 on one grid segment, callable at any t inside it.
struct FrequencyPiece {
    double t_begin = 0.0;
    double t_end = 0.0;
    std::function<double(double)> omega2;
};

/// Piecewise omega^2(t) plus Dirac impulses. Samples live on `grid`; impulses are never sampled.
struct FrequencyProfile {
    TimeGrid grid;
    std::vector<double> omega2;
    std::vector<double> omega2_rate;  // d(omega^2)/dt per node, empty when unknown
    std::vector<FrequencyPiece> pieces;
    std::vector<Impulse> impulses;

    double duration() const { return grid.duration(); }

    double min_omega2() const {
        double m = std::numeric_limits<double>::infinity();
        for (double w2 : omega2) m = std::min(m, w2);
        return m;
    }
    bool has_imaginary() const { return min_omega2() < 0.0; }
    bool has_rate() const { return omega2_rate.size() == omega2.size(); }

    /// Right-continuous continuous-time evaluation (impulses excluded).
    double evaluate(double t) const {
        for (const auto& p : pieces) {
            if (t < p.t_end) return p.omega2(t);
        }
        return pieces.back().omega2(t);
    }

    void validate() const {
        const auto segments = grid.segments();
        require(pieces.size() == segments.size(), Errc::invalid_argument,
                "frequency profile: one piece per grid segment required");
        require(omega2.size() == grid.size(), Errc::grid_mismatch, "frequency profile: sample count != grid size");
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            require(pieces[k].t_begin == grid[segments[k].first] && pieces[k].t_end == grid[segments[k].last()],
                    Errc::invalid_argument, "frequency profile: pieces must tile [0, t_f] along the grid");
        }
        for (const auto& imp : impulses) {
            const bool at_boundary =
                imp.time == 0.0 || imp.time == duration() ||
                std::any_of(pieces.begin(), pieces.end(), [&](const FrequencyPiece& p) { return p.t_begin == imp.time; });
            require(at_boundary, Errc::invalid_argument, "frequency profile: impulses must sit on segment boundaries");
        }
    }
};

/// Linear interpolation of grid samples inside one segment.
inline std::function<double(double)> interpolate_segment(const TimeGrid& grid, std::size_t segment,
                                                         const std::vector<double>& values) {
    const auto seg = grid.segments()[segment];
    std::vector<double> x(grid.nodes().begin() + static_cast<std::ptrdiff_t>(seg.first),
                          grid.nodes().begin() + static_cast<std::ptrdiff_t>(seg.first + seg.count));
    std::vector<double> y(values.begin() + static_cast<std::ptrdiff_t>(seg.first),
                          values.begin() + static_cast<std::ptrdiff_t>(seg.first + seg.count));
    auto data = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(std::move(x), std::move(y));
    return [data](double t) {
        const auto& [xs, ys] = *data;
        if (t <= xs.front()) return ys.front();
        if (t >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - xs.begin());
        const double w = (t - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return ys[j - 1] + w * (ys[j] - ys[j - 1]);
    };
}

/// omega from omega^2 for the non-adiabatic machinery; throws NonRealFrequency when omega^2 < 0.
inline double real_frequency(double omega2, double t) {
    if (omega2 < -kOmega2Tolerance) {
        std::ostringstream msg;
        msg << "omega^2=" << omega2 << " < 0 at t=" << t << "; the non-adiabatic energy needs omega >= 0";
        throw Error(Errc::non_real_frequency, msg.str());
    }
    return std::sqrt(std::max(0.0, omega2));
}

}  // namespace sta
