#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "sta/error.hpp"
#include "sta/grid.hpp"

namespace sta {

/// Composite Simpson rule for uniformly spaced samples. Odd sample count required.
inline double simpson(std::span<const double> y, double h) {
    require(y.size() >= 3 && y.size() % 2 == 1, Errc::invalid_argument,
            "Simpson rule needs an odd sample count >= 3, got " + std::to_string(y.size()));
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) (i % 2 == 1 ? odd : even) += y[i];
    return h / 3.0 * (y.front() + y.back() + 4.0 * odd + 2.0 * even);
}

inline double trapezoid(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), Errc::grid_mismatch, "trapezoid: abscissa and ordinate lengths differ");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

/// Integral of sampled values over the whole grid, segment by segment.
/// Uniform odd segments use Simpson (O(h^4)); anything else falls back to trapezoid.
inline double integrate(const TimeGrid& grid, std::span<const double> samples) {
    require(samples.size() == grid.size(), Errc::grid_mismatch,
            "integrate: " + std::to_string(samples.size()) + " samples on a " + std::to_string(grid.size()) +
                "-node grid");
    const auto nodes = grid.nodes();
    double total = 0.0;
    for (const auto& seg : grid.segments()) {
        const auto x = nodes.subspan(seg.first, seg.count);
        const auto y = samples.subspan(seg.first, seg.count);
        if (seg.uniform && seg.count >= 3 && seg.count % 2 == 1) {
            total += simpson(y, (x.back() - x.front()) / static_cast<double>(seg.count - 1));
        } else {
            total += trapezoid(x, y);
        }
    }
    return total;
}

/// (1 / t_f) * integral over the grid.
inline double time_average(const TimeGrid& grid, std::span<const double> samples) {
    return integrate(grid, samples) / grid.duration();
}

}  // namespace sta
