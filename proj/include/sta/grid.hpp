#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sta/error.hpp"

namespace sta {

inline constexpr std::size_t kDefaultNodes = 2001;

/// Sample times over [0, t_end], split into segments.
///
/// Each segment is a contiguous index range of strictly increasing nodes.
/// Adjacent segments share their breakpoint time, which is stored twice:
/// once as the last node of the left segment and once as the first node of
/// the right segment, so samples can carry both one-sided limits.
class TimeGrid {
public:
    struct Segment {
        std::size_t first = 0;
        std::size_t count = 0;
        bool uniform = true;

        std::size_t last() const { return first + count - 1; }
    };

    TimeGrid() = default;

    static TimeGrid uniform(double t_end, std::size_t nodes = kDefaultNodes) {
        const double breaks[] = {0.0, t_end};
        return piecewise(breaks, nodes);
    }

    /// Uniform segments between consecutive breakpoints; each gets `nodes_per_segment`
    /// nodes (rounded up to odd). Zero-length segments are dropped.
    static TimeGrid piecewise(std::span<const double> breakpoints,
                              std::size_t nodes_per_segment = kDefaultNodes) {
        require(breakpoints.size() >= 2, Errc::invalid_argument, "grid needs at least two breakpoints");
        require(breakpoints.front() == 0.0, Errc::invalid_argument, "grid must start at 0");
        require(nodes_per_segment >= 3, Errc::invalid_argument, "grid needs at least 3 nodes per segment");
        if (nodes_per_segment % 2 == 0) ++nodes_per_segment;

        TimeGrid grid;
        for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
            const double a = breakpoints[k];
            const double b = breakpoints[k + 1];
            require(std::isfinite(b) && b >= a, Errc::invalid_argument, "grid breakpoints must be non-decreasing");
            if (b == a) continue;
            Segment seg{grid.nodes_.size(), nodes_per_segment, true};
            const double h = (b - a) / static_cast<double>(nodes_per_segment - 1);
            for (std::size_t i = 0; i < nodes_per_segment; ++i) {
                grid.nodes_.push_back(i + 1 == nodes_per_segment ? b : a + h * static_cast<double>(i));
            }
            grid.segments_.push_back(seg);
        }
        require(!grid.segments_.empty(), Errc::invalid_argument, "grid has zero duration");
        return grid;
    }

    /// Arbitrary strictly increasing nodes starting at 0; integrated with the trapezoid rule
    /// unless the spacing is uniform.
    static TimeGrid from_nodes(std::vector<double> nodes) {
        require(nodes.size() >= 2, Errc::invalid_argument, "grid needs at least two nodes");
        require(nodes.front() == 0.0, Errc::invalid_argument, "grid must start at 0");
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            require(nodes[i] > nodes[i - 1], Errc::invalid_argument, "grid nodes must be strictly increasing");
        }
        TimeGrid grid;
        const double h = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
        bool uniform = true;
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            if (std::abs((nodes[i] - nodes[i - 1]) - h) > 1e-12 * std::max(1.0, std::abs(h))) uniform = false;
        }
        grid.segments_.push_back({0, nodes.size(), uniform});
        grid.nodes_ = std::move(nodes);
        return grid;
    }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const Segment> segments() const { return segments_; }
    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    double duration() const { return nodes_.empty() ? 0.0 : nodes_.back(); }

    /// Interior segment boundaries (excluding 0 and t_end).
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        for (std::size_t k = 1; k < segments_.size(); ++k) out.push_back(nodes_[segments_[k].first]);
        return out;
    }

    bool same_layout(const TimeGrid& other) const {
        if (segments_.size() != other.segments_.size() || nodes_.size() != other.nodes_.size()) return false;
        for (std::size_t k = 0; k < segments_.size(); ++k) {
            if (segments_[k].first != other.segments_[k].first || segments_[k].count != other.segments_[k].count)
                return false;
        }
        return std::equal(nodes_.begin(), nodes_.end(), other.nodes_.begin());
    }

private:
    std::vector<double> nodes_;
    std::vector<Segment> segments_;
};

}  // namespace sta
