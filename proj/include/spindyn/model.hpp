#pragma once

#include "spindyn/types.hpp"

namespace spindyn {

/// Parameters of the two-spin model
///   H = eps1_b0 * S1z (x) I  +  eps2_b0 * I (x) S2z  +  alpha * S1x (x) S2x,
/// with hbar = 1. The field prefactors eps_i*B0 default to 1, which sets the
/// time unit: one Larmor period is 2*pi.
struct ModelParams {
    SpinMagnitude s1;
    SpinMagnitude s2;
    double alpha = 1.0;
    double eps1_b0 = 1.0;
    double eps2_b0 = 1.0;

    Index dim() const { return s1.dim() * s2.dim(); }
};

/// Uniform time grid, t_start < t_end, n_points >= 2.
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    Index n_points = 2;

    TimeGrid() = default;
    TimeGrid(double start, double end, Index points)
        : t_start(start), t_end(end), n_points(points) {
        if (!(t_end > t_start)) throw ConfigError("time grid requires t_end > t_start");
        if (n_points < 2) throw ConfigError("time grid requires at least 2 points");
    }

    double step() const { return (t_end - t_start) / static_cast<double>(n_points - 1); }
    double time_at(Index i) const { return t_start + step() * static_cast<double>(i); }
    Index size() const { return n_points; }

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
        return a.t_start == b.t_start && a.t_end == b.t_end && a.n_points == b.n_points;
    }
};

}  // namespace spindyn
