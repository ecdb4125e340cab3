#pragma once

#include <cmath>
#include <limits>

#include "uniseek/geometry.hpp"
#include "uniseek/sde.hpp"

namespace uniseek {

/// Scalar summaries of one closed-loop run. All fields are pure functions of
/// the recorded trajectory and the metric configuration.
struct RunMetrics {
    double trailing_mean_distance = 0.0;  ///< mean |r_c - r*| over the trailing window
    double final_distance = 0.0;          ///< |r_c - r*| at the last sample
    bool reached_delta_ball = false;
    double time_to_delta_ball = std::numeric_limits<double>::quiet_NaN();
    double angular_drift = 0.0;      ///< mean d/dt arg(r_c - r*) over the window (rad/s)
    double heading_alignment = 0.0;  ///< mean cos(theta - arg(r_c - r*)) over the window
    double v_min = 0.0;              ///< forward-velocity extremes over every step
    double v_max = 0.0;
    double window_start = 0.0;  ///< trailing window is [window_start, t_end]
    double delta = 0.0;         ///< ball radius used for time_to_delta_ball
};

struct MetricsConfig {
    double delta = 0.1;            ///< delta-ball radius (same length units as R)
    double window_fraction = 0.2;  ///< trailing window = final fraction of the horizon
};

/// Compute run metrics against the source location. The delta-ball time is
/// the earliest recorded t0 such that the distance stays below delta on the
/// whole stretch [t0, t0 + W_t], where W_t is the trailing-window length.
[[nodiscard]] inline RunMetrics compute_metrics(const Trajectory& traj, const Vec2& source,
                                                const MetricsConfig& cfg = {}) {
    if (traj.rows.empty()) {
        throw InvalidParameter("compute_metrics: empty trajectory");
    }
    const double t_end = traj.rows.back().t;
    const double window = cfg.window_fraction * t_end;

    RunMetrics m;
    m.delta = cfg.delta;
    m.window_start = t_end - window;
    m.v_min = traj.v_min;
    m.v_max = traj.v_max;

    double dist_sum = 0.0, align_sum = 0.0, drift_sum = 0.0;
    std::size_t n_window = 0, n_align = 0;
    bool have_prev_bearing = false;
    double prev_bearing = 0.0, first_bearing_t = 0.0, last_bearing_t = 0.0;

    for (const TrajectoryRow& row : traj.rows) {
        const double dx = row.state.x_c - source.x;
        const double dy = row.state.y_c - source.y;
        const double dist = std::hypot(dx, dy);
        if (row.t + window >= t_end) {  // row.t >= window_start, robust to rounding
            dist_sum += dist;
            ++n_window;
            if (dist > 0.0) {
                const double bearing = std::atan2(dy, dx);
                align_sum += std::cos(row.state.theta - bearing);
                ++n_align;
                if (have_prev_bearing) {
                    drift_sum += wrap_angle(bearing - prev_bearing);
                } else {
                    first_bearing_t = row.t;
                }
                prev_bearing = bearing;
                last_bearing_t = row.t;
                have_prev_bearing = true;
            }
        }
    }
    m.trailing_mean_distance = n_window > 0 ? dist_sum / static_cast<double>(n_window) : 0.0;
    m.heading_alignment = n_align > 0 ? align_sum / static_cast<double>(n_align) : 0.0;
    m.angular_drift =
        last_bearing_t > first_bearing_t ? drift_sum / (last_bearing_t - first_bearing_t) : 0.0;

    {
        const auto& last = traj.rows.back();
        m.final_distance =
            std::hypot(last.state.x_c - source.x, last.state.y_c - source.y);
    }

    // Earliest start of a window-long stretch inside the delta ball: two
    // pointers over the recorded samples.
    const auto& rows = traj.rows;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < rows.size(); ++hi) {
        const double dist = std::hypot(rows[hi].state.x_c - source.x,
                                       rows[hi].state.y_c - source.y);
        if (dist >= cfg.delta) {
            lo = hi + 1;
            continue;
        }
        if (lo < rows.size() && rows[hi].t - rows[lo].t >= window && window > 0.0) {
            m.reached_delta_ball = true;
            m.time_to_delta_ball = rows[lo].t;
            break;
        }
    }
    return m;
}

}  // namespace uniseek
