#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "uniseek/closed_loop.hpp"
#include "uniseek/faults.hpp"
#include "uniseek/geometry.hpp"
#include "uniseek/params.hpp"
#include "uniseek/signal_field.hpp"

namespace uniseek {

/// I1(a, g) = exp(-a^2 g^2 / 4): the cos(a y) moment of the stationary
/// perturbation density. Symmetric in a and g (depends only on the product).
[[nodiscard]] inline double I1(double a, double g) { return std::exp(-(a * a * g * g) / 4.0); }

/// I2(a, g) = [exp(-(a-1)^2 g^2/4) - exp(-(a+1)^2 g^2/4)] / 2: the
/// sin(a y) sin(y) moment. Positive for a, g > 0.
[[nodiscard]] inline double I2(double a, double g) {
    return (std::exp(-((a - 1.0) * (a - 1.0) * g * g) / 4.0) -
            std::exp(-((a + 1.0) * (a + 1.0) * g * g) / 4.0)) /
           2.0;
}

/// Averaged error state for an elliptical (q_p possibly nonzero) field.
/// r is the signed distance from the source in the polar chart
/// r* - r_c = r (cos theta_star, sin theta_star); theta_star is the bearing
/// from the vehicle center to the source; theta_hat = theta - a eta is the
/// dither-free heading; e is the shifted washout error (e - f*) + q_r R^2.
struct AvgStateElliptical {
    double r = 0.0;
    double theta_star = 0.0;
    double theta_hat = 0.0;
    double e = 0.0;

    [[nodiscard]] std::array<double, 4> as_array() const { return {r, theta_star, theta_hat, e}; }
    [[nodiscard]] static AvgStateElliptical from_array(const std::array<double, 4>& v) {
        return {v[0], v[1], v[2], v[3]};
    }
};

/// Averaged error state for a circular field; the rotational symmetry reduces
/// the order by one via theta = theta_hat - theta_star.
struct AvgStateCircular {
    double r = 0.0;
    double theta = 0.0;
    double e = 0.0;

    [[nodiscard]] std::array<double, 3> as_array() const { return {r, theta, e}; }
    [[nodiscard]] static AvgStateCircular from_array(const std::array<double, 3>& v) {
        return {v[0], v[1], v[2]};
    }
};

/// Guard radius for the polar chart: the averaged equations divide by r, so
/// states closer to the source than this fault instead of being regularized.
inline constexpr double kPolarChartRMin = 1e-9;

namespace detail {

inline void require_quadratic(const ScalarField& field, const char* where) {
    if (!field.is_quadratic()) {
        throw InvalidParameter(std::string(where) + ": field must be quadratic (circular or elliptical)");
    }
}

inline void require_circular(const ScalarField& field, const char* where) {
    require_quadratic(field, where);
    if (field.q_p() != 0.0) {
        throw InvalidParameter(std::string(where) + ": field must be circular (q_p = 0)");
    }
}

}  // namespace detail

/// Right-hand side of the averaged error system for an elliptical field.
/// Exact transcription of the averaged dynamics (Gaussian moments of the
/// dithered error system); throws SingularChartFault when |r| <= r_min.
[[nodiscard]] inline AvgStateElliptical elliptical_avg_rhs(const AvgStateElliptical& s,
                                                           const ControllerParams& p,
                                                           const ScalarField& field,
                                                           double r_min = kPolarChartRMin) {
    detail::require_quadratic(field, "elliptical_avg_rhs");
    if (std::abs(s.r) <= r_min) {
        throw SingularChartFault(std::numeric_limits<double>::quiet_NaN(), s.r);
    }
    const double qr = field.q_r();
    const double qp = field.q_p();
    const double rt = s.r, ts = s.theta_star, th = s.theta_hat, et = s.e;
    const double b = p.b, c = p.c, h = p.h, Vc = p.V_c, R = p.R;

    const double i1a = I1(p.a, p.g), i12a = I1(2.0 * p.a, p.g), i13a = I1(3.0 * p.a, p.g);
    const double i2a = I2(p.a, p.g), i22a = I2(2.0 * p.a, p.g);

    const double phi0 = et + rt * rt * (qr + 2.0 * qp * std::cos(2.0 * ts));
    const double phi1 = std::cos(3.0 * th - ts) * i13a + std::cos(th + ts) * i1a;
    const double phi2 = qr * std::cos(2.0 * th - 2.0 * ts) * i12a + 2.0 * qp * std::cos(2.0 * ts) +
                        2.0 * qp * std::cos(2.0 * th) * i12a + qr;
    const double phi3 = std::sin(3.0 * th - ts) * i13a - std::sin(th + ts) * i1a;
    const double phi4 = qr * std::sin(2.0 * th - 2.0 * ts) * i12a - 2.0 * qp * std::sin(2.0 * ts) +
                        2.0 * qp * std::sin(2.0 * th) * i12a;
    const double phi5 = qr * std::sin(th - ts) + 2.0 * qp * std::sin(th + ts);
    const double phi6 = qr * std::cos(th - ts) + 2.0 * qp * std::cos(th + ts);

    AvgStateElliptical d;
    d.r = (b * phi0 - Vc) * std::cos(th - ts) * i1a + b * qp * R * R * phi1 - b * rt * R * phi2;
    d.theta_star =
        (b * phi0 - Vc) / rt * std::sin(th - ts) * i1a + b * qp * R * R / rt * phi3 - b * R * phi4;
    d.theta_hat = 2.0 * c * qp * R * R * std::sin(2.0 * th) * i22a - 2.0 * c * rt * R * phi5 * i2a;
    d.e = -2.0 * h * qp * R * R * std::cos(2.0 * th) * i12a - h * phi0 +
          2.0 * h * rt * R * phi6 * i1a;
    return d;
}

/// Right-hand side of the averaged error system for a circular field
/// (reduced coordinates r, theta = theta_hat - theta_star, e).
[[nodiscard]] inline AvgStateCircular circular_avg_rhs(const AvgStateCircular& s,
                                                       const ControllerParams& p,
                                                       const ScalarField& field,
                                                       double r_min = kPolarChartRMin) {
    detail::require_circular(field, "circular_avg_rhs");
    if (std::abs(s.r) <= r_min) {
        throw SingularChartFault(std::numeric_limits<double>::quiet_NaN(), s.r);
    }
    const double qr = field.q_r();
    const double rt = s.r, tt = s.theta, et = s.e;
    const double b = p.b, c = p.c, h = p.h, Vc = p.V_c, R = p.R;
    const double i1a = I1(p.a, p.g), i12a = I1(2.0 * p.a, p.g), i2a = I2(p.a, p.g);

    AvgStateCircular d;
    d.r = (b * qr * rt * rt + b * et - Vc) * std::cos(tt) * i1a -
          b * qr * R * rt * std::cos(2.0 * tt) * i12a - b * qr * R * rt;
    d.theta = -2.0 * c * qr * R * rt * std::sin(tt) * i2a +
              (Vc - b * (qr * rt * rt + et)) / rt * std::sin(tt) * i1a +
              b * qr * R * std::sin(2.0 * tt) * i12a;
    d.e = -h * qr * rt * rt - h * et + 2.0 * h * qr * R * rt * std::cos(tt) * i1a;
    return d;
}

/// Lift a closed-loop sample into the averaged elliptical coordinates.
/// theta_star = atan2(y* - y_c, x* - x_c) (bearing toward the source);
/// throws UndefinedBearingFault at r_c = r*. Analysis-side code: uses f*.
[[nodiscard]] inline AvgStateElliptical lift_to_avg(const VehicleState& s,
                                                    const ControllerParams& p,
                                                    const ScalarField& field) {
    detail::require_quadratic(field, "lift_to_avg");
    const Vec2 src = field.source();
    const double dx = src.x - s.x_c;
    const double dy = src.y - s.y_c;
    const double r = std::hypot(dx, dy);
    if (r == 0.0) {
        throw UndefinedBearingFault();
    }
    AvgStateElliptical out;
    out.r = r;
    out.theta_star = std::atan2(dy, dx);
    out.theta_hat = s.theta - p.a * s.eta;
    out.e = (s.e - field.f_star()) + field.q_r() * p.R * p.R;
    return out;
}

/// Circular variant of the lift: additionally reduces to theta = theta_hat - theta_star.
[[nodiscard]] inline AvgStateCircular lift_to_avg_circular(const VehicleState& s,
                                                           const ControllerParams& p,
                                                           const ScalarField& field) {
    detail::require_circular(field, "lift_to_avg_circular");
    const AvgStateElliptical e = lift_to_avg(s, p, field);
    return {e.r, e.theta_hat - e.theta_star, e.e};
}

/// Map a chart point with negative radius onto its r >= 0 twin.
/// (r, theta_star) and (-r, theta_star + pi) describe the same position, with
/// theta_hat and e untouched.
[[nodiscard]] inline AvgStateElliptical canonical_chart_point(const AvgStateElliptical& s) {
    if (s.r >= 0.0) return s;
    return {-s.r, wrap_angle(s.theta_star + M_PI), s.theta_hat, s.e};
}

/// Circular chart twin: theta = theta_hat - theta_star shifts by pi when the
/// radius sign flips.
[[nodiscard]] inline AvgStateCircular canonical_chart_point(const AvgStateCircular& s) {
    if (s.r >= 0.0) return s;
    return {-s.r, wrap_angle(s.theta + M_PI), s.e};
}

struct AvgConfig {
    double dt = 1e-3;        ///< RK4 step (averaged dynamics are non-stiff)
    double t_end = 100.0;
    int record_stride = 10;  ///< keep every record_stride-th step (plus first and last)
    double r_min = kPolarChartRMin;
};

template <typename State>
struct AvgTrajectory {
    std::vector<double> t;
    std::vector<State> states;
};

/// One classical RK4 step of dx/dt = rhs(x).
template <std::size_t N, typename Rhs>
[[nodiscard]] std::array<double, N> rk4_step(const std::array<double, N>& x, double dt, Rhs&& rhs) {
    const std::array<double, N> k1 = rhs(x);
    std::array<double, N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const std::array<double, N> k2 = rhs(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const std::array<double, N> k3 = rhs(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = x[i] + dt * k3[i];
    const std::array<double, N> k4 = rhs(tmp);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

/// Integrate an averaged ODE with fixed-step RK4, recording every
/// record_stride-th step plus the first and last. The radius (component 0,
/// when guard_radius is set) is checked against r_min at accepted steps and
/// the chart fault carries the offending time.
template <std::size_t N, typename Rhs>
[[nodiscard]] AvgTrajectory<std::array<double, N>> integrate_avg(Rhs&& rhs,
                                                                 const std::array<double, N>& x0,
                                                                 const AvgConfig& cfg,
                                                                 bool guard_radius = true) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
        throw InvalidParameter("integrate_avg: dt must be positive and finite");
    }
    if (!(cfg.t_end > 0.0)) {
        throw InvalidParameter("integrate_avg: t_end must be positive");
    }
    if (cfg.record_stride < 1) {
        throw InvalidParameter("integrate_avg: record_stride must be >= 1");
    }
    const long long n_steps = std::llround(cfg.t_end / cfg.dt);
    AvgTrajectory<std::array<double, N>> traj;
    traj.t.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride) + 2);
    traj.states.reserve(traj.t.capacity());

    std::array<double, N> x = x0;
    traj.t.push_back(0.0);
    traj.states.push_back(x);
    for (long long k = 0; k < n_steps; ++k) {
        x = rk4_step(x, cfg.dt, rhs);
        const double t_next = static_cast<double>(k + 1) * cfg.dt;
        for (std::size_t i = 0; i < N; ++i) {
            if (!std::isfinite(x[i])) {
                throw IntegrationFault(t_next, "averaged state became non-finite");
            }
        }
        if (guard_radius && std::abs(x[0]) <= cfg.r_min) {
            throw SingularChartFault(t_next, x[0]);
        }
        if ((k + 1) % cfg.record_stride == 0 || k + 1 == n_steps) {
            traj.t.push_back(t_next);
            traj.states.push_back(x);
        }
    }
    return traj;
}

/// Typed wrapper: integrate the elliptical averaged system.
[[nodiscard]] inline AvgTrajectory<AvgStateElliptical> integrate_elliptical_avg(
    const AvgStateElliptical& s0, const ControllerParams& p, const ScalarField& field,
    const AvgConfig& cfg) {
    const auto rhs = [&](const std::array<double, 4>& x) {
        // Mid-stage guard uses |r| directly so the RHS never divides by ~0;
        // the accepted-step guard in integrate_avg reports the faulting time.
        return elliptical_avg_rhs(AvgStateElliptical::from_array(x), p, field, cfg.r_min)
            .as_array();
    };
    const auto raw = integrate_avg<4>(rhs, s0.as_array(), cfg);
    AvgTrajectory<AvgStateElliptical> out;
    out.t = raw.t;
    out.states.reserve(raw.states.size());
    for (const auto& x : raw.states) out.states.push_back(AvgStateElliptical::from_array(x));
    return out;
}

/// Typed wrapper: integrate the circular averaged system.
[[nodiscard]] inline AvgTrajectory<AvgStateCircular> integrate_circular_avg(
    const AvgStateCircular& s0, const ControllerParams& p, const ScalarField& field,
    const AvgConfig& cfg) {
    const auto rhs = [&](const std::array<double, 3>& x) {
        return circular_avg_rhs(AvgStateCircular::from_array(x), p, field, cfg.r_min).as_array();
    };
    const auto raw = integrate_avg<3>(rhs, s0.as_array(), cfg);
    AvgTrajectory<AvgStateCircular> out;
    out.t = raw.t;
    out.states.reserve(raw.states.size());
    for (const auto& x : raw.states) out.states.push_back(AvgStateCircular::from_array(x));
    return out;
}

}  // namespace uniseek
