#pragma once

#include <array>
#include <cmath>

#include "uniseek/geometry.hpp"
#include "uniseek/params.hpp"
#include "uniseek/signal_field.hpp"

namespace uniseek {

/// Full closed-loop state advanced by the stochastic integrator.
///
/// theta is stored unwrapped (wrap only when reporting). e is the low-pass
/// state of the washout filter: it tracks the smoothed sensor reading, so the
/// high-pass output is xi = J - e and the controller never needs the unknown
/// peak value of the field.
struct VehicleState {
    double x_c = 0.0;   ///< vehicle center, x
    double y_c = 0.0;   ///< vehicle center, y
    double theta = 0.0; ///< heading (rad, unwrapped)
    double e = 0.0;     ///< washout low-pass state (signal units)
    double eta = 0.0;   ///< colored-noise perturbation state (rad)

    [[nodiscard]] std::array<double, 5> as_array() const { return {x_c, y_c, theta, e, eta}; }
    [[nodiscard]] static VehicleState from_array(const std::array<double, 5>& v) {
        return {v[0], v[1], v[2], v[3], v[4]};
    }
};

/// Instantaneous control outputs derived from a state: forward velocity
/// v = V_c + b xi, the drift component psi of the commanded angular velocity,
/// the washout output xi, the sensor reading J, and the sensor position.
struct ControlOutputs {
    double v = 0.0;
    double psi = 0.0;
    double xi = 0.0;
    double J = 0.0;
    Vec2 r_s{};
};

/// Sensor position: the vehicle center advanced by R along the heading.
[[nodiscard]] inline Vec2 sensor_position(const VehicleState& s, const ControllerParams& p) {
    return {s.x_c + p.R * std::cos(s.theta), s.y_c + p.R * std::sin(s.theta)};
}

/// High-pass (washout) output for a given sensor reading: xi = J - e, where e
/// is the low-pass state with de/dt = h xi.
[[nodiscard]] inline double washout_output(const VehicleState& s, double J) {
    return J - s.e;
}

/// All control outputs at a state.
[[nodiscard]] inline ControlOutputs control_outputs(const VehicleState& s, const ScalarField& field,
                                                    const ControllerParams& p) {
    ControlOutputs out;
    out.r_s = sensor_position(s, p);
    out.J = field.evaluate(out.r_s);
    out.xi = washout_output(s, out.J);
    out.v = p.V_c + p.b * out.xi;
    out.psi = -(p.a / p.eps) * s.eta + p.c * out.xi * std::sin(s.eta);
    return out;
}

/// Deterministic part of the closed-loop dynamics:
///   dx_c    = (V_c + b xi) cos(theta)
///   dy_c    = (V_c + b xi) sin(theta)
///   dtheta  = -(a/eps) eta + c xi sin(eta)   (noise term handled separately)
///   de      = h xi
///   deta    = -eta/eps                        (noise term handled separately)
/// The angular drift already contains the expanded derivative of the
/// perturbation signal, so no noise is ever differentiated numerically.
[[nodiscard]] inline VehicleState drift(const VehicleState& s, const ScalarField& field,
                                        const ControllerParams& p) {
    const ControlOutputs u = control_outputs(s, field, p);
    VehicleState d;
    d.x_c = u.v * std::cos(s.theta);
    d.y_c = u.v * std::sin(s.theta);
    d.theta = u.psi;
    d.e = p.h * u.xi;
    d.eta = -s.eta / p.eps;
    return d;
}

/// Noise coefficient of each state component for the single shared Wiener
/// increment: heading and perturbation state are driven by the SAME increment
/// (perfect correlation), scaled by a g/sqrt(eps) and g/sqrt(eps) respectively.
[[nodiscard]] inline std::array<double, 5> diffusion(const ControllerParams& p) {
    const double root_eps = std::sqrt(p.eps);
    return {0.0, 0.0, p.a * p.g / root_eps, 0.0, p.g / root_eps};
}

}  // namespace uniseek
