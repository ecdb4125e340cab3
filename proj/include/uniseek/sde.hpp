#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <vector>

#include "uniseek/closed_loop.hpp"
#include "uniseek/faults.hpp"
#include "uniseek/params.hpp"
#include "uniseek/rng.hpp"
#include "uniseek/signal_field.hpp"

namespace uniseek {

/// How Wiener increments are produced for the Euler-Maruyama loop.
///  - band_limited: sample-and-hold. One draw Z ~ N(0, t_hold) covers a hold
///    window; every substep inside the window receives Z * (dt / t_hold).
///    This models the band-limited noise a physical actuator can follow.
///  - exact_increment: i.i.d. N(0, dt) per step (ideal white noise).
enum class NoiseModel { band_limited, exact_increment };

struct SdeConfig {
    double dt = 0.0;             ///< step size; <= 0 means eps / 100
    double t_end = 100.0;        ///< integration horizon
    int record_stride = 10;      ///< keep every record_stride-th step (plus first and last)
    double t_hold = 0.0;         ///< hold window for band_limited; <= 0 means 10 * dt
    NoiseModel noise = NoiseModel::band_limited;
};

/// One recorded sample of a closed-loop run.
struct TrajectoryRow {
    double t = 0.0;
    VehicleState state{};
    double J = 0.0;    ///< field reading at the sensor
    double v = 0.0;    ///< commanded forward velocity
    double psi = 0.0;  ///< commanded angular velocity
};

struct Trajectory {
    std::vector<TrajectoryRow> rows;
    double dt = 0.0;        ///< step size actually used
    double t_hold = 0.0;    ///< hold window actually used (0 for exact_increment)
    double v_min = 0.0;     ///< extremes of v over every step, not just recorded ones
    double v_max = 0.0;
    bool dt_warning = false;  ///< true if dt was accepted but coarser than eps / 10
};

/// Stream of Wiener increments dW, one per Euler-Maruyama step.
class WienerStream {
public:
    WienerStream(std::uint64_t seed, double dt, NoiseModel model, double t_hold)
        : normals_(seed), dt_(dt), model_(model) {
        if (model_ == NoiseModel::band_limited) {
            hold_steps_ = std::max<long long>(1, std::llround(t_hold / dt));
        }
    }

    [[nodiscard]] double next() {
        if (model_ == NoiseModel::exact_increment) {
            return std::sqrt(dt_) * normals_.next();
        }
        if (steps_left_ == 0) {
            const double t_hold = static_cast<double>(hold_steps_) * dt_;
            held_increment_ = std::sqrt(t_hold) * normals_.next() * (dt_ / t_hold);
            steps_left_ = hold_steps_;
        }
        --steps_left_;
        return held_increment_;
    }

    /// Number of steps a single draw is held for (1 under exact_increment).
    [[nodiscard]] long long hold_steps() const { return hold_steps_; }

private:
    NormalStream normals_;
    double dt_;
    NoiseModel model_;
    long long hold_steps_ = 1;
    long long steps_left_ = 0;
    double held_increment_ = 0.0;
};

/// One Euler-Maruyama step of the closed loop. The single increment dW drives
/// both the heading and the washout perturbation state, as in the plant.
[[nodiscard]] inline VehicleState em_step(const VehicleState& s, const ScalarField& field,
                                          const ControllerParams& p, double dt, double dW) {
    const VehicleState d = drift(s, field, p);
    const std::array<double, 5> g = diffusion(p);
    VehicleState out = s;
    out.x_c += d.x_c * dt;
    out.y_c += d.y_c * dt;
    out.theta += d.theta * dt + g[2] * dW;
    out.e += d.e * dt;
    out.eta += d.eta * dt + g[4] * dW;
    return out;
}

namespace detail {

[[nodiscard]] inline bool all_finite(const VehicleState& s) {
    return std::isfinite(s.x_c) && std::isfinite(s.y_c) && std::isfinite(s.theta) &&
           std::isfinite(s.e) && std::isfinite(s.eta);
}

[[nodiscard]] inline std::string state_repr(const VehicleState& s) {
    std::ostringstream os;
    os << "[x_c=" << s.x_c << ", y_c=" << s.y_c << ", theta=" << s.theta << ", e=" << s.e
       << ", eta=" << s.eta << "]";
    return os.str();
}

}  // namespace detail

/// Integrate the closed-loop SDE by Euler-Maruyama from s0 over [0, t_end].
///
/// The step size must resolve the fast washout/perturbation dynamics: dt >= eps
/// is rejected outright and dt > eps / 10 is accepted with a warning (flagged on
/// the trajectory and echoed to stderr). The heading is left unwrapped so theta
/// is continuous across turns.
///
/// Throws IntegrationFault if the state leaves the finite range.
[[nodiscard]] inline Trajectory simulate(const ScalarField& field, const ControllerParams& p,
                                         const VehicleState& s0, const SdeConfig& cfg,
                                         std::uint64_t seed) {
    p.validate();
    const double dt = cfg.dt > 0.0 ? cfg.dt : p.eps / 100.0;
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidParameter("sde: dt must be positive and finite");
    }
    if (dt >= p.eps) {
        std::ostringstream os;
        os << "sde: dt = " << dt << " does not resolve the fast dynamics (requires dt < eps = "
           << p.eps << ")";
        throw InvalidParameter(os.str());
    }
    if (!(cfg.t_end > 0.0)) {
        throw InvalidParameter("sde: t_end must be positive");
    }
    if (cfg.record_stride < 1) {
        throw InvalidParameter("sde: record_stride must be >= 1");
    }

    Trajectory traj;
    traj.dt = dt;
    traj.dt_warning = dt > p.eps / 10.0;
    if (traj.dt_warning) {
        std::fprintf(stderr, "warning: sde dt = %g is coarse relative to eps = %g (dt > eps/10)\n",
                     dt, p.eps);
    }

    double t_hold = 0.0;
    if (cfg.noise == NoiseModel::band_limited) {
        t_hold = cfg.t_hold > 0.0 ? cfg.t_hold : 10.0 * dt;
        if (t_hold < dt) t_hold = dt;
    }
    WienerStream wiener(seed, dt, cfg.noise, t_hold);
    traj.t_hold =
        cfg.noise == NoiseModel::band_limited ? static_cast<double>(wiener.hold_steps()) * dt : 0.0;

    const long long n_steps = std::llround(cfg.t_end / dt);
    traj.rows.reserve(static_cast<std::size_t>(n_steps / cfg.record_stride) + 2);

    VehicleState s = s0;
    {
        const ControlOutputs c0 = control_outputs(s, field, p);
        traj.v_min = traj.v_max = c0.v;
        traj.rows.push_back({0.0, s, c0.J, c0.v, c0.psi});
    }

    for (long long k = 0; k < n_steps; ++k) {
        const ControlOutputs c = control_outputs(s, field, p);
        traj.v_min = std::min(traj.v_min, c.v);
        traj.v_max = std::max(traj.v_max, c.v);

        const double dW = wiener.next();
        VehicleState next = s;
        next.x_c += c.v * std::cos(s.theta) * dt;
        next.y_c += c.v * std::sin(s.theta) * dt;
        next.theta += c.psi * dt + (p.a * p.g / std::sqrt(p.eps)) * dW;
        next.e += p.h * c.xi * dt;
        next.eta += -(s.eta / p.eps) * dt + (p.g / std::sqrt(p.eps)) * dW;

        const double t_next = static_cast<double>(k + 1) * dt;
        if (!detail::all_finite(next)) {
            throw IntegrationFault(t_next, detail::state_repr(next));
        }
        s = next;

        if ((k + 1) % cfg.record_stride == 0 || k + 1 == n_steps) {
            const ControlOutputs cr = control_outputs(s, field, p);
            traj.rows.push_back({t_next, s, cr.J, cr.v, cr.psi});
        }
    }
    return traj;
}

}  // namespace uniseek
