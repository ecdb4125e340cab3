#pragma once

#include <string>

#include "uniseek/faults.hpp"

namespace uniseek {

/// Tuning constants of the seeking controller plus the sensor offset.
///
/// a   - heading-perturbation gain applied to the colored noise (rad)
/// g   - noise gain of the perturbation process
/// eps - time-scale separation parameter of the fast perturbation
/// b   - forward-velocity feedback gain
/// c   - angular-velocity demodulation gain
/// h   - washout-filter cutoff (1/time)
/// V_c - bias forward velocity (may be negative: it selects the attractor
///       type and the limiting heading orientation)
/// R   - distance from the vehicle center to the sensor (> 0)
struct ControllerParams {
    double a = 1.0;
    double g = 1.0;
    double eps = 0.01;
    double b = 1.0;
    double c = 1.0;
    double h = 1.0;
    double V_c = 0.0;
    double R = 0.1;

    /// Throws InvalidParameter naming every offending field.
    void validate() const {
        std::string bad;
        auto require_positive = [&bad](const char* name, double v) {
            if (!(v > 0.0)) bad += std::string(bad.empty() ? "" : ", ") + name;
        };
        require_positive("a", a);
        require_positive("g", g);
        require_positive("eps", eps);
        require_positive("b", b);
        require_positive("c", c);
        require_positive("h", h);
        require_positive("R", R);
        if (!bad.empty()) {
            throw InvalidParameter("controller parameters must be strictly positive: " + bad);
        }
    }
};

}  // namespace uniseek
