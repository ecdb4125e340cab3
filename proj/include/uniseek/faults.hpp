#pragma once

#include <stdexcept>
#include <string>

namespace uniseek {

/// Base class for all library faults. Catching this at a tool boundary is
/// enough to turn any library failure into a structured error message.
class Fault : public std::runtime_error {
public:
    explicit Fault(const std::string& what) : std::runtime_error(what) {}
};

/// A constructor or operation received parameters violating its preconditions
/// (non-positive gains, an indefinite quadratic map, a bad step size, ...).
class InvalidParameter : public Fault {
public:
    explicit InvalidParameter(const std::string& what) : Fault(what) {}
};

/// The stochastic integrator produced a non-finite state. Carries the time and
/// a rendering of the state at the point of failure.
class IntegrationFault : public Fault {
public:
    IntegrationFault(double t, const std::string& state_repr)
        : Fault("integration fault at t=" + std::to_string(t) + ": non-finite state " + state_repr),
          t_(t) {}
    [[nodiscard]] double t() const { return t_; }

private:
    double t_;
};

/// The averaged-system polar chart degenerated: the radial coordinate reached
/// the guard band around zero where the equations divide by the radius.
class SingularChartFault : public Fault {
public:
    SingularChartFault(double t, double radius)
        : Fault("singular polar chart at t=" + std::to_string(t) +
                ": |radius|=" + std::to_string(radius) + " inside the guard band"),
          t_(t), radius_(radius) {}
    [[nodiscard]] double t() const { return t_; }
    [[nodiscard]] double radius() const { return radius_; }

private:
    double t_;
    double radius_;
};

/// Lifting a trajectory sample into averaged coordinates is undefined when the
/// vehicle center coincides with the source (the bearing has no value).
class UndefinedBearingFault : public Fault {
public:
    UndefinedBearingFault() : Fault("bearing to source undefined: vehicle center is at the source") {}
};

/// A scenario/config document failed validation (unknown keys, missing
/// required keys, or values of the wrong type/range).
class ConfigError : public Fault {
public:
    explicit ConfigError(const std::string& what) : Fault(what) {}
};

}  // namespace uniseek
