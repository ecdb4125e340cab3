#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uniseek/closed_loop.hpp"

using namespace uniseek;
using Catch::Matchers::WithinAbs;

namespace {

ControllerParams demo_params() {
    ControllerParams p;
    p.a = 2.0;
    p.g = 1.0;
    p.eps = 0.01;
    p.b = 2.0;
    p.c = 500.0;
    p.h = 2.0;
    p.V_c = 0.0005;
    p.R = 0.1;
    return p;
}

}  // namespace

TEST_CASE("parameter validation names all offenders") {
    ControllerParams p = demo_params();
    REQUIRE_NOTHROW(p.validate());
    p.V_c = -0.5;  // the bias velocity may be negative
    REQUIRE_NOTHROW(p.validate());
    p.a = 0.0;
    p.R = -1.0;
    try {
        p.validate();
        FAIL("expected InvalidParameter");
    } catch (const InvalidParameter& err) {
        const std::string what = err.what();
        REQUIRE(what.find('a') != std::string::npos);
        REQUIRE(what.find('R') != std::string::npos);
    }
}

TEST_CASE("sensor sits R ahead of the center along the heading") {
    const ControllerParams p = demo_params();
    VehicleState s;
    s.x_c = 1.0;
    s.y_c = 2.0;
    s.theta = 0.0;
    Vec2 r_s = sensor_position(s, p);
    REQUIRE_THAT(r_s.x, WithinAbs(1.1, 1e-15));
    REQUIRE_THAT(r_s.y, WithinAbs(2.0, 1e-15));

    s.theta = M_PI / 2.0;
    r_s = sensor_position(s, p);
    REQUIRE_THAT(r_s.x, WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(r_s.y, WithinAbs(2.1, 1e-15));
}

TEST_CASE("control outputs implement the washout feedback laws") {
    const ControllerParams p = demo_params();
    const ScalarField f = ScalarField::circular(0.0, {0.0, 0.0}, 1.5);
    VehicleState s;
    s.x_c = 1.0;
    s.y_c = 1.0;
    s.theta = -M_PI / 2.0;
    s.e = -2.0;
    s.eta = 0.05;

    const ControlOutputs u = control_outputs(s, f, p);
    const double J = f.evaluate(sensor_position(s, p));
    REQUIRE_THAT(u.J, WithinAbs(J, 1e-15));
    REQUIRE_THAT(u.xi, WithinAbs(J - s.e, 1e-15));
    REQUIRE_THAT(u.v, WithinAbs(p.V_c + p.b * (J - s.e), 1e-15));
    REQUIRE_THAT(u.psi,
                 WithinAbs(-(p.a / p.eps) * s.eta + p.c * (J - s.e) * std::sin(s.eta), 1e-12));
}

TEST_CASE("controller output is invariant to the unknown peak value") {
    // Shifting f* shifts every reading by the same constant; starting the
    // low-pass state shifted by that constant gives identical xi, v, psi.
    const ControllerParams p = demo_params();
    const ScalarField f0 = ScalarField::circular(0.0, {0.3, -0.2}, 1.5);
    const ScalarField f1 = ScalarField::circular(7.25, {0.3, -0.2}, 1.5);
    VehicleState s0;
    s0.x_c = 1.0;
    s0.y_c = -0.5;
    s0.theta = 0.7;
    s0.e = -1.0;
    s0.eta = 0.02;
    VehicleState s1 = s0;
    s1.e = s0.e + 7.25;

    const ControlOutputs u0 = control_outputs(s0, f0, p);
    const ControlOutputs u1 = control_outputs(s1, f1, p);
    REQUIRE_THAT(u1.xi, WithinAbs(u0.xi, 1e-12));
    REQUIRE_THAT(u1.v, WithinAbs(u0.v, 1e-12));
    REQUIRE_THAT(u1.psi, WithinAbs(u0.psi, 1e-9));
}

TEST_CASE("drift matches the closed-loop equations componentwise") {
    const ControllerParams p = demo_params();
    const ScalarField f = ScalarField::elliptical(0.0, {0.0, 0.0}, 2.0, 0.5);
    VehicleState s;
    s.x_c = 0.4;
    s.y_c = -0.3;
    s.theta = 1.1;
    s.e = -0.5;
    s.eta = -0.03;

    const ControlOutputs u = control_outputs(s, f, p);
    const VehicleState d = drift(s, f, p);
    REQUIRE_THAT(d.x_c, WithinAbs(u.v * std::cos(s.theta), 1e-15));
    REQUIRE_THAT(d.y_c, WithinAbs(u.v * std::sin(s.theta), 1e-15));
    REQUIRE_THAT(d.theta, WithinAbs(u.psi, 1e-15));
    REQUIRE_THAT(d.e, WithinAbs(p.h * u.xi, 1e-15));
    REQUIRE_THAT(d.eta, WithinAbs(-s.eta / p.eps, 1e-15));
}

TEST_CASE("diffusion drives only heading and perturbation state") {
    const ControllerParams p = demo_params();
    const auto g = diffusion(p);
    REQUIRE(g[0] == 0.0);
    REQUIRE(g[1] == 0.0);
    REQUIRE_THAT(g[2], WithinAbs(p.a * p.g / std::sqrt(p.eps), 1e-15));
    REQUIRE(g[3] == 0.0);
    REQUIRE_THAT(g[4], WithinAbs(p.g / std::sqrt(p.eps), 1e-15));
}

TEST_CASE("state array round trip") {
    const VehicleState s{1.0, 2.0, 3.0, 4.0, 5.0};
    const auto arr = s.as_array();
    const VehicleState back = VehicleState::from_array(arr);
    REQUIRE(back.x_c == 1.0);
    REQUIRE(back.y_c == 2.0);
    REQUIRE(back.theta == 3.0);
    REQUIRE(back.e == 4.0);
    REQUIRE(back.eta == 5.0);
}
