#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uniseek/io.hpp"
#include "uniseek/metrics.hpp"

using namespace uniseek;
using Catch::Matchers::WithinAbs;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("uniseek_test_" + name);
}

/// Trajectory whose position orbits the origin at unit radius with polar
/// angle phi(t), heading theta(t); sampled at t = 0, 1, ..., t_end.
Trajectory crafted_orbit(double t_end, const std::function<double(double)>& phi,
                         const std::function<double(double)>& theta) {
    Trajectory traj;
    for (int k = 0; k <= static_cast<int>(t_end); ++k) {
        const double t = k;
        TrajectoryRow row;
        row.t = t;
        row.state.x_c = std::cos(phi(t));
        row.state.y_c = std::sin(phi(t));
        row.state.theta = theta(t);
        traj.rows.push_back(row);
    }
    return traj;
}

/// Trajectory along the positive x-axis with distance d(t) from the origin.
Trajectory crafted_radial(double t_end, const std::function<double(double)>& dist) {
    Trajectory traj;
    for (int k = 0; k <= static_cast<int>(t_end); ++k) {
        const double t = k;
        TrajectoryRow row;
        row.t = t;
        row.state.x_c = dist(t);
        row.state.y_c = 0.0;
        row.state.theta = 0.0;
        traj.rows.push_back(row);
    }
    return traj;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::strtod(cell.c_str(), nullptr));
    return out;
}

}  // namespace

TEST_CASE("metrics on a run that approaches the source along a fixed ray") {
    // bearing constant at phi = 0.3, heading aligned with the outward bearing
    const double phi = 0.3;
    Trajectory traj;
    for (int k = 0; k <= 10; ++k) {
        TrajectoryRow row;
        row.t = k;
        const double d = 10.0 - k < 2.0 ? 2.0 : 10.0 - k;  // distances 10,9,...,3,2,2,2
        row.state.x_c = d * std::cos(phi);
        row.state.y_c = d * std::sin(phi);
        row.state.theta = phi;
        traj.rows.push_back(row);
    }
    traj.v_min = -3.0;
    traj.v_max = 4.0;
    const RunMetrics m = compute_metrics(traj, {0.0, 0.0}, {.delta = 0.1, .window_fraction = 0.2});
    // trailing window is [8, 10]: distances 2, 2, 2
    REQUIRE_THAT(m.window_start, WithinAbs(8.0, 1e-12));
    REQUIRE_THAT(m.trailing_mean_distance, WithinAbs(2.0, 1e-12));
    REQUIRE_THAT(m.final_distance, WithinAbs(2.0, 1e-12));
    REQUIRE_THAT(m.heading_alignment, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(m.angular_drift, WithinAbs(0.0, 1e-12));
    REQUIRE(m.v_min == -3.0);
    REQUIRE(m.v_max == 4.0);
    REQUIRE_FALSE(m.reached_delta_ball);  // never inside delta = 0.1
    REQUIRE(std::isnan(m.time_to_delta_ball));
}

TEST_CASE("angular drift recovers the rotation rate, including the branch cut") {
    // polar angle crosses +pi inside the trailing window
    const double omega = 0.1;
    const auto phi = [omega](double t) { return (M_PI - 0.1) + omega * (t - 8.0); };
    const Trajectory traj =
        crafted_orbit(10.0, phi, [&](double t) { return phi(t) + M_PI / 2.0; });
    const RunMetrics m = compute_metrics(traj, {0.0, 0.0}, {.delta = 0.1, .window_fraction = 0.2});
    // window rows at t = 8, 9, 10 have bearings pi-0.1, ~pi, pi+0.1 wrapped
    REQUIRE_THAT(m.angular_drift, WithinAbs(omega, 1e-12));
    // heading is tangential: alignment cos(pi/2) = 0
    REQUIRE_THAT(m.heading_alignment, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(m.trailing_mean_distance, WithinAbs(1.0, 1e-12));
}

TEST_CASE("delta-ball entry time is the earliest window-long sustained stretch") {
    SECTION("single sustained entry") {
        // inside delta = 0.5 from t = 3 onwards; window length 2
        const Trajectory traj =
            crafted_radial(10.0, [](double t) { return t < 3.0 ? 1.0 : 0.25; });
        const RunMetrics m =
            compute_metrics(traj, {0.0, 0.0}, {.delta = 0.5, .window_fraction = 0.2});
        REQUIRE(m.reached_delta_ball);
        REQUIRE_THAT(m.time_to_delta_ball, WithinAbs(3.0, 1e-12));
    }
    SECTION("a dip shorter than the window does not count") {
        // inside during [3,4], outside during [5,6], inside again from 7 on
        const Trajectory traj = crafted_radial(10.0, [](double t) {
            const bool inside = (t >= 3.0 && t <= 4.0) || t >= 7.0;
            return inside ? 0.25 : 1.0;
        });
        const RunMetrics m =
            compute_metrics(traj, {0.0, 0.0}, {.delta = 0.5, .window_fraction = 0.2});
        REQUIRE(m.reached_delta_ball);
        REQUIRE_THAT(m.time_to_delta_ball, WithinAbs(7.0, 1e-12));
    }
    SECTION("never inside") {
        const Trajectory traj = crafted_radial(10.0, [](double) { return 5.0; });
        const RunMetrics m =
            compute_metrics(traj, {0.0, 0.0}, {.delta = 0.5, .window_fraction = 0.2});
        REQUIRE_FALSE(m.reached_delta_ball);
        REQUIRE(std::isnan(m.time_to_delta_ball));
    }
    SECTION("empty trajectory is rejected") {
        REQUIRE_THROWS_AS(compute_metrics(Trajectory{}, {0.0, 0.0}), InvalidParameter);
    }
}

TEST_CASE("seventeen significant digits round-trip every double") {
    REQUIRE(fmt17(1.0) == "1");
    REQUIRE(fmt17(-0.5) == "-0.5");
    REQUIRE(fmt17(0.1) == "0.10000000000000001");
    const double samples[] = {M_PI,
                              -1.0 / 3.0,
                              1e300,
                              -2.2250738585072014e-308,
                              6.02214076e23,
                              123456789.123456789,
                              0.0};
    for (const double x : samples) {
        const std::string s = fmt17(x);
        REQUIRE(std::strtod(s.c_str(), nullptr) == x);
    }
    REQUIRE(std::signbit(std::strtod(fmt17(-0.0).c_str(), nullptr)));
}

TEST_CASE("trajectory CSV writes the exact schema and round-trips bit-for-bit") {
    Trajectory traj;
    const double vals[2][9] = {
        {0.1, M_PI, -1.0 / 3.0, 1e300, -2.2250738585072014e-308, 0.25, -7.0, 1e-17, 2.0},
        {0.2, -0.0, 42.0, -M_PI, 0.3, 1.0 / 7.0, 9.9e99, -3.5, 1e-300},
    };
    for (const auto& v : vals) {
        TrajectoryRow r;
        r.t = v[0];
        r.state = VehicleState::from_array({v[1], v[2], v[3], v[4], v[5]});
        r.J = v[6];
        r.v = v[7];
        r.psi = v[8];
        traj.rows.push_back(r);
    }
    const fs::path path = temp_file("trajectory.csv");
    write_trajectory_csv(path, traj);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    REQUIRE(lines[0] == "t,x_c,y_c,theta,e,eta,J,v,psi");
    for (int row = 0; row < 2; ++row) {
        const auto parsed = parse_csv_row(lines[static_cast<std::size_t>(row) + 1]);
        REQUIRE(parsed.size() == 9);
        for (int col = 0; col < 9; ++col) {
            REQUIRE(parsed[static_cast<std::size_t>(col)] == vals[row][col]);
        }
    }
    fs::remove(path);
}

TEST_CASE("averaged-trajectory CSV emits both chart layouts") {
    SECTION("elliptical chart derives the relative heading column") {
        AvgTrajectory<AvgStateElliptical> traj;
        traj.t = {0.0, 0.5};
        traj.states = {{0.1, 0.25, 0.75, -0.01}, {0.2, -1.0, 0.5, 0.02}};
        const fs::path path = temp_file("avg_elliptical.csv");
        write_avg_trajectory_csv(path, traj);
        const auto lines = read_lines(path);
        REQUIRE(lines.size() == 3);
        REQUIRE(lines[0] == "t,r_tilde,theta_star,theta_hat,theta_tilde,e_tilde");
        const auto row = parse_csv_row(lines[1]);
        REQUIRE(row[1] == 0.1);
        REQUIRE(row[2] == 0.25);
        REQUIRE(row[3] == 0.75);
        REQUIRE(row[4] == 0.5);  // theta_hat - theta_star
        REQUIRE(row[5] == -0.01);
        fs::remove(path);
    }
    SECTION("circular chart carries only the relative heading") {
        AvgTrajectory<AvgStateCircular> traj;
        traj.t = {0.0};
        traj.states = {{0.1, 0.75, -0.01}};
        const fs::path path = temp_file("avg_circular.csv");
        write_avg_trajectory_csv(path, traj);
        const auto lines = read_lines(path);
        REQUIRE(lines.size() == 2);
        REQUIRE(lines[0] == "t,r_tilde,theta_star,theta_hat,theta_tilde,e_tilde");
        std::stringstream ss(lines[1]);
        std::vector<std::string> cells;
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        REQUIRE(cells[2] == "nan");
        REQUIRE(cells[3] == "nan");
        REQUIRE(std::strtod(cells[4].c_str(), nullptr) == 0.75);
        fs::remove(path);
    }
}

TEST_CASE("run metrics serialize with unreachable entry time as null") {
    const Trajectory traj = crafted_radial(10.0, [](double) { return 5.0; });
    const RunMetrics m = compute_metrics(traj, {0.0, 0.0});
    const nlohmann::json j = m;
    REQUIRE(j.at("trailing_mean_distance").get<double>() == m.trailing_mean_distance);
    REQUIRE(j.at("reached_delta_ball").get<bool>() == false);
    REQUIRE(j.contains("angular_drift"));
    REQUIRE(j.contains("heading_alignment"));
    REQUIRE(j.contains("v_min"));
    REQUIRE(j.contains("window_start"));
    // NaN has no JSON literal; the writer emits null for it
    const nlohmann::json parsed = nlohmann::json::parse(j.dump());
    REQUIRE(parsed.at("time_to_delta_ball").is_null());
}

TEST_CASE("equilibrium report carries the full closed-form catalog") {
    ControllerParams p;
    p.a = 2.0;
    p.g = 1.5;
    p.eps = 0.01;
    p.b = 2.0;
    p.c = 500.0;
    p.h = 2.0;
    p.V_c = -0.015;
    p.R = 0.1;
    SECTION("elliptical field") {
        const ScalarField field = ScalarField::elliptical(0.0, {0.0, 0.0}, 2.0, 0.5);
        const nlohmann::json j = equilibrium_report(p, field);
        REQUIRE(j.contains("gammas"));
        REQUIRE(j.contains("thresholds"));
        REQUIRE(j.at("elliptical_equilibria").size() == 8);
        REQUIRE(j.at("iota").at("defined").get<bool>());
        REQUIRE(j.at("iota").at("iota").get<int>() == 1);
        REQUIRE(j.at("iota").at("pair") == nlohmann::json({1, 2}));
        REQUIRE_FALSE(j.contains("circular_equilibria"));
        REQUIRE(j.at("elliptical_equilibria")[0].at("admissible").get<bool>());
        REQUIRE_FALSE(j.at("elliptical_equilibria")[4].at("admissible").get<bool>());
    }
    SECTION("circular field") {
        ControllerParams pc = p;
        pc.a = 2.0;
        pc.g = 1.0;
        pc.V_c = 0.01;
        const ScalarField field = ScalarField::circular(0.0, {0.0, 0.0}, 1.5);
        const nlohmann::json j = equilibrium_report(pc, field);
        REQUIRE(j.contains("circular_equilibria"));
        REQUIRE(j.at("circular_equilibria").at("equilibria").size() == 4);
        REQUIRE(j.at("circular_equilibria").at("pair34_defined").get<bool>());
        REQUIRE_FALSE(j.at("iota").at("defined").get<bool>());
        REQUIRE_FALSE(j.at("iota").at("reason").get<std::string>().empty());
    }
}

TEST_CASE("stability report pairs every equilibrium with a spectral verdict") {
    ControllerParams p;
    p.a = 2.0;
    p.g = 1.0;
    p.eps = 0.01;
    p.b = 2.0;
    p.c = 500.0;
    p.h = 2.0;
    p.V_c = 0.0005;
    p.R = 0.1;
    SECTION("circular field, small bias") {
        const ScalarField field = ScalarField::circular(0.0, {0.0, 0.0}, 1.5);
        const nlohmann::json j = stability_report(p, field);
        REQUIRE(j.at("elliptical_equilibria").size() == 8);
        for (const auto& entry : j.at("elliptical_equilibria")) {
            REQUIRE(entry.contains("char_poly"));
            REQUIRE(entry.contains("hurwitz"));
            REQUIRE(entry.at("eigenvalues").size() == 4);
        }
        REQUIRE(j.at("theorem2").at("branch").get<std::string>() == "small_bias");
        REQUIRE(j.at("theorem2").at("cc1").get<bool>());
        REQUIRE(j.at("theorem2").at("hurwitz").at("stable").get<bool>());
        // orbit equilibria are undefined here, so they carry no verdict
        const auto& ceqs = j.at("circular_equilibria");
        REQUIRE(ceqs.size() == 4);
        REQUIRE(ceqs[0].contains("hurwitz"));
        REQUIRE_FALSE(ceqs[2].contains("hurwitz"));
        REQUIRE_FALSE(j.at("corollary1").at("applicable").get<bool>());
    }
    SECTION("elliptical field selects a stable pair") {
        ControllerParams pe = p;
        pe.g = 1.5;
        pe.V_c = -0.015;
        const ScalarField field = ScalarField::elliptical(0.0, {0.0, 0.0}, 2.0, 0.5);
        const nlohmann::json j = stability_report(pe, field);
        REQUIRE_FALSE(j.contains("theorem2"));
        REQUIRE(j.at("theorem1").at("branch_3536").get<bool>());
        REQUIRE(j.at("theorem1").at("selected_pair") == nlohmann::json({1, 2}));
        REQUIRE(j.at("theorem1").at("pair_hurwitz").at("stable").get<bool>());
        REQUIRE(j.at("corollary1").at("applicable").get<bool>());
        REQUIRE(j.at("corollary1").at("axis").get<std::string>() == "minor");
        REQUIRE(j.at("corollary1").at("heading").get<std::string>() == "toward");
    }
}

TEST_CASE("JSON files round-trip through the writer") {
    ControllerParams p;
    p.a = 2.0;
    p.g = 1.0;
    p.eps = 0.01;
    p.b = 2.0;
    p.c = 500.0;
    p.h = 2.0;
    p.V_c = 0.01;  // orbit regime: every report number is finite
    p.R = 0.1;
    const ScalarField field = ScalarField::circular(0.0, {0.0, 0.0}, 1.5);
    const nlohmann::json j = equilibrium_report(p, field);
    const fs::path path = temp_file("report.json");
    write_json(path, j);
    std::ifstream in(path);
    REQUIRE(in.good());
    nlohmann::json parsed;
    in >> parsed;
    REQUIRE(parsed == j);
    fs::remove(path);
}
