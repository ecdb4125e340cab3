#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "uniseek/averaging.hpp"
#include "uniseek/equilibria.hpp"
#include "uniseek/metrics.hpp"
#include "uniseek/sde.hpp"
#include "uniseek/stability.hpp"

namespace uniseek {

/// Render a double with 17 significant digits (round-trip exact for IEEE
/// binary64), the fixed text format for all emitted CSV/JSON numbers.
[[nodiscard]] inline std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path, const char* what) {
    std::ofstream out(path);
    if (!out) {
        throw Fault(std::string("cannot open ") + what + " output file: " + path.string());
    }
    return out;
}

}  // namespace detail

/// Closed-loop trajectory CSV: one row per recorded sample.
inline void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out = detail::open_out(path, "trajectory");
    out << "t,x_c,y_c,theta,e,eta,J,v,psi\n";
    for (const TrajectoryRow& r : traj.rows) {
        out << fmt17(r.t) << ',' << fmt17(r.state.x_c) << ',' << fmt17(r.state.y_c) << ','
            << fmt17(r.state.theta) << ',' << fmt17(r.state.e) << ',' << fmt17(r.state.eta) << ','
            << fmt17(r.J) << ',' << fmt17(r.v) << ',' << fmt17(r.psi) << '\n';
    }
}

inline constexpr const char* kAvgCsvHeader = "t,r_tilde,theta_star,theta_hat,theta_tilde,e_tilde";

/// Averaged-trajectory CSV, elliptical chart: theta_tilde is derived as
/// theta_hat - theta_star.
inline void write_avg_trajectory_csv(const std::filesystem::path& path,
                                     const AvgTrajectory<AvgStateElliptical>& traj) {
    std::ofstream out = detail::open_out(path, "averaged trajectory");
    out << kAvgCsvHeader << '\n';
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const AvgStateElliptical& s = traj.states[i];
        out << fmt17(traj.t[i]) << ',' << fmt17(s.r) << ',' << fmt17(s.theta_star) << ','
            << fmt17(s.theta_hat) << ',' << fmt17(s.theta_hat - s.theta_star) << ','
            << fmt17(s.e) << '\n';
    }
}

/// Averaged-trajectory CSV, circular chart: the reduction discards theta_star
/// and theta_hat individually, so those columns are emitted as nan.
inline void write_avg_trajectory_csv(const std::filesystem::path& path,
                                     const AvgTrajectory<AvgStateCircular>& traj) {
    std::ofstream out = detail::open_out(path, "averaged trajectory");
    out << kAvgCsvHeader << '\n';
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const AvgStateCircular& s = traj.states[i];
        out << fmt17(traj.t[i]) << ',' << fmt17(s.r) << ",nan,nan," << fmt17(s.theta) << ','
            << fmt17(s.e) << '\n';
    }
}

// ---- JSON serialization (nlohmann ADL hooks) --------------------------------

inline void to_json(nlohmann::json& j, const Vec2& v) { j = nlohmann::json{v.x, v.y}; }

inline void to_json(nlohmann::json& j, const ControllerParams& p) {
    j = nlohmann::json{{"a", p.a}, {"g", p.g},     {"eps", p.eps}, {"b", p.b},
                       {"c", p.c}, {"h", p.h},     {"V_c", p.V_c}, {"R", p.R}};
}

inline void to_json(nlohmann::json& j, const ScalarField& f) {
    j = nlohmann::json{{"type", to_string(f.type())}};
    if (f.type() != FieldType::rosenbrock) {
        j["f_star"] = f.f_star();
        j["source"] = f.source();
    }
    if (f.is_quadratic()) {
        j["q_r"] = f.q_r();
        j["q_p"] = f.q_p();
    }
}

inline void to_json(nlohmann::json& j, const GammaSet& g) {
    j = nlohmann::json{{"gamma1", g.gamma1}, {"gamma2", g.gamma2}, {"gamma3", g.gamma3},
                       {"gamma4", g.gamma4}, {"gamma5", g.gamma5}, {"gamma6", g.gamma6},
                       {"gamma7", g.gamma7}, {"gamma8", g.gamma8}};
}

inline void to_json(nlohmann::json& j, const VcThresholds& t) {
    j = nlohmann::json{{"vcl_plus", t.vcl_plus},   {"vcu_plus", t.vcu_plus},
                       {"vcl_minus", t.vcl_minus}, {"vcu_minus", t.vcu_minus},
                       {"v_io", t.v_io},           {"vbar_l", t.vbar_l},
                       {"vbar_u", t.vbar_u}};
}

inline void to_json(nlohmann::json& j, const AvgStateElliptical& s) {
    j = nlohmann::json{{"r", s.r}, {"theta_star", s.theta_star}, {"theta_hat", s.theta_hat},
                       {"e", s.e}};
}

inline void to_json(nlohmann::json& j, const AvgStateCircular& s) {
    j = nlohmann::json{{"r", s.r}, {"theta", s.theta}, {"e", s.e}};
}

inline void to_json(nlohmann::json& j, const EquilibriumE& q) {
    j = nlohmann::json{{"index", q.index},
                       {"state", q.state},
                       {"rho", q.rho},
                       {"e", q.e},
                       {"qp_branch", q.qp_branch},
                       {"admissible", q.admissible}};
}

inline void to_json(nlohmann::json& j, const EquilibriumC& q) {
    j = nlohmann::json{{"index", q.index},
                       {"state", q.state},
                       {"defined", q.defined},
                       {"admissible", q.admissible}};
}

inline void to_json(nlohmann::json& j, const CircularEquilibriumSet& s) {
    j = nlohmann::json{{"equilibria", s.eqs},
                       {"rho1", s.rho1},
                       {"e1", s.e1},
                       {"gamma_rho2", s.gamma_rho2},
                       {"pair34_defined", s.pair34_defined},
                       {"rho2", s.rho2},
                       {"alpha", s.alpha},
                       {"e2", s.e2}};
}

inline void to_json(nlohmann::json& j, const IotaResult& r) {
    j = nlohmann::json{{"defined", r.defined}};
    if (r.defined) {
        j["iota"] = r.iota;
        j["pair"] = {r.iota, r.iota + 1};
    } else {
        j["reason"] = r.reason;
    }
}

inline void to_json(nlohmann::json& j, const HurwitzVerdict& v) {
    j = nlohmann::json{{"stable", v.stable},
                       {"near_boundary", v.near_boundary},
                       {"slacks", v.slacks}};
}

inline void to_json(nlohmann::json& j, const CharPoly& p) {
    std::vector<double> coeffs;  // ascending, constant term first
    coeffs.reserve(static_cast<std::size_t>(p.degree));
    for (int k = 0; k < p.degree; ++k) coeffs.push_back(p.c[static_cast<std::size_t>(k)]);
    const char* form = "generic";
    switch (p.form) {
        case CharPoly::Form::quad_times_quad: form = "quad_times_quad"; break;
        case CharPoly::Form::linear_times_quad: form = "linear_times_quad"; break;
        case CharPoly::Form::cubic_closed_form: form = "cubic_closed_form"; break;
        case CharPoly::Form::generic: break;
    }
    j = nlohmann::json{{"degree", p.degree}, {"coeffs_ascending", coeffs}, {"form", form}};
}

[[nodiscard]] inline nlohmann::json eigenvalues_json(
    const std::vector<std::complex<double>>& eigs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& z : eigs) arr.push_back({z.real(), z.imag()});
    return arr;
}

inline void to_json(nlohmann::json& j, const Condition40& c) {
    j = nlohmann::json{{"holds", c.holds}, {"b", c.lhs}, {"bound", c.rhs}};
}

inline void to_json(nlohmann::json& j, const Theorem1Report& r) {
    j = nlohmann::json{{"cond35", r.cond35},
                       {"cond36", r.cond36},
                       {"cond37", r.cond37},
                       {"cond38", r.cond38},
                       {"branch_3536", r.branch_3536},
                       {"branch_3738", r.branch_3738},
                       {"any_branch", r.any_branch},
                       {"iota", r.iota},
                       {"gammas", r.gammas},
                       {"thresholds", r.thresholds},
                       {"near_boundary", r.near_boundary}};
    if (r.pair_evaluated) {
        j["selected_pair"] = r.selected_pair;
        j["pair_hurwitz"] = r.pair_verdict;
        j["pair_eigenvalues"] = eigenvalues_json(r.pair_eigenvalues);
    }
}

inline void to_json(nlohmann::json& j, const Theorem2Report& r) {
    const char* branch = "none";
    switch (r.branch) {
        case Theorem2Report::Branch::small_bias: branch = "small_bias"; break;
        case Theorem2Report::Branch::large_bias: branch = "large_bias"; break;
        case Theorem2Report::Branch::boundary: branch = "boundary"; break;
        case Theorem2Report::Branch::none: break;
    }
    j = nlohmann::json{{"branch", branch},
                       {"vbar_l", r.vbar_l},
                       {"vbar_u", r.vbar_u},
                       {"near_boundary", r.near_boundary}};
    if (r.pair_evaluated) {
        j["predicted_pair"] = r.predicted_pair;
        j["hurwitz"] = r.verdict;
        j["eigenvalues"] = eigenvalues_json(r.pair_eigenvalues);
        if (r.branch == Theorem2Report::Branch::small_bias) {
            j["cc1"] = r.cc1;
            j["cc2"] = r.cc2;
            j["cc3"] = r.cc3;
        } else {
            j["cubic_l2_positive"] = r.cubic_l2;
            j["cubic_l0_positive"] = r.cubic_l0;
            j["cubic_l1l2_gt_l0"] = r.cubic_l1l2;
        }
    }
}

inline void to_json(nlohmann::json& j, const Corollary1Prediction& c) {
    j = nlohmann::json{{"applicable", c.applicable}};
    if (!c.applicable) {
        j["reason"] = c.reason;
        return;
    }
    j["axis"] = c.axis == Corollary1Prediction::Axis::major ? "major" : "minor";
    j["heading"] = c.heading == Corollary1Prediction::Heading::away ? "away" : "toward";
    j["heading_bias_sign"] = c.heading_bias_sign;
    j["condition_on_b"] = c.cond40;
}

inline void to_json(nlohmann::json& j, const RunMetrics& m) {
    j = nlohmann::json{{"trailing_mean_distance", m.trailing_mean_distance},
                       {"final_distance", m.final_distance},
                       {"reached_delta_ball", m.reached_delta_ball},
                       {"time_to_delta_ball", m.time_to_delta_ball},
                       {"angular_drift", m.angular_drift},
                       {"heading_alignment", m.heading_alignment},
                       {"v_min", m.v_min},
                       {"v_max", m.v_max},
                       {"window_start", m.window_start},
                       {"delta", m.delta}};
}

/// Combined equilibrium report: gamma set, thresholds, selection index and
/// every closed-form equilibrium with its admissibility/definedness flags.
[[nodiscard]] inline nlohmann::json equilibrium_report(const ControllerParams& p,
                                                       const ScalarField& field) {
    detail::require_quadratic(field, "equilibrium_report");
    nlohmann::json j{{"params", p},
                     {"field", field},
                     {"gammas", gamma_set(p, field)},
                     {"thresholds", vc_thresholds(p, field)}};
    j["elliptical_equilibria"] = elliptical_equilibria(p, field);
    j["iota"] = iota_index(p, field);
    if (field.q_p() == 0.0) {
        j["circular_equilibria"] = circular_equilibria(p, field);
    }
    return j;
}

/// Combined stability report: per-equilibrium characteristic polynomials,
/// Hurwitz verdicts and eigenvalues, plus the applicable theorem branches.
[[nodiscard]] inline nlohmann::json stability_report(const ControllerParams& p,
                                                     const ScalarField& field) {
    detail::require_quadratic(field, "stability_report");
    nlohmann::json j{{"params", p}, {"field", field}};

    nlohmann::json eqs = nlohmann::json::array();
    for (const EquilibriumE& q : elliptical_equilibria(p, field)) {
        nlohmann::json entry{{"index", q.index}, {"state", q.state}, {"admissible", q.admissible}};
        const JacobianE J = jacobian_elliptical(q.index, p, field);
        const CharPoly cp = char_poly(J);
        entry["char_poly"] = cp;
        entry["hurwitz"] = hurwitz(cp);
        entry["eigenvalues"] = eigenvalues_json(eigenvalues(cp));
        eqs.push_back(std::move(entry));
    }
    j["elliptical_equilibria"] = std::move(eqs);
    j["theorem1"] = theorem1_check(p, field);
    j["corollary1"] = corollary1_predict(p, field);

    if (field.q_p() == 0.0) {
        const CircularEquilibriumSet ce = circular_equilibria(p, field);
        nlohmann::json ceqs = nlohmann::json::array();
        for (const EquilibriumC& q : ce.eqs) {
            nlohmann::json entry{
                {"index", q.index}, {"state", q.state}, {"defined", q.defined},
                {"admissible", q.admissible}};
            if (q.defined) {
                const JacobianC J = jacobian_circular(q.index, p, field);
                const CharPoly cp = char_poly(J);
                entry["char_poly"] = cp;
                entry["hurwitz"] = hurwitz(cp);
                entry["eigenvalues"] = eigenvalues_json(eigenvalues(cp));
            }
            ceqs.push_back(std::move(entry));
        }
        j["circular_equilibria"] = std::move(ceqs);
        j["theorem2"] = theorem2_check(p, field);
    }
    return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out = detail::open_out(path, "json");
    out << j.dump(2) << '\n';
}

}  // namespace uniseek
