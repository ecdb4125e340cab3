#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "uniseek/averaging.hpp"
#include "uniseek/io.hpp"
#include "uniseek/metrics.hpp"
#include "uniseek/rng.hpp"
#include "uniseek/scenario.hpp"
#include "uniseek/sde.hpp"

namespace uniseek {

struct RunResult {
    Trajectory trajectory;
    RunMetrics metrics;
};

/// Integrate one scenario with its configured seed and summarize it.
/// Deterministic: the same scenario document always yields the same result.
[[nodiscard]] inline RunResult run_scenario(const Scenario& sc) {
    RunResult out;
    out.trajectory = simulate(sc.field, sc.params, initial_state(sc), sc.sde, sc.seed);
    out.metrics = compute_metrics(out.trajectory, sc.field.source(), sc.metrics);
    return out;
}

/// One Monte Carlo run record. Faults are captured, not propagated, so a
/// sweep always yields a complete table.
struct RunRecord {
    int index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string fault;  ///< set when ok is false
    RunMetrics metrics;
};

struct Quantiles {
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
};

/// Linear-interpolation quantile of an unsorted sample (empty -> NaN).
[[nodiscard]] inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

[[nodiscard]] inline Quantiles quantiles_of(const std::vector<double>& xs) {
    return {quantile(xs, 0.25), quantile(xs, 0.5), quantile(xs, 0.75)};
}

struct MonteCarloResult {
    std::vector<RunRecord> runs;
    int n_ok = 0;
    int n_reached_delta_ball = 0;
    Quantiles trailing_mean_distance;
    Quantiles final_distance;
    Quantiles angular_drift;
    Quantiles abs_angular_drift;
    Quantiles heading_alignment;
    double mean_heading_alignment = 0.0;
};

/// Monte Carlo sweep over n_runs independent seeds derived from the scenario
/// master seed. Substreams are a pure function of (master seed, run index),
/// so results are independent of execution order and identical across
/// repeats; aggregation is keyed by run index.
[[nodiscard]] inline MonteCarloResult monte_carlo(const Scenario& sc, int n_runs) {
    if (n_runs < 1) {
        throw InvalidParameter("monte_carlo: n_runs must be >= 1");
    }
    MonteCarloResult out;
    out.runs.reserve(static_cast<std::size_t>(n_runs));
    const VehicleState s0 = initial_state(sc);

    std::vector<double> dists, finals, drifts, abs_drifts, aligns;
    for (int i = 0; i < n_runs; ++i) {
        RunRecord rec;
        rec.index = i;
        rec.seed = substream_seed(sc.seed, static_cast<std::uint64_t>(i));
        try {
            const Trajectory traj = simulate(sc.field, sc.params, s0, sc.sde, rec.seed);
            rec.metrics = compute_metrics(traj, sc.field.source(), sc.metrics);
            rec.ok = true;
        } catch (const Fault& err) {
            rec.fault = err.what();
        }
        if (rec.ok) {
            ++out.n_ok;
            if (rec.metrics.reached_delta_ball) ++out.n_reached_delta_ball;
            dists.push_back(rec.metrics.trailing_mean_distance);
            finals.push_back(rec.metrics.final_distance);
            drifts.push_back(rec.metrics.angular_drift);
            abs_drifts.push_back(std::abs(rec.metrics.angular_drift));
            aligns.push_back(rec.metrics.heading_alignment);
        }
        out.runs.push_back(std::move(rec));
    }
    out.trailing_mean_distance = quantiles_of(dists);
    out.final_distance = quantiles_of(finals);
    out.angular_drift = quantiles_of(drifts);
    out.abs_angular_drift = quantiles_of(abs_drifts);
    out.heading_alignment = quantiles_of(aligns);
    if (!aligns.empty()) {
        double acc = 0.0;
        for (const double v : aligns) acc += v;
        out.mean_heading_alignment = acc / static_cast<double>(aligns.size());
    }
    return out;
}

struct AveragingValidationRow {
    double eps = 0.0;
    double dt = 0.0;  ///< SDE step used (eps / 100)
    double sup_discrepancy = 0.0;
};

struct AveragingValidationResult {
    std::vector<AveragingValidationRow> rows;  ///< in the order eps_list was given
    int n_paths = 0;
    double t_end = 0.0;
    double grid_dt = 0.0;
    bool monotone_shrink = false;  ///< discrepancy non-increasing as eps decreases
    std::vector<double> grid_t;
    std::vector<double> reference_r;  ///< |r| of the averaged ODE on the grid
};

/// Averaging validation: the ensemble mean of the lifted radial coordinate
/// over n_paths SDE runs is compared on a fixed time grid against the
/// averaged-ODE radius; the sup-t discrepancy should shrink as eps decreases.
/// Uses exact Wiener increments (the setting of the averaging theorem) and
/// dt = eps / 100 per entry so the fast dynamics stay equally resolved.
[[nodiscard]] inline AveragingValidationResult validate_averaging(const Scenario& sc,
                                                                  const std::vector<double>& eps_list,
                                                                  int n_paths, double t_end = 50.0,
                                                                  double grid_dt = 0.01) {
    detail::require_quadratic(sc.field, "validate_averaging");
    if (n_paths < 1) {
        throw InvalidParameter("validate_averaging: n_paths must be >= 1");
    }
    if (!(grid_dt > 0.0) || !(t_end > 0.0)) {
        throw InvalidParameter("validate_averaging: t_end and grid_dt must be positive");
    }

    AveragingValidationResult out;
    out.n_paths = n_paths;
    out.t_end = t_end;
    out.grid_dt = grid_dt;

    const VehicleState s0 = initial_state(sc);
    const std::size_t n_grid = static_cast<std::size_t>(std::llround(t_end / grid_dt)) + 1;

    // Averaged-ODE reference |r| on the grid (circular chart when available,
    // elliptical otherwise), RK4 at its standard step.
    {
        AvgConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = t_end;
        cfg.record_stride = std::max(1, static_cast<int>(std::llround(grid_dt / cfg.dt)));
        out.reference_r.reserve(n_grid);
        out.grid_t.reserve(n_grid);
        if (sc.field.q_p() == 0.0) {
            const auto ref = integrate_circular_avg(lift_to_avg_circular(s0, sc.params, sc.field),
                                                    sc.params, sc.field, cfg);
            for (std::size_t i = 0; i < ref.t.size(); ++i) {
                out.grid_t.push_back(ref.t[i]);
                out.reference_r.push_back(std::abs(ref.states[i].r));
            }
        } else {
            const auto ref = integrate_elliptical_avg(lift_to_avg(s0, sc.params, sc.field),
                                                      sc.params, sc.field, cfg);
            for (std::size_t i = 0; i < ref.t.size(); ++i) {
                out.grid_t.push_back(ref.t[i]);
                out.reference_r.push_back(std::abs(ref.states[i].r));
            }
        }
        if (out.grid_t.size() != n_grid) {
            throw Fault("validate_averaging: reference grid misaligned");
        }
    }

    for (const double eps : eps_list) {
        if (!(eps > 0.0)) {
            throw InvalidParameter("validate_averaging: every eps must be positive");
        }
        ControllerParams params = sc.params;
        params.eps = eps;
        SdeConfig cfg;
        cfg.dt = eps / 100.0;
        cfg.t_end = t_end;
        cfg.record_stride = static_cast<int>(std::llround(grid_dt / cfg.dt));
        cfg.noise = NoiseModel::exact_increment;
        if (cfg.record_stride < 1 ||
            std::abs(grid_dt - static_cast<double>(cfg.record_stride) * cfg.dt) > 1e-12) {
            throw InvalidParameter("validate_averaging: grid_dt must be a multiple of eps/100");
        }

        std::vector<double> mean_r(n_grid, 0.0);
        for (int path = 0; path < n_paths; ++path) {
            const std::uint64_t seed = substream_seed(sc.seed, static_cast<std::uint64_t>(path));
            const Trajectory traj = simulate(sc.field, params, s0, cfg, seed);
            if (traj.rows.size() != n_grid) {
                throw Fault("validate_averaging: trajectory grid misaligned");
            }
            const Vec2 src = sc.field.source();
            for (std::size_t k = 0; k < n_grid; ++k) {
                mean_r[k] += std::hypot(traj.rows[k].state.x_c - src.x,
                                        traj.rows[k].state.y_c - src.y);
            }
        }
        AveragingValidationRow row;
        row.eps = eps;
        row.dt = cfg.dt;
        double sup = 0.0;
        for (std::size_t k = 0; k < n_grid; ++k) {
            mean_r[k] /= static_cast<double>(n_paths);
            sup = std::max(sup, std::abs(mean_r[k] - out.reference_r[k]));
        }
        row.sup_discrepancy = sup;
        out.rows.push_back(row);
    }

    // Trend check: ordering rows by decreasing eps, discrepancies must not grow.
    std::vector<AveragingValidationRow> sorted = out.rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.eps > b.eps; });
    out.monotone_shrink = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        out.monotone_shrink =
            out.monotone_shrink && sorted[i].sup_discrepancy <= sorted[i - 1].sup_discrepancy;
    }
    return out;
}

inline void to_json(nlohmann::json& j, const Quantiles& q) {
    j = nlohmann::json{{"q25", q.q25}, {"median", q.median}, {"q75", q.q75}};
}

inline void to_json(nlohmann::json& j, const RunRecord& r) {
    j = nlohmann::json{{"index", r.index}, {"seed", r.seed}, {"ok", r.ok}};
    if (r.ok) {
        j["metrics"] = r.metrics;
    } else {
        j["fault"] = r.fault;
    }
}

inline void to_json(nlohmann::json& j, const MonteCarloResult& m) {
    j = nlohmann::json{{"runs", m.runs},
                       {"n_ok", m.n_ok},
                       {"n_reached_delta_ball", m.n_reached_delta_ball},
                       {"trailing_mean_distance", m.trailing_mean_distance},
                       {"final_distance", m.final_distance},
                       {"angular_drift", m.angular_drift},
                       {"abs_angular_drift", m.abs_angular_drift},
                       {"heading_alignment", m.heading_alignment},
                       {"mean_heading_alignment", m.mean_heading_alignment}};
}

inline void to_json(nlohmann::json& j, const AveragingValidationRow& r) {
    j = nlohmann::json{{"eps", r.eps}, {"dt", r.dt}, {"sup_discrepancy", r.sup_discrepancy}};
}

inline void to_json(nlohmann::json& j, const AveragingValidationResult& r) {
    j = nlohmann::json{{"rows", r.rows},
                       {"n_paths", r.n_paths},
                       {"t_end", r.t_end},
                       {"grid_dt", r.grid_dt},
                       {"monotone_shrink", r.monotone_shrink}};
}

/// Combined machine-readable report for a scenario: closed-form analysis
/// (equilibria, thresholds, theorem checks) plus, optionally, one simulated
/// run's metrics.
[[nodiscard]] inline nlohmann::json report(const Scenario& sc, bool include_simulation = false) {
    nlohmann::json j{{"scenario",
                      {{"name", sc.name},
                       {"field", sc.field},
                       {"controller", sc.params},
                       {"seed", sc.seed}}}};
    if (sc.field.is_quadratic()) {
        j["equilibria"] = equilibrium_report(sc.params, sc.field);
        j["stability"] = stability_report(sc.params, sc.field);
    } else {
        j["analysis"] = "closed-form analysis applies to quadratic fields only";
    }
    if (include_simulation) {
        const RunResult run = run_scenario(sc);
        j["simulation"] = {{"metrics", run.metrics},
                           {"dt", run.trajectory.dt},
                           {"t_hold", run.trajectory.t_hold},
                           {"dt_warning", run.trajectory.dt_warning}};
    }
    return j;
}

}  // namespace uniseek
