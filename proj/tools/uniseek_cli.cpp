// uniseek command-line tool: simulate the closed-loop system, integrate the
// averaged dynamics, and emit equilibrium/stability/validation reports.
//
// Every subcommand reads a scenario config (JSON) and writes its results under
// --out (default: current directory), using the config file stem as the file
// name prefix. Exit codes: 0 success, 2 config error, 3 runtime fault.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uniseek/harness.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out_dir = ".";
    std::int64_t seed_override = -1;  ///< < 0 means "use the scenario's seed"
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "scenario config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed_override, "override the scenario seed")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
}

/// Load the scenario, apply the --seed override, and compute the output stem.
uniseek::Scenario load(const CommonArgs& args, std::filesystem::path& stem) {
    uniseek::Scenario sc = uniseek::load_scenario(args.config);
    if (args.seed_override >= 0) {
        sc.seed = static_cast<std::uint64_t>(args.seed_override);
    }
    std::filesystem::create_directories(args.out_dir);
    stem = std::filesystem::path(args.out_dir) / std::filesystem::path(args.config).stem();
    return sc;
}

void print_written(const std::filesystem::path& path) {
    std::printf("wrote %s\n", path.string().c_str());
}

int run_simulate(const CommonArgs& args) {
    std::filesystem::path stem;
    const uniseek::Scenario sc = load(args, stem);
    const uniseek::RunResult run = uniseek::run_scenario(sc);

    const auto csv = stem.string() + "_trajectory.csv";
    uniseek::write_trajectory_csv(csv, run.trajectory);
    print_written(csv);

    nlohmann::json j{{"scenario", sc.name},
                     {"seed", sc.seed},
                     {"dt", run.trajectory.dt},
                     {"t_hold", run.trajectory.t_hold},
                     {"dt_warning", run.trajectory.dt_warning},
                     {"metrics", run.metrics}};
    const auto js = stem.string() + "_metrics.json";
    uniseek::write_json(js, j);
    print_written(js);
    return 0;
}

int run_monte_carlo(const CommonArgs& args, int n_runs) {
    std::filesystem::path stem;
    const uniseek::Scenario sc = load(args, stem);
    const uniseek::MonteCarloResult mc = uniseek::monte_carlo(sc, n_runs);

    nlohmann::json j{{"scenario", sc.name}, {"master_seed", sc.seed}, {"n_runs", n_runs}};
    j.update(nlohmann::json(mc));
    const auto js = stem.string() + "_monte_carlo.json";
    uniseek::write_json(js, j);
    print_written(js);
    std::printf("ok %d/%d, median trailing-mean distance %.6g\n", mc.n_ok, n_runs,
                mc.trailing_mean_distance.median);
    return 0;
}

int run_average(const CommonArgs& args) {
    std::filesystem::path stem;
    const uniseek::Scenario sc = load(args, stem);
    const uniseek::VehicleState s0 = uniseek::initial_state(sc);

    const auto csv = stem.string() + "_averaged.csv";
    nlohmann::json j{{"scenario", sc.name}, {"dt", sc.avg.dt}, {"t_end", sc.avg.t_end}};
    if (sc.field.q_p() == 0.0) {
        const auto lifted = uniseek::lift_to_avg_circular(s0, sc.params, sc.field);
        const auto traj = uniseek::integrate_circular_avg(lifted, sc.params, sc.field, sc.avg);
        uniseek::write_avg_trajectory_csv(csv, traj);
        j["chart"] = "circular";
        j["initial"] = lifted;
        j["final"] = traj.states.back();
        j["final_canonical"] = uniseek::canonical_chart_point(traj.states.back());
    } else {
        const auto lifted = uniseek::lift_to_avg(s0, sc.params, sc.field);
        const auto traj = uniseek::integrate_elliptical_avg(lifted, sc.params, sc.field, sc.avg);
        uniseek::write_avg_trajectory_csv(csv, traj);
        j["chart"] = "elliptical";
        j["initial"] = lifted;
        j["final"] = traj.states.back();
        j["final_canonical"] = uniseek::canonical_chart_point(traj.states.back());
    }
    print_written(csv);
    const auto js = stem.string() + "_averaged.json";
    uniseek::write_json(js, j);
    print_written(js);
    return 0;
}

int run_equilibria(const CommonArgs& args) {
    std::filesystem::path stem;
    const uniseek::Scenario sc = load(args, stem);
    const auto js = stem.string() + "_equilibria.json";
    uniseek::write_json(js, uniseek::equilibrium_report(sc.params, sc.field));
    print_written(js);
    return 0;
}

int run_stability(const CommonArgs& args) {
    std::filesystem::path stem;
    const uniseek::Scenario sc = load(args, stem);
    const auto js = stem.string() + "_stability.json";
    uniseek::write_json(js, uniseek::stability_report(sc.params, sc.field));
    print_written(js);
    return 0;
}

int run_validate_averaging(const CommonArgs& args, std::vector<double> eps_list, int n_paths,
                           double t_end, double grid_dt) {
    std::filesystem::path stem;
    const uniseek::Scenario sc = load(args, stem);
    if (eps_list.empty()) eps_list = {0.01, 0.001};
    const auto result = uniseek::validate_averaging(sc, eps_list, n_paths, t_end, grid_dt);

    nlohmann::json j{{"scenario", sc.name}, {"master_seed", sc.seed}};
    j.update(nlohmann::json(result));
    const auto js = stem.string() + "_averaging_validation.json";
    uniseek::write_json(js, j);
    print_written(js);
    for (const auto& row : result.rows) {
        std::printf("eps %-8g sup discrepancy %.6g\n", row.eps, row.sup_discrepancy);
    }
    std::printf("discrepancy shrinks with eps: %s\n", result.monotone_shrink ? "yes" : "no");
    return 0;
}

int run_report(const CommonArgs& args, bool include_simulation) {
    std::filesystem::path stem;
    const uniseek::Scenario sc = load(args, stem);
    const auto js = stem.string() + "_report.json";
    uniseek::write_json(js, uniseek::report(sc, include_simulation));
    print_written(js);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic source-seeking simulator and stability analyzer"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "run one closed-loop SDE trajectory");
    add_common(sim, sim_args);

    CommonArgs mc_args;
    int mc_runs = 20;
    CLI::App* mc = app.add_subcommand("monte-carlo", "run many seeds and aggregate metrics");
    add_common(mc, mc_args);
    mc->add_option("--runs", mc_runs, "number of runs")->check(CLI::PositiveNumber);

    CommonArgs avg_args;
    CLI::App* avg = app.add_subcommand("average", "integrate the averaged ODE from the lifted start");
    add_common(avg, avg_args);

    CommonArgs eq_args;
    CLI::App* eq = app.add_subcommand("equilibria", "closed-form equilibria and thresholds");
    add_common(eq, eq_args);

    CommonArgs st_args;
    CLI::App* st = app.add_subcommand("stability", "Jacobians, Hurwitz verdicts, theorem checks");
    add_common(st, st_args);

    CommonArgs va_args;
    std::vector<double> va_eps;
    int va_paths = 50;
    double va_t_end = 50.0;
    double va_grid_dt = 0.01;
    CLI::App* va = app.add_subcommand("validate-averaging",
                                      "compare SDE ensemble means against the averaged ODE");
    add_common(va, va_args);
    va->add_option("--eps", va_eps, "perturbation time scales to test (default: 0.01 0.001)");
    va->add_option("--paths", va_paths, "paths per eps")->check(CLI::PositiveNumber);
    va->add_option("--t-end", va_t_end, "comparison horizon")->check(CLI::PositiveNumber);
    va->add_option("--grid-dt", va_grid_dt, "comparison grid spacing")->check(CLI::PositiveNumber);

    CommonArgs rep_args;
    bool rep_sim = false;
    CLI::App* rep = app.add_subcommand("report", "combined analysis report");
    add_common(rep, rep_args);
    rep->add_flag("--simulate", rep_sim, "include one simulated run's metrics");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(sim_args);
        if (mc->parsed()) return run_monte_carlo(mc_args, mc_runs);
        if (avg->parsed()) return run_average(avg_args);
        if (eq->parsed()) return run_equilibria(eq_args);
        if (st->parsed()) return run_stability(st_args);
        if (va->parsed()) return run_validate_averaging(va_args, va_eps, va_paths, va_t_end,
                                                        va_grid_dt);
        if (rep->parsed()) return run_report(rep_args, rep_sim);
    } catch (const uniseek::ConfigError& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    } catch (const uniseek::Fault& err) {
        std::fprintf(stderr, "fault: %s\n", err.what());
        return 3;
    }
    return 0;
}
