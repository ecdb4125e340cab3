#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uniseek/averaging.hpp"
#include "uniseek/closed_loop.hpp"
#include "uniseek/faults.hpp"
#include "uniseek/metrics.hpp"
#include "uniseek/params.hpp"
#include "uniseek/sde.hpp"
#include "uniseek/signal_field.hpp"

namespace uniseek {

/// A fully specified experiment: field, controller, initial pose and filter
/// policy, integrator settings, seed, and analysis knobs. Parsed from a JSON
/// config document with fail-fast validation (unknown keys are errors).
struct Scenario {
    std::string name;
    ScalarField field = ScalarField::rosenbrock();
    ControllerParams params;
    Vec2 position0{0.0, 0.0};
    double theta0 = 0.0;
    std::optional<double> e0;  ///< empty = "field" policy: e(0) = J(sensor(0)), so xi(0) = 0
    double eta0 = 0.0;
    SdeConfig sde;
    std::uint64_t seed = 0;
    MetricsConfig metrics;
    AvgConfig avg;
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::vector<std::string>& allowed,
                       const std::string& path) {
    std::string offending;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const std::string& k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            if (!offending.empty()) offending += ", ";
            offending += path + it.key();
        }
    }
    if (!offending.empty()) {
        throw ConfigError("unknown config key(s): " + offending);
    }
}

inline const json& require_obj(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing required config key: " + path + key);
    if (!it->is_object()) throw ConfigError("config key must be an object: " + path + key);
    return *it;
}

inline double get_number(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing required config key: " + path + key);
    if (!it->is_number()) throw ConfigError("config key must be a number: " + path + key);
    return it->get<double>();
}

inline double get_number_or(const json& j, const std::string& key, const std::string& path,
                            double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ConfigError("config key must be a number: " + path + key);
    return it->get<double>();
}

inline int get_int_or(const json& j, const std::string& key, const std::string& path,
                      int fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) {
        throw ConfigError("config key must be an integer: " + path + key);
    }
    return it->get<int>();
}

inline std::string get_string(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing required config key: " + path + key);
    if (!it->is_string()) throw ConfigError("config key must be a string: " + path + key);
    return it->get<std::string>();
}

inline Vec2 get_vec2(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing required config key: " + path + key);
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
        throw ConfigError("config key must be a 2-element number array: " + path + key);
    }
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

inline ScalarField parse_field(const json& j) {
    const std::string type = get_string(j, "type", "field.");
    if (type == "rosenbrock") {
        check_keys(j, {"type"}, "field.");
        return ScalarField::rosenbrock();
    }
    if (type == "circular") {
        check_keys(j, {"type", "f_star", "source", "q_r"}, "field.");
        return ScalarField::circular(get_number(j, "f_star", "field."),
                                     get_vec2(j, "source", "field."),
                                     get_number(j, "q_r", "field."));
    }
    if (type == "elliptical") {
        check_keys(j, {"type", "f_star", "source", "q_r", "q_p"}, "field.");
        return ScalarField::elliptical(get_number(j, "f_star", "field."),
                                       get_vec2(j, "source", "field."),
                                       get_number(j, "q_r", "field."),
                                       get_number(j, "q_p", "field."));
    }
    throw ConfigError("field.type must be one of circular, elliptical, rosenbrock (got '" + type +
                      "')");
}

}  // namespace detail

[[nodiscard]] inline Scenario parse_scenario(const nlohmann::json& j) {
    using detail::check_keys;
    using detail::get_number;
    using detail::get_number_or;
    using detail::get_int_or;
    using detail::require_obj;

    if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
    check_keys(j, {"name", "field", "controller", "initial", "sde", "seed", "metrics", "average"},
               "");

    Scenario sc;
    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("config key must be a string: name");
        sc.name = it->get<std::string>();
    }

    sc.field = detail::parse_field(require_obj(j, "field", ""));

    {
        const auto& c = require_obj(j, "controller", "");
        check_keys(c, {"a", "g", "eps", "b", "c", "h", "V_c", "R"}, "controller.");
        sc.params.a = get_number(c, "a", "controller.");
        sc.params.g = get_number(c, "g", "controller.");
        sc.params.eps = get_number(c, "eps", "controller.");
        sc.params.b = get_number(c, "b", "controller.");
        sc.params.c = get_number(c, "c", "controller.");
        sc.params.h = get_number(c, "h", "controller.");
        sc.params.V_c = get_number(c, "V_c", "controller.");
        sc.params.R = get_number(c, "R", "controller.");
        try {
            sc.params.validate();
        } catch (const InvalidParameter& err) {
            throw ConfigError(std::string("controller: ") + err.what());
        }
    }

    {
        const auto& ini = require_obj(j, "initial", "");
        check_keys(ini, {"position", "theta", "e", "eta"}, "initial.");
        sc.position0 = detail::get_vec2(ini, "position", "initial.");
        sc.theta0 = get_number(ini, "theta", "initial.");
        sc.eta0 = get_number_or(ini, "eta", "initial.", 0.0);
        if (auto it = ini.find("e"); it != ini.end()) {
            if (it->is_number()) {
                sc.e0 = it->get<double>();
            } else if (it->is_string() && it->get<std::string>() == "field") {
                sc.e0.reset();
            } else {
                throw ConfigError("initial.e must be a number or the string \"field\"");
            }
        }
    }

    {
        const auto& s = require_obj(j, "sde", "");
        check_keys(s, {"dt", "t_end", "record_stride", "noise", "t_hold"}, "sde.");
        sc.sde.t_end = get_number(s, "t_end", "sde.");
        sc.sde.dt = get_number_or(s, "dt", "sde.", 0.0);
        sc.sde.record_stride = get_int_or(s, "record_stride", "sde.", 10);
        sc.sde.t_hold = get_number_or(s, "t_hold", "sde.", 0.0);
        if (auto it = s.find("noise"); it != s.end()) {
            if (!it->is_string()) throw ConfigError("config key must be a string: sde.noise");
            const std::string mode = it->get<std::string>();
            if (mode == "band_limited") {
                sc.sde.noise = NoiseModel::band_limited;
            } else if (mode == "exact_increment") {
                sc.sde.noise = NoiseModel::exact_increment;
            } else {
                throw ConfigError("sde.noise must be band_limited or exact_increment (got '" +
                                  mode + "')");
            }
        }
    }

    {
        auto it = j.find("seed");
        if (it == j.end()) throw ConfigError("missing required config key: seed");
        if (!it->is_number_unsigned() && !it->is_number_integer()) {
            throw ConfigError("seed must be a non-negative integer");
        }
        const auto v = it->get<std::int64_t>();
        if (v < 0) throw ConfigError("seed must be a non-negative integer");
        sc.seed = static_cast<std::uint64_t>(v);
    }

    if (auto it = j.find("metrics"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("config key must be an object: metrics");
        check_keys(*it, {"delta", "window_fraction"}, "metrics.");
        sc.metrics.delta = get_number_or(*it, "delta", "metrics.", 0.1);
        sc.metrics.window_fraction = get_number_or(*it, "window_fraction", "metrics.", 0.2);
    }

    if (auto it = j.find("average"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("config key must be an object: average");
        check_keys(*it, {"dt", "t_end", "record_stride"}, "average.");
        sc.avg.dt = get_number_or(*it, "dt", "average.", 1e-3);
        sc.avg.t_end = get_number_or(*it, "t_end", "average.", sc.sde.t_end);
        sc.avg.record_stride = get_int_or(*it, "record_stride", "average.", 10);
    } else {
        sc.avg.t_end = sc.sde.t_end;
    }
    return sc;
}

[[nodiscard]] inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& err) {
        throw ConfigError("config is not valid JSON (" + path.string() + "): " + err.what());
    }
    return parse_scenario(j);
}

/// Materialize the initial closed-loop state, applying the e(0) policy: when
/// no explicit value is configured, e(0) equals the field reading at the
/// initial sensor position so the washout output starts at zero.
[[nodiscard]] inline VehicleState initial_state(const Scenario& sc) {
    VehicleState s;
    s.x_c = sc.position0.x;
    s.y_c = sc.position0.y;
    s.theta = sc.theta0;
    s.eta = sc.eta0;
    if (sc.e0.has_value()) {
        s.e = *sc.e0;
    } else {
        s.e = sc.field.evaluate(sensor_position(s, sc.params));
    }
    return s;
}

}  // namespace uniseek
