#include "scalar1d/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scalar1d/errors.hpp"

namespace scalar1d {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

double get_num(const json& j, const std::string& where, const std::string& key, double dflt,
               bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(where + "." + key + " is required");
        return dflt;
    }
    if (!j[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
    return j[key].get<double>();
}

ProfileComponent parse_component(const json& j, const std::string& where) {
    check_keys(j, where, {"kind", "target", "center", "half_width", "amplitude"});
    ProfileComponent c;
    const std::string kind = j.value("kind", "poly_spline");
    if (kind == "poly_spline")
        c.kind = ProfileKind::PolySpline;
    else if (kind == "smooth_bump")
        c.kind = ProfileKind::SmoothBump;
    else
        throw ConfigError(where + ".kind must be poly_spline or smooth_bump");
    const std::string target = j.value("target", "V0");
    if (target == "V0")
        c.target = ProfileTarget::V0;
    else if (target == "V1")
        c.target = ProfileTarget::V1;
    else
        throw ConfigError(where + ".target must be V0 or V1");
    c.center = get_num(j, where, "center", 0.0, true);
    c.half_width = get_num(j, where, "half_width", 0.0, true);
    c.amplitude = get_num(j, where, "amplitude", 0.0, true);
    if (!(c.half_width > 0.0)) throw ConfigError(where + ".half_width must be > 0");
    return c;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "config",
               {"version", "particle", "radiation", "integrator", "picard", "verify", "output",
                "sweep"});

    RunConfig cfg;
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != 1)
        throw ConfigError("config.version must be the integer 1");

    if (j.contains("particle")) {
        const auto& p = j["particle"];
        check_keys(p, "particle", {"bare_mass", "charge"});
        cfg.particle.bare_mass = get_num(p, "particle", "bare_mass", 1.0, true);
        cfg.particle.charge = get_num(p, "particle", "charge", 1.0, true);
    }
    cfg.particle.validate();

    if (j.contains("radiation")) {
        const auto& r = j["radiation"];
        check_keys(r, "radiation", {"components"});
        std::vector<ProfileComponent> comps;
        if (r.contains("components")) {
            if (!r["components"].is_array())
                throw ConfigError("radiation.components must be an array");
            int idx = 0;
            for (const auto& cj : r["components"])
                comps.push_back(
                    parse_component(cj, "radiation.components[" + std::to_string(idx++) + "]"));
        }
        cfg.radiation = RadiationProfile(std::move(comps));
    }

    if (j.contains("integrator")) {
        const auto& g = j["integrator"];
        check_keys(g, "integrator", {"t_end", "tolerance", "max_step", "output_dt"});
        cfg.integrator.t_end = get_num(g, "integrator", "t_end", cfg.integrator.t_end);
        cfg.integrator.tolerance = get_num(g, "integrator", "tolerance", cfg.integrator.tolerance);
        cfg.integrator.max_step = get_num(g, "integrator", "max_step", cfg.integrator.max_step);
        cfg.integrator.output_dt = get_num(g, "integrator", "output_dt", cfg.integrator.output_dt);
    }
    if (!(cfg.integrator.t_end > 0.0)) throw ConfigError("integrator.t_end must be > 0");
    if (!(cfg.integrator.tolerance > 0.0)) throw ConfigError("integrator.tolerance must be > 0");
    if (!(cfg.integrator.max_step > 0.0)) throw ConfigError("integrator.max_step must be > 0");
    if (!(cfg.integrator.output_dt > 0.0)) throw ConfigError("integrator.output_dt must be > 0");

    if (j.contains("picard")) {
        const auto& p = j["picard"];
        check_keys(p, "picard", {"enabled", "horizon", "gamma_factor", "tol", "max_iter",
                                 "grid_nodes"});
        if (p.contains("enabled")) {
            if (!p["enabled"].is_boolean()) throw ConfigError("picard.enabled must be a boolean");
            cfg.picard.enabled = p["enabled"].get<bool>();
        }
        cfg.picard.horizon = get_num(p, "picard", "horizon", cfg.picard.horizon);
        cfg.picard.gamma_factor = get_num(p, "picard", "gamma_factor", cfg.picard.gamma_factor);
        cfg.picard.tol = get_num(p, "picard", "tol", cfg.picard.tol);
        cfg.picard.max_iter = static_cast<int>(get_num(p, "picard", "max_iter", cfg.picard.max_iter));
        cfg.picard.grid_nodes =
            static_cast<int>(get_num(p, "picard", "grid_nodes", cfg.picard.grid_nodes));
    }
    if (!(cfg.picard.horizon > 0.0)) throw ConfigError("picard.horizon must be > 0");
    if (!(cfg.picard.gamma_factor > 1.0)) throw ConfigError("picard.gamma_factor must be > 1");
    if (cfg.picard.grid_nodes < 2) throw ConfigError("picard.grid_nodes must be >= 2");

    if (j.contains("verify")) {
        const auto& v = j["verify"];
        check_keys(v, "verify",
                   {"windows", "epsilons", "snapshot_times", "grid", "cross_method_tol",
                    "cancellation_rate_tol", "cancellation_accel_tol"});
        if (v.contains("windows")) {
            for (const auto& w : v["windows"]) {
                if (!w.is_array() || w.size() != 2)
                    throw ConfigError("verify.windows entries must be [t1, t2]");
                cfg.verify.windows.push_back({w[0].get<double>(), w[1].get<double>()});
            }
        }
        if (v.contains("epsilons")) {
            cfg.verify.epsilons.clear();
            for (const auto& e : v["epsilons"]) cfg.verify.epsilons.push_back(e.get<double>());
        }
        if (v.contains("snapshot_times"))
            for (const auto& t : v["snapshot_times"])
                cfg.verify.snapshot_times.push_back(t.get<double>());
        if (v.contains("grid")) {
            const auto& g = v["grid"];
            check_keys(g, "verify.grid", {"x_min", "x_max", "points"});
            cfg.verify.grid_min = get_num(g, "verify.grid", "x_min", cfg.verify.grid_min);
            cfg.verify.grid_max = get_num(g, "verify.grid", "x_max", cfg.verify.grid_max);
            cfg.verify.grid_points =
                static_cast<int>(get_num(g, "verify.grid", "points", cfg.verify.grid_points));
        }
        cfg.verify.cross_method_tol =
            get_num(v, "verify", "cross_method_tol", cfg.verify.cross_method_tol);
        cfg.verify.cancellation_rate_tol =
            get_num(v, "verify", "cancellation_rate_tol", cfg.verify.cancellation_rate_tol);
        cfg.verify.cancellation_accel_tol =
            get_num(v, "verify", "cancellation_accel_tol", cfg.verify.cancellation_accel_tol);
    }
    if (cfg.verify.grid_points < 2) throw ConfigError("verify.grid.points must be >= 2");
    if (!(cfg.verify.grid_min < cfg.verify.grid_max))
        throw ConfigError("verify.grid.x_min must be < x_max");
    for (const auto& w : cfg.verify.windows)
        if (!(0.0 <= w[0] && w[0] < w[1] && w[1] <= cfg.integrator.t_end))
            throw ConfigError("verify.windows must satisfy 0 <= t1 < t2 <= t_end");

    if (j.contains("output")) {
        const auto& o = j["output"];
        check_keys(o, "output", {"directory", "formats"});
        if (o.contains("directory")) cfg.output.directory = o["directory"].get<std::string>();
        if (o.contains("formats")) {
            cfg.output.formats.clear();
            for (const auto& f : o["formats"]) {
                const std::string fmt = f.get<std::string>();
                if (fmt != "csv") throw ConfigError("output.formats supports only 'csv'");
                cfg.output.formats.push_back(fmt);
            }
        }
    }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        check_keys(s, "sweep", {"charge", "bare_mass", "amplitude_scale"});
        auto read_list = [&](const char* key, std::vector<double>& out) {
            if (!s.contains(key)) return;
            for (const auto& x : s[key]) out.push_back(x.get<double>());
        };
        read_list("charge", cfg.sweep.charge);
        read_list("bare_mass", cfg.sweep.bare_mass);
        read_list("amplitude_scale", cfg.sweep.amplitude_scale);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["version"] = cfg.version;
    j["particle"] = {{"bare_mass", cfg.particle.bare_mass}, {"charge", cfg.particle.charge}};
    json comps = json::array();
    for (const auto& c : cfg.radiation.components()) {
        comps.push_back({{"kind", c.kind == ProfileKind::PolySpline ? "poly_spline" : "smooth_bump"},
                         {"target", c.target == ProfileTarget::V0 ? "V0" : "V1"},
                         {"center", c.center},
                         {"half_width", c.half_width},
                         {"amplitude", c.amplitude}});
    }
    j["radiation"] = {{"components", comps}};
    j["integrator"] = {{"t_end", cfg.integrator.t_end},
                       {"tolerance", cfg.integrator.tolerance},
                       {"max_step", cfg.integrator.max_step},
                       {"output_dt", cfg.integrator.output_dt}};
    j["picard"] = {{"enabled", cfg.picard.enabled},
                   {"horizon", cfg.picard.horizon},
                   {"gamma_factor", cfg.picard.gamma_factor},
                   {"tol", cfg.picard.tol},
                   {"max_iter", cfg.picard.max_iter},
                   {"grid_nodes", cfg.picard.grid_nodes}};
    json windows = json::array();
    for (const auto& w : cfg.verify.windows) windows.push_back({w[0], w[1]});
    j["verify"] = {{"windows", windows},
                   {"epsilons", cfg.verify.epsilons},
                   {"snapshot_times", cfg.verify.snapshot_times},
                   {"grid",
                    {{"x_min", cfg.verify.grid_min},
                     {"x_max", cfg.verify.grid_max},
                     {"points", cfg.verify.grid_points}}},
                   {"cross_method_tol", cfg.verify.cross_method_tol},
                   {"cancellation_rate_tol", cfg.verify.cancellation_rate_tol},
                   {"cancellation_accel_tol", cfg.verify.cancellation_accel_tol}};
    j["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
    if (cfg.sweep.active())
        j["sweep"] = {{"charge", cfg.sweep.charge},
                      {"bare_mass", cfg.sweep.bare_mass},
                      {"amplitude_scale", cfg.sweep.amplitude_scale}};
    return j.dump(2) + "\n";
}

}  // namespace scalar1d
