#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hms/circuit.hpp"
#include "hms/errors.hpp"
#include "hms/io.hpp"
#include "hms/link.hpp"
#include "hms/orbit.hpp"
#include "hms/pattern.hpp"

// Versioned scenario document shared by the CLI and the tests. Every field
// has a default; unknown keys are rejected by name. Units follow the module
// types: GHz, pF, nH, ohm, V, mm for element spacing, m for apertures and
// user distance, km for orbital lengths.

namespace hms {

struct CalibrationConfig {
    double f_dl = 10.0;          // GHz
    double f_ul = 15.0;          // GHz
    double v_mid = 10.0;         // V, bias at which the branch targets hold
    double c_fixed_outer = 0.024;  // pF
    double c_fixed_inner = 0.024;  // pF
    double r_outer = 1.0;        // ohm
    double r_inner = 1.0;        // ohm
    double l_choke = 1.0;        // nH
};

struct GridConfig {
    double u_min = 0.0;   // V
    double u_max = 20.0;  // V
    int points = 201;     // per axis
};

struct CodebookConfig {
    int n_bins = 32;
    SurfaceMode mode = SurfaceMode::transmit;
    Band band = Band::dl;
};

struct GeometryConfig {
    int n = 64;          // elements per row
    double d = 10.0;     // mm
    int rows = 64;
    double side = 0.75;  // m, square aperture side
};

struct LinkConfig {
    double p_tx = 97.0;         // dBm
    double d1 = 1150.0;         // km
    double d2 = 5.0;            // m
    double f_dl = 10.0;         // GHz, downlink budget frequency
    double f_ul = 14.0;         // GHz, uplink budget frequency
    double window_loss = -4.0;  // dB
    double g_rx = 25.0;         // dBi
    double brick_loss = 20.0;   // dB, brick-wall baseline penalty
};

struct OrbitConfig {
    double altitude = 1150.0;      // km
    double earth_radius = 6371.0;  // km
    double ground_speed = 7.5;     // km/s
    double max_elevation = 40.0;   // deg
    double min_elevation = 25.0;   // deg
    double t_step = 1.0;           // s
    double jitter_sigma = 0.0;     // deg, 0 disables trajectory noise
    double fov = 75.0;             // deg, steering clip
    double secondary_offset = 240.0;  // s, second satellite delay
};

struct HandoverConfig {
    HandoverMode mode = HandoverMode::soft;
    double trigger_elevation = 30.0;  // deg
    double soft_window = 20.0;        // s
    double switch_time = 0.5;         // s
    double snr_floor = 5.0;           // dB
    std::vector<std::pair<double, double>> split_schedule;  // empty = linear ramp
};

struct ScenarioConfig {
    int version = 1;
    VaractorModel varactor;
    CalibrationConfig calibration;
    GridConfig grid;
    CodebookConfig codebook;
    GeometryConfig geometry;
    LinkConfig link;
    NoiseModel noise;
    OrbitConfig orbit;
    HandoverConfig handover;
};

inline ScenarioConfig default_scenario() { return {}; }

// ---------------------------------------------------------------------------
// Strict JSON loading
// ---------------------------------------------------------------------------

namespace detail {

class SectionReader {
public:
    SectionReader(const nlohmann::json& j, std::string prefix)
        : json_(j), prefix_(std::move(prefix)) {
        if (!j.is_object())
            throw ConfigError("config: section \"" + prefix_ + "\" must be an object");
    }

    ~SectionReader() = default;

    void get(const char* key, double& out) {
        seen_.insert(key);
        if (!json_.contains(key)) return;
        if (!json_[key].is_number())
            throw ConfigError(qualify(key) + " must be a number");
        out = json_[key].get<double>();
    }

    void get(const char* key, int& out) {
        seen_.insert(key);
        if (!json_.contains(key)) return;
        if (!json_[key].is_number_integer())
            throw ConfigError(qualify(key) + " must be an integer");
        out = json_[key].get<int>();
    }

    void get(const char* key, std::string& out) {
        seen_.insert(key);
        if (!json_.contains(key)) return;
        if (!json_[key].is_string())
            throw ConfigError(qualify(key) + " must be a string");
        out = json_[key].get<std::string>();
    }

    void get(const char* key, std::vector<std::pair<double, double>>& out) {
        seen_.insert(key);
        if (!json_.contains(key)) return;
        const auto& arr = json_[key];
        if (!arr.is_array()) throw ConfigError(qualify(key) + " must be an array of pairs");
        out.clear();
        for (const auto& item : arr) {
            if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
                !item[1].is_number())
                throw ConfigError(qualify(key) + " entries must be [number, number] pairs");
            out.emplace_back(item[0].get<double>(), item[1].get<double>());
        }
    }

    void finish() const {
        for (const auto& [key, value] : json_.items())
            if (!seen_.count(key))
                throw ConfigError("config: unknown key \"" + qualify(key) + "\"");
    }

    std::string qualify(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

private:
    const nlohmann::json& json_;
    std::string prefix_;
    std::set<std::string> seen_;
};

}  // namespace detail

inline ScenarioConfig load_scenario(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    ScenarioConfig cfg;

    static const std::set<std::string> sections = {
        "version",  "varactor", "calibration", "grid",  "codebook",
        "geometry", "link",     "noise",       "orbit", "handover"};
    for (const auto& [key, value] : doc.items())
        if (!sections.count(key)) throw ConfigError("config: unknown key \"" + key + "\"");

    if (doc.contains("version")) {
        if (!doc["version"].is_number_integer())
            throw ConfigError("version must be an integer");
        cfg.version = doc["version"].get<int>();
        if (cfg.version != 1)
            throw ConfigError(detail::str("version: unsupported config version ", cfg.version));
    }

    if (doc.contains("varactor")) {
        detail::SectionReader r(doc["varactor"], "varactor");
        r.get("c_j0", cfg.varactor.c_j0);
        r.get("v_j", cfg.varactor.v_j);
        r.get("m", cfg.varactor.m);
        r.get("c_par", cfg.varactor.c_par);
        r.get("r_s", cfg.varactor.r_s);
        r.get("v_min", cfg.varactor.v_min);
        r.get("v_max", cfg.varactor.v_max);
        r.finish();
    }
    if (doc.contains("calibration")) {
        detail::SectionReader r(doc["calibration"], "calibration");
        r.get("f_dl", cfg.calibration.f_dl);
        r.get("f_ul", cfg.calibration.f_ul);
        r.get("v_mid", cfg.calibration.v_mid);
        r.get("c_fixed_outer", cfg.calibration.c_fixed_outer);
        r.get("c_fixed_inner", cfg.calibration.c_fixed_inner);
        r.get("r_outer", cfg.calibration.r_outer);
        r.get("r_inner", cfg.calibration.r_inner);
        r.get("l_choke", cfg.calibration.l_choke);
        r.finish();
    }
    if (doc.contains("grid")) {
        detail::SectionReader r(doc["grid"], "grid");
        r.get("u_min", cfg.grid.u_min);
        r.get("u_max", cfg.grid.u_max);
        r.get("points", cfg.grid.points);
        r.finish();
        if (cfg.grid.points < 1) throw ConfigError("grid.points must be >= 1");
        if (cfg.grid.u_min >= cfg.grid.u_max)
            throw ConfigError("grid.u_min must be below grid.u_max");
    }
    if (doc.contains("codebook")) {
        detail::SectionReader r(doc["codebook"], "codebook");
        r.get("n_bins", cfg.codebook.n_bins);
        std::string mode = mode_name(cfg.codebook.mode);
        std::string band = band_name(cfg.codebook.band);
        r.get("mode", mode);
        r.get("band", band);
        r.finish();
        try {
            cfg.codebook.mode = parse_mode(mode);
            cfg.codebook.band = parse_band(band);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(detail::str("codebook: ", e.what()));
        }
        if (cfg.codebook.n_bins < 8) throw ConfigError("codebook.n_bins must be >= 8");
    }
    if (doc.contains("geometry")) {
        detail::SectionReader r(doc["geometry"], "geometry");
        r.get("n", cfg.geometry.n);
        r.get("d", cfg.geometry.d);
        r.get("rows", cfg.geometry.rows);
        r.get("side", cfg.geometry.side);
        r.finish();
        if (cfg.geometry.n < 1) throw ConfigError("geometry.n must be >= 1");
        if (cfg.geometry.d <= 0) throw ConfigError("geometry.d must be > 0");
        if (cfg.geometry.rows < 1) throw ConfigError("geometry.rows must be >= 1");
        if (cfg.geometry.side <= 0) throw ConfigError("geometry.side must be > 0");
    }
    if (doc.contains("link")) {
        detail::SectionReader r(doc["link"], "link");
        r.get("p_tx", cfg.link.p_tx);
        r.get("d1", cfg.link.d1);
        r.get("d2", cfg.link.d2);
        r.get("f_dl", cfg.link.f_dl);
        r.get("f_ul", cfg.link.f_ul);
        r.get("window_loss", cfg.link.window_loss);
        r.get("g_rx", cfg.link.g_rx);
        r.get("brick_loss", cfg.link.brick_loss);
        r.finish();
    }
    if (doc.contains("noise")) {
        detail::SectionReader r(doc["noise"], "noise");
        r.get("bandwidth", cfg.noise.bandwidth);
        r.get("noise_figure", cfg.noise.noise_figure);
        r.get("temperature", cfg.noise.temperature);
        r.finish();
    }
    if (doc.contains("orbit")) {
        detail::SectionReader r(doc["orbit"], "orbit");
        r.get("altitude", cfg.orbit.altitude);
        r.get("earth_radius", cfg.orbit.earth_radius);
        r.get("ground_speed", cfg.orbit.ground_speed);
        r.get("max_elevation", cfg.orbit.max_elevation);
        r.get("min_elevation", cfg.orbit.min_elevation);
        r.get("t_step", cfg.orbit.t_step);
        r.get("jitter_sigma", cfg.orbit.jitter_sigma);
        r.get("fov", cfg.orbit.fov);
        r.get("secondary_offset", cfg.orbit.secondary_offset);
        r.finish();
    }
    if (doc.contains("handover")) {
        detail::SectionReader r(doc["handover"], "handover");
        std::string mode = handover_mode_name(cfg.handover.mode);
        r.get("mode", mode);
        r.get("trigger_elevation", cfg.handover.trigger_elevation);
        r.get("soft_window", cfg.handover.soft_window);
        r.get("switch_time", cfg.handover.switch_time);
        r.get("snr_floor", cfg.handover.snr_floor);
        r.get("split_schedule", cfg.handover.split_schedule);
        r.finish();
        try {
            cfg.handover.mode = parse_handover_mode(mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(detail::str("handover: ", e.what()));
        }
    }

    // Structural invariants that span fields.
    try {
        cfg.varactor.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.calibration.f_dl >= cfg.calibration.f_ul)
        throw ConfigError("calibration.f_dl must be below calibration.f_ul");
    if (cfg.calibration.v_mid < cfg.varactor.v_min || cfg.calibration.v_mid > cfg.varactor.v_max)
        throw ConfigError("calibration.v_mid must lie inside the varactor bias range");
    if (cfg.grid.u_min < cfg.varactor.v_min || cfg.grid.u_max > cfg.varactor.v_max)
        throw ConfigError("grid range must lie inside the varactor bias range");
    return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
    return load_scenario(read_json_file(path));
}

// ---------------------------------------------------------------------------
// Pipeline helpers shared by the CLI, tests and sweeps
// ---------------------------------------------------------------------------

inline HuygensCell build_cell(const ScenarioConfig& cfg) {
    return calibrate(cfg.calibration.f_dl, cfg.calibration.f_ul, cfg.calibration.v_mid,
                     cfg.varactor, cfg.calibration.c_fixed_outer, cfg.calibration.c_fixed_inner,
                     cfg.calibration.r_outer, cfg.calibration.r_inner, cfg.calibration.l_choke);
}

inline BiasGrid build_grid(const ScenarioConfig& cfg) {
    return uniform_bias_grid(cfg.grid.u_min, cfg.grid.u_max, cfg.grid.points);
}

inline HuygensPattern build_pattern(const ScenarioConfig& cfg) {
    return sweep_pattern(build_cell(cfg), build_grid(cfg), cfg.calibration.f_dl,
                         cfg.calibration.f_ul);
}

inline Codebook build_codebook(const ScenarioConfig& cfg) {
    return extract_codebook(build_pattern(cfg), cfg.codebook.band, cfg.codebook.mode,
                            cfg.codebook.n_bins);
}

inline SurfaceGeometry build_geometry(const ScenarioConfig& cfg) {
    return {cfg.geometry.n, cfg.geometry.d, cfg.geometry.rows};
}

inline LinkBudgetInputs build_link_inputs(const ScenarioConfig& cfg, Band band) {
    LinkBudgetInputs in;
    in.p_tx = cfg.link.p_tx;
    in.d1 = cfg.link.d1;
    in.d2 = cfg.link.d2;
    in.f = band == Band::dl ? cfg.link.f_dl : cfg.link.f_ul;
    in.window_loss = cfg.link.window_loss;
    in.g_rx = cfg.link.g_rx;
    in.surface_side = cfg.geometry.side;
    return in;
}

inline OrbitParams build_orbit(const ScenarioConfig& cfg) {
    return {cfg.orbit.altitude, cfg.orbit.earth_radius, cfg.orbit.ground_speed};
}

inline HandoverPolicy build_handover_policy(const ScenarioConfig& cfg) {
    HandoverPolicy policy;
    policy.trigger_elevation = cfg.handover.trigger_elevation;
    policy.soft_window = cfg.handover.soft_window;
    policy.mode = cfg.handover.mode;
    policy.split_schedule = cfg.handover.split_schedule;
    policy.switch_time = cfg.handover.switch_time;
    policy.snr_floor = cfg.handover.snr_floor;
    return policy;
}

}  // namespace hms
