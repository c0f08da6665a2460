#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hms/beamform.hpp"
#include "hms/errors.hpp"
#include "hms/units.hpp"

// dB-domain link budget of a satellite -> surface -> user chain, with the
// surface contributing an aperture gain on each hop scaled by its steering
// efficiency. Baselines: direct free-space path, and the same path behind a
// brick wall.

namespace hms {

struct LinkBudgetInputs {
    double p_tx = 97.0;          // dBm, transmit EIRP
    double d1 = 1150.0;          // km, satellite <-> surface
    double d2 = 5.0;             // m, surface <-> user
    double f = 10.0;             // GHz
    double window_loss = -4.0;   // dB, <= 0
    double g_rx = 25.0;          // dBi, user terminal
    double surface_side = 0.75;  // m, square aperture side
    double eff_rx = 1.0;         // amplitude fraction on the receive hop
    double eff_tx = 1.0;         // amplitude fraction on the transmit hop

    void validate() const {
        if (d1 <= 0.0 || d2 <= 0.0) throw std::invalid_argument("link: distances must be > 0");
        if (f <= 0.0) throw std::invalid_argument("link: frequency must be > 0");
        if (window_loss > 0.0) throw std::invalid_argument("link: window_loss must be <= 0 dB");
        if (surface_side <= 0.0) throw std::invalid_argument("link: surface_side must be > 0");
        if (eff_rx <= 0.0 || eff_rx > 1.0 || eff_tx <= 0.0 || eff_tx > 1.0)
            throw std::invalid_argument("link: efficiencies must be in (0, 1]");
    }
};

struct NoiseModel {
    double bandwidth = 2.5e8;   // Hz
    double noise_figure = 7.0;  // dB
    double temperature = 290.0; // K

    void validate() const {
        if (bandwidth <= 0.0) throw std::invalid_argument("noise: bandwidth must be > 0");
        if (noise_figure < 0.0) throw std::invalid_argument("noise: noise_figure must be >= 0");
        if (temperature <= 0.0) throw std::invalid_argument("noise: temperature must be > 0");
    }
};

struct LinkResult {
    double p_rx = 0.0;  // dBm
    double snr = 0.0;   // dB
    std::vector<std::pair<std::string, double>> breakdown;  // dB terms summing to p_rx
};

// Free-space path loss 20*log10(4*pi*d/lambda), positive dB.
inline double fspl(double distance_m, double f_ghz) {
    if (distance_m <= 0.0) throw std::domain_error("fspl: distance must be > 0");
    if (f_ghz <= 0.0) throw std::domain_error("fspl: frequency must be > 0");
    return db_from_amplitude_ratio(4.0 * std::numbers::pi * distance_m / wavelength_m(f_ghz));
}

// Aperture gain of a side x side square surface with amplitude efficiency
// eff: G = 10*log10(eff^2 * 4*pi*A/lambda^2). The amplitude fraction enters
// squared, i.e. as a power efficiency.
inline double surface_gain(double side_m, double f_ghz, double eff) {
    if (side_m <= 0.0 || f_ghz <= 0.0) throw std::domain_error("surface_gain: inputs must be > 0");
    if (eff <= 0.0 || eff > 1.0) throw std::domain_error("surface_gain: eff must be in (0, 1]");
    const double lambda = wavelength_m(f_ghz);
    return db_from_power_ratio(eff * eff * 4.0 * std::numbers::pi * side_m * side_m /
                               (lambda * lambda));
}

inline double noise_floor_dbm(const NoiseModel& noise) {
    noise.validate();
    return db_from_power_ratio(kBoltzmann * noise.temperature * 1e3) +
           db_from_power_ratio(noise.bandwidth) + noise.noise_figure;
}

inline double snr(double p_rx_dbm, const NoiseModel& noise) {
    return p_rx_dbm - noise_floor_dbm(noise);
}

inline LinkResult link_budget(const LinkBudgetInputs& in, const NoiseModel& noise) {
    in.validate();
    LinkResult result;
    result.breakdown = {
        {"p_tx", in.p_tx},
        {"path_loss_sat", -fspl(in.d1 * 1e3, in.f)},
        {"window_loss", in.window_loss},
        {"surface_gain_rx", surface_gain(in.surface_side, in.f, in.eff_rx)},
        {"path_loss_user", -fspl(in.d2, in.f)},
        {"surface_gain_tx", surface_gain(in.surface_side, in.f, in.eff_tx)},
        {"g_rx", in.g_rx},
    };
    for (const auto& [name, value] : result.breakdown) result.p_rx += value;
    result.snr = snr(result.p_rx, noise);
    return result;
}

enum class BaselineKind { free_space, brick_wall };

// Reference budgets without the surface: one-hop Friis over d1+d2, and the
// same path attenuated by a constant brick-wall penetration loss.
inline LinkResult baseline_budget(BaselineKind kind, const LinkBudgetInputs& in,
                                  const NoiseModel& noise, double brick_loss_db = 20.0) {
    in.validate();
    LinkResult result;
    result.breakdown = {
        {"p_tx", in.p_tx},
        {"path_loss", -fspl(in.d1 * 1e3 + in.d2, in.f)},
        {"g_rx", in.g_rx},
    };
    if (kind == BaselineKind::brick_wall)
        result.breakdown.emplace_back("brick_loss", -brick_loss_db);
    for (const auto& [name, value] : result.breakdown) result.p_rx += value;
    result.snr = snr(result.p_rx, noise);
    return result;
}

enum class SweepScenario { steer_out, vary_incident };

inline std::string sweep_scenario_name(SweepScenario s) {
    return s == SweepScenario::steer_out ? "steer_out" : "vary_incident";
}

struct SnrSweepRow {
    std::string scenario;
    double side_m;
    double angle_deg;
    double snr_db;
    double snr_freespace_db;
    double snr_brick_db;
};

// SNR versus steering (or incidence) angle and surface size. One hop is
// steered to the swept angle, the other stays at the broadside reference;
// the two scenarios only swap those roles, so their tables coincide.
inline std::vector<SnrSweepRow> snr_sweep(SweepScenario scenario,
                                          const std::vector<double>& angles_deg,
                                          const std::vector<double>& sides_m,
                                          const Codebook& codebook,
                                          const SurfaceGeometry& geometry,
                                          const LinkBudgetInputs& inputs,
                                          const NoiseModel& noise,
                                          double brick_loss_db = 20.0) {
    if (angles_deg.empty() || sides_m.empty())
        throw std::invalid_argument("snr_sweep: angle and side lists must be non-empty");

    const BandPolicy policy =
        codebook.primary_band == Band::dl ? BandPolicy::dl_only : BandPolicy::ul_only;
    const SurfaceConfig broadside = steering_config(codebook, geometry, 0.0, policy);
    const double eff_broadside = efficiency(broadside, inputs.f, 0.0);

    std::vector<SnrSweepRow> rows;
    rows.reserve(angles_deg.size() * sides_m.size());
    for (double side : sides_m) {
        for (double angle : angles_deg) {
            const SurfaceConfig steered = steering_config(codebook, geometry, angle, policy);
            const double eff_steered = efficiency(steered, inputs.f, angle);

            LinkBudgetInputs in = inputs;
            in.surface_side = side;
            if (scenario == SweepScenario::steer_out) {
                in.eff_rx = eff_broadside;
                in.eff_tx = eff_steered;
            } else {
                in.eff_rx = eff_steered;
                in.eff_tx = eff_broadside;
            }
            const LinkResult budget = link_budget(in, noise);
            const LinkResult fs = baseline_budget(BaselineKind::free_space, in, noise);
            const LinkResult brick =
                baseline_budget(BaselineKind::brick_wall, in, noise, brick_loss_db);
            rows.push_back({sweep_scenario_name(scenario), side, angle, budget.snr,
                            fs.snr, brick.snr});
        }
    }
    return rows;
}

}  // namespace hms
