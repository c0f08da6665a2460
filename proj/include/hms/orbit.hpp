#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hms/beamform.hpp"
#include "hms/errors.hpp"
#include "hms/link.hpp"

// LEO pass geometry over a spherical earth with a straight, constant-speed
// ground track, and handover traces driven by the beamforming and link
// modules. The surface broadside points at the pass's maximum-elevation
// direction; steering angles are the along-track component of the satellite
// direction in that frame, clipped to the surface's field of view.

namespace hms {

struct OrbitParams {
    double altitude = 1150.0;      // km
    double earth_radius = 6371.0;  // km
    double ground_speed = 7.5;     // km/s, sub-satellite point speed

    void validate() const {
        if (altitude <= 0.0) throw std::invalid_argument("orbit: altitude must be > 0");
        if (earth_radius <= 0.0) throw std::invalid_argument("orbit: earth_radius must be > 0");
        if (ground_speed <= 0.0) throw std::invalid_argument("orbit: ground_speed must be > 0");
    }
};

// Line-of-sight distance to the satellite at a given elevation:
// d = sqrt((Re+h)^2 - Re^2 cos^2 e) - Re sin e.
inline double slant_range(double elevation_deg, const OrbitParams& params) {
    params.validate();
    if (elevation_deg < 0.0 || elevation_deg > 90.0)
        throw std::domain_error(detail::str("slant_range: elevation ", elevation_deg,
                                            " deg outside [0, 90]"));
    const double e = deg_to_rad(elevation_deg);
    const double re = params.earth_radius;
    const double ra = re + params.altitude;
    return std::sqrt(ra * ra - re * re * std::cos(e) * std::cos(e)) - re * std::sin(e);
}

// Earth central angle between observer and sub-satellite point at a given
// elevation; inverse of the elevation formula below.
inline double central_angle_rad(double elevation_deg, const OrbitParams& params) {
    const double e = deg_to_rad(elevation_deg);
    const double ratio = params.earth_radius / (params.earth_radius + params.altitude);
    return std::acos(ratio * std::cos(e)) - e;
}

inline double elevation_from_central_angle(double gamma_rad, const OrbitParams& params) {
    const double re = params.earth_radius;
    const double ra = re + params.altitude;
    return rad_to_deg(std::atan2(ra * std::cos(gamma_rad) - re, ra * std::sin(gamma_rad)));
}

inline double slant_from_central_angle(double gamma_rad, const OrbitParams& params) {
    const double re = params.earth_radius;
    const double ra = re + params.altitude;
    return std::sqrt(re * re + ra * ra - 2.0 * re * ra * std::cos(gamma_rad));
}

struct PassSample {
    double t = 0.0;               // s
    double elevation = 0.0;       // deg
    double slant_range = 0.0;     // km
    double steering_angle = 0.0;  // deg from surface broadside
};

struct PassTrajectory {
    std::vector<PassSample> samples;  // strictly increasing t

    double start_time() const { return samples.front().t; }
    double end_time() const { return samples.back().t; }

    // Linear interpolation; nullopt outside the sampled span.
    std::optional<PassSample> at(double t) const {
        if (samples.empty() || t < start_time() - 1e-9 || t > end_time() + 1e-9)
            return std::nullopt;
        auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const PassSample& s, double v) { return s.t < v; });
        if (it == samples.begin()) return samples.front();
        if (it == samples.end()) return samples.back();
        const PassSample& hi = *it;
        const PassSample& lo = *(it - 1);
        const double a = (t - lo.t) / (hi.t - lo.t);
        return PassSample{t, lo.elevation + a * (hi.elevation - lo.elevation),
                          lo.slant_range + a * (hi.slant_range - lo.slant_range),
                          lo.steering_angle + a * (hi.steering_angle - lo.steering_angle)};
    }

    void shift_time(double offset_s) {
        for (PassSample& s : samples) s.t += offset_s;
    }
};

// Symmetric pass: the sub-satellite point runs a straight ground track whose
// closest approach matches max_elevation; samples start when the satellite
// rises above min_elevation. Optional zero-mean elevation jitter stands in
// for trajectory uncertainty.
inline PassTrajectory pass_geometry(const OrbitParams& params, double max_elevation_deg,
                                    double t_step_s, double min_elevation_deg,
                                    double jitter_sigma_deg = 0.0, unsigned seed = 0,
                                    double fov_deg = 75.0) {
    params.validate();
    if (t_step_s <= 0.0) throw std::domain_error("pass_geometry: t_step must be > 0");
    if (!(min_elevation_deg < max_elevation_deg) || max_elevation_deg > 90.0 ||
        min_elevation_deg <= 0.0)
        throw std::domain_error(detail::str("pass_geometry: need 0 < min_elevation (",
                                            min_elevation_deg, ") < max_elevation (",
                                            max_elevation_deg, ") <= 90"));

    const double re = params.earth_radius;
    const double cross_track_km = re * central_angle_rad(max_elevation_deg, params);
    const double reach_km = re * central_angle_rad(min_elevation_deg, params);
    const double half_track_km =
        std::sqrt(std::max(0.0, reach_km * reach_km - cross_track_km * cross_track_km));
    const double t_mid = half_track_km / params.ground_speed;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, jitter_sigma_deg);

    PassTrajectory pass;
    for (double t = 0.0; t <= 2.0 * t_mid + 1e-9; t += t_step_s) {
        const double x = params.ground_speed * (t - t_mid);  // km along track
        const double ground = std::hypot(cross_track_km, x);
        const double gamma = ground / re;
        double elevation = elevation_from_central_angle(gamma, params);
        if (jitter_sigma_deg > 0.0)
            elevation = std::clamp(elevation + jitter(rng), 0.5 * min_elevation_deg, 90.0);
        // Along-track component of the satellite direction in the broadside
        // frame; reduces to sgn(x) * (90 - elevation) for an overhead pass.
        const double horizontal = ground > 0.0 ? x / ground : 0.0;
        const double steer =
            rad_to_deg(std::asin(std::clamp(std::cos(deg_to_rad(elevation)) * horizontal,
                                            -1.0, 1.0)));
        pass.samples.push_back({t, elevation, slant_from_central_angle(gamma, params),
                                std::clamp(steer, -fov_deg, fov_deg)});
    }
    return pass;
}

enum class HandoverMode { hard, soft };

inline std::string handover_mode_name(HandoverMode m) {
    return m == HandoverMode::hard ? "hard" : "soft";
}

inline HandoverMode parse_handover_mode(const std::string& s) {
    if (s == "hard") return HandoverMode::hard;
    if (s == "soft") return HandoverMode::soft;
    throw std::invalid_argument("unknown handover mode \"" + s + "\" (expected hard or soft)");
}

struct HandoverPolicy {
    double trigger_elevation = 30.0;  // deg, leave the primary below this
    double soft_window = 20.0;        // s, duration of the split phase
    HandoverMode mode = HandoverMode::soft;
    // Optional explicit (primary, secondary) weight pairs spread uniformly
    // over the window; empty means a linear ramp.
    std::vector<std::pair<double, double>> split_schedule;
    double switch_time = 0.5;  // s, hard-mode outage gap
    double snr_floor = 5.0;    // dB, below this counts as outage

    void validate() const {
        if (trigger_elevation <= 0.0 || trigger_elevation >= 90.0)
            throw std::invalid_argument("handover: trigger_elevation must be in (0, 90)");
        if (soft_window < 0.0) throw std::invalid_argument("handover: soft_window must be >= 0");
        if (switch_time < 0.0) throw std::invalid_argument("handover: switch_time must be >= 0");
        for (const auto& [wp, ws] : split_schedule)
            if (wp < 0.0 || ws < 0.0 || std::abs(wp + ws - 1.0) > 1e-9)
                throw std::invalid_argument("handover: split weights must be >= 0 and sum to 1");
    }
};

struct TraceRow {
    double t = 0.0;
    std::string serving;       // "primary", "secondary", "both", "none"
    double elevation = 0.0;    // deg, of the satellite carrying the reported link
    double steering = 0.0;     // deg
    double eff = 0.0;          // amplitude efficiency on the satellite hop
    double snr = 0.0;          // dB, -inf during an outage gap
    std::string config_summary;
};

struct HandoverTrace {
    std::vector<TraceRow> rows;
    double outage_duration = 0.0;  // s
    double min_snr = 0.0;          // dB over served instants
};

namespace detail {

struct HopReference {
    double eff_user;  // broadside reference efficiency for the user hop
};

inline double handover_snr(const LinkBudgetInputs& base, const NoiseModel& noise,
                           double slant_km, double eff_sat, double eff_user) {
    LinkBudgetInputs in = base;
    in.d1 = slant_km;
    in.eff_rx = std::clamp(eff_sat, 1e-6, 1.0);
    in.eff_tx = std::clamp(eff_user, 1e-6, 1.0);
    return link_budget(in, noise).snr;
}

}  // namespace detail

// Time-stepped handover between two passes. Hard mode serves the primary
// until it drops below the trigger elevation, opens a switch-time gap, then
// serves the secondary. Soft mode splits the beam across both satellites
// for soft_window seconds leading up to the trigger instant, ramping the
// weights toward the secondary, and never interrupts the link. The user-side
// hop always uses the broadside reference efficiency, as in snr_sweep.
inline HandoverTrace simulate_handover(const PassTrajectory& primary,
                                       const PassTrajectory& secondary,
                                       const HandoverPolicy& policy,
                                       const Codebook& codebook,
                                       const SurfaceGeometry& geometry,
                                       const LinkBudgetInputs& link_inputs,
                                       const NoiseModel& noise) {
    policy.validate();
    if (primary.samples.empty() || secondary.samples.empty())
        throw ScenarioError("simulate_handover: empty trajectory");
    if (secondary.start_time() > primary.end_time() ||
        primary.start_time() > secondary.end_time())
        throw ScenarioError(detail::str(
            "simulate_handover: passes do not overlap (primary ends at ",
            primary.end_time(), " s, secondary starts at ", secondary.start_time(), " s)"));

    // Trigger instant: first primary sample below the trigger elevation after
    // its maximum-elevation point.
    double t_trigger = primary.end_time();
    {
        std::size_t peak = 0;
        for (std::size_t i = 1; i < primary.samples.size(); ++i)
            if (primary.samples[i].elevation > primary.samples[peak].elevation) peak = i;
        for (std::size_t i = peak; i < primary.samples.size(); ++i) {
            if (primary.samples[i].elevation < policy.trigger_elevation) {
                t_trigger = primary.samples[i].t;
                break;
            }
        }
    }

    const double dt = primary.samples.size() > 1
                          ? primary.samples[1].t - primary.samples[0].t
                          : 1.0;
    const double t_begin = primary.start_time();
    const double t_end = std::max(primary.end_time(), secondary.end_time());

    // Handover traces report the budget of one band, so the configs use the
    // codebook's primary-band policy; cross-band behaviour is track_link's
    // concern.
    const BandPolicy steer_policy =
        codebook.primary_band == Band::dl ? BandPolicy::dl_only : BandPolicy::ul_only;
    const SurfaceConfig broadside = steering_config(codebook, geometry, 0.0, steer_policy);
    const double eff_user = efficiency(broadside, link_inputs.f, 0.0);

    const auto split_weights = [&](double progress) -> std::pair<double, double> {
        if (policy.split_schedule.empty()) return {1.0 - progress, progress};
        const double pos = progress * (policy.split_schedule.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, policy.split_schedule.size() - 1);
        const double a = pos - lo;
        return {policy.split_schedule[lo].first * (1.0 - a) +
                    policy.split_schedule[hi].first * a,
                policy.split_schedule[lo].second * (1.0 - a) +
                    policy.split_schedule[hi].second * a};
    };

    HandoverTrace trace;
    double min_snr = std::numeric_limits<double>::infinity();

    for (double t = t_begin; t <= t_end + 1e-9; t += dt) {
        const std::optional<PassSample> p = primary.at(t);
        const std::optional<PassSample> s = secondary.at(t);
        TraceRow row;
        row.t = t;

        const bool past_trigger = t >= t_trigger - 1e-9;
        const bool in_soft_window = policy.mode == HandoverMode::soft && !past_trigger &&
                                    t >= t_trigger - policy.soft_window - 1e-9 && s.has_value();
        const bool in_switch_gap = policy.mode == HandoverMode::hard && past_trigger &&
                                   t < t_trigger + policy.switch_time - 1e-9;

        if (in_switch_gap || (!p && !s)) {
            row.serving = "none";
            row.snr = -std::numeric_limits<double>::infinity();
            row.config_summary = in_switch_gap ? "switching" : "no satellite";
        } else if (in_soft_window) {
            const double progress =
                policy.soft_window > 0.0
                    ? std::clamp((t - (t_trigger - policy.soft_window)) / policy.soft_window,
                                 0.0, 1.0)
                    : 1.0;
            const auto [w_p, w_s] = split_weights(progress);
            if (w_p <= 0.0 || w_s <= 0.0) {
                // Degenerate edge of the ramp: single-beam service.
                const PassSample& sat = w_s <= 0.0 ? *p : *s;
                const SurfaceConfig cfg =
                    steering_config(codebook, geometry, sat.steering_angle, steer_policy);
                row.serving = w_s <= 0.0 ? "primary" : "secondary";
                row.elevation = sat.elevation;
                row.steering = sat.steering_angle;
                row.eff = efficiency(cfg, link_inputs.f, sat.steering_angle);
                row.snr = detail::handover_snr(link_inputs, noise, sat.slant_range, row.eff,
                                               eff_user);
                row.config_summary = detail::str("steer=", row.steering);
            } else {
                const BeamSpec spec{{{p->steering_angle, w_p}, {s->steering_angle, w_s}},
                                    steer_policy};
                const SurfaceConfig cfg = split_config(codebook, geometry, spec);
                const double eff_p = efficiency(cfg, link_inputs.f, p->steering_angle);
                const double eff_s = efficiency(cfg, link_inputs.f, s->steering_angle);
                const double snr_p =
                    detail::handover_snr(link_inputs, noise, p->slant_range, eff_p, eff_user);
                const double snr_s =
                    detail::handover_snr(link_inputs, noise, s->slant_range, eff_s, eff_user);
                row.serving = "both";
                // Report the stronger leg; both stay active through the split.
                if (snr_p >= snr_s) {
                    row.elevation = p->elevation;
                    row.steering = p->steering_angle;
                    row.eff = eff_p;
                    row.snr = snr_p;
                } else {
                    row.elevation = s->elevation;
                    row.steering = s->steering_angle;
                    row.eff = eff_s;
                    row.snr = snr_s;
                }
                row.config_summary = detail::str("split=", p->steering_angle, "/",
                                                 s->steering_angle, " w=", w_p, "/", w_s);
            }
        } else {
            const bool use_secondary = past_trigger ? s.has_value() : !p.has_value();
            const std::optional<PassSample>& sat = use_secondary ? s : p;
            if (!sat) {
                row.serving = "none";
                row.snr = -std::numeric_limits<double>::infinity();
                row.config_summary = "no satellite";
            } else {
                const SurfaceConfig cfg =
                    steering_config(codebook, geometry, sat->steering_angle, steer_policy);
                row.serving = use_secondary ? "secondary" : "primary";
                row.elevation = sat->elevation;
                row.steering = sat->steering_angle;
                row.eff = efficiency(cfg, link_inputs.f, sat->steering_angle);
                row.snr = detail::handover_snr(link_inputs, noise, sat->slant_range, row.eff,
                                               eff_user);
                row.config_summary = detail::str("steer=", row.steering);
            }
        }

        if (std::isfinite(row.snr)) {
            min_snr = std::min(min_snr, row.snr);
            if (row.snr < policy.snr_floor) trace.outage_duration += dt;
        }
        trace.rows.push_back(std::move(row));
    }

    // The hard-mode gap is an exact event, not a sampled one.
    if (policy.mode == HandoverMode::hard && t_trigger < t_end)
        trace.outage_duration += policy.switch_time;
    trace.min_snr = min_snr;
    return trace;
}

struct TrackRow {
    double t = 0.0;
    double steering = 0.0;  // deg, satellite angle at t
    double eff = 0.0;       // config efficiency at the true angle
    double snr = 0.0;       // dB
};

// Follow one pass with a joint steering config refreshed every
// re_steer_interval seconds; between refreshes the stale config is evaluated
// at the true satellite angle.
inline std::vector<TrackRow> track_link(const PassTrajectory& pass, const Codebook& codebook,
                                        const SurfaceGeometry& geometry,
                                        const LinkBudgetInputs& link_inputs,
                                        const NoiseModel& noise, double re_steer_interval_s) {
    if (re_steer_interval_s <= 0.0)
        throw std::domain_error("track_link: re_steer_interval must be > 0");
    if (pass.samples.empty()) throw ScenarioError("track_link: empty trajectory");

    const SurfaceConfig broadside = steering_config(codebook, geometry, 0.0, BandPolicy::joint);
    const double eff_user = efficiency(broadside, link_inputs.f, 0.0);

    std::vector<TrackRow> rows;
    rows.reserve(pass.samples.size());
    std::optional<SurfaceConfig> current;
    double last_steer_t = 0.0;
    for (const PassSample& s : pass.samples) {
        if (!current || s.t - last_steer_t >= re_steer_interval_s - 1e-9) {
            current = steering_config(codebook, geometry, s.steering_angle, BandPolicy::joint);
            last_steer_t = s.t;
        }
        const double eff = efficiency(*current, link_inputs.f, s.steering_angle);
        rows.push_back({s.t, s.steering_angle, eff,
                        detail::handover_snr(link_inputs, noise, s.slant_range, eff, eff_user)});
    }
    return rows;
}

}  // namespace hms
