// hmsim: scenario-driven simulator of a dual-band tunable Huygens surface
// relaying LEO satellite links. Subcommands mirror the library pipeline:
// calibrate a cell, sweep its bias pattern, extract codebooks, synthesize
// steering/splitting configs, and evaluate link budgets, SNR sweeps and
// satellite passes/handovers. Outputs are deterministic CSV/JSON.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hms/beamform.hpp"
#include "hms/circuit.hpp"
#include "hms/config.hpp"
#include "hms/errors.hpp"
#include "hms/io.hpp"
#include "hms/link.hpp"
#include "hms/orbit.hpp"
#include "hms/pattern.hpp"
#include "hms/serialize.hpp"

namespace {

using namespace hms;

std::string resolve_out(const std::string& out, const std::string& default_name) {
    if (out.empty()) return default_name;
    std::filesystem::path p(out);
    if (std::filesystem::is_directory(p) || out.back() == '/')
        return (p / default_name).string();
    return out;
}

void summary(bool quiet, const std::string& line) {
    if (!quiet) std::cout << line << "\n";
}

// Transmission phase span of one band, measured as filled 64-bin coverage.
double transmission_span_deg(const HuygensPattern& pattern, Band band) {
    std::vector<bool> filled(64, false);
    for (const auto& c : pattern.responses)
        filled[phase_bin(std::arg(c.coefficient(band, SurfaceMode::transmit)), 64)] = true;
    const auto count = std::count(filled.begin(), filled.end(), true);
    return 360.0 * static_cast<double>(count) / 64.0;
}

int cmd_calibrate(const ScenarioConfig& cfg, const std::string& out, bool quiet) {
    const HuygensCell cell = build_cell(cfg);
    const double c_var = varactor_capacitance(cfg.varactor, cfg.calibration.v_mid);
    const double f_outer = branch_resonance_ghz(cell.electric.outer, cfg.varactor,
                                                cfg.calibration.v_mid);
    const double f_inner = branch_resonance_ghz(cell.electric.inner, cfg.varactor,
                                                cfg.calibration.v_mid, cell.electric.l_choke);
    nlohmann::json doc;
    doc["cell"] = cell;
    doc["resonances"] = {{"outer", f_outer}, {"inner", f_inner}, {"v_mid", cfg.calibration.v_mid},
                         {"c_var", c_var}};
    write_json_file(resolve_out(out, "cell.json"), doc);
    summary(quiet, detail::str("calibrated: outer=", format_g6(f_outer), " GHz, inner=",
                               format_g6(f_inner), " GHz (targets ", cfg.calibration.f_dl, "/",
                               cfg.calibration.f_ul, "), L_out=",
                               format_g6(cell.electric.outer.l), " nH, L_in=",
                               format_g6(cell.electric.inner.l), " nH"));
    return 0;
}

int cmd_pattern(const ScenarioConfig& cfg, const std::string& out, bool quiet) {
    const HuygensPattern pattern = build_pattern(cfg);
    CsvWriter csv(resolve_out(out, "pattern.csv"));
    csv.header({"u_e", "u_m", "band", "mode", "mag", "phase_deg"});
    const std::size_t n_um = pattern.grid.u_m_values.size();
    for (Band band : {Band::dl, Band::ul})
        for (SurfaceMode mode : {SurfaceMode::transmit, SurfaceMode::reflect})
            for (std::size_t i_e = 0; i_e < pattern.grid.u_e_values.size(); ++i_e)
                for (std::size_t i_m = 0; i_m < n_um; ++i_m) {
                    const Complex c = pattern.responses[i_e * n_um + i_m].coefficient(band, mode);
                    csv.row({format_g6(pattern.grid.u_e_values[i_e]),
                             format_g6(pattern.grid.u_m_values[i_m]), band_name(band),
                             mode_name(mode), format_g6(std::abs(c)),
                             format_g6(rad_to_deg(std::arg(c)))});
                }
    summary(quiet, detail::str("pattern: ", pattern.responses.size(), " bias points, dl t-span=",
                               format_g6(transmission_span_deg(pattern, Band::dl)),
                               " deg, ul t-span=",
                               format_g6(transmission_span_deg(pattern, Band::ul)), " deg"));
    return 0;
}

int cmd_codebook(const ScenarioConfig& cfg, const std::string& out, bool quiet) {
    const Codebook book = build_codebook(cfg);
    const CoverageMetrics m = coverage_metrics(book);
    const std::string path = resolve_out(out, "codebook.json");
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        CsvWriter csv(path);
        csv.header({"u_e", "u_m", "band", "mode", "mag", "phase_deg"});
        for (Band band : {Band::dl, Band::ul})
            for (const auto& e : book.entries) {
                const Complex c = band == Band::dl ? e.coeff_dl : e.coeff_ul;
                csv.row({format_g6(e.u_e), format_g6(e.u_m), band_name(band),
                         mode_name(book.mode), format_g6(std::abs(c)),
                         format_g6(rad_to_deg(std::arg(c)))});
            }
    } else {
        write_json_file(path, codebook_json(book));
    }
    summary(quiet, detail::str("codebook: ", book.entries.size(), "/", book.n_bins,
                               " bins filled, min_amp=", format_g6(m.min_amp), ", mean_amp=",
                               format_g6(m.mean_amp), ", span=", format_g6(m.phase_span_deg),
                               " deg"));
    return 0;
}

// Radiation cut of a config at both design bands.
void write_radiation_csv(const std::string& path, const SurfaceConfig& config) {
    std::vector<double> grid;
    for (double th = -89.9; th <= 89.9 + 1e-9; th += 0.1) grid.push_back(th);
    CsvWriter csv(path);
    csv.header({"theta_deg", "mag", "mag_db", "band", "mode"});
    for (Band band : {Band::dl, Band::ul}) {
        const double f = band == Band::dl ? config.f_dl : config.f_ul;
        for (const PatternPoint& p : radiation_pattern(config, f, grid))
            csv.row({format_g6(p.theta_deg), format_g6(p.mag), format_g6(p.mag_db),
                     band_name(band), mode_name(config.mode)});
    }
}

int cmd_steer(const ScenarioConfig& cfg, double theta, const std::string& policy_name,
              const std::string& out, const std::string& pattern_out, bool quiet) {
    const Codebook book = build_codebook(cfg);
    const SurfaceConfig config =
        steering_config(book, build_geometry(cfg), theta, parse_band_policy(policy_name));
    write_json_file(resolve_out(out, "steer.json"), surface_config_json(config));
    if (!pattern_out.empty()) write_radiation_csv(pattern_out, config);
    const double f_dl = cfg.calibration.f_dl, f_ul = cfg.calibration.f_ul;
    summary(quiet, detail::str("eff_dl=", format_g6(efficiency(config, f_dl, theta)),
                               ", eff_ul=", format_g6(efficiency(config, f_ul, theta)),
                               ", lobe_dl=", format_g6(main_lobe_deg(config, f_dl)),
                               " deg, lobe_ul=", format_g6(main_lobe_deg(config, f_ul)),
                               " deg"));
    return 0;
}

int cmd_split(const ScenarioConfig& cfg, const std::vector<double>& thetas,
              const std::vector<double>& weights, const std::string& policy_name,
              const std::string& out, const std::string& pattern_out, bool quiet) {
    if (thetas.size() != weights.size())
        throw ConfigError("split: --thetas and --weights must have the same length");
    BeamSpec spec;
    spec.band_policy = parse_band_policy(policy_name);
    for (std::size_t i = 0; i < thetas.size(); ++i)
        spec.beams.push_back({thetas[i], weights[i]});
    const Codebook book = build_codebook(cfg);
    const SurfaceGeometry geom = build_geometry(cfg);
    const SurfaceConfig config = split_config(book, geom, spec);
    write_json_file(resolve_out(out, "split.json"), surface_config_json(config));
    if (!pattern_out.empty()) write_radiation_csv(pattern_out, config);

    const double f_primary = book.primary_band == Band::dl ? book.f_dl : book.f_ul;
    std::string lobes;
    for (const Beam& b : spec.beams) {
        double best = 0.0;
        for (double th = b.theta_deg - 6.0; th <= b.theta_deg + 6.0; th += 0.05)
            best = std::max(best, efficiency(config, f_primary, th));
        lobes += detail::str(lobes.empty() ? "" : ", ", b.theta_deg, " deg eff=",
                             format_g6(best));
    }
    summary(quiet, detail::str("split lobes: ", lobes,
                               config.warnings.empty()
                                   ? ""
                                   : detail::str(" (", config.warnings.size(), " warning(s))")));
    return 0;
}

int cmd_linkbudget(const ScenarioConfig& cfg, const std::string& band_name_arg,
                   const std::string& out, bool quiet) {
    const Band band = parse_band(band_name_arg);
    const Codebook book = build_codebook(cfg);
    const SurfaceConfig broadside =
        steering_config(book, build_geometry(cfg), 0.0,
                        band == Band::dl ? BandPolicy::dl_only : BandPolicy::ul_only);
    LinkBudgetInputs in = build_link_inputs(cfg, band);
    const double eff0 = efficiency(broadside, in.f, 0.0);
    in.eff_rx = eff0;
    in.eff_tx = eff0;

    const LinkResult budget = link_budget(in, cfg.noise);
    const LinkResult fs = baseline_budget(BaselineKind::free_space, in, cfg.noise);
    const LinkResult brick =
        baseline_budget(BaselineKind::brick_wall, in, cfg.noise, cfg.link.brick_loss);

    std::printf("link budget (%s, %s GHz, eff=%s)\n", band_name(band).c_str(),
                format_g6(in.f).c_str(), format_g6(eff0).c_str());
    for (const auto& [name, value] : budget.breakdown)
        std::printf("  %-18s %10.2f dB\n", name.c_str(), value);
    std::printf("  %-18s %10.2f dBm\n", "p_rx", budget.p_rx);
    std::printf("  %-18s %10.2f dBm\n", "noise_floor", noise_floor_dbm(cfg.noise));
    std::printf("  %-18s %10.2f dB\n", "snr", budget.snr);
    std::printf("  %-18s %10.2f dB\n", "snr_free_space", fs.snr);
    std::printf("  %-18s %10.2f dB\n", "snr_brick_wall", brick.snr);

    if (!out.empty()) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [name, value] : budget.breakdown)
            terms.push_back({{"term", name}, {"db", value}});
        write_json_file(resolve_out(out, "linkbudget.json"),
                        {{"band", band_name(band)},
                         {"breakdown", terms},
                         {"p_rx", budget.p_rx},
                         {"snr", budget.snr},
                         {"snr_free_space", fs.snr},
                         {"snr_brick_wall", brick.snr}});
    }
    summary(quiet, detail::str("p_rx=", format_g6(budget.p_rx), " dBm, snr=",
                               format_g6(budget.snr), " dB (vs free space ",
                               format_g6(budget.snr - fs.snr), " dB)"));
    return 0;
}

int cmd_snr_sweep(const ScenarioConfig& cfg, const std::string& scenario,
                  std::vector<double> sides, double angle_min, double angle_max,
                  double angle_step, const std::string& out, bool quiet) {
    std::vector<double> angles;
    for (double a = angle_min; a <= angle_max + 1e-9; a += angle_step) angles.push_back(a);
    const Codebook book = build_codebook(cfg);
    const SurfaceGeometry geom = build_geometry(cfg);
    const LinkBudgetInputs in = build_link_inputs(cfg, book.primary_band);

    std::vector<SnrSweepRow> rows;
    const auto run = [&](SweepScenario s) {
        const auto part = snr_sweep(s, angles, sides, book, geom, in, cfg.noise,
                                    cfg.link.brick_loss);
        rows.insert(rows.end(), part.begin(), part.end());
    };
    if (scenario == "steer_out" || scenario == "both") run(SweepScenario::steer_out);
    if (scenario == "vary_incident" || scenario == "both") run(SweepScenario::vary_incident);
    if (rows.empty()) throw ConfigError("snr-sweep: unknown scenario \"" + scenario + "\"");

    CsvWriter csv(resolve_out(out, "snr_sweep.csv"));
    csv.header({"scenario", "side_m", "angle_deg", "snr_db", "snr_freespace_db",
                "snr_brick_db"});
    double broadside_gain = 0.0;
    for (const auto& r : rows) {
        csv.row({r.scenario, format_g6(r.side_m), format_g6(r.angle_deg), format_g6(r.snr_db),
                 format_g6(r.snr_freespace_db), format_g6(r.snr_brick_db)});
        if (r.angle_deg == 0.0 && std::abs(r.side_m - cfg.geometry.side) < 1e-12)
            broadside_gain = r.snr_db - r.snr_freespace_db;
    }
    summary(quiet, detail::str("snr-sweep: ", rows.size(), " rows, broadside improvement=",
                               format_g6(broadside_gain), " dB at side=",
                               format_g6(cfg.geometry.side), " m"));
    return 0;
}

int cmd_pass(const ScenarioConfig& cfg, unsigned seed, const std::string& out, bool quiet) {
    const PassTrajectory traj =
        pass_geometry(build_orbit(cfg), cfg.orbit.max_elevation, cfg.orbit.t_step,
                      cfg.orbit.min_elevation, cfg.orbit.jitter_sigma, seed, cfg.orbit.fov);
    CsvWriter csv(resolve_out(out, "pass.csv"));
    csv.header({"t_s", "elevation_deg", "slant_range_km", "steering_angle_deg"});
    for (const auto& s : traj.samples)
        csv.row({format_g6(s.t), format_g6(s.elevation), format_g6(s.slant_range),
                 format_g6(s.steering_angle)});
    summary(quiet, detail::str("pass: ", traj.samples.size(), " samples, duration=",
                               format_g6(traj.end_time()), " s, steer=[",
                               format_g6(traj.samples.front().steering_angle), ", ",
                               format_g6(traj.samples.back().steering_angle), "] deg"));
    return 0;
}

int cmd_handover(const ScenarioConfig& cfg, const std::string& mode_override, unsigned seed,
                 const std::string& out, bool quiet) {
    const OrbitParams orbit = build_orbit(cfg);
    PassTrajectory primary =
        pass_geometry(orbit, cfg.orbit.max_elevation, cfg.orbit.t_step,
                      cfg.orbit.min_elevation, cfg.orbit.jitter_sigma, seed, cfg.orbit.fov);
    PassTrajectory secondary =
        pass_geometry(orbit, cfg.orbit.max_elevation, cfg.orbit.t_step,
                      cfg.orbit.min_elevation, cfg.orbit.jitter_sigma, seed + 1, cfg.orbit.fov);
    secondary.shift_time(cfg.orbit.secondary_offset);

    HandoverPolicy policy = build_handover_policy(cfg);
    if (!mode_override.empty()) policy.mode = parse_handover_mode(mode_override);

    const Codebook book = build_codebook(cfg);
    const HandoverTrace trace =
        simulate_handover(primary, secondary, policy, book, build_geometry(cfg),
                          build_link_inputs(cfg, book.primary_band), cfg.noise);

    CsvWriter csv(resolve_out(out, "handover.csv"));
    csv.header({"t_s", "serving", "elev_deg", "steer_deg", "eff", "snr_db"});
    for (const auto& r : trace.rows)
        csv.row({format_g6(r.t), r.serving, format_g6(r.elevation), format_g6(r.steering),
                 format_g6(r.eff), format_g6(r.snr)});
    summary(quiet, detail::str("handover mode=", handover_mode_name(policy.mode), ": outage=",
                               format_g6(trace.outage_duration), " s, min_snr=",
                               format_g6(trace.min_snr), " dB, rows=", trace.rows.size()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hmsim: dual-band Huygens metasurface satellite link simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path;
    unsigned seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "Scenario config (JSON)");
    app.add_option("--out", out_path, "Output file or directory");
    app.add_option("--seed", seed, "Seed for trajectory jitter");
    app.add_flag("--quiet", quiet, "Suppress the summary line");

    app.add_subcommand("calibrate", "Solve branch inductances for the dual-band cell");
    app.add_subcommand("pattern", "Sweep the bias grid and export the response pattern");
    app.add_subcommand("codebook", "Extract the max-amplitude phase codebook");

    auto* steer = app.add_subcommand("steer", "Synthesize a single-beam steering config");
    double theta = 0.0;
    std::string steer_policy = "joint";
    std::string steer_pattern_out;
    steer->add_option("--theta", theta, "Target angle from broadside (deg)")->required();
    steer->add_option("--policy", steer_policy, "Band policy: joint, dl_only, ul_only");
    steer->add_option("--pattern-out", steer_pattern_out,
                      "Also export the radiation pattern CSV");

    auto* split = app.add_subcommand("split", "Synthesize a multi-beam split config");
    std::vector<double> thetas{-45.0, 45.0};
    std::vector<double> split_weights{0.5, 0.5};
    std::string split_policy = "dl_only";
    std::string split_pattern_out;
    split->add_option("--thetas", thetas, "Beam angles (deg)")->delimiter(',');
    split->add_option("--weights", split_weights, "Beam power fractions")->delimiter(',');
    split->add_option("--policy", split_policy, "Band policy: joint, dl_only, ul_only");
    split->add_option("--pattern-out", split_pattern_out,
                      "Also export the radiation pattern CSV");

    auto* linkbudget = app.add_subcommand("linkbudget", "Print the link budget term table");
    std::string budget_band = "dl";
    linkbudget->add_option("--band", budget_band, "Budget band: dl or ul");

    auto* sweep = app.add_subcommand("snr-sweep", "SNR vs angle and surface size");
    std::string sweep_scenario = "steer_out";
    std::vector<double> sides{0.25, 0.5, 0.75, 1.0};
    double angle_min = -75.0, angle_max = 75.0, angle_step = 5.0;
    sweep->add_option("--scenario", sweep_scenario, "steer_out, vary_incident or both");
    sweep->add_option("--sides", sides, "Surface sides (m)")->delimiter(',');
    sweep->add_option("--angle-min", angle_min, "First angle (deg)");
    sweep->add_option("--angle-max", angle_max, "Last angle (deg)");
    sweep->add_option("--angle-step", angle_step, "Angle step (deg)");

    app.add_subcommand("pass", "Generate one satellite pass trajectory");

    auto* handover = app.add_subcommand("handover", "Simulate a two-satellite handover");
    std::string handover_mode;
    handover->add_option("--mode", handover_mode, "Override handover mode: hard or soft");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const ScenarioConfig cfg =
            config_path.empty() ? default_scenario() : load_scenario_file(config_path);

        if (app.got_subcommand("calibrate")) return cmd_calibrate(cfg, out_path, quiet);
        if (app.got_subcommand("pattern")) return cmd_pattern(cfg, out_path, quiet);
        if (app.got_subcommand("codebook")) return cmd_codebook(cfg, out_path, quiet);
        if (app.got_subcommand("steer"))
            return cmd_steer(cfg, theta, steer_policy, out_path, steer_pattern_out, quiet);
        if (app.got_subcommand("split"))
            return cmd_split(cfg, thetas, split_weights, split_policy, out_path,
                             split_pattern_out, quiet);
        if (app.got_subcommand("linkbudget"))
            return cmd_linkbudget(cfg, budget_band, out_path, quiet);
        if (app.got_subcommand("snr-sweep"))
            return cmd_snr_sweep(cfg, sweep_scenario, sides, angle_min, angle_max, angle_step,
                                 out_path, quiet);
        if (app.got_subcommand("pass")) return cmd_pass(cfg, seed, out_path, quiet);
        if (app.got_subcommand("handover"))
            return cmd_handover(cfg, handover_mode, seed, out_path, quiet);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
