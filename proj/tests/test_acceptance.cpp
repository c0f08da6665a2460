// Acceptance suite: one test per release criterion, each printing a
// PASS/FAIL line with the measured values so a run reads as a checklist.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hms/beamform.hpp"
#include "hms/circuit.hpp"
#include "hms/config.hpp"
#include "hms/link.hpp"
#include "hms/orbit.hpp"
#include "hms/pattern.hpp"
#include "test_helpers.hpp"

using namespace hms;
namespace fs = std::filesystem;

namespace {

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::cout << "criterion " << criterion << " (" << what << "): " << (ok ? "PASS" : "FAIL")
              << " [" << detail << "]\n";
}

HuygensCell lossless_default_cell() {
    ScenarioConfig cfg = hms_test::default_config();
    cfg.varactor.r_s = 0.0;
    return calibrate(cfg.calibration.f_dl, cfg.calibration.f_ul, cfg.calibration.v_mid,
                     cfg.varactor, cfg.calibration.c_fixed_outer,
                     cfg.calibration.c_fixed_inner, 0.0, 0.0, cfg.calibration.l_choke);
}

}  // namespace

TEST_CASE("criterion 1: free-space path loss reproduction") {
    const auto t0 = std::chrono::steady_clock::now();
    const double a = fspl(1150e3, 10.0);
    const double b = fspl(5.0, 10.0);
    const double c = fspl(1150e3, 14.0);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    const bool ok = std::abs(a - 173.7) <= 0.1 && std::abs(b - 66.4) <= 0.1 &&
                    std::abs(c - 176.6) <= 0.2 && ms < 1.0;
    report(1, "fspl", ok,
           detail::str("1150km/10GHz=", a, " dB, 5m/10GHz=", b, " dB, 1150km/14GHz=", c,
                       " dB, runtime=", ms, " ms"));
    REQUIRE(ok);
}

TEST_CASE("criterion 2: lossless energy conservation") {
    const HuygensCell cell = lossless_default_cell();
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> bias(0.0, 20.0), freq(8.0, 17.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const CellResponse r = cell_s_params(cell, bias(rng), bias(rng), freq(rng));
        worst = std::max(worst, std::abs(std::norm(r.t) + std::norm(r.r) - 1.0));
    }
    const bool ok = worst < 1e-9;
    report(2, "lossless conservation", ok, detail::str("max ||t|^2+|r|^2-1| = ", worst));
    REQUIRE(ok);
}

TEST_CASE("criterion 3: bi-resonance at the band targets, monotone in bias") {
    const HuygensCell& cell = hms_test::default_cell();
    const ScenarioConfig& cfg = hms_test::default_config();

    const double dip_dl =
        hms_test::find_transmission_dip(cell, cfg.calibration.v_mid, cfg.calibration.f_dl, 0.6);
    const double dip_ul =
        hms_test::find_transmission_dip(cell, cfg.calibration.v_mid, cfg.calibration.f_ul, 0.6);

    bool monotone = true;
    double prev_dl = 0.0, prev_ul = 0.0;
    for (double v : {6.0, 8.0, 10.0, 12.0, 14.0}) {
        const double d1 = hms_test::find_transmission_dip(cell, v, cfg.calibration.f_dl, 1.0);
        const double d2 = hms_test::find_transmission_dip(cell, v, cfg.calibration.f_ul, 1.0);
        monotone = monotone && d1 > prev_dl && d2 > prev_ul;
        prev_dl = d1;
        prev_ul = d2;
    }

    const bool ok = std::abs(dip_dl - cfg.calibration.f_dl) <= 0.1 &&
                    std::abs(dip_ul - cfg.calibration.f_ul) <= 0.1 && monotone;
    report(3, "bi-resonance", ok,
           detail::str("dips at ", dip_dl, "/", dip_ul, " GHz, monotone=", monotone));
    REQUIRE(ok);
}

TEST_CASE("criterion 4: codebook coverage") {
    const Codebook& book = hms_test::default_codebook();
    const CoverageMetrics m = coverage_metrics(book);
    const bool ok = static_cast<int>(book.entries.size()) >= 30 && m.min_amp >= 0.6;
    report(4, "codebook coverage", ok,
           detail::str(book.entries.size(), "/32 bins, min_amp=", m.min_amp));
    REQUIRE(ok);
}

TEST_CASE("criterion 5: steering loss bound over the field of view") {
    const auto t0 = std::chrono::steady_clock::now();
    const Codebook& book = hms_test::default_codebook();
    const SurfaceGeometry& geom = hms_test::default_geometry();
    double worst = 2.0, worst_theta = 0.0;
    for (double theta = -75.0; theta <= 75.0 + 1e-9; theta += 15.0) {
        const SurfaceConfig config = steering_config(book, geom, theta, BandPolicy::dl_only);
        const double eff = efficiency(config, book.f_dl, theta);
        if (eff < worst) {
            worst = eff;
            worst_theta = theta;
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double sec = std::chrono::duration<double>(t1 - t0).count();
    const bool ok = worst >= 0.5 && sec < 10.0;
    report(5, "steering loss bound", ok,
           detail::str("min eff=", worst, " at ", worst_theta, " deg, runtime=", sec, " s"));
    REQUIRE(ok);
}

TEST_CASE("criterion 6: beam split ratios") {
    const Codebook& book = hms_test::default_codebook();
    const SurfaceGeometry& geom = hms_test::default_geometry();
    bool ok = true;
    std::string details;
    for (double sep : {150.0, 120.0, 90.0, 60.0, 30.0}) {
        const double half = sep / 2.0;
        const SurfaceConfig even = split_config(
            book, geom, BeamSpec{{{-half, 0.5}, {half, 0.5}}, BandPolicy::dl_only});
        const double d_even = db_from_amplitude_ratio(
            hms_test::lobe_peak(even, book.f_dl, -half) /
            hms_test::lobe_peak(even, book.f_dl, half));

        const SurfaceConfig uneven = split_config(
            book, geom,
            BeamSpec{{{-half, 1.0 / 3.0}, {half, 2.0 / 3.0}}, BandPolicy::dl_only});
        const double ratio = db_from_amplitude_ratio(
            hms_test::lobe_peak(uneven, book.f_dl, half) /
            hms_test::lobe_peak(uneven, book.f_dl, -half));

        ok = ok && std::abs(d_even) <= 0.5 && std::abs(ratio - 3.01) <= 0.5;
        details += detail::str(sep, " deg: even ", d_even, " dB, ratio ", ratio, " dB; ");
    }
    report(6, "beam split ratios", ok, details);
    REQUIRE(ok);
}

TEST_CASE("criterion 7: cross-band pointing reciprocity") {
    const Codebook& book = hms_test::default_codebook();
    const SurfaceGeometry& geom = hms_test::default_geometry();
    bool ok = true;
    double worst = 0.0;
    for (double theta = -60.0; theta <= 60.0 + 1e-9; theta += 15.0) {
        const SurfaceConfig config = steering_config(book, geom, theta, BandPolicy::joint);
        const double gap =
            std::abs(main_lobe_deg(config, book.f_dl) - main_lobe_deg(config, book.f_ul));
        worst = std::max(worst, gap);
        ok = ok && gap <= 5.0;
    }
    report(7, "cross-band reciprocity", ok, detail::str("max DL/UL lobe gap = ", worst, " deg"));
    REQUIRE(ok);
}

TEST_CASE("criterion 8: SNR improvements over the baselines") {
    const ScenarioConfig& cfg = hms_test::default_config();
    const Codebook& book = hms_test::default_codebook();
    const SurfaceGeometry& geom = hms_test::default_geometry();
    const LinkBudgetInputs in = build_link_inputs(cfg, Band::dl);

    std::vector<double> angles;
    for (double a = -75.0; a <= 75.0 + 1e-9; a += 5.0) angles.push_back(a);
    const auto rows = snr_sweep(SweepScenario::steer_out, angles, {0.75}, book, geom, in,
                                cfg.noise, cfg.link.brick_loss);

    double broadside_gain = 0.0;
    bool identity = true;
    int longest_run = 0, run = 0;
    for (const auto& r : rows) {
        if (r.angle_deg == 0.0) broadside_gain = r.snr_db - r.snr_freespace_db;
        identity = identity &&
                   std::abs((r.snr_db - r.snr_brick_db) - (r.snr_db - r.snr_freespace_db) -
                            cfg.link.brick_loss) < 1e-9;
        run = r.snr_db > r.snr_freespace_db ? run + 1 : 0;
        longest_run = std::max(longest_run, run);
    }
    const double span = longest_run > 1 ? (longest_run - 1) * 5.0 : 0.0;
    const bool ok = broadside_gain >= 3.0 && broadside_gain <= 9.0 && identity && span >= 100.0;
    report(8, "snr improvements", ok,
           detail::str("broadside +", broadside_gain, " dB vs free space, identity=", identity,
                       ", span above free space = ", span, " deg"));
    REQUIRE(ok);
}

TEST_CASE("criterion 9: SNR strictly increases with surface size") {
    const ScenarioConfig& cfg = hms_test::default_config();
    const Codebook& book = hms_test::default_codebook();
    const LinkBudgetInputs in = build_link_inputs(cfg, Band::dl);

    std::vector<double> angles;
    for (double a = -75.0; a <= 75.0 + 1e-9; a += 15.0) angles.push_back(a);
    const std::vector<double> sides{0.25, 0.5, 0.75, 1.0};
    const auto rows = snr_sweep(SweepScenario::steer_out, angles, sides, book,
                                hms_test::default_geometry(), in, cfg.noise);

    bool ok = true;
    for (std::size_t a = 0; a < angles.size(); ++a)
        for (std::size_t s = 1; s < sides.size(); ++s)
            ok = ok && rows[s * angles.size() + a].snr_db >
                           rows[(s - 1) * angles.size() + a].snr_db;
    report(9, "size monotonicity", ok,
           detail::str(sides.size(), " sides x ", angles.size(), " angles"));
    REQUIRE(ok);
}

TEST_CASE("criterion 10: soft handover quality") {
    const ScenarioConfig& cfg = hms_test::default_config();
    const OrbitParams orbit = build_orbit(cfg);
    PassTrajectory primary =
        pass_geometry(orbit, cfg.orbit.max_elevation, cfg.orbit.t_step,
                      cfg.orbit.min_elevation, 0.0, 0, cfg.orbit.fov);
    PassTrajectory secondary =
        pass_geometry(orbit, cfg.orbit.max_elevation, cfg.orbit.t_step,
                      cfg.orbit.min_elevation, 0.0, 1, cfg.orbit.fov);
    secondary.shift_time(cfg.orbit.secondary_offset);

    const Codebook& book = hms_test::default_codebook();
    const SurfaceGeometry& geom = hms_test::default_geometry();
    const LinkBudgetInputs in = build_link_inputs(cfg, Band::dl);

    HandoverPolicy policy = build_handover_policy(cfg);
    policy.mode = HandoverMode::soft;
    const HandoverTrace soft =
        simulate_handover(primary, secondary, policy, book, geom, in, cfg.noise);

    policy.mode = HandoverMode::hard;
    const HandoverTrace hard =
        simulate_handover(primary, secondary, policy, book, geom, in, cfg.noise);

    // Even-split instant: sample both passes at mid-window and compare the
    // per-satellite split lobes against single-beam configs.
    double t_trigger = primary.end_time();
    {
        std::size_t peak = 0;
        for (std::size_t i = 1; i < primary.samples.size(); ++i)
            if (primary.samples[i].elevation > primary.samples[peak].elevation) peak = i;
        for (std::size_t i = peak; i < primary.samples.size(); ++i)
            if (primary.samples[i].elevation < policy.trigger_elevation) {
                t_trigger = primary.samples[i].t;
                break;
            }
    }
    const double t_mid = t_trigger - 0.5 * policy.soft_window;
    const auto p = primary.at(t_mid);
    const auto s = secondary.at(t_mid);
    REQUIRE(p.has_value());
    REQUIRE(s.has_value());
    const SurfaceConfig split = split_config(
        book, geom,
        BeamSpec{{{p->steering_angle, 0.5}, {s->steering_angle, 0.5}}, BandPolicy::dl_only});
    bool lobes_ok = true;
    std::string lobe_detail;
    for (const double angle : {p->steering_angle, s->steering_angle}) {
        const SurfaceConfig single = steering_config(book, geom, angle, BandPolicy::dl_only);
        const double loss_db =
            db_from_power_ratio(hms_test::lobe_peak(split, book.f_dl, angle) /
                                efficiency(single, book.f_dl, angle));
        lobes_ok = lobes_ok && std::abs(loss_db + 3.0) <= 0.7;
        lobe_detail += detail::str(angle, " deg: ", loss_db, " dB; ");
    }

    const bool ok = soft.outage_duration == 0.0 &&
                    std::abs(hard.outage_duration - policy.switch_time) < 1e-9 && lobes_ok;
    report(10, "handover", ok,
           detail::str("soft outage=", soft.outage_duration, " s, hard outage=",
                       hard.outage_duration, " s, split lobe loss: ", lobe_detail));
    REQUIRE(ok);
}

TEST_CASE("criterion 11: CLI outputs are byte-identical across runs") {
    const fs::path dir =
        fs::temp_directory_path() / ("hmsim_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const auto run = [&](const std::string& args) {
        const std::string cmd = std::string(HMSIM_PATH) + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"calibrate", "cell.json"},
        {"pattern", "pattern.csv"},
        {"codebook", "codebook.json"},
        {"steer --theta 45", "steer.json"},
        {"split --thetas -45,45 --weights 0.5,0.5", "split.json"},
        {"linkbudget", "linkbudget.json"},
        {"snr-sweep", "snr_sweep.csv"},
        {"pass", "pass.csv"},
        {"handover", "handover.csv"},
    };

    bool ok = true;
    std::string details;
    for (const auto& [args, file] : commands) {
        const fs::path out1 = dir / ("a_" + file);
        const fs::path out2 = dir / ("b_" + file);
        const int rc1 = run(args + " --out " + out1.string());
        const int rc2 = run(args + " --out " + out2.string());
        const bool same = rc1 == 0 && rc2 == 0 && slurp(out1) == slurp(out2) &&
                          !slurp(out1).empty();
        ok = ok && same;
        if (!same) details += args + " differs; ";
    }
    if (details.empty()) details = detail::str(commands.size(), " subcommands identical");
    report(11, "determinism", ok, details);
    REQUIRE(ok);
    fs::remove_all(dir);
}
