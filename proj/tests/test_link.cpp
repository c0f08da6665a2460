#include <catch2/catch_amalgamated.hpp>

#include "hms/link.hpp"
#include "test_helpers.hpp"

using namespace hms;
using Catch::Approx;

TEST_CASE("free-space path loss reproduces the budget terms") {
    CHECK(fspl(1150e3, 10.0) == Approx(173.7).margin(0.1));
    CHECK(fspl(5.0, 10.0) == Approx(66.4).margin(0.1));
    CHECK(fspl(1150e3, 14.0) == Approx(176.6).margin(0.2));
}

TEST_CASE("path loss grows 6.02 dB per distance doubling") {
    CHECK(fspl(2000.0, 12.0) - fspl(1000.0, 12.0) == Approx(6.0206).margin(1e-4));
    CHECK_THROWS_AS(fspl(0.0, 10.0), std::domain_error);
    CHECK_THROWS_AS(fspl(100.0, -1.0), std::domain_error);
}

TEST_CASE("surface gain from aperture area and efficiency") {
    CHECK(surface_gain(0.75, 10.0, 1.0) == Approx(38.96).margin(0.05));
    // Amplitude fraction enters squared.
    CHECK(surface_gain(0.75, 10.0, 0.5) ==
          Approx(surface_gain(0.75, 10.0, 1.0) - 6.0206).margin(1e-6));
    CHECK(surface_gain(1.5, 10.0, 1.0) ==
          Approx(surface_gain(0.75, 10.0, 1.0) + 6.0206).margin(1e-6));
    CHECK_THROWS_AS(surface_gain(0.75, 10.0, 1.5), std::domain_error);
}

TEST_CASE("link budget matches the term-by-term sum") {
    const LinkBudgetInputs in;  // defaults: 97 dBm, 1150 km, 5 m, 10 GHz, -4 dB, 25 dBi, 0.75 m
    const NoiseModel noise;
    const LinkResult result = link_budget(in, noise);

    CHECK(result.p_rx == Approx(-44.2).margin(0.3));

    double sum = 0.0;
    for (const auto& [name, value] : result.breakdown) sum += value;
    CHECK(result.p_rx == Approx(sum).margin(1e-9));
    CHECK(result.breakdown.size() == 7);
    CHECK(result.breakdown[0].first == "p_tx");
    CHECK(result.breakdown[1].second == Approx(-173.7).margin(0.1));
    CHECK(result.breakdown[4].second == Approx(-66.4).margin(0.1));
}

TEST_CASE("degenerate chain reduces to one-hop Friis") {
    LinkBudgetInputs in;
    in.window_loss = 0.0;
    // Side chosen so the aperture gain vanishes, d2 so its path loss does.
    const double lambda = wavelength_m(in.f);
    in.surface_side = lambda / (2.0 * std::sqrt(std::numbers::pi));
    in.d2 = lambda / (4.0 * std::numbers::pi);
    const LinkResult result = link_budget(in, NoiseModel{});
    CHECK(result.p_rx ==
          Approx(in.p_tx - fspl(in.d1 * 1e3, in.f) + in.g_rx).margin(1e-9));
}

TEST_CASE("halving efficiency on both hops costs 12.04 dB") {
    LinkBudgetInputs in;
    const NoiseModel noise;
    const double full = link_budget(in, noise).p_rx;
    in.eff_rx = 0.5;
    in.eff_tx = 0.5;
    CHECK(link_budget(in, noise).p_rx == Approx(full - 12.0412).margin(1e-3));
}

TEST_CASE("baseline budgets") {
    const LinkBudgetInputs in;
    const NoiseModel noise;
    const LinkResult fs = baseline_budget(BaselineKind::free_space, in, noise);
    CHECK(fs.p_rx == Approx(-51.7).margin(0.1));

    const LinkResult brick = baseline_budget(BaselineKind::brick_wall, in, noise, 20.0);
    CHECK(brick.p_rx == Approx(fs.p_rx - 20.0).margin(1e-12));

    // Arithmetic identity of the constant, for any surface budget.
    const LinkResult surface = link_budget(in, noise);
    CHECK((surface.p_rx - brick.p_rx) - (surface.p_rx - fs.p_rx) == Approx(20.0).margin(1e-12));
}

TEST_CASE("snr subtracts the noise floor") {
    NoiseModel noise;  // 250 MHz, NF 7, 290 K
    CHECK(snr(-44.2, noise) == Approx(38.8).margin(0.05));

    // Differences are noise-model independent.
    NoiseModel other{1e6, 3.0, 290.0};
    CHECK(snr(-44.2, noise) - snr(-51.7, noise) ==
          Approx(snr(-44.2, other) - snr(-51.7, other)).margin(1e-12));

    NoiseModel wide = noise;
    wide.bandwidth *= 10.0;
    CHECK(snr(-44.2, wide) == Approx(snr(-44.2, noise) - 10.0).margin(1e-9));
}

TEST_CASE("snr sweep behaves per the link model") {
    const Codebook& book = hms_test::default_codebook();
    const SurfaceGeometry& geom = hms_test::default_geometry();
    const LinkBudgetInputs in = build_link_inputs(hms_test::default_config(), Band::dl);
    const NoiseModel noise;

    const std::vector<double> angles{-60.0, -30.0, 0.0, 30.0, 60.0};
    const std::vector<double> sides{0.5, 0.75, 1.0};
    const auto rows = snr_sweep(SweepScenario::steer_out, angles, sides, book, geom, in, noise);
    REQUIRE(rows.size() == angles.size() * sides.size());

    SECTION("broadside improvement over free space in the expected band") {
        for (const auto& r : rows)
            if (r.angle_deg == 0.0 && r.side_m == 0.75) {
                CHECK(r.snr_db - r.snr_freespace_db >= 3.0);
                CHECK(r.snr_db - r.snr_freespace_db <= 9.0);
            }
    }
    SECTION("snr strictly increases with surface side at fixed angle") {
        for (std::size_t a = 0; a < angles.size(); ++a) {
            double prev = -1e9;
            for (std::size_t s = 0; s < sides.size(); ++s) {
                const auto& r = rows[s * angles.size() + a];
                CHECK(r.snr_db > prev);
                prev = r.snr_db;
            }
        }
    }
    SECTION("brick baseline sits exactly brick_loss below free space") {
        for (const auto& r : rows)
            CHECK(r.snr_freespace_db - r.snr_brick_db == Approx(20.0).margin(1e-12));
    }
    SECTION("the two scenarios coincide") {
        const auto rows2 =
            snr_sweep(SweepScenario::vary_incident, angles, sides, book, geom, in, noise);
        REQUIRE(rows2.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            CHECK(rows[i].snr_db == Approx(rows2[i].snr_db).margin(1e-12));
    }
}

TEST_CASE("input validation") {
    LinkBudgetInputs in;
    in.window_loss = 1.0;
    CHECK_THROWS_AS(link_budget(in, NoiseModel{}), std::invalid_argument);
    in.window_loss = -4.0;
    in.eff_rx = 0.0;
    CHECK_THROWS_AS(link_budget(in, NoiseModel{}), std::invalid_argument);
    CHECK_THROWS_AS(snr(0.0, NoiseModel{-1.0, 7.0, 290.0}), std::invalid_argument);
}
