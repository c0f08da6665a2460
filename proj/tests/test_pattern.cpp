#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "hms/pattern.hpp"
#include "test_helpers.hpp"

using namespace hms;
using Catch::Approx;

namespace {

// Pattern whose coefficients sit on a uniform unit phase circle.
HuygensPattern synthetic_circle_pattern(int points) {
    BiasGrid grid;
    for (int i = 0; i < points; ++i) grid.u_e_values.push_back(i);
    grid.u_m_values.push_back(0.0);
    HuygensPattern pattern{grid, 10.0, 15.0, {}};
    for (int i = 0; i < points; ++i) {
        const double phase = -std::numbers::pi + (i + 0.5) * 2.0 * std::numbers::pi / points;
        const Complex c = std::polar(1.0, phase);
        pattern.responses.push_back({c, c, c, c});
    }
    return pattern;
}

}  // namespace

TEST_CASE("bias grid validation") {
    const VaractorModel& var = hms_test::default_config().varactor;
    CHECK_THROWS_AS((BiasGrid{{}, {1.0}}.validate(var)), std::invalid_argument);
    CHECK_THROWS_AS((BiasGrid{{1.0, 1.0}, {1.0}}.validate(var)), std::invalid_argument);
    CHECK_THROWS_AS((BiasGrid{{-5.0}, {1.0}}.validate(var)), std::out_of_range);
    CHECK_NOTHROW((BiasGrid{{0.0, 10.0, 20.0}, {5.0}}.validate(var)));

    const BiasGrid g = uniform_bias_grid(0.0, 20.0, 201);
    CHECK(g.u_e_values.size() == 201);
    CHECK(g.u_e_values.front() == 0.0);
    CHECK(g.u_e_values.back() == 20.0);
    CHECK(g.u_e_values[1] == Approx(0.1));
}

TEST_CASE("a 1x1 sweep equals a direct cell evaluation") {
    const HuygensCell& cell = hms_test::default_cell();
    const BiasGrid grid{{5.0}, {7.0}};
    const HuygensPattern p = sweep_pattern(cell, grid, 10.0, 15.0);
    REQUIRE(p.responses.size() == 1);
    const CellResponse dl = cell_s_params(cell, 5.0, 7.0, 10.0);
    const CellResponse ul = cell_s_params(cell, 5.0, 7.0, 15.0);
    CHECK(p.responses[0].t_dl == dl.t);
    CHECK(p.responses[0].r_dl == dl.r);
    CHECK(p.responses[0].t_ul == ul.t);
    CHECK(p.responses[0].r_ul == ul.r);
}

TEST_CASE("lossless sweep conserves energy at every grid point") {
    ScenarioConfig cfg = hms_test::default_config();
    cfg.varactor.r_s = 0.0;
    const HuygensCell cell =
        calibrate(cfg.calibration.f_dl, cfg.calibration.f_ul, cfg.calibration.v_mid,
                  cfg.varactor, cfg.calibration.c_fixed_outer, cfg.calibration.c_fixed_inner,
                  0.0, 0.0, cfg.calibration.l_choke);
    const HuygensPattern p =
        sweep_pattern(cell, uniform_bias_grid(0.0, 20.0, 11), 10.0, 15.0);
    for (const auto& c : p.responses) {
        CHECK(std::norm(c.t_dl) + std::norm(c.r_dl) == Approx(1.0).margin(1e-9));
        CHECK(std::norm(c.t_ul) + std::norm(c.r_ul) == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("default pattern spans at least 350 degrees of downlink phase") {
    const HuygensPattern& p = hms_test::default_pattern();
    std::vector<bool> filled(72, false);
    for (const auto& c : p.responses)
        filled[phase_bin(std::arg(c.t_dl), 72)] = true;
    const auto count = std::count(filled.begin(), filled.end(), true);
    CHECK(360.0 * static_cast<double>(count) / 72.0 >= 350.0);
}

TEST_CASE("single-point pattern yields a one-entry codebook with gaps") {
    const HuygensCell& cell = hms_test::default_cell();
    const HuygensPattern p = sweep_pattern(cell, BiasGrid{{10.0}, {10.0}}, 10.0, 15.0);
    const Codebook book = extract_codebook(p, Band::dl, SurfaceMode::transmit, 32, false);
    CHECK(book.entries.size() == 1);
    CHECK(coverage_metrics(book).gap_count == 31);
    // With coverage enforcement this is an error.
    CHECK_THROWS_AS(extract_codebook(p, Band::dl, SurfaceMode::transmit, 32), CoverageError);
}

TEST_CASE("ideal phase-circle pattern fills every bin at unit amplitude") {
    const HuygensPattern p = synthetic_circle_pattern(64);
    const Codebook book = extract_codebook(p, Band::dl, SurfaceMode::transmit, 32);
    CHECK(book.entries.size() == 32);
    const CoverageMetrics m = coverage_metrics(book);
    CHECK(m.gap_count == 0);
    CHECK(m.min_amp == Approx(1.0));
    CHECK(m.phase_span_deg == Approx(360.0));
}

TEST_CASE("n_bins below 8 is rejected") {
    CHECK_THROWS_AS(
        extract_codebook(hms_test::default_pattern(), Band::dl, SurfaceMode::transmit, 4),
        std::invalid_argument);
}

TEST_CASE("default downlink transmit codebook: regression baseline") {
    const Codebook& book = hms_test::default_codebook();
    const CoverageMetrics m = coverage_metrics(book);
    CHECK(book.entries.size() >= 30);
    CHECK(m.min_amp >= 0.6);
    // Golden values from the frozen defaults.
    CHECK(book.entries.size() == 32);
    CHECK(m.phase_span_deg == Approx(360.0));
    CHECK(m.min_amp == Approx(0.984).margin(0.01));
    CHECK(m.mean_amp == Approx(0.990).margin(0.01));
}

TEST_CASE("coverage metrics of degenerate codebooks") {
    Codebook book;
    book.n_bins = 32;
    CHECK_THROWS_AS(coverage_metrics(book), std::invalid_argument);

    book.entries.push_back({0.0, 0.0, std::polar(0.8, 0.3), std::polar(0.5, 0.7), 17});
    const CoverageMetrics m = coverage_metrics(book);
    CHECK(m.phase_span_deg == Approx(11.25));
    CHECK(m.gap_count == 31);
    CHECK(m.min_amp == Approx(0.8));
}

TEST_CASE("codebook entries are swept grid points and match fresh evaluations") {
    const Codebook& book = hms_test::default_codebook();
    const HuygensCell& cell = hms_test::default_cell();
    const BiasGrid& grid = hms_test::default_pattern().grid;
    for (const auto& e : book.entries) {
        CHECK(std::find(grid.u_e_values.begin(), grid.u_e_values.end(), e.u_e) !=
              grid.u_e_values.end());
        CHECK(std::find(grid.u_m_values.begin(), grid.u_m_values.end(), e.u_m) !=
              grid.u_m_values.end());
        const CellResponse dl = cell_s_params(cell, e.u_e, e.u_m, book.f_dl);
        const CellResponse ul = cell_s_params(cell, e.u_e, e.u_m, book.f_ul);
        CHECK(std::abs(dl.t - e.coeff_dl) < 1e-12);
        CHECK(std::abs(ul.t - e.coeff_ul) < 1e-12);
    }
}

TEST_CASE("extraction is deterministic and idempotent") {
    const HuygensPattern& p = hms_test::default_pattern();
    const Codebook a = extract_codebook(p, Band::dl, SurfaceMode::transmit, 32);
    const Codebook b = extract_codebook(p, Band::dl, SurfaceMode::transmit, 32);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].u_e == b.entries[i].u_e);
        CHECK(a.entries[i].u_m == b.entries[i].u_m);
        CHECK(a.entries[i].bin == b.entries[i].bin);
    }
}

TEST_CASE("denser grids never lose per-bin amplitude") {
    const HuygensCell& cell = hms_test::default_cell();
    const HuygensPattern coarse =
        sweep_pattern(cell, uniform_bias_grid(0.0, 20.0, 21), 10.0, 15.0);
    const HuygensPattern fine =
        sweep_pattern(cell, uniform_bias_grid(0.0, 20.0, 41), 10.0, 15.0);
    const Codebook cb = extract_codebook(coarse, Band::dl, SurfaceMode::transmit, 16, false);
    const Codebook fb = extract_codebook(fine, Band::dl, SurfaceMode::transmit, 16, false);

    std::vector<double> coarse_amp(16, -1.0), fine_amp(16, -1.0);
    for (const auto& e : cb.entries) coarse_amp[e.bin] = std::abs(e.coeff_dl);
    for (const auto& e : fb.entries) fine_amp[e.bin] = std::abs(e.coeff_dl);
    for (int bin = 0; bin < 16; ++bin)
        if (coarse_amp[bin] >= 0.0) {
            REQUIRE(fine_amp[bin] >= 0.0);
            CHECK(fine_amp[bin] >= coarse_amp[bin] - 1e-12);
        }
}

TEST_CASE("reflect-mode codebook also covers the full circle") {
    const Codebook book =
        extract_codebook(hms_test::default_pattern(), Band::dl, SurfaceMode::reflect, 32);
    CHECK(book.entries.size() == 32);
    CHECK(coverage_metrics(book).min_amp > 0.6);
}
