#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hms/circuit.hpp"
#include "hms/errors.hpp"

// Bias-voltage sweeps of a Huygens cell and codebook extraction: for each
// uniform phase bin of the primary-band coefficient, keep the swept grid
// point of maximal amplitude. Empty bins are recorded as gaps, never filled
// by interpolation.

namespace hms {

enum class Band { dl, ul };
enum class SurfaceMode { transmit, reflect };

inline std::string band_name(Band b) { return b == Band::dl ? "dl" : "ul"; }
inline std::string mode_name(SurfaceMode m) {
    return m == SurfaceMode::transmit ? "transmit" : "reflect";
}

inline Band parse_band(const std::string& s) {
    if (s == "dl") return Band::dl;
    if (s == "ul") return Band::ul;
    throw std::invalid_argument("unknown band \"" + s + "\" (expected dl or ul)");
}

inline SurfaceMode parse_mode(const std::string& s) {
    if (s == "transmit") return SurfaceMode::transmit;
    if (s == "reflect") return SurfaceMode::reflect;
    throw std::invalid_argument("unknown mode \"" + s + "\" (expected transmit or reflect)");
}

struct BiasGrid {
    std::vector<double> u_e_values;  // V, strictly ascending
    std::vector<double> u_m_values;  // V, strictly ascending

    void validate(const VaractorModel& varactor) const {
        const auto check_axis = [&](const std::vector<double>& v, const char* name) {
            if (v.empty()) throw std::invalid_argument(detail::str("bias grid: ", name, " is empty"));
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] < varactor.v_min || v[i] > varactor.v_max)
                    throw std::out_of_range(detail::str(
                        "bias grid: ", name, "[", i, "] = ", v[i], " V outside varactor range [",
                        varactor.v_min, ", ", varactor.v_max, "] V"));
                if (i > 0 && v[i] <= v[i - 1])
                    throw std::invalid_argument(detail::str("bias grid: ", name,
                                                            " must be strictly ascending"));
            }
        };
        check_axis(u_e_values, "u_e_values");
        check_axis(u_m_values, "u_m_values");
    }
};

inline BiasGrid uniform_bias_grid(double v_min, double v_max, int points_per_axis) {
    if (points_per_axis < 1) throw std::invalid_argument("bias grid: points must be >= 1");
    if (v_min > v_max) throw std::invalid_argument("bias grid: v_min must be <= v_max");
    std::vector<double> axis(points_per_axis);
    for (int i = 0; i < points_per_axis; ++i)
        axis[i] = points_per_axis == 1
                      ? v_min
                      : v_min + (v_max - v_min) * i / (points_per_axis - 1);
    return {axis, axis};
}

// Cell coefficients at one grid point, both bands.
struct BandCoefficients {
    Complex t_dl, r_dl;
    Complex t_ul, r_ul;

    Complex coefficient(Band band, SurfaceMode mode) const {
        if (band == Band::dl) return mode == SurfaceMode::transmit ? t_dl : r_dl;
        return mode == SurfaceMode::transmit ? t_ul : r_ul;
    }
};

struct HuygensPattern {
    BiasGrid grid;
    double f_dl = 0.0;  // GHz
    double f_ul = 0.0;  // GHz
    std::vector<BandCoefficients> responses;  // row-major [i_e * n_um + i_m]

    const BandCoefficients& at(std::size_t i_e, std::size_t i_m) const {
        return responses[i_e * grid.u_m_values.size() + i_m];
    }
};

inline HuygensPattern sweep_pattern(const HuygensCell& cell, const BiasGrid& grid,
                                    double f_dl_ghz, double f_ul_ghz) {
    cell.validate();
    grid.validate(cell.electric.varactor);
    grid.validate(cell.magnetic.varactor);

    HuygensPattern pattern{grid, f_dl_ghz, f_ul_ghz, {}};
    pattern.responses.reserve(grid.u_e_values.size() * grid.u_m_values.size());
    for (double u_e : grid.u_e_values) {
        for (double u_m : grid.u_m_values) {
            const CellResponse dl = cell_s_params(cell, u_e, u_m, f_dl_ghz);
            const CellResponse ul = cell_s_params(cell, u_e, u_m, f_ul_ghz);
            pattern.responses.push_back({dl.t, dl.r, ul.t, ul.r});
        }
    }
    return pattern;
}

struct CodebookEntry {
    double u_e = 0.0;  // V
    double u_m = 0.0;  // V
    Complex coeff_dl;  // mode coefficient at f_dl
    Complex coeff_ul;  // mode coefficient at f_ul
    int bin = 0;       // phase bin of the primary-band coefficient
};

struct Codebook {
    SurfaceMode mode = SurfaceMode::transmit;
    Band primary_band = Band::dl;
    int n_bins = 32;
    double f_dl = 0.0;  // GHz
    double f_ul = 0.0;  // GHz
    std::vector<CodebookEntry> entries;  // sorted by primary-band phase

    Complex primary_coefficient(const CodebookEntry& e) const {
        return primary_band == Band::dl ? e.coeff_dl : e.coeff_ul;
    }
};

// Phase bin over (-180, 180], uniform width 360/n_bins.
inline int phase_bin(double phase_rad, int n_bins) {
    const double deg = rad_to_deg(wrap_rad(phase_rad)) + 180.0;  // (0, 360]
    int bin = static_cast<int>(deg * n_bins / 360.0);
    return std::min(bin, n_bins - 1);
}

// Bin-wise argmax of the primary-band coefficient magnitude. Ties keep the
// lower (u_e, u_m) pair so extraction is deterministic. When
// enforce_coverage is set, more than 25% empty bins is an error; degenerate
// sweeps (e.g. a single grid point) can disable it to inspect the result.
inline Codebook extract_codebook(const HuygensPattern& pattern, Band primary_band,
                                 SurfaceMode mode, int n_bins,
                                 bool enforce_coverage = true) {
    if (n_bins < 8) throw std::invalid_argument("extract_codebook: n_bins must be >= 8");

    std::vector<std::optional<CodebookEntry>> best(n_bins);
    std::vector<double> best_amp(n_bins, -1.0);
    const std::size_t n_um = pattern.grid.u_m_values.size();
    for (std::size_t i_e = 0; i_e < pattern.grid.u_e_values.size(); ++i_e) {
        for (std::size_t i_m = 0; i_m < n_um; ++i_m) {
            const BandCoefficients& c = pattern.responses[i_e * n_um + i_m];
            const Complex primary = c.coefficient(primary_band, mode);
            const int bin = phase_bin(std::arg(primary), n_bins);
            // Strict > keeps the first (lowest-bias) point on exact ties.
            if (std::abs(primary) > best_amp[bin]) {
                best_amp[bin] = std::abs(primary);
                best[bin] = CodebookEntry{pattern.grid.u_e_values[i_e],
                                          pattern.grid.u_m_values[i_m],
                                          c.coefficient(Band::dl, mode),
                                          c.coefficient(Band::ul, mode), bin};
            }
        }
    }

    Codebook book{mode, primary_band, n_bins, pattern.f_dl, pattern.f_ul, {}};
    int gaps = 0;
    for (const auto& e : best) {
        if (e)
            book.entries.push_back(*e);
        else
            ++gaps;
    }
    std::sort(book.entries.begin(), book.entries.end(),
              [&](const CodebookEntry& a, const CodebookEntry& b) {
                  return std::arg(book.primary_coefficient(a)) <
                         std::arg(book.primary_coefficient(b));
              });

    if (enforce_coverage && gaps * 4 > n_bins)
        throw CoverageError(detail::str(
            "codebook coverage too sparse: ", gaps, " of ", n_bins,
            " phase bins are empty; use a denser bias grid or recalibrate the cell"));
    return book;
}

struct CoverageMetrics {
    double phase_span_deg = 0.0;  // angular extent covered by filled bins
    double min_amp = 0.0;
    double mean_amp = 0.0;
    int gap_count = 0;
};

inline CoverageMetrics coverage_metrics(const Codebook& codebook) {
    if (codebook.entries.empty())
        throw std::invalid_argument("coverage_metrics: codebook is empty");
    CoverageMetrics m;
    m.gap_count = codebook.n_bins - static_cast<int>(codebook.entries.size());
    m.phase_span_deg = 360.0 * static_cast<double>(codebook.entries.size()) / codebook.n_bins;
    m.min_amp = 2.0;
    for (const auto& e : codebook.entries) {
        const double amp = std::abs(codebook.primary_coefficient(e));
        m.min_amp = std::min(m.min_amp, amp);
        m.mean_amp += amp;
    }
    m.mean_amp /= static_cast<double>(codebook.entries.size());
    return m;
}

}  // namespace hms
