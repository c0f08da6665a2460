#pragma once

#include <algorithm>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "hms/errors.hpp"
#include "hms/pattern.hpp"

// Linear-array beam synthesis on top of a codebook: the array factor
// AF(theta) = sum_n a_n * exp(j*k*d*n*sin(theta)) with theta measured from
// broadside, per-element weights a_n drawn from codebook entries. Steering
// matches a linear phase profile per band; splitting matches the complex
// superposition of several steered profiles.

namespace hms {

enum class BandPolicy { joint, dl_only, ul_only };

inline std::string band_policy_name(BandPolicy p) {
    switch (p) {
        case BandPolicy::joint: return "joint";
        case BandPolicy::dl_only: return "dl_only";
        default: return "ul_only";
    }
}

inline BandPolicy parse_band_policy(const std::string& s) {
    if (s == "joint") return BandPolicy::joint;
    if (s == "dl_only") return BandPolicy::dl_only;
    if (s == "ul_only") return BandPolicy::ul_only;
    throw std::invalid_argument("unknown band policy \"" + s +
                                "\" (expected joint, dl_only or ul_only)");
}

struct SurfaceGeometry {
    int n = 64;        // elements per row (linear array model)
    double d = 10.0;   // mm, element spacing
    int rows = 64;     // aperture-area accounting only

    void validate() const {
        if (n < 1) throw std::invalid_argument("geometry: n must be >= 1");
        if (d <= 0.0) throw std::invalid_argument("geometry: d must be > 0");
        if (rows < 1) throw std::invalid_argument("geometry: rows must be >= 1");
    }
};

struct ElementSetting {
    double u_e = 0.0;  // V
    double u_m = 0.0;  // V
    Complex coeff_dl;
    Complex coeff_ul;
};

struct SurfaceConfig {
    SurfaceGeometry geometry;
    SurfaceMode mode = SurfaceMode::transmit;
    double f_dl = 0.0;  // GHz
    double f_ul = 0.0;  // GHz
    std::vector<ElementSetting> elements;
    std::vector<std::string> warnings;

    std::vector<Complex> weights(Band band) const {
        std::vector<Complex> w;
        w.reserve(elements.size());
        for (const auto& e : elements) w.push_back(band == Band::dl ? e.coeff_dl : e.coeff_ul);
        return w;
    }
};

struct Beam {
    double theta_deg = 0.0;  // from broadside
    double weight = 1.0;     // power fraction
};

struct BeamSpec {
    std::vector<Beam> beams;
    BandPolicy band_policy = BandPolicy::joint;
};

inline Complex array_factor(std::span<const Complex> weights,
                            const SurfaceGeometry& geometry, double f_ghz,
                            double theta_deg) {
    geometry.validate();
    if (static_cast<int>(weights.size()) != geometry.n)
        throw std::invalid_argument(detail::str("array_factor: ", weights.size(),
                                                " weights for ", geometry.n, " elements"));
    if (f_ghz <= 0.0) throw std::domain_error("array_factor: frequency must be > 0");
    const double kd = 2.0 * std::numbers::pi * (geometry.d * 1e-3) / wavelength_m(f_ghz);
    const double phase_step = kd * std::sin(deg_to_rad(theta_deg));
    Complex af = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        af += weights[i] * std::polar(1.0, phase_step * static_cast<double>(i));
    return af;
}

// Normalized steering efficiency |AF(theta)| / n in [0, 1]. Power loss in
// dB is 20*log10 of the returned fraction. The band is chosen by whichever
// design frequency is closer to f.
inline double efficiency(const SurfaceConfig& config, double f_ghz, double theta_deg) {
    const Band band =
        std::abs(f_ghz - config.f_dl) <= std::abs(f_ghz - config.f_ul) ? Band::dl : Band::ul;
    const std::vector<Complex> w = config.weights(band);
    return std::abs(array_factor(w, config.geometry, f_ghz, theta_deg)) /
           static_cast<double>(config.geometry.n);
}

struct PatternPoint {
    double theta_deg;
    double mag;     // |AF|/n
    double mag_db;  // 20*log10(mag), floored at -200 dB
};

inline std::vector<PatternPoint> radiation_pattern(const SurfaceConfig& config,
                                                   double f_ghz,
                                                   const std::vector<double>& theta_grid_deg) {
    if (theta_grid_deg.empty())
        throw std::invalid_argument("radiation_pattern: empty angle grid");
    std::vector<PatternPoint> points;
    points.reserve(theta_grid_deg.size());
    for (double theta : theta_grid_deg) {
        const double mag = efficiency(config, f_ghz, theta);
        points.push_back({theta, mag, mag > 1e-10 ? db_from_amplitude_ratio(mag) : -200.0});
    }
    return points;
}

// Angle of the strongest lobe on a fixed scan grid (first maximum wins).
inline double main_lobe_deg(const SurfaceConfig& config, double f_ghz,
                            double scan_limit_deg = 89.9, double step_deg = 0.1) {
    double best_theta = -scan_limit_deg;
    double best_mag = -1.0;
    for (double theta = -scan_limit_deg; theta <= scan_limit_deg + 1e-9; theta += step_deg) {
        const double mag = efficiency(config, f_ghz, theta);
        if (mag > best_mag) {
            best_mag = mag;
            best_theta = theta;
        }
    }
    return best_theta;
}

namespace detail {

struct BandWeights {
    double dl = 0.0;
    double ul = 0.0;
};

inline BandWeights policy_weights(BandPolicy policy) {
    switch (policy) {
        case BandPolicy::joint: return {0.5, 0.5};
        case BandPolicy::dl_only: return {1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

inline double phase_step_rad(double f_ghz, const SurfaceGeometry& geometry,
                             double theta_deg) {
    const double kd = 2.0 * std::numbers::pi * (geometry.d * 1e-3) / wavelength_m(f_ghz);
    return -kd * std::sin(deg_to_rad(theta_deg));
}

inline void require_codebook_coverage(const Codebook& codebook, double min_span_deg) {
    const CoverageMetrics m = coverage_metrics(codebook);
    if (m.phase_span_deg < min_span_deg - 1e-9)
        throw CoverageError(detail::str("codebook phase coverage ", m.phase_span_deg,
                                        " deg is below the required ", min_span_deg,
                                        " deg"));
}

}  // namespace detail

// Per-element codebook selection for a single steered beam. Each element n
// wants phase -k_b*d*n*sin(theta) per band b; the entry minimizing the
// policy-weighted sum of squared wrapped phase errors wins. The free global
// phase per band is scanned and resolved by the resulting array-factor
// magnitude at the target, which keeps broadside from collapsing onto
// whatever entry happens to sit at phase zero.
inline SurfaceConfig steering_config(const Codebook& codebook,
                                     const SurfaceGeometry& geometry,
                                     double theta_target_deg, BandPolicy policy) {
    geometry.validate();
    if (std::abs(theta_target_deg) >= 90.0)
        throw std::domain_error("steering_config: |theta| must be < 90 deg");
    detail::require_codebook_coverage(codebook, 180.0);

    const detail::BandWeights bw = detail::policy_weights(policy);
    const double step_dl = detail::phase_step_rad(codebook.f_dl, geometry, theta_target_deg);
    const double step_ul = detail::phase_step_rad(codebook.f_ul, geometry, theta_target_deg);

    const std::size_t n_entries = codebook.entries.size();
    std::vector<double> arg_dl(n_entries), arg_ul(n_entries);
    for (std::size_t e = 0; e < n_entries; ++e) {
        arg_dl[e] = std::arg(codebook.entries[e].coeff_dl);
        arg_ul[e] = std::arg(codebook.entries[e].coeff_ul);
    }

    // Offsets finer than the codebook's own phase spacing buy nothing.
    const int n_offsets = 32;
    const auto select = [&](double off_dl, double off_ul, std::vector<std::size_t>& pick) {
        pick.resize(geometry.n);
        for (int n = 0; n < geometry.n; ++n) {
            const double want_dl = step_dl * n + off_dl;
            const double want_ul = step_ul * n + off_ul;
            double best_cost = 0.0;
            std::size_t best_e = 0;
            for (std::size_t e = 0; e < n_entries; ++e) {
                const double err_dl = wrap_rad(arg_dl[e] - want_dl);
                const double err_ul = wrap_rad(arg_ul[e] - want_ul);
                const double cost = bw.dl * err_dl * err_dl + bw.ul * err_ul * err_ul;
                if (e == 0 || cost < best_cost) {
                    best_cost = cost;
                    best_e = e;
                }
            }
            pick[n] = best_e;
        }
    };

    const auto objective = [&](const std::vector<std::size_t>& pick) {
        Complex af_dl = 0.0, af_ul = 0.0;
        for (int n = 0; n < geometry.n; ++n) {
            const CodebookEntry& e = codebook.entries[pick[n]];
            af_dl += e.coeff_dl * std::polar(1.0, -(step_dl * n));
            af_ul += e.coeff_ul * std::polar(1.0, -(step_ul * n));
        }
        return bw.dl * std::abs(af_dl) + bw.ul * std::abs(af_ul);
    };

    std::vector<std::size_t> pick, best_pick;
    double best_obj = -1.0;
    const double offset_step = 2.0 * std::numbers::pi / n_offsets;
    // Only the offsets of active bands matter; scanning one axis per active
    // band keeps the search at 64 (single band) or 64x64 (joint) selections.
    const int n_dl = bw.dl > 0.0 ? n_offsets : 1;
    const int n_ul = bw.ul > 0.0 ? n_offsets : 1;
    for (int i = 0; i < n_dl; ++i) {
        for (int j = 0; j < n_ul; ++j) {
            select(i * offset_step, j * offset_step, pick);
            const double obj = objective(pick);
            if (obj > best_obj + 1e-12) {
                best_obj = obj;
                best_pick = pick;
            }
        }
    }

    SurfaceConfig config{geometry, codebook.mode, codebook.f_dl, codebook.f_ul, {}, {}};
    config.elements.reserve(geometry.n);
    for (int n = 0; n < geometry.n; ++n) {
        const CodebookEntry& e = codebook.entries[best_pick[n]];
        config.elements.push_back({e.u_e, e.u_m, e.coeff_dl, e.coeff_ul});
    }
    return config;
}

// Multi-beam synthesis by superposition: per band, the target profile is
// sum_i sqrt(w_i) * exp(j*phi_i(n)), renormalized to unit peak amplitude;
// each element takes the codebook entry of least policy-weighted complex
// distance to its running target. Quantization errors are fed back through
// an FIR filter whose zeros sit at the beam spatial frequencies
// (noise-shaped quantization), so a near-unit-amplitude codebook can still
// realize the amplitude taper of the superposition. Plain independent
// rounding collapses to phase-only weights, which skews the requested power
// split toward the stronger beam. A single-beam spec degenerates to
// steering.
inline SurfaceConfig split_config(const Codebook& codebook, const SurfaceGeometry& geometry,
                                  const BeamSpec& spec) {
    geometry.validate();
    if (spec.beams.empty()) throw std::invalid_argument("split_config: no beams given");
    if (spec.beams.size() == 1)
        return steering_config(codebook, geometry, spec.beams[0].theta_deg, spec.band_policy);

    double weight_sum = 0.0;
    for (const Beam& b : spec.beams) {
        if (std::abs(b.theta_deg) >= 90.0)
            throw std::domain_error("split_config: |theta| must be < 90 deg");
        if (b.weight <= 0.0) throw std::invalid_argument("split_config: weights must be > 0");
        weight_sum += b.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9)
        throw std::invalid_argument("split_config: weights must sum to 1");
    detail::require_codebook_coverage(codebook, 180.0);

    const detail::BandWeights bw = detail::policy_weights(spec.band_policy);

    SurfaceConfig config{geometry, codebook.mode, codebook.f_dl, codebook.f_ul, {}, {}};

    // Closer than one beamwidth the lobes merge; record, do not fail.
    const double f_primary = codebook.primary_band == Band::dl ? codebook.f_dl : codebook.f_ul;
    const double beamwidth_deg =
        102.0 * wavelength_mm(f_primary) / (geometry.n * geometry.d);
    for (std::size_t i = 0; i < spec.beams.size(); ++i)
        for (std::size_t j = i + 1; j < spec.beams.size(); ++j)
            if (std::abs(spec.beams[i].theta_deg - spec.beams[j].theta_deg) < beamwidth_deg)
                config.warnings.push_back(detail::str(
                    "beams at ", spec.beams[i].theta_deg, " and ", spec.beams[j].theta_deg,
                    " deg are closer than one beamwidth (", beamwidth_deg, " deg)"));

    const auto band_targets = [&](double f_ghz) {
        std::vector<Complex> t(geometry.n, Complex{0.0, 0.0});
        for (const Beam& b : spec.beams) {
            const double step = detail::phase_step_rad(f_ghz, geometry, b.theta_deg);
            for (int n = 0; n < geometry.n; ++n)
                t[n] += std::sqrt(b.weight) * std::polar(1.0, step * n);
        }
        double peak = 0.0;
        for (const Complex& v : t) peak = std::max(peak, std::abs(v));
        if (peak > 0.0)
            for (Complex& v : t) v /= peak;
        return t;
    };
    const std::vector<Complex> target_dl = band_targets(codebook.f_dl);
    const std::vector<Complex> target_ul = band_targets(codebook.f_ul);

    // Error-feedback FIR with zeros at every beam frequency: coefficients of
    // prod_i (1 - exp(j*step_i) z^-1), excluding the leading 1.
    const auto shaping_taps = [&](double f_ghz) {
        std::vector<Complex> poly{1.0};
        for (const Beam& b : spec.beams) {
            const Complex root = std::polar(1.0, detail::phase_step_rad(f_ghz, geometry,
                                                                        b.theta_deg));
            poly.push_back(0.0);
            for (std::size_t k = poly.size() - 1; k > 0; --k) poly[k] -= root * poly[k - 1];
        }
        return std::vector<Complex>(poly.begin() + 1, poly.end());
    };
    const std::vector<Complex> taps_dl = shaping_taps(codebook.f_dl);
    const std::vector<Complex> taps_ul = shaping_taps(codebook.f_ul);

    // Lobe quality of one candidate selection: squared dB errors of the
    // pairwise lobe ratios against the requested split, with the summed lobe
    // magnitude as a tie-break so ratio-equivalent picks prefer strong beams.
    const auto lobe_magnitudes = [&](const std::vector<std::size_t>& sel) {
        std::vector<Complex> w(geometry.n);
        for (int n = 0; n < geometry.n; ++n) {
            const CodebookEntry& e = codebook.entries[sel[n]];
            w[n] = codebook.primary_band == Band::dl ? e.coeff_dl : e.coeff_ul;
        }
        std::vector<double> lobes;
        lobes.reserve(spec.beams.size());
        for (const Beam& b : spec.beams) {
            double best = 0.0;
            const double half = std::max(1.5 * beamwidth_deg, 2.0);
            for (double th = b.theta_deg - half; th <= b.theta_deg + half; th += 0.05)
                best = std::max(best,
                                std::abs(array_factor(w, geometry, f_primary, th)));
            lobes.push_back(best / geometry.n);
        }
        return lobes;
    };

    const int n_offsets = 32;
    const double offset_step = 2.0 * std::numbers::pi / n_offsets;
    const int n_dl = bw.dl > 0.0 ? n_offsets : 1;
    const int n_ul = bw.ul > 0.0 ? n_offsets : 1;
    std::vector<std::size_t> pick(geometry.n), best_pick;
    double best_ratio_err = 0.0, best_strength = -1.0;
    bool have_best = false;
    for (int i = 0; i < n_dl; ++i) {
        const Complex rot_dl = std::polar(1.0, i * offset_step);
        for (int j = 0; j < n_ul; ++j) {
            const Complex rot_ul = std::polar(1.0, j * offset_step);
            std::vector<Complex> err_dl(taps_dl.size(), 0.0), err_ul(taps_ul.size(), 0.0);
            for (int n = 0; n < geometry.n; ++n) {
                Complex feedback_dl = 0.0, feedback_ul = 0.0;
                for (std::size_t k = 0; k < taps_dl.size(); ++k)
                    feedback_dl -= taps_dl[k] * err_dl[k];
                for (std::size_t k = 0; k < taps_ul.size(); ++k)
                    feedback_ul -= taps_ul[k] * err_ul[k];
                // Keep the loop bounded when the codebook cannot follow.
                if (std::abs(feedback_dl) > 3.0) feedback_dl *= 3.0 / std::abs(feedback_dl);
                if (std::abs(feedback_ul) > 3.0) feedback_ul *= 3.0 / std::abs(feedback_ul);

                const Complex want_dl = target_dl[n] * rot_dl + feedback_dl;
                const Complex want_ul = target_ul[n] * rot_ul + feedback_ul;
                double best_e_cost = 0.0;
                std::size_t best_e = 0;
                for (std::size_t e = 0; e < codebook.entries.size(); ++e) {
                    const CodebookEntry& entry = codebook.entries[e];
                    const double cost = bw.dl * std::norm(entry.coeff_dl - want_dl) +
                                        bw.ul * std::norm(entry.coeff_ul - want_ul);
                    if (e == 0 || cost < best_e_cost) {
                        best_e_cost = cost;
                        best_e = e;
                    }
                }
                pick[n] = best_e;
                std::rotate(err_dl.rbegin(), err_dl.rbegin() + 1, err_dl.rend());
                err_dl[0] = want_dl - codebook.entries[best_e].coeff_dl;
                std::rotate(err_ul.rbegin(), err_ul.rbegin() + 1, err_ul.rend());
                err_ul[0] = want_ul - codebook.entries[best_e].coeff_ul;
            }

            const std::vector<double> lobes = lobe_magnitudes(pick);
            double ratio_err = 0.0, strength = 0.0;
            for (std::size_t a = 0; a < lobes.size(); ++a) {
                strength += lobes[a];
                for (std::size_t b = a + 1; b < lobes.size(); ++b) {
                    const double got =
                        db_from_amplitude_ratio(std::max(lobes[a], 1e-9) /
                                                std::max(lobes[b], 1e-9));
                    const double want = db_from_power_ratio(spec.beams[a].weight /
                                                            spec.beams[b].weight);
                    ratio_err += (got - want) * (got - want);
                }
            }
            if (!have_best || ratio_err < best_ratio_err - 1e-9 ||
                (ratio_err < best_ratio_err + 1e-9 && strength > best_strength + 1e-12)) {
                have_best = true;
                best_ratio_err = ratio_err;
                best_strength = strength;
                best_pick = pick;
            }
        }
    }

    config.elements.reserve(geometry.n);
    for (int n = 0; n < geometry.n; ++n) {
        const CodebookEntry& e = codebook.entries[best_pick[n]];
        config.elements.push_back({e.u_e, e.u_m, e.coeff_dl, e.coeff_ul});
    }
    return config;
}

}  // namespace hms
