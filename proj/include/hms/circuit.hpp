#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hms/errors.hpp"
#include "hms/units.hpp"

// Lumped-circuit model of a varactor-tuned, bi-resonant Huygens cell.
// Each cell pairs an electric and a magnetic meta-atom; each atom is two
// series-RLC branches (outer ring for the low band, inner ring reached
// through an RF choke for the high band) sharing a single varactor. The
// cell response is computed through the standard sheet abstraction:
// a normalized electric sheet admittance y and magnetic sheet impedance z
// yield the transmission/reflection coefficients of the surface.

namespace hms {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Junction-law varactor: C(v) = c_j0 / (1 + v/v_j)^m + c_par. The default
// is an effective sub-0.1 pF device as seen by the sheet; the bias swing
// must move the branch reactance by several hundred ohm at Ku band for the
// cell to reach full phase coverage.
struct VaractorModel {
    double c_j0 = 0.05;   // pF, zero-bias junction capacitance
    double v_j = 0.8;     // V, junction potential
    double m = 0.5;       // grading exponent
    double c_par = 0.002; // pF, parasitic parallel capacitance
    double r_s = 0.5;     // ohm, series resistance
    double v_min = 0.0;   // V, reverse-bias range
    double v_max = 20.0;  // V

    void validate() const {
        if (c_j0 <= 0.0) throw std::invalid_argument("varactor: c_j0 must be > 0");
        if (v_j <= 0.0) throw std::invalid_argument("varactor: v_j must be > 0");
        if (m <= 0.0 || m > 2.0) throw std::invalid_argument("varactor: m must be in (0, 2]");
        if (c_par < 0.0) throw std::invalid_argument("varactor: c_par must be >= 0");
        if (r_s < 0.0) throw std::invalid_argument("varactor: r_s must be >= 0");
        if (v_min >= v_max) throw std::invalid_argument("varactor: v_min must be < v_max");
    }
};

// One series-RLC ring: loss resistance r, inductance l, fixed capacitance
// c_fixed in series with the shared varactor capacitance.
struct ResonatorBranch {
    double l = 1.0;       // nH
    double c_fixed = 0.1; // pF
    double r = 1.0;       // ohm

    void validate() const {
        if (l <= 0.0) throw std::invalid_argument("branch: l must be > 0");
        if (c_fixed <= 0.0) throw std::invalid_argument("branch: c_fixed must be > 0");
        if (r < 0.0) throw std::invalid_argument("branch: r must be >= 0");
    }
};

enum class AtomKind { electric, magnetic };

struct MetaAtomCircuit {
    ResonatorBranch outer;
    ResonatorBranch inner;
    double l_choke = 0.0;  // nH, added in series with the inner ring
    VaractorModel varactor;
    AtomKind kind = AtomKind::electric;

    void validate() const {
        if (l_choke < 0.0) throw std::invalid_argument("atom: l_choke must be >= 0");
        outer.validate();
        inner.validate();
        varactor.validate();
    }
};

struct HuygensCell {
    MetaAtomCircuit electric;
    MetaAtomCircuit magnetic;

    void validate() const {
        if (electric.kind != AtomKind::electric || magnetic.kind != AtomKind::magnetic)
            throw std::invalid_argument("cell: atom kinds must match field roles");
        electric.validate();
        magnetic.validate();
    }
};

// Complex S-parameters of one cell at one (bias, frequency) point.
struct CellResponse {
    Complex t;         // transmission coefficient
    Complex r;         // reflection coefficient
    double frequency;  // GHz
    double u_e;        // V, electric-atom bias
    double u_m;        // V, magnetic-atom bias
};

// Normalized sheet parameters: y = eta0 * Y_electric, z = Z_magnetic / eta0.
struct SheetParameters {
    Complex y;
    Complex z;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline double varactor_capacitance(const VaractorModel& model, double v_bias) {
    if (v_bias < model.v_min || v_bias > model.v_max)
        throw std::out_of_range(detail::str(
            "varactor bias ", v_bias, " V outside allowed range [", model.v_min,
            ", ", model.v_max, "] V"));
    return model.c_j0 / std::pow(1.0 + v_bias / model.v_j, model.m) + model.c_par;
}

inline double series_capacitance_pf(double c1_pf, double c2_pf) {
    return c1_pf * c2_pf / (c1_pf + c2_pf);
}

// f = 1 / (2*pi*sqrt(L*C)), returned in GHz for nH/pF inputs.
inline double resonant_frequency(double l_nh, double c_pf) {
    if (l_nh <= 0.0 || c_pf <= 0.0)
        throw std::domain_error("resonant_frequency: l and c must be > 0");
    return 1e-9 / (2.0 * std::numbers::pi * std::sqrt(l_nh * 1e-9 * c_pf * 1e-12));
}

// Z = r + j(wL - 1/(wC_tot)) with C_tot = c_fixed in series with c_var.
inline Complex branch_impedance(const ResonatorBranch& branch, double c_var_pf,
                                double f_ghz) {
    if (f_ghz <= 0.0) throw std::domain_error("branch_impedance: frequency must be > 0");
    if (c_var_pf <= 0.0) throw std::domain_error("branch_impedance: c_var must be > 0");
    const double omega = 2.0 * std::numbers::pi * f_ghz * 1e9;
    const double c_tot = series_capacitance_pf(branch.c_fixed, c_var_pf) * 1e-12;
    const double reactance = omega * branch.l * 1e-9 - 1.0 / (omega * c_tot);
    return {branch.r, reactance};
}

// Resonance of one branch at a given bias; extra_l_nh carries the choke for
// the inner ring.
inline double branch_resonance_ghz(const ResonatorBranch& branch,
                                   const VaractorModel& varactor, double bias_v,
                                   double extra_l_nh = 0.0) {
    const double c_var = varactor_capacitance(varactor, bias_v);
    return resonant_frequency(branch.l + extra_l_nh,
                              series_capacitance_pf(branch.c_fixed, c_var));
}

namespace detail {

// Both rings of one atom in parallel, as seen by the incident field. The
// shared varactor contributes its capacitance and series resistance to each
// ring path; the choke adds inductance to the inner path.
inline Complex atom_admittance_siemens(const MetaAtomCircuit& atom, double bias_v,
                                       double f_ghz) {
    const double c_var = varactor_capacitance(atom.varactor, bias_v);
    ResonatorBranch outer = atom.outer;
    outer.r += atom.varactor.r_s;
    ResonatorBranch inner = atom.inner;
    inner.l += atom.l_choke;
    inner.r += atom.varactor.r_s;
    return 1.0 / branch_impedance(outer, c_var, f_ghz) +
           1.0 / branch_impedance(inner, c_var, f_ghz);
}

}  // namespace detail

// Normalized sheet parameters of the cell. The electric atom's combined
// admittance maps directly (y = eta0 * Y_e); the magnetic atom couples
// dually, through an impedance inverter of characteristic eta0, so its
// sheet impedance is Z_m = eta0^2 * Y_m and z = Z_m / eta0 = eta0 * Y_m.
inline SheetParameters cell_sheet_parameters(const HuygensCell& cell, double u_e,
                                             double u_m, double f_ghz) {
    if (f_ghz <= 0.0) throw std::domain_error("cell_sheet_parameters: frequency must be > 0");
    return {kFreeSpaceImpedance * detail::atom_admittance_siemens(cell.electric, u_e, f_ghz),
            kFreeSpaceImpedance * detail::atom_admittance_siemens(cell.magnetic, u_m, f_ghz)};
}

// S-parameters of a Huygens sheet with normalized parameters (y, z).
// Symmetric in (y, z): the two-port is reciprocal.
inline Complex sheet_transmission(const Complex& y, const Complex& z) {
    const Complex den = (2.0 + y) * (2.0 + z);
    if (std::abs(den) < 1e-12)
        throw std::domain_error("sheet singularity: (2+y)(2+z) = 0 requires active branches");
    return (4.0 - y * z) / den;
}

inline Complex sheet_reflection(const Complex& y, const Complex& z) {
    const Complex den = (2.0 + y) * (2.0 + z);
    if (std::abs(den) < 1e-12)
        throw std::domain_error("sheet singularity: (2+y)(2+z) = 0 requires active branches");
    return 2.0 * (z - y) / den;
}

inline CellResponse cell_s_params(const HuygensCell& cell, double u_e, double u_m,
                                  double f_ghz) {
    const SheetParameters sp = cell_sheet_parameters(cell, u_e, u_m, f_ghz);
    CellResponse resp{sheet_transmission(sp.y, sp.z), sheet_reflection(sp.y, sp.z),
                      f_ghz, u_e, u_m};
    // Passive branches cannot produce gain; tolerate rounding only.
    if (std::norm(resp.t) + std::norm(resp.r) > 1.0 + 1e-9)
        throw std::logic_error("cell_s_params: non-passive response from passive branches");
    return resp;
}

namespace detail {

// Location of the |t| minimum of a cell near f_center on the balanced
// diagonal (u_e = u_m = bias): coarse scan plus ternary refinement.
inline double transmission_dip_ghz(const HuygensCell& cell, double bias_v, double f_center,
                                   double half_window_ghz) {
    const auto mag = [&](double f) { return std::abs(cell_s_params(cell, bias_v, bias_v, f).t); };
    double best_f = f_center, best = 2.0;
    for (double f = f_center - half_window_ghz; f <= f_center + half_window_ghz + 1e-12;
         f += 0.005) {
        const double m = mag(f);
        if (m < best) {
            best = m;
            best_f = f;
        }
    }
    double lo = best_f - 0.005, hi = best_f + 0.005;
    for (int i = 0; i < 80; ++i) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (mag(m1) < mag(m2))
            hi = m2;
        else
            lo = m1;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Solve for branch inductances so that, at bias v_mid, the outer ring of
// each atom resonates at f_dl and the inner ring (including the choke) at
// f_ul. L = 1/((2*pi*f)^2 * C_tot); inductances returned in nH.
//
// With align_response set, the branch targets are nudged (never more than
// the 0.1 GHz branch tolerance) so the cell's measured transmission dips
// land on the requested frequencies: the off-band ring adds a small
// background susceptance that would otherwise tilt the dip away from the
// ring resonance.
inline HuygensCell calibrate(double f_dl_ghz, double f_ul_ghz, double v_mid,
                             const VaractorModel& varactor, double c_fixed_outer_pf,
                             double c_fixed_inner_pf, double r_outer_ohm,
                             double r_inner_ohm, double l_choke_nh = 0.0,
                             bool align_response = true) {
    if (f_dl_ghz <= 0.0 || f_ul_ghz <= 0.0)
        throw std::domain_error("calibrate: frequencies must be > 0");
    if (f_dl_ghz >= f_ul_ghz)
        throw CalibrationError(detail::str("calibrate: degenerate dual band, f_dl (",
                                           f_dl_ghz, " GHz) must be below f_ul (",
                                           f_ul_ghz, " GHz)"));
    if (c_fixed_outer_pf <= 0.0 || c_fixed_inner_pf <= 0.0)
        throw CalibrationError("calibrate: fixed capacitances must be > 0");
    if (r_outer_ohm < 0.0 || r_inner_ohm < 0.0 || l_choke_nh < 0.0)
        throw CalibrationError("calibrate: losses and choke must be >= 0");
    varactor.validate();

    const double c_var_mid = varactor_capacitance(varactor, v_mid);
    const auto solve_l_nh = [](double f_ghz, double c_tot_pf) {
        const double omega = 2.0 * std::numbers::pi * f_ghz * 1e9;
        return 1e9 / (omega * omega * c_tot_pf * 1e-12);
    };

    const auto build = [&](double f_outer, double f_inner) {
        const double l_outer =
            solve_l_nh(f_outer, series_capacitance_pf(c_fixed_outer_pf, c_var_mid));
        const double l_inner_total =
            solve_l_nh(f_inner, series_capacitance_pf(c_fixed_inner_pf, c_var_mid));
        const double l_inner = l_inner_total - l_choke_nh;
        if (l_outer <= 0.0 || l_inner <= 0.0)
            throw CalibrationError(detail::str(
                "calibrate: infeasible targets, solved inner inductance ", l_inner,
                " nH (choke ", l_choke_nh, " nH exceeds the required total?)"));

        MetaAtomCircuit atom;
        atom.outer = {l_outer, c_fixed_outer_pf, r_outer_ohm};
        atom.inner = {l_inner, c_fixed_inner_pf, r_inner_ohm};
        atom.l_choke = l_choke_nh;
        atom.varactor = varactor;

        HuygensCell cell;
        cell.electric = atom;
        cell.electric.kind = AtomKind::electric;
        cell.magnetic = atom;
        cell.magnetic.kind = AtomKind::magnetic;
        return cell;
    };

    double target_outer = f_dl_ghz;
    double target_inner = f_ul_ghz;
    HuygensCell cell = build(target_outer, target_inner);
    if (align_response) {
        const double max_shift = 0.1;  // branch tolerance
        const double window = std::min(1.0, 0.4 * (f_ul_ghz - f_dl_ghz));
        for (int iter = 0; iter < 2; ++iter) {
            const double dip_dl =
                detail::transmission_dip_ghz(cell, v_mid, target_outer, window);
            const double dip_ul =
                detail::transmission_dip_ghz(cell, v_mid, target_inner, window);
            target_outer = std::clamp(target_outer - (dip_dl - f_dl_ghz),
                                      f_dl_ghz - max_shift, f_dl_ghz + max_shift);
            target_inner = std::clamp(target_inner - (dip_ul - f_ul_ghz),
                                      f_ul_ghz - max_shift, f_ul_ghz + max_shift);
            cell = build(target_outer, target_inner);
        }
    }
    cell.validate();
    return cell;
}

}  // namespace hms
