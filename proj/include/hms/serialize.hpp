#pragma once

#include <json.hpp>

#include "hms/beamform.hpp"
#include "hms/circuit.hpp"
#include "hms/pattern.hpp"

// JSON round-trips for the circuit description plus one-way exports for
// codebooks and surface configs (the bias tables a hardware driver would
// consume). Field names match the domain types; units as documented there.

namespace hms {

inline void to_json(nlohmann::json& j, const VaractorModel& v) {
    j = {{"c_j0", v.c_j0}, {"v_j", v.v_j},     {"m", v.m},         {"c_par", v.c_par},
         {"r_s", v.r_s},   {"v_min", v.v_min}, {"v_max", v.v_max}};
}

inline void from_json(const nlohmann::json& j, VaractorModel& v) {
    j.at("c_j0").get_to(v.c_j0);
    j.at("v_j").get_to(v.v_j);
    j.at("m").get_to(v.m);
    j.at("c_par").get_to(v.c_par);
    j.at("r_s").get_to(v.r_s);
    j.at("v_min").get_to(v.v_min);
    j.at("v_max").get_to(v.v_max);
}

inline void to_json(nlohmann::json& j, const ResonatorBranch& b) {
    j = {{"l", b.l}, {"c_fixed", b.c_fixed}, {"r", b.r}};
}

inline void from_json(const nlohmann::json& j, ResonatorBranch& b) {
    j.at("l").get_to(b.l);
    j.at("c_fixed").get_to(b.c_fixed);
    j.at("r").get_to(b.r);
}

inline void to_json(nlohmann::json& j, const MetaAtomCircuit& a) {
    j = {{"outer", a.outer},
         {"inner", a.inner},
         {"l_choke", a.l_choke},
         {"varactor", a.varactor},
         {"kind", a.kind == AtomKind::electric ? "electric" : "magnetic"}};
}

inline void from_json(const nlohmann::json& j, MetaAtomCircuit& a) {
    j.at("outer").get_to(a.outer);
    j.at("inner").get_to(a.inner);
    j.at("l_choke").get_to(a.l_choke);
    j.at("varactor").get_to(a.varactor);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "electric")
        a.kind = AtomKind::electric;
    else if (kind == "magnetic")
        a.kind = AtomKind::magnetic;
    else
        throw std::invalid_argument("atom kind must be electric or magnetic, got \"" + kind +
                                    "\"");
}

inline void to_json(nlohmann::json& j, const HuygensCell& c) {
    j = {{"electric", c.electric}, {"magnetic", c.magnetic}};
}

inline void from_json(const nlohmann::json& j, HuygensCell& c) {
    j.at("electric").get_to(c.electric);
    j.at("magnetic").get_to(c.magnetic);
    c.validate();
}

namespace detail {

inline nlohmann::json complex_json(const Complex& c) {
    return {{"mag", std::abs(c)}, {"phase_deg", rad_to_deg(std::arg(c))}};
}

}  // namespace detail

inline nlohmann::json codebook_json(const Codebook& book) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : book.entries)
        entries.push_back({{"u_e", e.u_e},
                           {"u_m", e.u_m},
                           {"coeff_dl", detail::complex_json(e.coeff_dl)},
                           {"coeff_ul", detail::complex_json(e.coeff_ul)},
                           {"bin", e.bin}});
    return {{"mode", mode_name(book.mode)},
            {"band", band_name(book.primary_band)},
            {"n_bins", book.n_bins},
            {"f_dl", book.f_dl},
            {"f_ul", book.f_ul},
            {"entries", entries}};
}

inline nlohmann::json surface_config_json(const SurfaceConfig& config) {
    nlohmann::json elements = nlohmann::json::array();
    for (const auto& e : config.elements)
        elements.push_back({{"u_e", e.u_e},
                            {"u_m", e.u_m},
                            {"coeff_dl", detail::complex_json(e.coeff_dl)},
                            {"coeff_ul", detail::complex_json(e.coeff_ul)}});
    return {{"mode", mode_name(config.mode)},
            {"geometry", {{"n", config.geometry.n}, {"d", config.geometry.d},
                          {"rows", config.geometry.rows}}},
            {"f_dl", config.f_dl},
            {"f_ul", config.f_ul},
            {"elements", elements},
            {"warnings", config.warnings}};
}

}  // namespace hms
