#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

// Shared physical constants and angle/dB helpers. Frequencies are GHz,
// inductances nH, capacitances pF, resistances ohm, distances as noted
// at each call site.

namespace hms {

inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kFreeSpaceImpedance = 376.730313668;  // ohm
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline double wavelength_m(double f_ghz) { return kSpeedOfLight / (f_ghz * 1e9); }
inline double wavelength_mm(double f_ghz) { return wavelength_m(f_ghz) * 1e3; }

// Wrap an angle to (-pi, pi].
inline double wrap_rad(double x) {
    double w = std::fmod(x + std::numbers::pi, 2.0 * std::numbers::pi);
    if (w <= 0.0) w += 2.0 * std::numbers::pi;
    return w - std::numbers::pi;
}

// Wrap an angle to (-180, 180].
inline double wrap_deg(double x) {
    double w = std::fmod(x + 180.0, 360.0);
    if (w <= 0.0) w += 360.0;
    return w - 180.0;
}

inline double db_from_power_ratio(double ratio) { return 10.0 * std::log10(ratio); }
inline double db_from_amplitude_ratio(double ratio) { return 20.0 * std::log10(ratio); }

namespace detail {

// Small message builder so error strings can carry values without
// depending on <format>.
template <typename... Args>
std::string str(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

}  // namespace detail

}  // namespace hms
