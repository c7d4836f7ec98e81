#pragma once

#include <numbers>

// SI throughout the library. These helpers convert the lab units used at the
// configuration boundary.
namespace biphoton::units {

inline constexpr double kSpeedOfLight = 299'792'458.0;      // m/s
inline constexpr double kPlanck = 6.626'070'15e-34;          // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kPi = std::numbers::pi;

inline constexpr double kNano = 1e-9;
inline constexpr double kFemto = 1e-15;

constexpr double nm(double v) { return v * 1e-9; }
constexpr double mm(double v) { return v * 1e-3; }
constexpr double fs(double v) { return v * 1e-15; }
constexpr double ns(double v) { return v * 1e-9; }
constexpr double mW(double v) { return v * 1e-3; }

/// ps/(nm km) -> s/m^2
constexpr double ps_per_nm_km(double v) { return v * 1e-12 / (1e-9 * 1e3); }

constexpr double deg(double v) { return v * kPi / 180.0; }
constexpr double to_deg(double rad) { return rad * 180.0 / kPi; }
constexpr double to_fs(double s) { return s * 1e15; }

/// Vacuum wavelength <-> angular frequency.
constexpr double angular_frequency(double wavelength) { return 2.0 * kPi * kSpeedOfLight / wavelength; }
constexpr double wavelength_of(double omega) { return 2.0 * kPi * kSpeedOfLight / omega; }

}  // namespace biphoton::units
