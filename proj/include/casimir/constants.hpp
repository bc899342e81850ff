#pragma once

#include <numbers>

namespace casimir {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kStandardGravity = 9.80665;     // m/s^2

// Frequency unit used on the command line: 2*pi*c / (1 um), in rad/s.
inline constexpr double kXiUnit = 2.0 * kPi * kSpeedOfLight / 1e-6;

inline constexpr double kNanometer = 1e-9;
inline constexpr double kPicoNewton = 1e-12;

inline double xi_from_cli(double v) { return v * kXiUnit; }
inline double xi_to_cli(double xi) { return xi / kXiUnit; }

}  // namespace casimir
