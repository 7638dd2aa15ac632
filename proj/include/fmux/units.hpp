// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

// Unit conventions used throughout:
//   - optical frequencies and detunings: angular, rad/s
//   - wavelengths at the interface boundary: nm
//   - dispersion coefficients: s^n/m, fiber length: m, gamma: 1/(W m)
// Conversions happen exactly once, at the edges (config / CLI / reports).
namespace fmux::units {

inline constexpr double c_m_per_s = 299792458.0;
inline constexpr double pi = 3.14159265358979323846;

inline double db_to_efficiency(double db) {
  return std::pow(10.0, -db / 10.0);
}

inline double efficiency_to_db(double eta) {
  return -10.0 * std::log10(eta);
}

/// Angular frequency (rad/s) of a vacuum wavelength in nm.
inline double angular_from_nm(double lambda_nm) {
  return 2.0 * pi * c_m_per_s / (lambda_nm * 1e-9);
}

inline double nm_from_angular(double omega) {
  return 2.0 * pi * c_m_per_s / omega * 1e9;
}

inline constexpr double angular_from_hz(double hz) { return 2.0 * pi * hz; }
inline constexpr double hz_from_angular(double omega) { return omega / (2.0 * pi); }

}  // namespace fmux::units
