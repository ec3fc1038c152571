#pragma once

#include <cmath>
#include <numbers>

namespace qlink {

inline constexpr double kHbar = 1.054571817e-34;        // J s (CODATA 2018)
inline constexpr double kSpeedOfLight = 299792458.0;    // m / s

// Quadrature normalization: vacuum state has var(q) = var(p) = 1/4.
// All dB-vs-shot-noise figures are 10*log10(V / kVacuumVariance).
inline constexpr double kVacuumVariance = 0.25;

inline double angular_frequency(double wavelength_m) {
    return 2.0 * std::numbers::pi * kSpeedOfLight / wavelength_m;
}

// Photon energy hbar*omega in joules.
inline double photon_energy(double wavelength_m) {
    return kHbar * angular_frequency(wavelength_m);
}

inline double db_from_linear(double ratio) { return 10.0 * std::log10(ratio); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

// Squeezing level of a parameter r as a noise-power ratio in dB (= 8.6859*r).
inline double squeezing_db_from_r(double r) { return 20.0 * r * std::numbers::log10e; }
inline double squeezing_r_from_db(double db) { return db / (20.0 * std::numbers::log10e); }

} // namespace qlink
