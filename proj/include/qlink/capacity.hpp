#pragma once

#include "qlink/constants.hpp"

namespace qlink {

/// One evaluation point of the channel-capacity hierarchy.
struct ChannelPoint {
    double mean_photons_n = 0.0;  // photons per mode
    double squeezing_r = 0.0;
    double efficiency_eta = 1.0;
    double bandwidth_b = 0.0;  // Hz
    double wavelength = 1550e-9;

    void validate() const;
};

/// Capacities in bits/mode, rates in bits/s, energy-per-bit in J/bit.
/// For eta <= 1 the hierarchy c_s1 <= c_sq <= c_hol holds over the
/// operating regimes of interest; at very small N combined with large r
/// the squeezed formula can exceed c_hol because pump photons are not
/// counted in N (reported by callers, never clamped).
struct CapacityReport {
    double n_photons = 0.0;
    double squeezing_r = 0.0;
    double efficiency_eta = 1.0;
    double snc_db = 0.0;
    double p_knee_w = 0.0;
    double c_s1 = 0.0;
    double c_s2 = 0.0;
    double c_sq = 0.0;
    double c_hol = 0.0;
    double rate_s1 = 0.0;
    double rate_s2 = 0.0;
    double rate_sq = 0.0;
    double rate_hol = 0.0;
    double e_b_coherent = 0.0;
    double e_b_squeezed = 0.0;
    double p_total = 0.0;  // s_s + s_LO + (r/mu)^2
};

/// Mean photon number per mode N = s_s / (hbar w B).
double mean_photons(double signal_power, double bandwidth, double wavelength);

/// One-quadrature Shannon limit C_S1 = (1/2) log2(1 + 4N).
double c_shannon_1q(double n);

/// Two-quadrature Shannon limit C_S2 = log2(1 + N).
double c_shannon_2q(double n);

/// Holevo limit g(N) = (N+1) log2(N+1) - N log2 N, with g(0) = 0.
/// Evaluated as log2(N+1) + N log1p(1/N)/ln 2 to stay accurate at both
/// extremes of N.
double c_holevo(double n);

/// Squeezed-light coherent-detection capacity
/// C_sq = (1/2) log2(1 + 4N / (eta e^-2r + 1 - eta)).
double c_squeezed(double n, double r, double eta);

/// Link-level energy per bit for the coherent baseline:
/// (s_s + s_LO) / (B * C_S1).
double energy_per_bit_coherent(double s_s, double s_lo, double bandwidth, double wavelength);

/// Link-level energy per bit with squeezing, including the pump overhead
/// (r/mu)^2: (s_s + s_LO + (r/mu)^2) / (B * C_sq).
double energy_per_bit_squeezed(double s_s, double s_lo, double r, double mu, double eta,
                               double bandwidth, double wavelength);

/// Per-mode, signal-only energy per bit hbar*w*N / C. Distinct from the
/// link-level figures above, which include LO and pump power.
double energy_per_bit_mode(double n, double capacity_bits, double wavelength);

/// Low-photon-number capacity improvement factor F = 1 - ln N.
double improvement_factor(double n);

} // namespace qlink
