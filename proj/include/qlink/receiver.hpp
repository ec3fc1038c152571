#pragma once

#include <complex>
#include <vector>

#include "qlink/gaussian.hpp"

namespace qlink {

/// Coupler amplitudes alpha, beta of the two-mode unitary
/// U = (1/sqrt(2)) [alpha, beta; -beta, alpha], constrained by
/// |alpha|^2 + |beta|^2 = 2 and Im(conj(alpha)*beta) = 0 (tolerance 1e-9).
/// With that constraint Sigma^2 + Pi^2 = 4 identically.
struct CouplerParams {
    std::complex<double> alpha;
    std::complex<double> beta;

    CouplerParams(std::complex<double> a, std::complex<double> b);

    double sigma() const { return std::norm(alpha) - std::norm(beta); }
    double pi() const { return 2.0 * std::abs(alpha) * std::abs(beta); }

    static CouplerParams balanced() { return CouplerParams({1.0, 0.0}, {1.0, 0.0}); }
    /// Real, slightly unbalanced coupler realizing a given linear CMRR.
    static CouplerParams from_cmrr(double cmrr_linear);
};

/// Theoretical CMRR = (Sigma^2 + Pi^2)/Sigma^2 as a linear power ratio;
/// +infinity for a perfectly balanced coupler.
double cmrr_from_coupler(const CouplerParams& coupler);

/// Experimental convention: CMRR = 10 log10(P_unb / (4 P_bal)) in dB.
/// Kept distinct from cmrr_from_coupler; the factor 4 is part of the
/// measurement definition and is never folded into the theoretical one.
double cmrr_measured_db(double p_unbalanced, double p_balanced);

/// Entry of the optional electronic-noise spectral table:
/// i_n^2(f) = i_n^2(0) * multiplier, linearly interpolated in f.
struct NoisePoint {
    double frequency_hz;
    double multiplier;
};

/// Static description of a balanced coherent receiver. Optical powers in
/// watts; RF powers carry the arbitrary-but-consistent factor Pi^2 L^2.
/// electronic_noise_in2 is the input-referred electronic noise variance
/// expressed in optical-power-equivalent units at the balanced output (W^2
/// over the effective noise bandwidth).
struct ReceiverSpec {
    double electronic_noise_in2 = 0.0;       // W^2, at DC
    double optical_efficiency_eta_opt = 1.0; // fraction
    double responsivity_L = 1.0;             // current-domain efficiency, L(0)
    double max_lo_power = 0.0;               // W, saturation limit
    double dc_gain_f3db = 0.0;               // Hz, corner where L(f) = L(0)/2
    double cmrr_linear = 0.0;                // linear power ratio, >= 1
    double wavelength = 1550e-9;             // m
    double noise_bandwidth = 1.0;            // Hz, effective measurement bandwidth 1/T
    int rolloff_order = 1;                   // 1 (default) or 2
    std::vector<NoisePoint> noise_table;     // optional i_n^2(f)/i_n^2(0)

    void validate() const;

    /// L(f): single-pole L0/sqrt(1+(f/fc)^2) or two-pole L0/(1+(f/fc)^2),
    /// with fc set so that L(dc_gain_f3db) = L(0)/2.
    double gain_at(double f) const;

    /// i_n^2(f), white unless a noise table is supplied.
    double electronic_noise_at(double f) const;

    /// hbar*omega/T with T = 1/noise_bandwidth.
    double power_quantum() const { return photon_energy(wavelength) * noise_bandwidth; }

    /// Pi^2 implied by the CMRR through Sigma^2 + Pi^2 = 4.
    double pi_squared() const { return 4.0 * (1.0 - 1.0 / cmrr_linear); }
};

/// A classical optical tone: power, relative intensity noise PSD (1/Hz,
/// <ds^2> = power^2 * RIN * noise_bandwidth) and optical phase.
struct FieldTone {
    double power = 0.0;  // W
    double rin = 0.0;    // 1/Hz
    double phase = 0.0;  // rad

    static FieldTone shot_limited(double power, double wavelength, double phase = 0.0);
};

/// Shot-noise-limited RIN floor hbar*omega/power in 1/Hz.
double shot_noise_rin(double power, double wavelength);

struct BalancedOutput {
    double signal_power = 0.0;  // RF units (Pi^2 L^2 x W^2)
    double noise_power = 0.0;   // RF units
    bool high_lo = true;        // false when s_LO/s_s < 100
    double dropped_term_rel_error = 0.0;  // estimate of neglected terms, ~s_s/s_LO
};

/// Semi-classical balanced receiver output at the beat frequency:
///   P_sig = 4 Pi^2 L^2 s_s s_LO
///   P_noise = Pi^2 L^2 (s_LO <ds_s^2>/s_s + <ds_LO^2>/CMRR) + i_n^2
/// Valid for classical (coherent-statistics) fields only.
BalancedOutput balanced_output(const FieldTone& signal, const FieldTone& lo,
                               const CouplerParams& coupler, const ReceiverSpec& spec);

/// Quantum treatment: the noise floor uses the signal *state's* quadrature
/// variance at the LO phase, so squeezed inputs produce sub-shot-noise
/// floors. Coincides with balanced_output for coherent signal states.
BalancedOutput quantum_balanced_output(const GaussianState& signal, const FieldTone& lo,
                                       const CouplerParams& coupler, const ReceiverSpec& spec);

/// LO power at which the signal shot noise equals all other noise:
/// P_knee = i_n^2 / (Pi^2 L^2 (hbar w/T) (1 - 1/CMRR)). Zero electronic
/// noise gives 0; CMRR <= 1 is rejected.
double p_knee(const ReceiverSpec& spec);
double p_knee_at(const ReceiverSpec& spec, double f);

/// Shot noise clearance 10 log10(lo_power/P_knee + 1) in dB. LO above the
/// saturation power is a hard error.
double snc_db(const ReceiverSpec& spec, double lo_power);

/// eta = eta_opt * (1 - P_knee/s_LO); requires s_LO > P_knee.
double detection_efficiency(const ReceiverSpec& spec, double lo_power);

/// Quadrature variance of a squeezed state seen through total detection
/// efficiency eta: (1/4)(eta e^-2r + 1 - eta).
double measured_variance(double r, double eta);

struct FrequencyResponse {
    double gain = 0.0;    // L(f)
    double snc_db = 0.0;  // clearance at max LO power, same-frequency noise floor
    double nep_w = 0.0;   // input power for SNR = 1 at max LO power
};

FrequencyResponse frequency_response(const ReceiverSpec& spec, double f);

/// Frequency at which P_knee(f) reaches the maximum LO power (SNC down to
/// 3 dB); +infinity if never reached.
double shot_noise_limited_bandwidth(const ReceiverSpec& spec);

/// V_eff = (1/4)(e^-2r cos^2(dphi) + e^+2r sin^2(dphi)) for a residual
/// LO phase error dphi.
double phase_error_variance(double r, double dphi);

/// Coupler transform of a two-mode state (signal, LO) by
/// U = (1/sqrt(2)) [alpha, beta; -beta, alpha].
TwoModeState coupler_transform(const TwoModeState& input, const CouplerParams& coupler);

} // namespace qlink
