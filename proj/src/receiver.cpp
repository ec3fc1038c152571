#include "qlink/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlink {

namespace {

constexpr double kCouplerTolerance = 1e-9;
constexpr double kHighLoRatio = 100.0;

} // namespace

CouplerParams::CouplerParams(std::complex<double> a, std::complex<double> b)
    : alpha(a), beta(b) {
    if (std::abs(std::norm(a) + std::norm(b) - 2.0) > kCouplerTolerance) {
        throw std::invalid_argument("CouplerParams: |alpha|^2 + |beta|^2 must equal 2");
    }
    if (std::abs(std::imag(std::conj(a) * b)) > kCouplerTolerance) {
        throw std::invalid_argument("CouplerParams: Im(conj(alpha)*beta) must vanish");
    }
}

CouplerParams CouplerParams::from_cmrr(double cmrr_linear) {
    if (!(cmrr_linear >= 1.0)) {
        throw std::invalid_argument("CouplerParams::from_cmrr: CMRR must be >= 1");
    }
    if (std::isinf(cmrr_linear)) return balanced();
    // Sigma^2 + Pi^2 = 4 so CMRR = 4/Sigma^2.
    const double sigma = 2.0 / std::sqrt(cmrr_linear);
    return CouplerParams({std::sqrt(1.0 + sigma / 2.0), 0.0},
                         {std::sqrt(1.0 - sigma / 2.0), 0.0});
}

double cmrr_from_coupler(const CouplerParams& coupler) {
    const double sigma = coupler.sigma();
    const double pi = coupler.pi();
    const double s2 = sigma * sigma;
    if (s2 == 0.0) return std::numeric_limits<double>::infinity();
    return (s2 + pi * pi) / s2;
}

double cmrr_measured_db(double p_unbalanced, double p_balanced) {
    if (!(p_unbalanced > 0.0) || !(p_balanced > 0.0)) {
        throw std::invalid_argument("cmrr_measured_db: RF powers must be positive");
    }
    return db_from_linear(p_unbalanced / (4.0 * p_balanced));
}

void ReceiverSpec::validate() const {
    if (!(electronic_noise_in2 >= 0.0)) {
        throw std::invalid_argument("ReceiverSpec: electronic_noise_in2 must be >= 0");
    }
    if (!(optical_efficiency_eta_opt > 0.0 && optical_efficiency_eta_opt <= 1.0)) {
        throw std::invalid_argument("ReceiverSpec: optical_efficiency_eta_opt must be in (0, 1]");
    }
    if (!(responsivity_L > 0.0 && responsivity_L <= 1.0)) {
        throw std::invalid_argument("ReceiverSpec: responsivity_L must be in (0, 1]");
    }
    if (!(max_lo_power > 0.0)) {
        throw std::invalid_argument("ReceiverSpec: max_lo_power must be positive");
    }
    if (!(dc_gain_f3db > 0.0)) {
        throw std::invalid_argument("ReceiverSpec: dc_gain_f3db must be positive");
    }
    if (!(cmrr_linear >= 1.0)) {
        throw std::invalid_argument("ReceiverSpec: cmrr_linear must be >= 1");
    }
    if (!(wavelength > 0.0)) {
        throw std::invalid_argument("ReceiverSpec: wavelength must be positive");
    }
    if (!(noise_bandwidth > 0.0)) {
        throw std::invalid_argument("ReceiverSpec: noise_bandwidth must be positive");
    }
    if (rolloff_order != 1 && rolloff_order != 2) {
        throw std::invalid_argument("ReceiverSpec: rolloff_order must be 1 or 2");
    }
    double prev_f = -1.0;
    for (const auto& p : noise_table) {
        if (!(p.frequency_hz >= 0.0) || !(p.multiplier > 0.0) || p.frequency_hz <= prev_f) {
            throw std::invalid_argument(
                "ReceiverSpec: noise_table must have increasing frequencies and positive multipliers");
        }
        prev_f = p.frequency_hz;
    }
}

double ReceiverSpec::gain_at(double f) const {
    if (!(f >= 0.0)) throw std::invalid_argument("gain_at: frequency must be >= 0");
    if (rolloff_order == 1) {
        // L(f3db) = L0/2 requires fc = f3db/sqrt(3) for a single pole.
        const double fc = dc_gain_f3db / std::sqrt(3.0);
        const double x = f / fc;
        return responsivity_L / std::sqrt(1.0 + x * x);
    }
    const double x = f / dc_gain_f3db;
    return responsivity_L / (1.0 + x * x);
}

double ReceiverSpec::electronic_noise_at(double f) const {
    if (noise_table.empty()) return electronic_noise_in2;
    if (f <= noise_table.front().frequency_hz) {
        return electronic_noise_in2 * noise_table.front().multiplier;
    }
    if (f >= noise_table.back().frequency_hz) {
        return electronic_noise_in2 * noise_table.back().multiplier;
    }
    for (std::size_t i = 1; i < noise_table.size(); ++i) {
        if (f <= noise_table[i].frequency_hz) {
            const auto& a = noise_table[i - 1];
            const auto& b = noise_table[i];
            const double t = (f - a.frequency_hz) / (b.frequency_hz - a.frequency_hz);
            return electronic_noise_in2 * (a.multiplier + t * (b.multiplier - a.multiplier));
        }
    }
    return electronic_noise_in2 * noise_table.back().multiplier;
}

FieldTone FieldTone::shot_limited(double power, double wavelength, double phase) {
    return FieldTone{power, shot_noise_rin(power, wavelength), phase};
}

double shot_noise_rin(double power, double wavelength) {
    if (!(power > 0.0)) throw std::invalid_argument("shot_noise_rin: power must be positive");
    return photon_energy(wavelength) / power;
}

namespace {

// Common noise assembly; signal shot term passed in by the two treatments.
BalancedOutput assemble_output(double signal_shot_term, double s_s, const FieldTone& lo,
                               const CouplerParams& coupler, const ReceiverSpec& spec) {
    const double pi2 = coupler.pi() * coupler.pi();
    const double l2 = spec.responsivity_L * spec.responsivity_L;
    const double cmrr = cmrr_from_coupler(coupler);
    const double b = spec.noise_bandwidth;

    BalancedOutput out;
    out.signal_power = 4.0 * pi2 * l2 * s_s * lo.power;
    double noise = signal_shot_term;
    if (lo.power > 0.0 && std::isfinite(cmrr)) {
        const double var_lo = lo.power * lo.power * lo.rin * b;
        noise += var_lo / cmrr;
    }
    out.noise_power = pi2 * l2 * noise + spec.electronic_noise_in2;
    if (lo.power < kHighLoRatio * s_s) {
        out.high_lo = false;
        out.dropped_term_rel_error = lo.power > 0.0 ? s_s / lo.power
                                                    : std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace

BalancedOutput balanced_output(const FieldTone& signal, const FieldTone& lo,
                               const CouplerParams& coupler, const ReceiverSpec& spec) {
    spec.validate();
    if (signal.power < 0.0 || lo.power < 0.0) {
        throw std::invalid_argument("balanced_output: powers must be >= 0");
    }
    // s_LO <ds_s^2>/s_s with <ds_s^2> = s_s^2 RIN B. An empty signal port
    // still carries vacuum fluctuations that beat with the LO.
    double signal_shot = 0.0;
    if (lo.power > 0.0) {
        signal_shot = signal.power > 0.0
                          ? lo.power * signal.power * signal.rin * spec.noise_bandwidth
                          : lo.power * spec.power_quantum();
    }
    return assemble_output(signal_shot, signal.power, lo, coupler, spec);
}

BalancedOutput quantum_balanced_output(const GaussianState& signal, const FieldTone& lo,
                                       const CouplerParams& coupler, const ReceiverSpec& spec) {
    spec.validate();
    if (lo.power < 0.0) throw std::invalid_argument("quantum_balanced_output: LO power must be >= 0");
    const double quantum = spec.power_quantum();
    const double s_s = quantum * mean_photon_number(signal);
    // 4 (hbar w/T) s_LO <dq_s^2> at the LO phase.
    double signal_shot = 0.0;
    if (lo.power > 0.0) {
        signal_shot = 4.0 * quantum * lo.power * quadrature_variance(signal, lo.phase);
    }
    return assemble_output(signal_shot, s_s, lo, coupler, spec);
}

double p_knee(const ReceiverSpec& spec) { return p_knee_at(spec, 0.0); }

double p_knee_at(const ReceiverSpec& spec, double f) {
    spec.validate();
    if (!(spec.cmrr_linear > 1.0)) {
        throw std::domain_error("p_knee: CMRR must exceed 1");
    }
    const double in2 = spec.electronic_noise_at(f);
    if (in2 == 0.0) return 0.0;
    const double pi2 = spec.pi_squared();
    const double l = spec.gain_at(f);
    return in2 / (pi2 * l * l * spec.power_quantum() * (1.0 - 1.0 / spec.cmrr_linear));
}

double snc_db(const ReceiverSpec& spec, double lo_power) {
    if (!(lo_power >= 0.0)) throw std::invalid_argument("snc_db: LO power must be >= 0");
    if (lo_power > spec.max_lo_power) {
        throw std::domain_error("snc_db: LO power above saturation limit");
    }
    const double knee = p_knee(spec);
    if (knee == 0.0) {
        return lo_power == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return db_from_linear(lo_power / knee + 1.0);
}

double detection_efficiency(const ReceiverSpec& spec, double lo_power) {
    const double knee = p_knee(spec);
    if (!(lo_power > knee)) {
        throw std::domain_error("detection_efficiency: LO power must exceed P_knee");
    }
    return spec.optical_efficiency_eta_opt * (1.0 - knee / lo_power);
}

double measured_variance(double r, double eta) {
    if (r < 0.0) throw std::invalid_argument("measured_variance: r must be >= 0");
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("measured_variance: eta must be in [0, 1]");
    }
    return kVacuumVariance * (eta * std::exp(-2.0 * r) + 1.0 - eta);
}

FrequencyResponse frequency_response(const ReceiverSpec& spec, double f) {
    spec.validate();
    if (!(f >= 0.0)) throw std::invalid_argument("frequency_response: f must be >= 0");
    FrequencyResponse out;
    out.gain = spec.gain_at(f);

    const double knee_f = p_knee_at(spec, f);
    out.snc_db = knee_f == 0.0 ? std::numeric_limits<double>::infinity()
                               : db_from_linear(spec.max_lo_power / knee_f + 1.0);

    // Input power giving SNR = 1 with the LO at the saturation limit.
    const double pi2 = spec.pi_squared();
    const double l2 = out.gain * out.gain;
    const double quantum = spec.power_quantum();
    const double s_lo = spec.max_lo_power;
    const double noise = pi2 * l2 * quantum * s_lo * (1.0 + 1.0 / spec.cmrr_linear) +
                         spec.electronic_noise_at(f);
    out.nep_w = noise / (4.0 * pi2 * l2 * s_lo);
    return out;
}

double shot_noise_limited_bandwidth(const ReceiverSpec& spec) {
    spec.validate();
    const double target = spec.max_lo_power;
    if (p_knee_at(spec, 0.0) >= target) return 0.0;
    double hi = spec.dc_gain_f3db;
    double lo = 0.0;
    const double f_cap = 1e4 * spec.dc_gain_f3db;
    while (p_knee_at(spec, hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > f_cap) return std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (p_knee_at(spec, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double phase_error_variance(double r, double dphi) {
    if (r < 0.0) throw std::invalid_argument("phase_error_variance: r must be >= 0");
    const double c = std::cos(dphi), s = std::sin(dphi);
    return kVacuumVariance * (std::exp(-2.0 * r) * c * c + std::exp(2.0 * r) * s * s);
}

TwoModeState coupler_transform(const TwoModeState& input, const CouplerParams& coupler) {
    // Complex amplitude c acting on a mode maps (q, p) by
    // [Re c, -Im c; Im c, Re c].
    const double ar = coupler.alpha.real(), ai = coupler.alpha.imag();
    const double br = coupler.beta.real(), bi = coupler.beta.imag();
    const double s = 1.0 / std::sqrt(2.0);
    const std::array<double, 16> m = {
        s * ar, -s * ai, s * br, -s * bi,
        s * ai, s * ar,  s * bi, s * br,
        -s * br, s * bi, s * ar, -s * ai,
        -s * bi, -s * br, s * ai, s * ar};
    return apply_symplectic(input, m);
}

} // namespace qlink
