#include <doctest.h>

#include <cmath>
#include <random>

#include "qlink/config_file.hpp"
#include "qlink/receiver.hpp"

using namespace qlink;
using doctest::Approx;

namespace {

ReceiverSpec ideal_receiver() {
    ReceiverSpec spec;
    spec.electronic_noise_in2 = 0.0;
    spec.optical_efficiency_eta_opt = 1.0;
    spec.responsivity_L = 1.0;
    spec.max_lo_power = 1.0;
    spec.dc_gain_f3db = 1e9;
    spec.cmrr_linear = std::numeric_limits<double>::infinity();
    spec.wavelength = 1550e-9;
    spec.noise_bandwidth = 1.0;
    return spec;
}

ReceiverSpec receiver_with_knee(double knee, double cmrr = 1e9) {
    ReceiverSpec spec = ideal_receiver();
    spec.cmrr_linear = cmrr;
    const double q = spec.power_quantum();
    spec.electronic_noise_in2 = spec.pi_squared() * (1.0 - 1.0 / cmrr) * q * knee;
    return spec;
}

std::mt19937 rng(777);

} // namespace

TEST_CASE("theoretical CMRR from coupler amplitudes") {
    CHECK(std::isinf(cmrr_from_coupler(CouplerParams::balanced())));

    const CouplerParams skew({std::sqrt(1.02), 0.0}, {std::sqrt(0.98), 0.0});
    CHECK(cmrr_from_coupler(skew) == Approx(2500.0).epsilon(1e-9));
    CHECK(db_from_linear(cmrr_from_coupler(skew)) == Approx(33.979).epsilon(1e-4));

    const CouplerParams one_arm({std::sqrt(2.0), 0.0}, {0.0, 0.0});
    CHECK(cmrr_from_coupler(one_arm) == Approx(1.0));

    // from_cmrr round-trips the ratio
    for (double target : {10.0, 2500.0, 1e9}) {
        CHECK(cmrr_from_coupler(CouplerParams::from_cmrr(target)) ==
              Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("measured CMRR convention keeps its factor 4") {
    CHECK(cmrr_measured_db(4e9, 1.0) == Approx(90.0).epsilon(1e-9));
    CHECK(cmrr_measured_db(4.0, 1.0) == Approx(0.0));
    CHECK_THROWS_AS(cmrr_measured_db(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cmrr_measured_db(1.0, -2.0), std::invalid_argument);

    // Raw 59.8 dB ratio, balanced arm re-measured with 18.2 dB more LO
    // (36.4 dB in RF), minus the factor-4 convention: 90.2 dB.
    const double p_unb = 1.0;
    const double p_bal_raw = linear_from_db(-59.8);
    const double p_bal = p_bal_raw * linear_from_db(-2.0 * 18.2);
    CHECK(cmrr_measured_db(p_unb, p_bal) == Approx(59.8 + 36.4 - 6.0206).epsilon(1e-6));
    CHECK(std::abs(cmrr_measured_db(p_unb, p_bal) - 90.2) < 0.05);
}

TEST_CASE("balanced output noise structure") {
    SUBCASE("ideal receiver reaches the quantum-limited SNR") {
        const ReceiverSpec spec = ideal_receiver();
        const CouplerParams coupler = CouplerParams::balanced();
        const double s_s = 1e-6, s_lo = 1e-3;
        const auto out = balanced_output(FieldTone::shot_limited(s_s, spec.wavelength),
                                         FieldTone::shot_limited(s_lo, spec.wavelength),
                                         coupler, spec);
        CHECK(out.signal_power / out.noise_power ==
              Approx(4.0 * s_s / spec.power_quantum()).epsilon(1e-9));
    }

    SUBCASE("no LO leaves only the electronic floor") {
        const ReceiverSpec spec = receiver_with_knee(520e-6);
        const auto out = balanced_output(FieldTone{}, FieldTone{},
                                         CouplerParams::from_cmrr(spec.cmrr_linear), spec);
        CHECK(out.noise_power == Approx(spec.electronic_noise_in2));
        CHECK(out.signal_power == 0.0);
    }

    SUBCASE("low LO power flags the dropped terms") {
        const ReceiverSpec spec = ideal_receiver();
        const auto out = balanced_output(FieldTone::shot_limited(1e-3, spec.wavelength),
                                         FieldTone::shot_limited(5e-3, spec.wavelength),
                                         CouplerParams::balanced(), spec);
        CHECK_FALSE(out.high_lo);
        CHECK(out.dropped_term_rel_error == Approx(0.2));
    }
}

TEST_CASE("semi-classical and quantum treatments agree for coherent states") {
    std::uniform_real_distribution<double> q_dist(0.5, 8.0);
    std::uniform_real_distribution<double> phase_dist(0.0, 2 * std::numbers::pi);
    std::uniform_real_distribution<double> log_cmrr(1.0, 12.0);
    std::uniform_real_distribution<double> l_dist(0.3, 1.0);
    std::uniform_real_distribution<double> lo_dist(3.0, 6.0);

    for (int i = 0; i < 500; ++i) {
        ReceiverSpec spec = ideal_receiver();
        spec.cmrr_linear = std::pow(10.0, log_cmrr(rng));
        spec.responsivity_L = l_dist(rng);
        spec.electronic_noise_in2 = 1e-22 * q_dist(rng);
        const CouplerParams coupler = CouplerParams::from_cmrr(spec.cmrr_linear);

        const double q = q_dist(rng), p = q_dist(rng);
        const GaussianState state = coherent(q, p);
        const double s_s = spec.power_quantum() * mean_photon_number(state);
        const double s_lo = s_s * std::pow(10.0, lo_dist(rng));
        const FieldTone lo = FieldTone::shot_limited(s_lo, spec.wavelength, phase_dist(rng));

        const auto classical =
            balanced_output(FieldTone::shot_limited(s_s, spec.wavelength), lo, coupler, spec);
        const auto quantum = quantum_balanced_output(state, lo, coupler, spec);

        CHECK(quantum.signal_power == Approx(classical.signal_power).epsilon(1e-9));
        CHECK(quantum.noise_power == Approx(classical.noise_power).epsilon(1e-9));
    }
}

TEST_CASE("quantum treatment exposes squeezed noise floors") {
    const ReceiverSpec spec = ideal_receiver();
    const CouplerParams coupler = CouplerParams::balanced();
    const FieldTone lo = FieldTone::shot_limited(1e-3, spec.wavelength);

    const auto coherent_floor = quantum_balanced_output(vacuum(), lo, coupler, spec);
    for (double r : {0.3, 0.661, 1.0}) {
        const auto squeezed_floor =
            quantum_balanced_output(squeeze(vacuum(), r, 0.0), lo, coupler, spec);
        CHECK(squeezed_floor.noise_power / coherent_floor.noise_power ==
              Approx(std::exp(-2 * r)).epsilon(1e-9));
    }

    // 0.661 of squeezing through 4.6% efficiency: 0.15 dB below shot noise.
    const GaussianState degraded = apply_loss(squeeze(vacuum(), 0.661, 0.0), 0.046);
    const auto floor = quantum_balanced_output(degraded, lo, coupler, spec);
    CHECK(db_from_linear(floor.noise_power / coherent_floor.noise_power) ==
          Approx(-0.1490).epsilon(1e-3));
}

TEST_CASE("knee power calibration") {
    const ReceiverSpec spec = receiver_with_knee(520e-6, linear_from_db(90.2));
    CHECK(p_knee(spec) == Approx(520e-6).epsilon(1e-12));

    ReceiverSpec halved = spec;
    halved.electronic_noise_in2 *= 0.5;
    CHECK(p_knee(halved) == Approx(260e-6).epsilon(1e-12));

    const ReceiverSpec link_rx = receiver_with_knee(4.52e-6);
    CHECK(p_knee(link_rx) == Approx(4.52e-6).epsilon(1e-12));

    ReceiverSpec bad = spec;
    bad.cmrr_linear = 1.0;
    CHECK_THROWS_AS(p_knee(bad), std::domain_error);
}

TEST_CASE("shot noise clearance") {
    ReceiverSpec spec = receiver_with_knee(4.52e-6);
    spec.max_lo_power = 1e-2;

    CHECK(snc_db(spec, p_knee(spec)) == Approx(10 * std::log10(2.0)).epsilon(1e-12));
    CHECK(std::abs(snc_db(spec, 452e-6) - 20.0) < 0.05);
    CHECK(snc_db(spec, 0.0) == Approx(0.0));
    CHECK_THROWS_AS(snc_db(spec, 2e-2), std::domain_error);

    // 9.50 mW of LO on the 520 uW knee: 12.85 dB, near the quoted 12.7 dB.
    ReceiverSpec single = receiver_with_knee(520e-6);
    single.max_lo_power = 12.6e-3;
    CHECK(snc_db(single, 9.5e-3) == Approx(12.849).epsilon(1e-4));
    CHECK(std::abs(snc_db(single, 9.5e-3) - 12.7) < 0.3);

    // strictly increasing in LO power
    double prev = -1.0;
    for (double lo : log_grid(1e-7, 1e-2, 40)) {
        const double v = snc_db(spec, lo);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("detection efficiency chain") {
    ReceiverSpec spec = receiver_with_knee(4.52e-6);
    spec.max_lo_power = 1e-2;
    CHECK(detection_efficiency(spec, 452e-6) == Approx(0.99).epsilon(1e-9));
    CHECK(detection_efficiency(spec, 1e-2) == Approx(1.0 - 4.52e-4).epsilon(1e-9));
    CHECK_THROWS_AS(detection_efficiency(spec, p_knee(spec)), std::domain_error);
    CHECK_THROWS_AS(detection_efficiency(spec, 1e-7), std::domain_error);

    ReceiverSpec lossy = spec;
    lossy.optical_efficiency_eta_opt = 0.537;  // 2.7 dB of on-chip loss
    CHECK(detection_efficiency(lossy, 1e-1 * 452e-6 * 1e3) == Approx(0.537).epsilon(1e-3));

    // monotone in LO power, bounded by eta_opt
    double prev = 0.0;
    for (double lo : log_grid(5e-6, 1e-2, 50)) {
        const double eta = detection_efficiency(lossy, lo);
        CHECK(eta > prev);
        CHECK(eta <= lossy.optical_efficiency_eta_opt);
        prev = eta;
    }
}

TEST_CASE("measured variance under loss") {
    CHECK(db_from_linear(measured_variance(0.661, 0.046) / 0.25) ==
          Approx(-0.1490).epsilon(1e-3));
    CHECK(measured_variance(0.5, 0.0) == Approx(0.25));
    CHECK(measured_variance(0.0, 0.7) == Approx(0.25));

    // monotone decreasing in r, increasing in loss, bounded
    for (double r : {0.0, 0.2, 0.5, 1.0, 2.0}) {
        for (double eta : {0.0, 0.3, 0.7, 1.0}) {
            const double v = measured_variance(r, eta);
            CHECK(v <= 0.25 + 1e-15);
            CHECK(v >= 0.25 * std::exp(-2 * r) - 1e-15);
            if (eta < 1.0) CHECK(measured_variance(r, eta + 0.01) <= v + 1e-15);
            CHECK(measured_variance(r + 0.1, eta) <= v + 1e-15);
        }
    }
}

TEST_CASE("frequency response") {
    ReceiverSpec spec = receiver_with_knee(520e-6, linear_from_db(90.2));
    spec.dc_gain_f3db = 2.57e9;
    spec.max_lo_power = 12.5418e-3;

    const auto at_corner = frequency_response(spec, 2.57e9);
    CHECK(at_corner.gain == Approx(spec.responsivity_L / 2.0).epsilon(1e-12));

    // Ideal receiver: NEP(0) is the power giving SNR = 1, hbar w B / 4.
    const ReceiverSpec ideal = ideal_receiver();
    const auto ideal_dc = frequency_response(ideal, 0.0);
    CHECK(ideal_dc.nep_w == Approx(ideal.power_quantum() / 4.0).epsilon(1e-12));

    // L monotone non-increasing, NEP monotone non-decreasing.
    double prev_gain = spec.responsivity_L + 1.0, prev_nep = 0.0;
    for (double f : lin_grid(0.0, 8e9, 30)) {
        const auto r = frequency_response(spec, f);
        CHECK(r.gain <= prev_gain);
        CHECK(r.nep_w >= prev_nep);
        prev_gain = r.gain;
        prev_nep = r.nep_w;
    }

    // White-noise single-pole model keeps the receiver shot-noise limited
    // beyond the 3 dB corner.
    const double f_shot = shot_noise_limited_bandwidth(spec);
    CHECK(f_shot > spec.dc_gain_f3db);

    SUBCASE("second-order roll-off") {
        ReceiverSpec second = spec;
        second.rolloff_order = 2;
        CHECK(second.gain_at(2.57e9) == Approx(second.responsivity_L / 2.0).epsilon(1e-12));
        CHECK(shot_noise_limited_bandwidth(second) > second.dc_gain_f3db);
    }
}

TEST_CASE("calibrated receiver fixture reproduces the headline figures") {
    const ReceiverSpec spec = load_receiver_spec("configs/receiver_single_channel.cfg");
    CHECK(p_knee(spec) == Approx(520e-6).epsilon(1e-9));
    CHECK(snc_db(spec, spec.max_lo_power) == Approx(14.0).epsilon(1e-9));
    CHECK(spec.dc_gain_f3db == Approx(2.57e9));
    CHECK(shot_noise_limited_bandwidth(spec) == Approx(3.50e9).epsilon(2e-3));
}

TEST_CASE("shot noise slope is unity") {
    const ReceiverSpec spec = receiver_with_knee(520e-6);
    const CouplerParams coupler = CouplerParams::from_cmrr(spec.cmrr_linear);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double lo : log_grid(52e-6, 52e-3 * 0.1, 40)) {
        const auto out = balanced_output(FieldTone{}, FieldTone::shot_limited(lo, spec.wavelength),
                                         coupler, spec);
        const double x = std::log(lo);
        const double y = std::log(out.noise_power - spec.electronic_noise_in2);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("high CMRR removes the LO noise contribution") {
    ReceiverSpec spec = ideal_receiver();
    const double s_lo = 1e-3;
    // LO with 20 dB of excess RIN
    const FieldTone noisy_lo{s_lo, 100.0 * shot_noise_rin(s_lo, spec.wavelength), 0.0};

    const auto leaky = quantum_balanced_output(squeeze(vacuum(), 0.5, 0.0), noisy_lo,
                                               CouplerParams::from_cmrr(1e2), spec);
    const auto clean = quantum_balanced_output(squeeze(vacuum(), 0.5, 0.0), noisy_lo,
                                               CouplerParams::from_cmrr(1e14), spec);
    CHECK(leaky.noise_power > clean.noise_power);
    // At very high CMRR only the signal quadrature variance remains.
    const double expected = spec.pi_squared() * 4.0 * spec.power_quantum() * s_lo *
                            0.25 * std::exp(-1.0);
    CHECK(clean.noise_power == Approx(expected).epsilon(1e-6));
}

TEST_CASE("phase error variance") {
    for (double r : {0.1, 0.5, 1.0}) {
        CHECK(phase_error_variance(r, 0.0) == Approx(0.25 * std::exp(-2 * r)).epsilon(1e-12));
        CHECK(phase_error_variance(r, std::numbers::pi / 2) ==
              Approx(0.25 * std::exp(2 * r)).epsilon(1e-12));
    }
    // 5 degrees of phase error keeps >= 90% of the squeezing in dB.
    const double dphi = 5.0 * std::numbers::pi / 180.0;
    for (double r : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double retained = -db_from_linear(phase_error_variance(r, dphi) / 0.25);
        const double ideal = squeezing_db_from_r(r);
        CHECK(retained / ideal >= 0.90);
    }
    CHECK_THROWS_AS(phase_error_variance(-0.2, 0.1), std::invalid_argument);
}
