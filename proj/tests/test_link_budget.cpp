#include <doctest.h>

#include <cmath>
#include <random>

#include "qlink/config_file.hpp"
#include "qlink/link_budget.hpp"

using namespace qlink;
using doctest::Approx;

namespace {

LinkConfig reference_link() {
    // Loads the shipped operating point: 452.4 uW signal and LO, 1.5 GHz,
    // mu = 224 with 0.105 mW of pump, receiver knee at 4.52 uW.
    return load_link_config("configs/link_squeezed.cfg");
}

} // namespace

TEST_CASE("squeezing vs pump power") {
    const double r = squeezing_from_pump(0.105e-3, 224.0);
    CHECK(r == Approx(2.29532).epsilon(1e-5));
    CHECK(squeezing_db_from_r(r) == Approx(19.9369).epsilon(1e-4));

    CHECK(squeezing_db_from_r(squeezing_from_pump(1e-3, 72.0)) ==
          Approx(19.7764).epsilon(1e-4));
    CHECK(squeezing_from_pump(0.0, 90.0) == Approx(0.0));

    CHECK(pump_from_squeezing(std::log(10.0), 224.0) == Approx(1.056660e-4).epsilon(1e-5));
    CHECK(std::abs(pump_from_squeezing(std::log(10.0), 224.0) - 0.105e-3) / 0.105e-3 < 0.01);
    CHECK(pump_from_squeezing(squeezing_r_from_db(3.0), 10.0) == Approx(1.19293e-3).epsilon(1e-5));
    CHECK(pump_from_squeezing(0.0, 10.0) == Approx(0.0));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> pump_dist(1e-9, 1e-2);
    std::uniform_real_distribution<double> mu_dist(1.0, 300.0);
    for (int i = 0; i < 200; ++i) {
        const double pump = pump_dist(rng);
        const double mu = mu_dist(rng);
        CHECK(pump_from_squeezing(squeezing_from_pump(pump, mu), mu) ==
              Approx(pump).epsilon(1e-12));
    }
}

TEST_CASE("observable squeezing cap") {
    CHECK(observable_squeezing_cap_db(0.99) == Approx(20.0).epsilon(1e-12));
    CHECK(observable_squeezing_cap_db(0.5) == Approx(3.0103).epsilon(1e-4));
    CHECK(observable_squeezing_cap_db(0.0) == Approx(0.0));
    CHECK_THROWS_AS(observable_squeezing_cap_db(1.0), std::domain_error);
}

TEST_CASE("link evaluation against frozen values") {
    const LinkConfig link = reference_link();
    const CapacityReport rep = evaluate_link(link);

    CHECK(rep.n_photons == Approx(2353348.8144368078).epsilon(1e-12));
    CHECK(rep.efficiency_eta == Approx(0.9900088417329796).epsilon(1e-9));
    CHECK(rep.c_s1 == Approx(11.583141947956772).epsilon(1e-12));
    CHECK(rep.rate_s1 == Approx(17.374712921935156e9).epsilon(1e-12));
    CHECK(rep.c_sq == Approx(14.403765227514146).epsilon(1e-9));
    CHECK(rep.rate_sq == Approx(21.605647841271218e9).epsilon(1e-9));
    CHECK(rep.e_b_coherent == Approx(5.207568056320008e-14).epsilon(1e-12));
    CHECK(rep.e_b_squeezed == Approx(4.673777927968792e-14).epsilon(1e-9));
    CHECK(rep.e_b_squeezed < rep.e_b_coherent);

    // exact total-power accounting
    const double pump = pump_from_squeezing(rep.squeezing_r, link.mu);
    CHECK(rep.p_total == Approx(link.signal_power + link.lo_power + pump).epsilon(1e-15));
    CHECK(rep.p_total == Approx(1.0098e-3).epsilon(1e-9));

    // r = 0 keeps the squeezed column on the coherent baseline
    LinkConfig baseline = link;
    baseline.pump_power = 0.0;
    const CapacityReport base = evaluate_link(baseline);
    CHECK(base.c_sq == Approx(base.c_s1).epsilon(1e-12));
    CHECK(base.e_b_squeezed == Approx(base.e_b_coherent).epsilon(1e-12));
}

TEST_CASE("link evaluation rejects infeasible operating points") {
    LinkConfig link = reference_link();

    LinkConfig below_knee = link;
    below_knee.lo_power = 1e-6;  // under the 4.52 uW knee
    CHECK_THROWS_AS(evaluate_link(below_knee), std::domain_error);

    LinkConfig saturated = link;
    saturated.lo_power = 0.5;
    CHECK_THROWS_AS(evaluate_link(saturated), std::domain_error);

    // 20 dB of requested squeezing against a 1.2 dB observable cap
    LinkConfig capped = link;
    capped.lo_power = 6e-6;
    CHECK_THROWS_AS(evaluate_link(capped), std::domain_error);

    LinkConfig both = link;
    both.squeezing_r = 1.0;  // pump_power is already set
    CHECK_THROWS_AS(evaluate_link(both), std::invalid_argument);
}

TEST_CASE("signal power sweep shape and ordering") {
    const LinkConfig link = reference_link();
    const SweepResult sweep = sweep_signal_power(link, default_signal_grid());

    REQUIRE(sweep.rows.size() == default_signal_grid().size());
    for (const auto& row : sweep.rows) REQUIRE(row.size() == sweep.columns.size());

    // columns: s_s, N, shannon, sq3, trunc3, sq20, trunc20, holevo
    double prev_gain = std::numeric_limits<double>::infinity();
    for (const auto& row : sweep.rows) {
        const double shannon = row[2], sq3 = row[3], sq20 = row[5], holevo = row[7];
        CHECK(row[4] == 0.0);
        CHECK(row[6] == 0.0);
        CHECK(sq3 > shannon);
        CHECK(sq20 > sq3);
        CHECK(holevo > sq20);
        // relative squeezing gain is largest at low signal power
        const double gain = sq20 / shannon;
        CHECK(gain <= prev_gain * (1 + 1e-12));
        prev_gain = gain;
    }

    const SweepResult single = sweep_signal_power(link, {452.4e-6});
    CHECK(single.rows.size() == 1);

    CHECK_THROWS_AS(sweep_signal_power(link, {}), std::invalid_argument);
    CHECK_THROWS_AS(sweep_signal_power(link, {1e-3, 1e-4}), std::invalid_argument);
}

TEST_CASE("pump power sweep truncation and crossover") {
    const LinkConfig link = reference_link();
    const auto grid = default_pump_grid();
    const SweepResult sweep = sweep_pump_power(link, grid);

    REQUIRE(sweep.rows.size() == grid.size());
    // columns: pump, (rate, e_b, trunc) x {10, 72, 224}, rate_coh, e_b_coh, rate_hol
    const std::size_t i224_rate = 7, i224_eb = 8, i224_trunc = 9;
    const std::size_t i_coh_rate = 10, i_coh_eb = 11, i_hol = 12;

    const double eta = evaluate_link(link).efficiency_eta;
    const double cap_db = observable_squeezing_cap_db(eta);
    const double cutoff224 = pump_from_squeezing(squeezing_r_from_db(cap_db), 224.0);
    CHECK(std::abs(cutoff224 - 0.105e-3) / 0.105e-3 < 0.01);

    bool crossover = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& row = sweep.rows[i];
        const bool truncated = row[i224_trunc] == 1.0;
        CHECK(truncated == (grid[i] > cutoff224));
        if (truncated) {
            CHECK(std::isnan(row[i224_rate]));
            CHECK(std::isnan(row[i224_eb]));
        } else {
            const double r = squeezing_from_pump(grid[i], 224.0);
            CHECK(squeezing_db_from_r(r) <= cap_db + 1e-9);
            CHECK(row[i224_rate] > row[i_coh_rate]);
            CHECK(row[i224_rate] < row[i_hol]);
            if (row[i224_eb] < row[i_coh_eb]) crossover = true;
        }
    }
    CHECK(crossover);

    // A weak nonlinearity (mu = 1) never beats the coherent baseline here.
    const SweepResult weak = sweep_pump_power(link, grid, {1.0});
    for (const auto& row : weak.rows) {
        if (!std::isnan(row[2])) CHECK(row[2] > row[5]);  // e_b_mu1 > e_b_coherent
    }

    // clamping mode keeps emitting rows at the cap
    const SweepResult clamped = sweep_pump_power(link, grid, {224.0}, true);
    for (const auto& row : clamped.rows) CHECK_FALSE(std::isnan(row[1]));
}

TEST_CASE("rate ordering across squeezing variants at fixed signal power") {
    LinkConfig link = reference_link();
    const double n = evaluate_link(link).n_photons;
    const double eta = evaluate_link(link).efficiency_eta;
    const double rate_coh = c_shannon_1q(n);
    const double rate_3db = c_squeezed(n, squeezing_from_pump(1e-3, 10.0), eta);
    const double rate_20db = c_squeezed(n, squeezing_from_pump(0.105e-3, 224.0), eta);
    const double rate_hol = c_holevo(n);
    CHECK(rate_coh < rate_3db);
    CHECK(rate_3db < rate_20db);
    CHECK(rate_20db < rate_hol);
}

TEST_CASE("LO power optimization") {
    // Squeezing held fixed with negligible pump cost: the optimum balances
    // LO power spend against the efficiency-limited capacity.
    LinkConfig link = reference_link();
    link.pump_power.reset();
    link.squeezing_r = std::log(10.0);
    link.mu = 1e9;

    const double knee = p_knee(link.receiver);
    const double lo_min = knee * 1.02;
    const double lo_max = link.receiver.max_lo_power;
    const LoOptimum opt = optimize_lo_power(link, lo_min, lo_max);

    CHECK(opt.s_lo > knee);
    CHECK(opt.grid_consistent);

    // dense-grid oracle
    auto objective = [&](double lo) {
        return energy_per_bit_squeezed(link.signal_power, lo, *link.squeezing_r, link.mu,
                                       link.eta_opt * detection_efficiency(link.receiver, lo),
                                       link.bandwidth, link.wavelength);
    };
    double oracle_min = std::numeric_limits<double>::infinity();
    double oracle_arg = lo_min;
    for (double lo : log_grid(lo_min, lo_max, 20000)) {
        const double v = objective(lo);
        if (v < oracle_min) {
            oracle_min = v;
            oracle_arg = lo;
        }
    }
    CHECK(opt.e_b <= oracle_min * (1.0 + 1e-9));
    CHECK(opt.s_lo == Approx(oracle_arg).epsilon(2e-3));

    // first-order stationarity: the optimum beats its neighborhood and the
    // objective there is flat to well below 1e-6 relative
    const double up = objective(opt.s_lo * 1.005);
    const double down = objective(opt.s_lo * 0.995);
    CHECK(opt.e_b <= up);
    CHECK(opt.e_b <= down);
    CHECK(std::abs(opt.e_b - oracle_min) <= 1e-6 * oracle_min);

    // result invariant to a 10x tighter tolerance
    const LoOptimum tight = optimize_lo_power(link, lo_min, lo_max, 1e-10);
    CHECK(std::abs(tight.s_lo - opt.s_lo) <= 1e-3 * opt.s_lo);

    // interior optimum for this configuration
    CHECK(opt.s_lo > lo_min * 1.5);
    CHECK(opt.s_lo < lo_max / 1.5);
}

TEST_CASE("optimization degenerates to the lower bound without a knee") {
    LinkConfig link = reference_link();
    link.pump_power.reset();
    link.squeezing_r = 0.5;
    link.receiver.electronic_noise_in2 = 0.0;  // P_knee = 0

    const LoOptimum opt = optimize_lo_power(link, 1e-6, 1e-3);
    CHECK(opt.s_lo == Approx(1e-6).epsilon(1e-2));

    CHECK_THROWS_AS(optimize_lo_power(link, 1e-3, 1e-6), std::domain_error);
    CHECK_THROWS_AS(optimize_lo_power(link, 1e-6, 1.0), std::domain_error);
}
