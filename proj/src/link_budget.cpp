#include "qlink/link_budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlink {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kCapSlackDb = 1e-9;

std::string format_si(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

void LinkConfig::validate() const {
    if (pump_power.has_value() == squeezing_r.has_value()) {
        throw std::invalid_argument(
            "LinkConfig: exactly one of pump_power / squeezing_r must be set");
    }
    if (!(signal_power >= 0.0) || !(lo_power >= 0.0)) {
        throw std::invalid_argument("LinkConfig: powers must be >= 0");
    }
    if (pump_power && !(*pump_power >= 0.0)) {
        throw std::invalid_argument("LinkConfig: pump_power must be >= 0");
    }
    if (squeezing_r && !(*squeezing_r >= 0.0)) {
        throw std::invalid_argument("LinkConfig: squeezing_r must be >= 0");
    }
    const bool wants_squeezing = (pump_power && *pump_power > 0.0) ||
                                 (squeezing_r && *squeezing_r > 0.0);
    if (wants_squeezing && !(mu > 0.0)) {
        throw std::invalid_argument("LinkConfig: mu must be positive when squeezing is requested");
    }
    if (!(eta_opt > 0.0 && eta_opt <= 1.0)) {
        throw std::invalid_argument("LinkConfig: eta_opt must be in (0, 1]");
    }
    if (!(bandwidth > 0.0)) throw std::invalid_argument("LinkConfig: bandwidth must be positive");
    if (!(wavelength > 0.0)) throw std::invalid_argument("LinkConfig: wavelength must be positive");
    receiver.validate();
}

double LinkConfig::resolved_squeezing() const {
    return squeezing_r ? *squeezing_r : squeezing_from_pump(*pump_power, mu);
}

double squeezing_from_pump(double pump, double mu) {
    if (!(pump >= 0.0)) throw std::invalid_argument("squeezing_from_pump: pump must be >= 0");
    return mu * std::sqrt(pump);
}

double pump_from_squeezing(double r, double mu) {
    if (!(r >= 0.0)) throw std::invalid_argument("pump_from_squeezing: r must be >= 0");
    if (!(mu > 0.0)) throw std::invalid_argument("pump_from_squeezing: mu must be positive");
    return (r / mu) * (r / mu);
}

double observable_squeezing_cap_db(double eta) {
    if (!(eta >= 0.0 && eta < 1.0)) {
        throw std::domain_error("observable_squeezing_cap_db: eta must be in [0, 1)");
    }
    return -db_from_linear(1.0 - eta);
}

CapacityReport evaluate_link(const LinkConfig& config) {
    config.validate();
    const double knee = p_knee(config.receiver);
    if (!(config.lo_power > knee)) {
        throw std::domain_error("evaluate_link: LO power must exceed the receiver P_knee");
    }
    if (config.lo_power > config.receiver.max_lo_power) {
        throw std::domain_error("evaluate_link: LO power above the receiver saturation limit");
    }
    const double r = config.resolved_squeezing();
    const double eta = config.eta_opt * detection_efficiency(config.receiver, config.lo_power);
    if (r > 0.0 && eta < 1.0 &&
        squeezing_db_from_r(r) > observable_squeezing_cap_db(eta) + kCapSlackDb) {
        throw std::domain_error(
            "evaluate_link: requested squeezing exceeds the efficiency-limited observable cap");
    }

    CapacityReport rep;
    rep.n_photons = mean_photons(config.signal_power, config.bandwidth, config.wavelength);
    rep.squeezing_r = r;
    rep.efficiency_eta = eta;
    rep.snc_db = snc_db(config.receiver, config.lo_power);
    rep.p_knee_w = knee;
    rep.c_s1 = c_shannon_1q(rep.n_photons);
    rep.c_s2 = c_shannon_2q(rep.n_photons);
    rep.c_sq = c_squeezed(rep.n_photons, r, eta);
    rep.c_hol = c_holevo(rep.n_photons);
    rep.rate_s1 = rep.c_s1 * config.bandwidth;
    rep.rate_s2 = rep.c_s2 * config.bandwidth;
    rep.rate_sq = rep.c_sq * config.bandwidth;
    rep.rate_hol = rep.c_hol * config.bandwidth;
    const double pump = pump_from_squeezing(r, config.mu);
    rep.e_b_coherent = energy_per_bit_coherent(config.signal_power, config.lo_power,
                                               config.bandwidth, config.wavelength);
    rep.e_b_squeezed = energy_per_bit_squeezed(config.signal_power, config.lo_power, r,
                                               config.mu, eta, config.bandwidth,
                                               config.wavelength);
    rep.p_total = config.signal_power + config.lo_power + pump;
    return rep;
}

namespace {

void append_link_metadata(const LinkConfig& config, SweepResult& out) {
    out.metadata.push_back("signal_power (W) = " + format_si(config.signal_power));
    out.metadata.push_back("lo_power (W) = " + format_si(config.lo_power));
    out.metadata.push_back("mu (W^-1/2) = " + format_si(config.mu));
    out.metadata.push_back("eta_opt = " + format_si(config.eta_opt));
    out.metadata.push_back("bandwidth (Hz) = " + format_si(config.bandwidth));
    out.metadata.push_back("wavelength (m) = " + format_si(config.wavelength));
    out.metadata.push_back("receiver_p_knee (W) = " + format_si(p_knee(config.receiver)));
}

void require_monotone(const std::vector<double>& grid, const char* who) {
    if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument(std::string(who) + ": grid must be strictly increasing");
        }
    }
}

} // namespace

SweepResult sweep_signal_power(const LinkConfig& config, const std::vector<double>& grid) {
    config.validate();
    require_monotone(grid, "sweep_signal_power");
    const double eta = config.eta_opt * detection_efficiency(config.receiver, config.lo_power);
    const double cap_db = eta < 1.0 ? observable_squeezing_cap_db(eta)
                                    : std::numeric_limits<double>::infinity();

    struct Variant {
        const char* label;
        double r;
    };
    const Variant variants[] = {{"sq_3db", squeezing_r_from_db(3.0)},
                                {"sq_20db", squeezing_r_from_db(20.0)}};

    SweepResult out;
    out.axis_name = "signal_power";
    out.columns = {"signal_power (W)", "photons_per_mode (1)", "rate_shannon1 (bit/s)"};
    for (const auto& v : variants) {
        out.columns.push_back(std::string("rate_") + v.label + " (bit/s)");
        out.columns.push_back(std::string("truncated_") + v.label + " (0/1)");
    }
    out.columns.push_back("rate_holevo (bit/s)");
    append_link_metadata(config, out);
    out.metadata.push_back("detection_efficiency = " + format_si(eta));

    for (double s_s : grid) {
        const double n = mean_photons(s_s, config.bandwidth, config.wavelength);
        std::vector<double> row = {s_s, n, c_shannon_1q(n) * config.bandwidth};
        for (const auto& v : variants) {
            const bool truncated = squeezing_db_from_r(v.r) > cap_db + kCapSlackDb;
            row.push_back(truncated ? kNan : c_squeezed(n, v.r, eta) * config.bandwidth);
            row.push_back(truncated ? 1.0 : 0.0);
        }
        row.push_back(c_holevo(n) * config.bandwidth);
        out.rows.push_back(std::move(row));
    }
    return out;
}

SweepResult sweep_pump_power(const LinkConfig& config, const std::vector<double>& grid,
                             const std::vector<double>& mus, bool clamp_to_cap) {
    config.validate();
    require_monotone(grid, "sweep_pump_power");
    if (mus.empty()) throw std::invalid_argument("sweep_pump_power: no mu variants");
    const double eta = config.eta_opt * detection_efficiency(config.receiver, config.lo_power);
    const double cap_db = eta < 1.0 ? observable_squeezing_cap_db(eta)
                                    : std::numeric_limits<double>::infinity();
    const double r_cap = squeezing_r_from_db(cap_db);
    const double n = mean_photons(config.signal_power, config.bandwidth, config.wavelength);

    SweepResult out;
    out.axis_name = "pump_power";
    out.columns = {"pump_power (W)"};
    for (double mu : mus) {
        const std::string tag = "_mu" + format_si(mu);
        out.columns.push_back("rate" + tag + " (bit/s)");
        out.columns.push_back("e_b" + tag + " (J/bit)");
        out.columns.push_back("truncated" + tag + " (0/1)");
    }
    out.columns.push_back("rate_coherent (bit/s)");
    out.columns.push_back("e_b_coherent (J/bit)");
    out.columns.push_back("rate_holevo (bit/s)");
    append_link_metadata(config, out);
    out.metadata.push_back("detection_efficiency = " + format_si(eta));
    out.metadata.push_back("squeezing_cap (dB) = " + format_si(cap_db));
    for (double mu : mus) {
        out.metadata.push_back("cutoff_pump_mu" + format_si(mu) + " (W) = " +
                               format_si(pump_from_squeezing(r_cap, mu)));
    }

    const double rate_coh = c_shannon_1q(n) * config.bandwidth;
    const double e_b_coh = energy_per_bit_coherent(config.signal_power, config.lo_power,
                                                   config.bandwidth, config.wavelength);
    const double rate_hol = c_holevo(n) * config.bandwidth;

    for (double pump : grid) {
        std::vector<double> row = {pump};
        for (double mu : mus) {
            double r = squeezing_from_pump(pump, mu);
            const bool over_cap = squeezing_db_from_r(r) > cap_db + kCapSlackDb;
            if (over_cap && !clamp_to_cap) {
                row.push_back(kNan);
                row.push_back(kNan);
                row.push_back(1.0);
                continue;
            }
            if (over_cap) r = r_cap;
            row.push_back(c_squeezed(n, r, eta) * config.bandwidth);
            row.push_back(energy_per_bit_squeezed(config.signal_power, config.lo_power, r, mu,
                                                  eta, config.bandwidth, config.wavelength));
            row.push_back(0.0);
        }
        row.push_back(rate_coh);
        row.push_back(e_b_coh);
        row.push_back(rate_hol);
        out.rows.push_back(std::move(row));
    }
    return out;
}

namespace {

double lo_objective(const LinkConfig& config, double knee, double r, double n, double s_lo) {
    const double eta = config.eta_opt * (1.0 - knee / s_lo);
    const double c = c_squeezed(n, r, eta);
    const double pump = pump_from_squeezing(r, config.mu);
    return (config.signal_power + s_lo + pump) / (config.bandwidth * c);
}

} // namespace

LoOptimum optimize_lo_power(const LinkConfig& config, double lo_min, double lo_max,
                            double tolerance_w) {
    config.validate();
    if (!(tolerance_w > 0.0)) {
        throw std::invalid_argument("optimize_lo_power: tolerance must be positive");
    }
    const double knee = p_knee(config.receiver);
    if (!(lo_min > knee) || !(lo_max > lo_min) || lo_max > config.receiver.max_lo_power) {
        throw std::domain_error("optimize_lo_power: bounds must satisfy P_knee < lo_min < lo_max <= P_max");
    }
    const double r = config.resolved_squeezing();
    const double n = mean_photons(config.signal_power, config.bandwidth, config.wavelength);
    auto f = [&](double s_lo) { return lo_objective(config, knee, r, n, s_lo); };

    // Coarse log-spaced scan brackets the global minimum and doubles as a
    // multimodality check against the refined result.
    const int kScan = 128;
    const auto scan = log_grid(lo_min, lo_max, kScan);
    int best = 0;
    double best_val = f(scan[0]);
    for (int i = 1; i < kScan; ++i) {
        const double v = f(scan[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = scan[std::max(0, best - 1)];
    double b = scan[std::min(kScan - 1, best + 1)];

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tolerance_w) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    LoOptimum out;
    out.s_lo = 0.5 * (a + b);
    out.e_b = f(out.s_lo);
    out.grid_consistent = out.e_b <= best_val * (1.0 + 1e-12);
    return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 1) {
        throw std::invalid_argument("log_grid: require 0 < lo < hi and points >= 1");
    }
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    const double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) out[i] = lo * std::exp(step * i);
    out.back() = hi;
    return out;
}

std::vector<double> lin_grid(double lo, double hi, int points) {
    if (!(hi > lo) || points < 1) {
        throw std::invalid_argument("lin_grid: require lo < hi and points >= 1");
    }
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) out[i] = lo + step * i;
    out.back() = hi;
    return out;
}

std::vector<double> default_signal_grid() { return log_grid(1e-8, 1e-2, 61); }
std::vector<double> default_pump_grid() { return log_grid(1e-6, 1e-2, 81); }

} // namespace qlink
