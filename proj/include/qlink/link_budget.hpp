#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlink/capacity.hpp"
#include "qlink/receiver.hpp"

namespace qlink {

/// End-to-end link description. Exactly one of pump_power / squeezing_r
/// must be set; eta_opt is the path efficiency multiplied on top of the
/// receiver's detection-efficiency chain.
struct LinkConfig {
    double signal_power = 0.0;  // W
    double lo_power = 0.0;      // W
    std::optional<double> pump_power;   // W
    std::optional<double> squeezing_r;  // dimensionless
    double mu = 1.0;            // W^-1/2 parametric gain coefficient
    double eta_opt = 1.0;
    ReceiverSpec receiver;
    double bandwidth = 0.0;     // Hz
    double wavelength = 1550e-9;

    void validate() const;
    double resolved_squeezing() const;  // r from pump_power or squeezing_r
};

/// r = mu * sqrt(P_pump) in the low-conversion limit.
double squeezing_from_pump(double pump, double mu);

/// P_pump = (r / mu)^2.
double pump_from_squeezing(double r, double mu);

/// Squeezing observable through efficiency eta saturates at
/// -10 log10(1 - eta) dB as r -> infinity. eta = 1 is rejected.
double observable_squeezing_cap_db(double eta);

/// Full link evaluation: detection efficiency from the receiver chain,
/// squeezing from the pump, capacities, rates and energy-per-bit figures.
CapacityReport evaluate_link(const LinkConfig& config);

/// Tabular sweep output: column names carry units; truncated cells are NaN
/// and each squeezed variant gets a 0/1 truncation marker column.
struct SweepResult {
    std::string axis_name;
    std::vector<std::string> columns;           // header cells, "name (unit)"
    std::vector<std::vector<double>> rows;      // rows[i].size() == columns.size()
    std::vector<std::string> metadata;          // config snapshot lines
};

/// Data rate vs signal power for the coherent baseline, squeezed variants
/// at fixed nominal squeezing (3 dB and 20 dB) and the Holevo bound drawn
/// at the signal photon number.
SweepResult sweep_signal_power(const LinkConfig& config, const std::vector<double>& grid);

/// Rate and energy-per-bit vs pump power for each parametric gain
/// coefficient in mus. Rows whose implied squeezing exceeds the
/// eta-limited observable cap are truncated (NaN + marker), not clamped;
/// set clamp_to_cap for exploratory clamping instead.
SweepResult sweep_pump_power(const LinkConfig& config, const std::vector<double>& grid,
                             const std::vector<double>& mus = {10.0, 72.0, 224.0},
                             bool clamp_to_cap = false);

struct LoOptimum {
    double s_lo = 0.0;   // W
    double e_b = 0.0;    // J/bit
    bool grid_consistent = true;  // golden-section agrees with a dense-grid scan
};

/// Minimize the squeezed energy-per-bit over LO power on [lo_min, lo_max]
/// by golden-section search (default absolute tolerance 1e-9 W) seeded
/// from a coarse grid scan, which also flags multimodality.
LoOptimum optimize_lo_power(const LinkConfig& config, double lo_min, double lo_max,
                            double tolerance_w = 1e-9);

std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> lin_grid(double lo, double hi, int points);

/// Default sweep grids. Signal power spans 10 nW - 10 mW: below a few nW
/// the 20 dB squeezed capacity crosses the signal-photon Holevo reference
/// (pump photons are not counted in N) and the sweep would no longer sit
/// between the Shannon and Holevo curves.
std::vector<double> default_signal_grid();
std::vector<double> default_pump_grid();

} // namespace qlink
