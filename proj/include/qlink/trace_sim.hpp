#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qlink/constants.hpp"

namespace qlink {

/// Homodyne noise-power trace simulation under a linear LO phase ramp.
/// Samples are normalized to the measured vacuum (shot-noise) level, which
/// includes the same electronic floor as the signal measurement, so an
/// r = 0 trace sits at 1.0 for any shot noise clearance.
struct TraceConfig {
    double squeezing_r = 0.0;
    double efficiency_eta = 1.0;
    double snc_db = std::numeric_limits<double>::infinity();  // electronic floor, dB
    double ramp_frequency = 1.0;        // Hz
    double sample_rate = 1e5;           // Hz
    double duration = 10.0;             // s
    double resolution_bandwidth = 8e6;  // Hz
    double video_bandwidth = 1e5;       // Hz
    std::uint64_t rng_seed = 1;

    void validate() const;

    /// Chi-squared degrees of freedom of one noise-power sample,
    /// max(2, round(2 RBW / VBW)), modeling video averaging.
    int chi2_dof() const;

    std::size_t sample_count() const;

    /// Mean normalized noise power at LO phase theta:
    /// (eta e^-2r cos^2 + eta e^2r sin^2 + 1 - eta + 1/SNC) / (1 + 1/SNC).
    double mean_level(double theta) const;
};

struct NoiseTrace {
    std::vector<double> samples;     // linear noise power, SNL = 1
    std::vector<double> timestamps;  // s
    TraceConfig config;
};

struct NoiseLevels {
    double squeezed_db = 0.0;      // dB relative to SNL, <= 0 for real squeezing
    double antisqueezed_db = 0.0;  // dB relative to SNL
    double uncertainty_db = 0.0;   // bootstrap spread
    bool resolved = true;          // false when the level span is < 0.05 dB
};

struct EstimatorOptions {
    std::size_t n_samples = 100000;    // subsample size
    double kde_bandwidth_db = 0.0;     // 0 = Silverman's rule
    int bootstrap_rounds = 24;
    std::uint64_t seed = 0xE571A705u;  // subsampling seed, independent of the trace seed
    bool use_density_peaks = false;    // default: outermost derivative extrema
};

struct degenerate_trace_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_squeezing_resolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic for a fixed seed and config.
NoiseTrace simulate_trace(const TraceConfig& config);

/// Subsample, histogram, Gaussian-kernel KDE on the dB axis, then read the
/// squeezed/antisqueezed levels off the outermost significant extrema of
/// the KDE derivative (or the outermost density peaks when requested).
NoiseLevels estimate_noise_levels(const NoiseTrace& trace, const EstimatorOptions& options);

inline NoiseLevels estimate_noise_levels(const NoiseTrace& trace, std::size_t n_samples) {
    EstimatorOptions options;
    options.n_samples = n_samples;
    return estimate_noise_levels(trace, options);
}

struct SqueezingEstimate {
    double r = 0.0;
    double eta = 0.0;
    double loss_db = 0.0;  // -10 log10(eta)
    double r_uncertainty = 0.0;
    double eta_uncertainty = 0.0;
};

/// Invert a = eta e^-2r + 1 - eta, b = eta e^2r + 1 - eta:
/// coth r = (b - a)/(a + b - 2), eta = (b - a)/(2 sinh 2r).
/// Requires squeezed_db < 0 < antisqueezed_db and a + b > 2.
SqueezingEstimate invert_squeezing(const NoiseLevels& levels);

} // namespace qlink
