#include "qlink/trace_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qlink {

void TraceConfig::validate() const {
    if (!(squeezing_r >= 0.0)) throw std::invalid_argument("TraceConfig: squeezing_r must be >= 0");
    if (!(efficiency_eta >= 0.0 && efficiency_eta <= 1.0)) {
        throw std::invalid_argument("TraceConfig: efficiency_eta must be in [0, 1]");
    }
    if (!(snc_db > 0.0)) throw std::invalid_argument("TraceConfig: snc_db must be positive");
    if (!(ramp_frequency > 0.0)) throw std::invalid_argument("TraceConfig: ramp_frequency must be positive");
    if (!(sample_rate > 2.0 * ramp_frequency)) {
        throw std::invalid_argument("TraceConfig: sample_rate must exceed 2x ramp_frequency");
    }
    if (!(duration * ramp_frequency >= 2.0)) {
        throw std::invalid_argument("TraceConfig: duration must cover at least two ramp periods");
    }
    if (!(resolution_bandwidth > 0.0) || !(video_bandwidth > 0.0) ||
        video_bandwidth > resolution_bandwidth) {
        throw std::invalid_argument("TraceConfig: require 0 < video_bandwidth <= resolution_bandwidth");
    }
}

int TraceConfig::chi2_dof() const {
    const double k = std::round(2.0 * resolution_bandwidth / video_bandwidth);
    return static_cast<int>(std::max(2.0, k));
}

std::size_t TraceConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(sample_rate * duration));
}

double TraceConfig::mean_level(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const double v = efficiency_eta * std::exp(-2.0 * squeezing_r) * c * c +
                     efficiency_eta * std::exp(2.0 * squeezing_r) * s * s +
                     (1.0 - efficiency_eta);
    const double floor = std::isinf(snc_db) ? 0.0 : linear_from_db(-snc_db);
    return (v + floor) / (1.0 + floor);
}

NoiseTrace simulate_trace(const TraceConfig& config) {
    config.validate();
    const std::size_t n = config.sample_count();
    const int k = config.chi2_dof();

    NoiseTrace trace;
    trace.config = config;
    trace.samples.resize(n);
    trace.timestamps.resize(n);

    std::mt19937_64 rng(config.rng_seed);
    std::gamma_distribution<double> chi2_scaled(0.5 * k, 2.0 / k);  // mean 1
    const double omega = 2.0 * std::numbers::pi * config.ramp_frequency;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / config.sample_rate;
        trace.timestamps[i] = t;
        trace.samples[i] = config.mean_level(omega * t) * chi2_scaled(rng);
    }
    return trace;
}

namespace {

// KDE of dB-axis samples on a uniform grid (histogram + Gaussian smoothing),
// followed by the outermost significant extrema of the derivative. Extrema
// with |f'| below 5% of the global maximum are treated as tail noise.
struct KdeLevels {
    double squeezed = 0.0;
    double antisqueezed = 0.0;
    bool ok = false;
};

KdeLevels kde_levels(const std::vector<double>& db, double h, bool density_peaks) {
    const auto [mn_it, mx_it] = std::minmax_element(db.begin(), db.end());
    const double lo = *mn_it - 4.0 * h;
    const double hi = *mx_it + 4.0 * h;
    const double range = hi - lo;
    const std::size_t nb = std::max<std::size_t>(
        4096, static_cast<std::size_t>(std::ceil(range / (h / 6.0))) + 1);
    const double cw = range / static_cast<double>(nb);

    std::vector<double> hist(nb, 0.0);
    for (double x : db) {
        auto bin = static_cast<std::size_t>((x - lo) / cw);
        if (bin >= nb) bin = nb - 1;
        hist[bin] += 1.0;
    }

    const int kw = static_cast<int>(std::ceil(5.0 * h / cw));
    std::vector<double> kernel(2 * kw + 1);
    double ksum = 0.0;
    for (int i = -kw; i <= kw; ++i) {
        const double u = i * cw / h;
        kernel[i + kw] = std::exp(-0.5 * u * u);
        ksum += kernel[i + kw];
    }
    for (auto& v : kernel) v /= ksum;

    std::vector<double> f(nb, 0.0);
    for (std::size_t i = 0; i < nb; ++i) {
        if (hist[i] == 0.0) continue;
        const double w = hist[i];
        const int start = static_cast<int>(i) - kw;
        for (int j = std::max(0, start); j <= std::min<int>(nb - 1, static_cast<int>(i) + kw); ++j) {
            f[j] += w * kernel[j - start];
        }
    }

    std::vector<double> df(nb, 0.0);
    for (std::size_t i = 1; i + 1 < nb; ++i) df[i] = (f[i + 1] - f[i - 1]) / (2.0 * cw);

    const auto center = [&](std::size_t i) { return lo + (i + 0.5) * cw; };
    const auto refine = [&](const std::vector<double>& y, std::size_t i) {
        const double d = y[i - 1] - 2.0 * y[i] + y[i + 1];
        double off = d != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / d : 0.0;
        off = std::clamp(off, -1.0, 1.0);
        return center(i) + off * cw;
    };

    KdeLevels out;
    if (density_peaks) {
        std::vector<std::size_t> peaks;
        double fmax = *std::max_element(f.begin(), f.end());
        for (std::size_t i = 1; i + 1 < nb; ++i) {
            if (f[i] >= f[i - 1] && f[i] > f[i + 1] && f[i] >= 0.05 * fmax) peaks.push_back(i);
        }
        if (peaks.empty()) return out;
        out.squeezed = refine(f, peaks.front());
        out.antisqueezed = refine(f, peaks.back());
        out.ok = true;
        return out;
    }

    double dmax = 0.0;
    for (std::size_t i = 1; i + 1 < nb; ++i) dmax = std::max(dmax, std::abs(df[i]));
    if (dmax == 0.0) return out;
    std::vector<std::size_t> extrema;
    for (std::size_t i = 2; i + 2 < nb; ++i) {
        if (std::abs(df[i]) < 0.05 * dmax) continue;
        const bool is_max = df[i] >= df[i - 1] && df[i] > df[i + 1];
        const bool is_min = df[i] <= df[i - 1] && df[i] < df[i + 1];
        if (is_max || is_min) extrema.push_back(i);
    }
    if (extrema.size() < 2) return out;
    out.squeezed = refine(df, extrema.front());
    out.antisqueezed = refine(df, extrema.back());
    out.ok = true;
    return out;
}

double silverman_bandwidth(std::vector<double> db) {
    const std::size_t n = db.size();
    const double mean = std::accumulate(db.begin(), db.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : db) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / n);
    const std::size_t q1 = n / 4, q3 = (3 * n) / 4;
    std::nth_element(db.begin(), db.begin() + q1, db.end());
    const double v1 = db[q1];
    std::nth_element(db.begin(), db.begin() + q3, db.end());
    const double iqr = db[q3] - v1;
    const double spread = std::min(sd, iqr / 1.34);
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

} // namespace

NoiseLevels estimate_noise_levels(const NoiseTrace& trace, const EstimatorOptions& options) {
    if (trace.samples.empty()) throw std::invalid_argument("estimate_noise_levels: empty trace");
    if (options.n_samples == 0) throw std::invalid_argument("estimate_noise_levels: n_samples must be > 0");

    std::mt19937_64 rng(options.seed);
    std::vector<double> db;
    if (options.n_samples >= trace.samples.size()) {
        db.reserve(trace.samples.size());
        for (double x : trace.samples) db.push_back(db_from_linear(x));
    } else {
        // Partial Fisher-Yates draw without replacement.
        std::vector<std::uint32_t> idx(trace.samples.size());
        std::iota(idx.begin(), idx.end(), 0u);
        db.reserve(options.n_samples);
        for (std::size_t i = 0; i < options.n_samples; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
            std::swap(idx[i], idx[pick(rng)]);
            db.push_back(db_from_linear(trace.samples[idx[i]]));
        }
    }

    const auto [mn, mx] = std::minmax_element(db.begin(), db.end());
    if (*mx - *mn < 1e-12) {
        throw degenerate_trace_error("estimate_noise_levels: constant trace");
    }

    const double h = options.kde_bandwidth_db > 0.0 ? options.kde_bandwidth_db
                                                    : silverman_bandwidth(db);
    const KdeLevels levels = kde_levels(db, h, options.use_density_peaks);
    if (!levels.ok) {
        throw no_squeezing_resolved("estimate_noise_levels: no squeezing resolved");
    }

    NoiseLevels out;
    out.squeezed_db = levels.squeezed;
    out.antisqueezed_db = levels.antisqueezed;
    out.resolved = (levels.antisqueezed - levels.squeezed) > 0.05;

    if (options.bootstrap_rounds > 0) {
        std::vector<double> sq, anti, resample(db.size());
        std::uniform_int_distribution<std::size_t> pick(0, db.size() - 1);
        for (int b = 0; b < options.bootstrap_rounds; ++b) {
            for (auto& v : resample) v = db[pick(rng)];
            const KdeLevels l = kde_levels(resample, h, options.use_density_peaks);
            if (!l.ok) continue;
            sq.push_back(l.squeezed);
            anti.push_back(l.antisqueezed);
        }
        auto spread = [](const std::vector<double>& v) {
            if (v.size() < 2) return 0.0;
            const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
            double ss = 0.0;
            for (double x : v) ss += (x - m) * (x - m);
            return std::sqrt(ss / (v.size() - 1));
        };
        out.uncertainty_db = std::max(spread(sq), spread(anti));
    }
    return out;
}

SqueezingEstimate invert_squeezing(const NoiseLevels& levels) {
    if (!(levels.squeezed_db < 0.0) || !(levels.antisqueezed_db > 0.0)) {
        throw std::domain_error("invert_squeezing: need squeezed_db < 0 < antisqueezed_db");
    }
    const auto solve = [](double sq_db, double anti_db) {
        const double a = linear_from_db(sq_db);
        const double b = linear_from_db(anti_db);
        if (!(a + b > 2.0)) {
            throw std::domain_error("invert_squeezing: non-physical levels (a + b <= 2)");
        }
        const double r = std::atanh((a + b - 2.0) / (b - a));
        const double eta = (b - a) / (2.0 * std::sinh(2.0 * r));
        return std::pair<double, double>(r, eta);
    };

    const auto [r, eta] = solve(levels.squeezed_db, levels.antisqueezed_db);
    if (!(eta > 0.0) || eta > 1.0 + 1e-9) {
        throw std::domain_error("invert_squeezing: inconsistent levels (eta outside (0, 1])");
    }

    SqueezingEstimate out;
    out.r = r;
    out.eta = std::min(eta, 1.0);
    out.loss_db = -db_from_linear(out.eta);

    const double u = levels.uncertainty_db;
    if (u > 0.0 && levels.squeezed_db + u < 0.0) {
        // Propagate by evaluating the inversion at the level extremes.
        try {
            const auto wide = solve(levels.squeezed_db - u, levels.antisqueezed_db + u);
            const auto narrow = solve(levels.squeezed_db + u, levels.antisqueezed_db - u);
            out.r_uncertainty = 0.5 * std::abs(wide.first - narrow.first);
            out.eta_uncertainty = 0.5 * std::abs(wide.second - narrow.second);
        } catch (const std::domain_error&) {
            out.r_uncertainty = 0.0;
            out.eta_uncertainty = 0.0;
        }
    }
    return out;
}

} // namespace qlink
