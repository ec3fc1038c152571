#include "qlink/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>

#include "qlink/config_file.hpp"
#include "qlink/csv_io.hpp"
#include "qlink/version.hpp"

namespace qlink::cli {

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const std::filesystem::path& config, std::uint64_t seed) {
    std::ofstream m(out_dir / "manifest.txt");
    m << "command = " << command << "\n";
    m << "config = " << config.string() << "\n";
    m << "out_dir = " << out_dir.string() << "\n";
    m << "seed = " << seed << "\n";
    m << "version = " << kVersion << "\n";
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&now));
    m << "timestamp = " << stamp << "\n";
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitComputeError;
    }
}

} // namespace

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec spec;
    char scale[8] = {};
    const int got = std::sscanf(text.c_str(), "%lf:%lf:%d:%7s", &spec.min, &spec.max,
                                &spec.points, scale);
    if (got < 3) throw ConfigError("grid must be MIN:MAX:POINTS[:log|lin], got '" + text + "'");
    const std::string s = got == 4 ? scale : "log";
    if (s == "log") {
        spec.log_scale = true;
    } else if (s == "lin") {
        spec.log_scale = false;
    } else {
        throw ConfigError("grid scale must be 'log' or 'lin', got '" + s + "'");
    }
    if (spec.points < 1) throw ConfigError("grid must have at least one point");
    return spec;
}

std::vector<double> GridSpec::build() const {
    return log_scale ? log_grid(min, max, points) : lin_grid(min, max, points);
}

int run_characterize(const CommonOptions& opts, const std::optional<GridSpec>& lo_grid,
                     std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const ReceiverSpec spec = load_receiver_spec(opts.config);
        std::filesystem::create_directories(opts.out_dir);
        write_manifest(opts.out_dir, "characterize", opts.config, opts.seed.value_or(0));

        const double knee = p_knee(spec);
        std::vector<double> grid;
        if (lo_grid) {
            grid = lo_grid->build();
        } else {
            const double lo = knee > 0.0 ? knee / 100.0 : spec.max_lo_power * 1e-6;
            grid = log_grid(lo, spec.max_lo_power, 61);
        }
        if (grid.back() > spec.max_lo_power) {
            throw ConfigError("LO grid exceeds the receiver saturation power");
        }

        const CouplerParams coupler = CouplerParams::from_cmrr(spec.cmrr_linear);
        {
            CsvWriter csv(opts.out_dir / "noise_vs_lo.csv");
            csv.comment("receiver = " + opts.config.string());
            csv.comment("p_knee (W) = " + CsvWriter::format(knee));
            csv.header({"lo_power (W)", "noise_total (RF)", "noise_minus_electronic (RF)",
                        "snc (dB)"});
            for (double lo : grid) {
                const auto res = balanced_output(
                    FieldTone{}, FieldTone::shot_limited(lo, spec.wavelength), coupler, spec);
                const double shot_part = res.noise_power - spec.electronic_noise_in2;
                const double snc = spec.electronic_noise_in2 > 0.0
                                       ? db_from_linear(res.noise_power / spec.electronic_noise_in2)
                                       : std::numeric_limits<double>::quiet_NaN();
                const double row[4] = {lo, res.noise_power, shot_part, snc};
                csv.row(row);
            }
        }

        const double f_shot = shot_noise_limited_bandwidth(spec);
        {
            const double f_hi = std::isfinite(f_shot) ? 1.25 * f_shot : 3.0 * spec.dc_gain_f3db;
            const auto freqs = lin_grid(0.0, f_hi, 251);
            CsvWriter csv(opts.out_dir / "frequency_response.csv");
            csv.comment("receiver = " + opts.config.string());
            csv.header({"frequency (Hz)", "gain (1)", "nep (W)"});
            CsvWriter snc_csv(opts.out_dir / "snc_spectrum.csv");
            snc_csv.comment("receiver = " + opts.config.string());
            snc_csv.comment("lo_power (W) = " + CsvWriter::format(spec.max_lo_power));
            snc_csv.header({"frequency (Hz)", "snc (dB)"});
            for (double f : freqs) {
                const FrequencyResponse r = frequency_response(spec, f);
                const double row[3] = {f, r.gain, r.nep_w};
                csv.row(row);
                const double snc_row[2] = {f, r.snc_db};
                snc_csv.row(snc_row);
            }
        }

        if (knee > 0.0) {
            out << "P_knee = " << fmt("%.4g", knee * 1e6) << " uW\n";
        } else {
            out << "P_knee = 0 (below grid; electronic noise is zero)\n";
        }
        const double snc_max = snc_db(spec, spec.max_lo_power);
        out << "SNC at P_max = "
            << (std::isinf(snc_max) ? std::string("inf") : fmt("%.1f", snc_max)) << " dB\n";
        out << "f_3dB = " << fmt("%.2f", spec.dc_gain_f3db / 1e9) << " GHz\n";
        out << "f_shot = "
            << (std::isfinite(f_shot) ? fmt("%.2f", f_shot / 1e9) : std::string("inf"))
            << " GHz\n";
        return kExitOk;
    });
}

int run_capacity(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const LinkConfig link = load_link_config(opts.config);
        std::filesystem::create_directories(opts.out_dir);
        write_manifest(opts.out_dir, "capacity", opts.config, opts.seed.value_or(0));

        const CapacityReport rep = evaluate_link(link);
        const std::vector<std::pair<std::string, double>> fields = {
            {"photons_per_mode (1)", rep.n_photons},
            {"squeezing_r (1)", rep.squeezing_r},
            {"squeezing (dB)", squeezing_db_from_r(rep.squeezing_r)},
            {"detection_efficiency (1)", rep.efficiency_eta},
            {"snc (dB)", rep.snc_db},
            {"p_knee (W)", rep.p_knee_w},
            {"c_s1 (bit/mode)", rep.c_s1},
            {"c_s2 (bit/mode)", rep.c_s2},
            {"c_sq (bit/mode)", rep.c_sq},
            {"c_hol (bit/mode)", rep.c_hol},
            {"rate_s1 (bit/s)", rep.rate_s1},
            {"rate_s2 (bit/s)", rep.rate_s2},
            {"rate_sq (bit/s)", rep.rate_sq},
            {"rate_hol (bit/s)", rep.rate_hol},
            {"e_b_coherent (J/bit)", rep.e_b_coherent},
            {"e_b_squeezed (J/bit)", rep.e_b_squeezed},
            {"p_total (W)", rep.p_total},
        };

        CsvWriter csv(opts.out_dir / "capacity.csv");
        csv.comment("link = " + opts.config.string());
        std::vector<std::string> cols;
        std::vector<double> row;
        for (const auto& [name, value] : fields) {
            cols.push_back(name);
            row.push_back(value);
        }
        csv.header(cols);
        csv.row(row);

        for (const auto& [name, value] : fields) {
            out << name << " = " << CsvWriter::format(value) << "\n";
        }
        return kExitOk;
    });
}

namespace {

// Resolved-config snapshot so a sweep can be reproduced from its output
// directory alone.
void write_link_snapshot(const std::filesystem::path& path, const LinkConfig& link) {
    std::ofstream snap(path);
    snap << "signal_power = " << CsvWriter::format(link.signal_power) << "\n";
    snap << "lo_power = " << CsvWriter::format(link.lo_power) << "\n";
    if (link.pump_power) snap << "pump_power = " << CsvWriter::format(*link.pump_power) << "\n";
    if (link.squeezing_r) snap << "squeezing_r = " << CsvWriter::format(*link.squeezing_r) << "\n";
    snap << "mu = " << CsvWriter::format(link.mu) << "\n";
    snap << "eta_opt = " << CsvWriter::format(link.eta_opt) << "\n";
    snap << "bandwidth = " << CsvWriter::format(link.bandwidth) << "\n";
    snap << "wavelength = " << CsvWriter::format(link.wavelength) << "\n";
    const ReceiverSpec& rx = link.receiver;
    snap << "receiver.electronic_noise_in2 = " << CsvWriter::format(rx.electronic_noise_in2)
         << "\n";
    snap << "receiver.optical_efficiency_eta_opt = "
         << CsvWriter::format(rx.optical_efficiency_eta_opt) << "\n";
    snap << "receiver.responsivity_L = " << CsvWriter::format(rx.responsivity_L) << "\n";
    snap << "receiver.max_lo_power = " << CsvWriter::format(rx.max_lo_power) << "\n";
    snap << "receiver.dc_gain_f3db = " << CsvWriter::format(rx.dc_gain_f3db) << "\n";
    snap << "receiver.cmrr_linear = " << CsvWriter::format(rx.cmrr_linear) << "\n";
    snap << "receiver.wavelength = " << CsvWriter::format(rx.wavelength) << "\n";
    snap << "receiver.noise_bandwidth = " << CsvWriter::format(rx.noise_bandwidth) << "\n";
    snap << "receiver.rolloff_order = " << rx.rolloff_order << "\n";
    for (const auto& p : rx.noise_table) {
        snap << "receiver.noise_table = " << CsvWriter::format(p.frequency_hz) << " "
             << CsvWriter::format(p.multiplier) << "\n";
    }
}

} // namespace

int run_sweep(const CommonOptions& opts, const std::string& axis,
              const std::optional<GridSpec>& grid, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const LinkConfig link = load_link_config(opts.config);

        SweepResult sweep;
        std::string file_name;
        if (axis == "signal_power") {
            sweep = sweep_signal_power(link, grid ? grid->build() : default_signal_grid());
            file_name = "sweep_signal_power.csv";
        } else if (axis == "pump_power") {
            sweep = sweep_pump_power(link, grid ? grid->build() : default_pump_grid());
            file_name = "sweep_pump_power.csv";
        } else {
            throw ConfigError("unknown sweep axis '" + axis +
                              "' (expected signal_power or pump_power)");
        }

        std::filesystem::create_directories(opts.out_dir);
        write_manifest(opts.out_dir, "sweep " + axis, opts.config, opts.seed.value_or(0));
        write_sweep_csv(opts.out_dir / file_name, sweep);
        write_link_snapshot(opts.out_dir / "link_config.txt", link);
        out << "wrote " << (opts.out_dir / file_name).string() << " (" << sweep.rows.size()
            << " rows)\n";
        return kExitOk;
    });
}

int run_trace(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        TraceConfig config = load_trace_config(opts.config);
        if (opts.seed) config.rng_seed = *opts.seed;
        std::filesystem::create_directories(opts.out_dir);
        write_manifest(opts.out_dir, "trace", opts.config, config.rng_seed);

        const NoiseTrace trace = simulate_trace(config);
        write_trace_csv(opts.out_dir / "trace.csv", trace);
        out << "wrote " << (opts.out_dir / "trace.csv").string() << " (" << trace.samples.size()
            << " samples)\n";
        out << "mean level range: " << fmt("%.4f", db_from_linear(config.mean_level(0.0)))
            << " dB to " << fmt("%.4f", db_from_linear(config.mean_level(std::numbers::pi / 2)))
            << " dB\n";
        return kExitOk;
    });
}

int run_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() {
        const NoiseTrace trace = read_trace_csv(opts.trace_csv);
        EstimatorOptions est;
        est.n_samples = opts.n_samples;
        est.kde_bandwidth_db = opts.kde_bandwidth_db;
        if (opts.seed) est.seed = *opts.seed;

        const NoiseLevels levels = estimate_noise_levels(trace, est);
        out << "squeezed level = " << fmt("%.4f", levels.squeezed_db) << " +/- "
            << fmt("%.4f", levels.uncertainty_db) << " dB\n";
        out << "antisqueezed level = " << fmt("%.4f", levels.antisqueezed_db) << " +/- "
            << fmt("%.4f", levels.uncertainty_db) << " dB\n";
        if (!levels.resolved) {
            out << "no squeezing resolved (level span below 0.05 dB)\n";
            return kExitOk;
        }
        if (!(levels.squeezed_db < 0.0 && levels.antisqueezed_db > 0.0)) {
            out << "no squeezing resolved (levels do not straddle the shot noise level)\n";
            return kExitOk;
        }
        const SqueezingEstimate sq = invert_squeezing(levels);
        out << "r = " << fmt("%.4f", sq.r) << " +/- " << fmt("%.2g", sq.r_uncertainty) << "\n";
        out << "eta = " << fmt("%.4f", sq.eta) << " +/- " << fmt("%.2g", sq.eta_uncertainty)
            << "\n";
        out << "system loss = " << fmt("%.2f", sq.loss_db) << " dB\n";
        return kExitOk;
    });
}

} // namespace qlink::cli
