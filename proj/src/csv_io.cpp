#include "qlink/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "qlink/config_file.hpp"

namespace qlink {

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
}

std::string CsvWriter::format(double v) {
    if (std::isnan(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ",";
        out_ << columns[i];
    }
    out_ << "\n";
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ",";
        out_ << format(values[i]);
    }
    out_ << "\n";
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
    CsvWriter csv(path);
    csv.comment("axis = " + sweep.axis_name);
    for (const auto& line : sweep.metadata) csv.comment(line);
    csv.header(sweep.columns);
    for (const auto& row : sweep.rows) csv.row(row);
}

void write_trace_csv(const std::filesystem::path& path, const NoiseTrace& trace) {
    CsvWriter csv(path);
    const TraceConfig& c = trace.config;
    csv.comment("qlink noise trace");
    csv.comment("squeezing_r = " + CsvWriter::format(c.squeezing_r));
    csv.comment("efficiency_eta = " + CsvWriter::format(c.efficiency_eta));
    csv.comment("snc_db = " + (std::isinf(c.snc_db) ? std::string("inf")
                                                    : CsvWriter::format(c.snc_db)));
    csv.comment("ramp_frequency = " + CsvWriter::format(c.ramp_frequency));
    csv.comment("sample_rate = " + CsvWriter::format(c.sample_rate));
    csv.comment("duration = " + CsvWriter::format(c.duration));
    csv.comment("resolution_bandwidth = " + CsvWriter::format(c.resolution_bandwidth));
    csv.comment("video_bandwidth = " + CsvWriter::format(c.video_bandwidth));
    csv.comment("rng_seed = " + std::to_string(c.rng_seed));
    csv.header({"time (s)", "noise_power (rel. SNL)"});
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const double row[2] = {trace.timestamps[i], trace.samples[i]};
        csv.row(row);
    }
}

NoiseTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path.string());

    NoiseTrace trace;
    std::string config_text;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            // Comment lines of the form '# key = value' carry the config.
            if (line.find('=') != std::string::npos) {
                config_text += line.substr(1);
                config_text += "\n";
            }
            continue;
        }
        if (!header_seen && line.find("time") != std::string::npos) {
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 'time,noise_power'");
        }
        try {
            std::size_t used = 0;
            const std::string ts = line.substr(0, comma);
            const std::string vs = line.substr(comma + 1);
            const double t = std::stod(ts, &used);
            if (used != ts.size()) throw std::invalid_argument(ts);
            const double v = std::stod(vs, &used);
            if (used != vs.size()) throw std::invalid_argument(vs);
            if (!(v > 0.0)) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": noise power must be positive");
            }
            trace.timestamps.push_back(t);
            trace.samples.push_back(v);
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed number in '" + line + "'");
        }
    }
    if (trace.samples.empty()) {
        throw std::runtime_error(path.string() + ": no samples found");
    }

    // Recover the embedded config where present; fall back to defaults so
    // externally measured files load too.
    const ConfigFile cfg = ConfigFile::parse(config_text, path.string() + " (embedded config)");
    TraceConfig c;
    c.squeezing_r = cfg.get_double("squeezing_r", 0.0);
    c.efficiency_eta = cfg.get_double("efficiency_eta", 1.0);
    c.snc_db = cfg.get_double("snc_db", std::numeric_limits<double>::infinity());
    c.ramp_frequency = cfg.get_double("ramp_frequency", 1.0);
    c.sample_rate = cfg.get_double("sample_rate", 1e5);
    c.duration = cfg.get_double("duration", 10.0);
    c.resolution_bandwidth = cfg.get_double("resolution_bandwidth", 8e6);
    c.video_bandwidth = cfg.get_double("video_bandwidth", 1e5);
    c.rng_seed = cfg.get_uint("rng_seed", 0);
    trace.config = c;
    return trace;
}

} // namespace qlink
