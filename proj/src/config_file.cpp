#include "qlink/config_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qlink {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    ConfigFile cfg = parse(buf.str(), path.string());
    cfg.dir_ = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return cfg;
}

ConfigFile ConfigFile::parse(std::string text, std::string source_name) {
    ConfigFile cfg;
    cfg.source_ = std::move(source_name);
    cfg.dir_ = ".";
    std::istringstream in(std::move(text));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            cfg.fail("expected 'key = value', got '" + stripped + "'", line_no);
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) cfg.fail("empty key", line_no);
        if (value.empty()) cfg.fail("empty value for key '" + key + "'", line_no);
        cfg.entries_[key].push_back({value, line_no});
    }
    return cfg;
}

void ConfigFile::fail(const std::string& what, int line) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + what);
}

bool ConfigFile::has(const std::string& key) const { return entries_.count(key) > 0; }

const ConfigFile::Entry& ConfigFile::single(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(source_ + ": missing required key '" + key + "'");
    }
    if (it->second.size() > 1) {
        fail("key '" + key + "' given more than once", it->second[1].line);
    }
    return it->second.front();
}

double ConfigFile::parse_double(const Entry& e, const std::string& key) const {
    const std::string& v = e.value;
    if (v == "inf" || v == "+inf" || v == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    std::size_t consumed = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &consumed);
    } catch (const std::exception&) {
        fail("value for '" + key + "' is not a number: '" + v + "'", e.line);
    }
    if (consumed != v.size()) {
        fail("trailing characters in value for '" + key + "': '" + v + "'", e.line);
    }
    return out;
}

double ConfigFile::require_double(const std::string& key) const {
    const Entry& e = single(key);
    return parse_double(e, key);
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? require_double(key) : fallback;
}

std::uint64_t ConfigFile::get_uint(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = single(key);
    try {
        return std::stoull(e.value);
    } catch (const std::exception&) {
        fail("value for '" + key + "' is not an unsigned integer: '" + e.value + "'", e.line);
    }
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = single(key);
    try {
        return std::stoi(e.value);
    } catch (const std::exception&) {
        fail("value for '" + key + "' is not an integer: '" + e.value + "'", e.line);
    }
}

std::string ConfigFile::require_string(const std::string& key) const { return single(key).value; }

std::vector<std::pair<double, double>> ConfigFile::pair_list(const std::string& key) const {
    std::vector<std::pair<double, double>> out;
    const auto it = entries_.find(key);
    if (it == entries_.end()) return out;
    for (const Entry& e : it->second) {
        std::istringstream pair_in(e.value);
        double a = 0.0, b = 0.0;
        std::string extra;
        if (!(pair_in >> a >> b) || (pair_in >> extra)) {
            fail("expected two numbers for '" + key + "', got '" + e.value + "'", e.line);
        }
        out.emplace_back(a, b);
    }
    return out;
}

void ConfigFile::restrict_keys(const std::vector<std::string>& known) const {
    for (const auto& [key, occurrences] : entries_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            fail("unknown key '" + key + "'", occurrences.front().line);
        }
    }
}

ReceiverSpec load_receiver_spec(const std::filesystem::path& path) {
    const ConfigFile cfg = ConfigFile::load(path);
    cfg.restrict_keys({"electronic_noise_in2", "optical_efficiency_eta_opt", "responsivity_L",
                       "max_lo_power", "dc_gain_f3db", "cmrr_linear", "wavelength",
                       "noise_bandwidth", "rolloff_order", "noise_table"});
    ReceiverSpec spec;
    spec.electronic_noise_in2 = cfg.require_double("electronic_noise_in2");
    spec.optical_efficiency_eta_opt = cfg.get_double("optical_efficiency_eta_opt", 1.0);
    spec.responsivity_L = cfg.get_double("responsivity_L", 1.0);
    spec.max_lo_power = cfg.require_double("max_lo_power");
    spec.dc_gain_f3db = cfg.require_double("dc_gain_f3db");
    spec.cmrr_linear = cfg.require_double("cmrr_linear");
    spec.wavelength = cfg.require_double("wavelength");
    spec.noise_bandwidth = cfg.get_double("noise_bandwidth", 1.0);
    spec.rolloff_order = cfg.get_int("rolloff_order", 1);
    for (const auto& [f, mult] : cfg.pair_list("noise_table")) {
        spec.noise_table.push_back({f, mult});
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
    return spec;
}

LinkConfig load_link_config(const std::filesystem::path& path) {
    const ConfigFile cfg = ConfigFile::load(path);
    cfg.restrict_keys({"signal_power", "lo_power", "pump_power", "squeezing_r", "mu", "eta_opt",
                       "receiver", "bandwidth", "wavelength"});
    LinkConfig link;
    link.signal_power = cfg.require_double("signal_power");
    link.lo_power = cfg.require_double("lo_power");
    if (cfg.has("pump_power")) link.pump_power = cfg.require_double("pump_power");
    if (cfg.has("squeezing_r")) link.squeezing_r = cfg.require_double("squeezing_r");
    link.mu = cfg.get_double("mu", 1.0);
    link.eta_opt = cfg.get_double("eta_opt", 1.0);
    link.bandwidth = cfg.require_double("bandwidth");
    link.wavelength = cfg.require_double("wavelength");
    const std::filesystem::path receiver_path = cfg.require_string("receiver");
    link.receiver = load_receiver_spec(
        receiver_path.is_absolute() ? receiver_path : cfg.directory() / receiver_path);
    try {
        link.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
    return link;
}

TraceConfig load_trace_config(const std::filesystem::path& path) {
    const ConfigFile cfg = ConfigFile::load(path);
    cfg.restrict_keys({"squeezing_r", "efficiency_eta", "snc_db", "ramp_frequency", "sample_rate",
                       "duration", "resolution_bandwidth", "video_bandwidth", "rng_seed"});
    TraceConfig trace;
    trace.squeezing_r = cfg.require_double("squeezing_r");
    trace.efficiency_eta = cfg.require_double("efficiency_eta");
    trace.snc_db = cfg.get_double("snc_db", std::numeric_limits<double>::infinity());
    trace.ramp_frequency = cfg.get_double("ramp_frequency", 1.0);
    trace.sample_rate = cfg.get_double("sample_rate", 1e5);
    trace.duration = cfg.get_double("duration", 10.0);
    trace.resolution_bandwidth = cfg.get_double("resolution_bandwidth", 8e6);
    trace.video_bandwidth = cfg.get_double("video_bandwidth", 1e5);
    trace.rng_seed = cfg.get_uint("rng_seed", 1);
    try {
        trace.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
    return trace;
}

} // namespace qlink
