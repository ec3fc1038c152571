#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlink/link_budget.hpp"
#include "qlink/trace_sim.hpp"

namespace qlink {

/// Parse or validation failure in a flat key = value config file. The
/// message carries file name and line number.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value text format: one assignment per line, '#' comments,
/// blank lines ignored. Scalar keys may appear once; designated list keys
/// (e.g. noise_table) may repeat.
class ConfigFile {
public:
    static ConfigFile load(const std::filesystem::path& path);
    static ConfigFile parse(std::string text, std::string source_name);

    bool has(const std::string& key) const;
    double require_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string require_string(const std::string& key) const;

    /// All values of a repeated key, each parsed as two whitespace-separated
    /// doubles.
    std::vector<std::pair<double, double>> pair_list(const std::string& key) const;

    /// Reject keys outside the given schema, with line diagnostics.
    void restrict_keys(const std::vector<std::string>& known) const;

    const std::filesystem::path& directory() const { return dir_; }
    const std::string& source() const { return source_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    [[noreturn]] void fail(const std::string& what, int line) const;
    const Entry& single(const std::string& key) const;
    double parse_double(const Entry& e, const std::string& key) const;

    std::string source_;
    std::filesystem::path dir_;
    std::map<std::string, std::vector<Entry>> entries_;
};

ReceiverSpec load_receiver_spec(const std::filesystem::path& path);
LinkConfig load_link_config(const std::filesystem::path& path);
TraceConfig load_trace_config(const std::filesystem::path& path);

} // namespace qlink
