#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "qlink/link_budget.hpp"
#include "qlink/trace_sim.hpp"

namespace qlink {

/// Comma-separated output with '#'-prefixed metadata lines and a header row
/// carrying units. Numeric formatting is fixed (%.12g) so identical data
/// produces byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);
    void row(std::span<const double> values);  // NaN cells are left empty

    static std::string format(double v);

private:
    std::ofstream out_;
};

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);

/// Trace CSV: config embedded as '# key = value' comment lines, then
/// 'time_s,noise_power_rel_snl' rows.
void write_trace_csv(const std::filesystem::path& path, const NoiseTrace& trace);

/// Reads traces written by write_trace_csv as well as external data in the
/// same shape; missing config keys fall back to defaults. Malformed rows
/// are reported with their line number.
NoiseTrace read_trace_csv(const std::filesystem::path& path);

} // namespace qlink
