#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qlink::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;   // bad config / flags
inline constexpr int kExitComputeError = 3;  // computation infeasible

/// Grid flag "MIN:MAX:POINTS:log|lin".
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    bool log_scale = true;

    static GridSpec parse(const std::string& text);
    std::vector<double> build() const;
};

struct CommonOptions {
    std::filesystem::path config;
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
};

int run_characterize(const CommonOptions& opts, const std::optional<GridSpec>& lo_grid,
                     std::ostream& out, std::ostream& err);

int run_capacity(const CommonOptions& opts, std::ostream& out, std::ostream& err);

int run_sweep(const CommonOptions& opts, const std::string& axis,
              const std::optional<GridSpec>& grid, std::ostream& out, std::ostream& err);

int run_trace(const CommonOptions& opts, std::ostream& out, std::ostream& err);

struct EstimateOptions {
    std::filesystem::path trace_csv;
    std::size_t n_samples = 100000;
    double kde_bandwidth_db = 0.0;  // 0 = Silverman
    std::optional<std::uint64_t> seed;
};

int run_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);

} // namespace qlink::cli
