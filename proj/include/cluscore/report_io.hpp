#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cluscore/analysis.hpp"
#include "cluscore/dataset.hpp"
#include "cluscore/kmeans.hpp"

namespace cluscore {

// Fully resolved configuration for a scoring run; built from CLI flags plus an
// optional JSON config file (flags win).
struct RunConfig {
    std::string data_path;
    CsvOptions csv;
    std::vector<std::string> include;  // empty = all variables
    std::vector<std::string> exclude;
    BinSpec bins;
    std::map<std::string, double> weights;

    // Clustering source: exactly one of k (built-in k-means) or
    // assignments (name -> path) for score/impact/outliers.
    std::optional<std::size_t> k;
    std::vector<std::pair<std::string, std::string>> assignments;

    std::size_t k_min = 2;
    std::size_t k_max = 10;
    KMeansConfig kmeans;  // k is filled per command
    std::uint64_t seed = 0;

    std::string out_dir = ".";
    bool emit_json = true;
    bool emit_csv = true;
};

// 17-significant-digit formatting shared by every CSV/JSON emitter, so the
// two mirror files always carry identical values.
std::string format_g17(double value);

// Write-temp-then-rename; the destination never holds a partial file.
void atomic_write(const std::string& path, const std::string& content);

// Stable 64-bit fingerprint (FNV-1a) of a canonical description string.
std::string fingerprint_hex(const std::string& canonical);

// Subcommand entry points. Each writes its report files under
// config.out_dir and prints a short summary to stdout; errors throw.
void cmd_score(const RunConfig& config);
void cmd_sweep(const RunConfig& config);
void cmd_compare(const RunConfig& config);
void cmd_impact(const RunConfig& config);
void cmd_outliers(const RunConfig& config);

// Merge a JSON config file under the flags (flags win). Throws ConfigError.
void apply_config_file(RunConfig& config, const std::string& path,
                       const std::vector<std::string>& flags_set);

// Parse helpers shared by the CLI and the config file.
BinStrategy parse_bin_strategy(const std::string& text, std::size_t bins_flag);
std::map<std::string, double> parse_weights(const std::string& text);

}  // namespace cluscore
