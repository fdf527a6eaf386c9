#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cluscore/binning.hpp"

namespace cluscore {

// Per-observation cluster labels in 1..k.
struct ClusterAssignment {
    struct Source {
        enum class Kind { BuiltInKMeans, Imported };
        Kind kind = Kind::BuiltInKMeans;
        std::uint64_t seed = 0;  // BuiltInKMeans
        std::string path;        // Imported
    };

    std::size_t k = 0;
    std::vector<std::int32_t> labels;
    Source source;

    void validate(std::size_t n_obs) const;  // throws on bad k / labels / length
};

// The l x k frequency matrix of a binned variable against cluster ids.
// row_ids (per-cell observation indices) is filled by crosstab() and empty
// when the matrix was built from raw counts.
struct CrossTabMatrix {
    std::string variable;
    std::size_t l = 0;
    std::size_t k = 0;
    std::vector<std::string> row_labels;          // size l
    std::vector<std::int64_t> counts;             // row-major l*k
    std::vector<std::vector<std::int32_t>> row_ids;  // row-major l*k or empty
    std::int64_t total = 0;

    std::int64_t at(std::size_t i, std::size_t j) const { return counts[i * k + j]; }
};

// Median-threshold segregation of a cross-tab: median over ALL l*k cells
// (zeros included, even counts average the two middles), mask = strictly
// greater cells.
struct SegregationResult {
    std::size_t l = 0;
    std::size_t k = 0;
    double median = 0.0;
    std::size_t n_segregated = 0;
    std::vector<std::uint8_t> mask;  // row-major l*k

    bool mask_at(std::size_t i, std::size_t j) const { return mask[i * k + j] != 0; }
};

struct VariableScore {
    std::string variable;
    std::size_t l = 0;
    std::size_t k = 0;
    std::size_t n_segregated = 0;
    double segregation_factor = 0.0;  // n_segregated / max(l, k)
    double explanation_factor = 0.0;  // ln(n_d / (l * k))
    double score = 0.0;               // product of the two factors
    double weight = 1.0;
};

struct ScoreReport {
    std::size_t k = 0;
    std::size_t n_d = 0;            // scored observations for the run
    std::size_t excluded_rows = 0;  // rows dropped by the missing-value rule
    std::vector<VariableScore> per_variable;
    double total = 0.0;             // sum of weight * score
    std::string binning_fingerprint;
    std::vector<std::string> warnings;
};

struct OutlierCell {
    std::string bucket_label;
    std::size_t bucket = 0;      // 1-based row
    std::size_t cluster_id = 0;  // 1-based column
    std::int64_t count = 0;
    std::vector<std::int32_t> observation_ids;
};

CrossTabMatrix crosstab(const BinnedVariable& binned, const ClusterAssignment& assignment);

// Build a matrix from published/raw counts (no per-cell observation ids).
CrossTabMatrix crosstab_from_counts(const std::string& variable,
                                    const std::vector<std::vector<std::int64_t>>& counts,
                                    std::vector<std::string> row_labels = {});

SegregationResult segregated_count(const CrossTabMatrix& m);

VariableScore variable_score(std::size_t n_segregated, std::size_t l, std::size_t k,
                             std::size_t n_d);

// Weighted aggregation; unspecified weights default to 1, unknown weight
// names throw. Variable order is preserved.
ScoreReport dataset_score(std::vector<VariableScore> scores,
                          const std::map<std::string, double>& weights = {});

// Nonzero cells at or below the median, ascending by count then bucket order.
std::vector<OutlierCell> outlier_cells(const CrossTabMatrix& m, const SegregationResult& seg);

// The mask as an l x k binary table for report emission.
std::vector<std::vector<int>> sparse_mask_render(const SegregationResult& seg);

}  // namespace cluscore
