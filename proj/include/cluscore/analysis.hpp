#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cluscore/binning.hpp"
#include "cluscore/dataset.hpp"
#include "cluscore/kmeans.hpp"
#include "cluscore/metric.hpp"

namespace cluscore {

// Global strategy plus per-variable overrides. When `global` is unset each
// variable gets the spec default (FixedCount(min(10, distinct)) / levels).
struct BinSpec {
    std::optional<BinStrategy> global;
    std::map<std::string, BinStrategy> per_variable;
};

// Binning computed once per dataset and shared across every k and method of a
// run, so totals stay on one scale. Holds the run-level scored-row mask
// (rows missing in any scored variable are excluded everywhere).
struct BinningPlan {
    std::vector<BinnedVariable> binned;   // already masked to scored rows
    std::vector<char> scored;             // size n_obs
    std::size_t n_scored = 0;
    std::size_t excluded_rows = 0;
    std::string fingerprint;
    std::vector<std::string> notes;       // degenerate bins etc.
};

BinningPlan make_binning_plan(const Dataset& dataset, const BinSpec& spec = {});

// Algorithm-level orchestration: crosstab + segregation + score per variable,
// weighted total.
ScoreReport score_with_plan(const BinningPlan& plan, const ClusterAssignment& assignment,
                            const std::map<std::string, double>& weights = {});

// One-shot scoring of an assignment on a dataset.
ScoreReport score_assignment(const Dataset& dataset, const ClusterAssignment& assignment,
                             const BinSpec& spec = {},
                             const std::map<std::string, double>& weights = {});

struct ScoreCurve {
    std::string method;
    std::vector<std::pair<std::size_t, ScoreReport>> points;  // strictly increasing k
    std::string binning_fingerprint;
};

// Score built-in k-means over k in [k_min, k_max]; per-k seeds derived from
// (config.seed, k). config.k is ignored.
ScoreCurve k_sweep(const Dataset& dataset, std::size_t k_min, std::size_t k_max,
                   const KMeansConfig& config, const BinSpec& spec = {},
                   const std::map<std::string, double>& weights = {});

struct ComparisonEntry {
    std::string method;
    std::size_t k = 0;
    double total = 0.0;
    std::vector<VariableScore> per_variable;
};

struct ComparisonReport {
    std::vector<ComparisonEntry> entries;
    std::string binning_fingerprint;
    std::size_t n_d = 0;
    std::size_t excluded_rows = 0;
};

ComparisonReport compare_methods(
    const Dataset& dataset,
    const std::vector<std::pair<std::string, ClusterAssignment>>& assignments,
    const BinSpec& spec = {}, const std::map<std::string, double>& weights = {});

struct ImpactRow {
    std::string variable;
    double score = 0.0;
    double segregation_factor = 0.0;
    double explanation_factor = 0.0;
    bool degenerate = false;  // single-bucket variable
};

struct ImpactReport {
    std::size_t k = 0;
    std::vector<ImpactRow> rows;  // sorted descending by score
    std::string binning_fingerprint;
    std::vector<std::string> warnings;
};

ImpactReport variable_impact(const Dataset& dataset, const ClusterAssignment& assignment,
                             const BinSpec& spec = {});

struct KSuggestion {
    std::optional<std::size_t> argmax_k;
    std::optional<std::size_t> knee_k;
    std::vector<std::string> warnings;
};

// argmax (smallest k on ties) plus a knee from the max-perpendicular-distance
// rule when the curve is non-monotone. Pure function of the (k, total) pairs.
KSuggestion suggest_k(const std::vector<std::pair<std::size_t, double>>& points);
KSuggestion suggest_k(const ScoreCurve& curve);

}  // namespace cluscore
