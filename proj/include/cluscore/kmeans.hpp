#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cluscore/dataset.hpp"
#include "cluscore/metric.hpp"

namespace cluscore {

struct KMeansConfig {
    std::size_t k = 2;
    std::size_t max_iters = 100;
    std::size_t n_restarts = 10;
    std::uint64_t seed = 0;
    double tolerance = 1e-6;   // on center movement
    bool standardize = true;  // z-score per variable
};

struct KMeansResult {
    ClusterAssignment assignment;
    double wcss = 0.0;
    std::size_t iterations = 0;             // of the winning restart
    std::size_t restart_index = 0;          // which restart won
    std::vector<double> centers;            // k x d row-major, standardized space
    std::vector<double> objective_trace;    // per-iteration wcss of the winner
};

// Lloyd's algorithm with k-means++ seeding, best-of-restarts by
// (wcss, restart index). Deterministic for a fixed (seed, config, data).
// Only the named numeric variables are used; missing values there are an error.
KMeansResult kmeans_fit(const Dataset& dataset, const std::vector<std::string>& variables,
                        const KMeansConfig& config);

// Convenience: cluster on every numeric variable.
ClusterAssignment kmeans(const Dataset& dataset, const KMeansConfig& config);

// Import labels produced by any external method. CSV with header, either
// columns row_id,cluster (row_id 0-based) or a single cluster column aligned
// by row order. Labels are compacted to 1..k in order of first appearance.
ClusterAssignment load_assignment(const std::string& path, const Dataset& dataset);

}  // namespace cluscore
