#include "cluscore/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "cluscore/error.hpp"
#include "cluscore/rng.hpp"

namespace cluscore {

namespace {

struct Matrix {
    std::size_t n = 0, d = 0;
    std::vector<double> data;  // row-major
    double* row(std::size_t i) { return data.data() + i * d; }
    const double* row(std::size_t i) const { return data.data() + i * d; }
};

double sq_dist(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

Matrix build_matrix(const Dataset& dataset, const std::vector<std::string>& variables,
                    bool standardize) {
    Matrix x;
    x.n = dataset.n_obs;
    x.d = variables.size();
    x.data.assign(x.n * x.d, 0.0);

    for (std::size_t j = 0; j < variables.size(); ++j) {
        const Variable& var = dataset.at(variables[j]);
        if (var.kind != VarKind::Numeric)
            throw Error("kmeans: variable '" + var.name + "' is not numeric");
        for (std::size_t i = 0; i < x.n; ++i) {
            if (var.missing[i])
                throw Error("kmeans: variable '" + var.name + "' has a missing value at row " +
                            std::to_string(i + 1) + "; drop incomplete rows or the variable first");
            x.data[i * x.d + j] = var.numeric[i];
        }
    }

    if (standardize) {
        for (std::size_t j = 0; j < x.d; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < x.n; ++i) mean += x.data[i * x.d + j];
            mean /= static_cast<double>(x.n);
            double var_acc = 0.0;
            for (std::size_t i = 0; i < x.n; ++i) {
                const double c = x.data[i * x.d + j] - mean;
                var_acc += c * c;
            }
            const double sd = std::sqrt(var_acc / static_cast<double>(x.n));
            for (std::size_t i = 0; i < x.n; ++i) {
                double& v = x.data[i * x.d + j];
                v = (sd > 0.0) ? (v - mean) / sd : 0.0;
            }
        }
    }
    return x;
}

std::vector<double> seed_centers_pp(const Matrix& x, std::size_t k, std::mt19937_64& rng) {
    std::vector<double> centers(k * x.d);
    std::vector<double> min_d2(x.n, std::numeric_limits<double>::infinity());

    const std::size_t first = uniform_index(rng, x.n);
    std::copy_n(x.row(first), x.d, centers.begin());

    for (std::size_t c = 1; c < k; ++c) {
        const double* prev = centers.data() + (c - 1) * x.d;
        for (std::size_t i = 0; i < x.n; ++i)
            min_d2[i] = std::min(min_d2[i], sq_dist(x.row(i), prev, x.d));
        const std::size_t pick = sample_weighted(rng, min_d2);
        std::copy_n(x.row(pick), x.d, centers.begin() + c * x.d);
    }
    return centers;
}

struct LloydOutcome {
    std::vector<std::int32_t> labels;  // 0-based
    std::vector<double> centers;
    double wcss = 0.0;
    std::size_t iterations = 0;
    std::vector<double> trace;
};

LloydOutcome lloyd(const Matrix& x, std::size_t k, const KMeansConfig& cfg,
                   std::mt19937_64& rng) {
    LloydOutcome out;
    out.centers = seed_centers_pp(x, k, rng);
    out.labels.assign(x.n, 0);
    std::vector<std::size_t> sizes(k, 0);

    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        // Assignment; ties go to the lowest center index.
        double wcss = 0.0;
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < x.n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d2 = sq_dist(x.row(i), out.centers.data() + c * x.d, x.d);
                if (d2 < best) {
                    best = d2;
                    best_c = c;
                }
            }
            out.labels[i] = static_cast<std::int32_t>(best_c);
            ++sizes[best_c];
            wcss += best;
        }
        out.trace.push_back(wcss);
        out.wcss = wcss;
        out.iterations = iter + 1;

        // Update step.
        std::vector<double> next(k * x.d, 0.0);
        for (std::size_t i = 0; i < x.n; ++i) {
            const std::size_t c = static_cast<std::size_t>(out.labels[i]);
            const double* xi = x.row(i);
            double* ctr = next.data() + c * x.d;
            for (std::size_t j = 0; j < x.d; ++j) ctr[j] += xi[j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) continue;
            double* ctr = next.data() + c * x.d;
            for (std::size_t j = 0; j < x.d; ++j) ctr[j] /= static_cast<double>(sizes[c]);
        }

        // Empty clusters are reseeded from the farthest point still assigned
        // to a populated cluster.
        std::vector<char> reused(x.n, 0);
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            double far_d = -1.0;
            std::size_t far_i = 0;
            for (std::size_t i = 0; i < x.n; ++i) {
                if (reused[i]) continue;
                const std::size_t own = static_cast<std::size_t>(out.labels[i]);
                if (sizes[own] <= 1) continue;
                const double d2 = sq_dist(x.row(i), next.data() + own * x.d, x.d);
                if (d2 > far_d) {
                    far_d = d2;
                    far_i = i;
                }
            }
            std::copy_n(x.row(far_i), x.d, next.begin() + c * x.d);
            reused[far_i] = 1;
            if (far_d >= 0.0) --sizes[static_cast<std::size_t>(out.labels[far_i])];
        }

        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            movement = std::max(movement,
                                std::sqrt(sq_dist(next.data() + c * x.d,
                                                  out.centers.data() + c * x.d, x.d)));
        out.centers = std::move(next);
        if (movement < cfg.tolerance) break;
    }

    // Final assignment against the converged centers.
    double wcss = 0.0;
    for (std::size_t i = 0; i < x.n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double d2 = sq_dist(x.row(i), out.centers.data() + c * x.d, x.d);
            if (d2 < best) {
                best = d2;
                best_c = c;
            }
        }
        out.labels[i] = static_cast<std::int32_t>(best_c);
        wcss += best;
    }
    out.trace.push_back(wcss);
    out.wcss = wcss;
    return out;
}

}  // namespace

KMeansResult kmeans_fit(const Dataset& dataset, const std::vector<std::string>& variables,
                        const KMeansConfig& config) {
    if (config.k < 1) throw Error("kmeans: k must be >= 1");
    if (config.k > dataset.n_obs)
        throw Error("kmeans: k = " + std::to_string(config.k) + " exceeds n_obs = " +
                    std::to_string(dataset.n_obs));
    if (variables.empty()) throw Error("kmeans: no variables selected");
    if (!(config.tolerance > 0)) throw Error("kmeans: tolerance must be > 0");

    const Matrix x = build_matrix(dataset, variables, config.standardize);

    LloydOutcome best;
    std::size_t best_restart = 0;
    bool have_best = false;
    const std::size_t restarts = std::max<std::size_t>(1, config.n_restarts);
    for (std::size_t r = 0; r < restarts; ++r) {
        auto rng = make_engine(derive_seed(config.seed, r));
        LloydOutcome got = lloyd(x, config.k, config, rng);
        if (!have_best || got.wcss < best.wcss) {
            best = std::move(got);
            best_restart = r;
            have_best = true;
        }
    }

    KMeansResult result;
    result.assignment.k = config.k;
    result.assignment.labels.resize(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        result.assignment.labels[i] = best.labels[i] + 1;
    result.assignment.source.kind = ClusterAssignment::Source::Kind::BuiltInKMeans;
    result.assignment.source.seed = config.seed;
    result.wcss = best.wcss;
    result.iterations = best.iterations;
    result.restart_index = best_restart;
    result.centers = std::move(best.centers);
    result.objective_trace = std::move(best.trace);
    return result;
}

ClusterAssignment kmeans(const Dataset& dataset, const KMeansConfig& config) {
    std::vector<std::string> numeric;
    for (const auto& v : dataset.variables)
        if (v.kind == VarKind::Numeric) numeric.push_back(v.name);
    if (numeric.empty()) throw Error("kmeans: dataset has no numeric variables");
    return kmeans_fit(dataset, numeric, config).assignment;
}

ClusterAssignment load_assignment(const std::string& path, const Dataset& dataset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open assignment file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    CsvOptions opts;
    opts.missing_markers.clear();  // assignment files may not have gaps
    Dataset table = parse_dataset(buf.str(), path, opts);

    const Variable* cluster_col = table.find("cluster");
    const Variable* id_col = table.find("row_id");
    if (!cluster_col || (table.variables.size() == 2 && !id_col) || table.variables.size() > 2)
        throw Error("assignment file '" + path +
                    "' must have columns 'row_id,cluster' or a single 'cluster' column");

    if (table.n_obs != dataset.n_obs)
        throw Error("assignment file '" + path + "' has " + std::to_string(table.n_obs) +
                    " labels, dataset has " + std::to_string(dataset.n_obs) + " rows");

    // Resolve dataset row -> raw label token.
    std::vector<std::string> tokens(dataset.n_obs);
    auto token_at = [&](std::size_t i) -> std::string {
        if (cluster_col->kind == VarKind::Numeric) {
            char b[64];
            std::snprintf(b, sizeof(b), "%.17g", cluster_col->numeric[i]);
            return b;
        }
        return cluster_col->categorical[i];
    };
    if (id_col) {
        if (id_col->kind != VarKind::Numeric)
            throw Error("assignment file '" + path + "': row_id column is not numeric");
        std::vector<char> seen(dataset.n_obs, 0);
        for (std::size_t i = 0; i < table.n_obs; ++i) {
            const double raw = id_col->numeric[i];
            if (!(raw == std::floor(raw)) || raw < 0 ||
                raw >= static_cast<double>(dataset.n_obs))
                throw Error("assignment file '" + path + "': unmappable row_id at line " +
                            std::to_string(i + 2));
            const auto rid = static_cast<std::size_t>(raw);
            if (seen[rid])
                throw Error("assignment file '" + path + "': duplicate row_id " +
                            std::to_string(rid));
            seen[rid] = 1;
            tokens[rid] = token_at(i);
        }
    } else {
        for (std::size_t i = 0; i < table.n_obs; ++i) tokens[i] = token_at(i);
    }

    // Compact to 1..k in order of first appearance.
    ClusterAssignment assignment;
    assignment.labels.resize(dataset.n_obs);
    std::map<std::string, std::int32_t> compact;
    for (std::size_t i = 0; i < dataset.n_obs; ++i) {
        if (tokens[i].empty())
            throw Error("assignment file '" + path + "': empty label for row " +
                        std::to_string(i));
        auto [it, inserted] =
            compact.emplace(tokens[i], static_cast<std::int32_t>(compact.size() + 1));
        assignment.labels[i] = it->second;
    }
    assignment.k = compact.size();
    assignment.source.kind = ClusterAssignment::Source::Kind::Imported;
    assignment.source.path = path;
    return assignment;
}

}  // namespace cluscore
