#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cluscore/dataset.hpp"
#include "cluscore/metric.hpp"
#include "cluscore/rng.hpp"

namespace fixtures {

// ---------------------------------------------------------------------------
// Published worked example: two 846-observation cross-tabs against a
// 5-cluster assignment, with their known sparse masks.

inline std::vector<std::vector<std::int64_t>> circularity_counts() {
    return {
        {0, 0, 5, 22, 0},
        {45, 0, 62, 107, 0},
        {25, 0, 179, 32, 15},
        {36, 8, 65, 0, 50},
        {0, 108, 0, 0, 52},
        {0, 33, 0, 0, 2},
    };
}

inline std::vector<std::string> circularity_labels() {
    return {"[30,35)", "[35,40)", "[40,45)", "[45,50)", "[50,55)", "[55,60]"};
}

inline std::vector<std::vector<int>> circularity_mask() {
    return {
        {0, 0, 0, 1, 0},
        {1, 0, 1, 1, 0},
        {1, 0, 1, 1, 1},
        {1, 1, 1, 0, 1},
        {0, 1, 0, 0, 1},
        {0, 1, 0, 0, 0},
    };
}

inline std::vector<std::vector<std::int64_t>> skewness_counts() {
    return {
        {0, 0, 0, 71, 0},
        {85, 0, 308, 90, 1},
        {19, 124, 3, 0, 118},
        {1, 25, 0, 0, 0},
        {1, 0, 0, 0, 0},
    };
}

inline std::vector<std::string> skewness_labels() {
    return {"[100,150)", "[150,200)", "[200,250)", "[250,300)", "[300,350]"};
}

inline std::vector<std::vector<int>> skewness_mask() {
    return {
        {0, 0, 0, 1, 0},
        {1, 0, 1, 1, 1},
        {1, 1, 1, 0, 1},
        {1, 1, 0, 0, 0},
        {1, 0, 0, 0, 0},
    };
}

// High-precision direct evaluations of the two worked scores and their sum.
inline constexpr double kCircularityScore = 8.3483049448601698;
inline constexpr double kSkewnessScore = 8.4519444833712541;
inline constexpr double kWorkedTotal = 16.800249428231424;

// ---------------------------------------------------------------------------
// 846-row fixture reconstructed from the two published matrices. Each row
// carries a circularity value, a skewness value, and a cluster label; the
// per-cluster bucket multisets are zipped in bucket order, which preserves
// both marginal cross-tabs exactly.

struct VehicleFixture {
    std::vector<double> circularity;
    std::vector<double> skewness;
    std::vector<std::int32_t> labels;  // 1..5
};

inline VehicleFixture reconstructed_fixture() {
    const auto circ = circularity_counts();
    const auto skew = skewness_counts();
    VehicleFixture fx;
    for (std::size_t c = 0; c < 5; ++c) {
        std::vector<double> circ_vals;
        for (std::size_t i = 0; i < circ.size(); ++i)
            for (std::int64_t n = 0; n < circ[i][c]; ++n)
                circ_vals.push_back(30.0 + 5.0 * static_cast<double>(i) + 2.5);
        std::vector<double> skew_vals;
        for (std::size_t i = 0; i < skew.size(); ++i)
            for (std::int64_t n = 0; n < skew[i][c]; ++n)
                skew_vals.push_back(100.0 + 50.0 * static_cast<double>(i) + 25.0);
        if (circ_vals.size() != skew_vals.size())
            throw std::logic_error("fixture columns disagree");
        for (std::size_t r = 0; r < circ_vals.size(); ++r) {
            fx.circularity.push_back(circ_vals[r]);
            fx.skewness.push_back(skew_vals[r]);
            fx.labels.push_back(static_cast<std::int32_t>(c + 1));
        }
    }
    return fx;
}

inline cluscore::Dataset fixture_dataset(const VehicleFixture& fx) {
    cluscore::Dataset d;
    d.name = "figure_fixture";
    d.n_obs = fx.labels.size();
    cluscore::Variable circ;
    circ.name = "circularity";
    circ.kind = cluscore::VarKind::Numeric;
    circ.numeric = fx.circularity;
    circ.missing.assign(d.n_obs, 0);
    cluscore::Variable skew;
    skew.name = "skewness";
    skew.kind = cluscore::VarKind::Numeric;
    skew.numeric = fx.skewness;
    skew.missing.assign(d.n_obs, 0);
    d.variables = {circ, skew};
    return d;
}

inline cluscore::ClusterAssignment fixture_assignment(const VehicleFixture& fx) {
    cluscore::ClusterAssignment a;
    a.k = 5;
    a.labels = fx.labels;
    a.source.kind = cluscore::ClusterAssignment::Source::Kind::Imported;
    a.source.path = "<fixture>";
    return a;
}

inline void write_fixture_csv(const std::string& path) {
    const VehicleFixture fx = reconstructed_fixture();
    std::ofstream out(path);
    out << "circularity,skewness\n";
    for (std::size_t i = 0; i < fx.labels.size(); ++i)
        out << fx.circularity[i] << "," << fx.skewness[i] << "\n";
}

inline void write_fixture_assignment(const std::string& path, bool with_row_id = false) {
    const VehicleFixture fx = reconstructed_fixture();
    std::ofstream out(path);
    if (with_row_id) {
        out << "row_id,cluster\n";
        for (std::size_t i = 0; i < fx.labels.size(); ++i)
            out << i << "," << fx.labels[i] << "\n";
    } else {
        out << "cluster\n";
        for (std::size_t i = 0; i < fx.labels.size(); ++i) out << fx.labels[i] << "\n";
    }
}

// ---------------------------------------------------------------------------
// Independent oracle: insertion-sort median plus direct threshold scan,
// sharing no code with the library's segregation path.

struct NaiveSegregation {
    double median = 0.0;
    std::size_t n_above = 0;
    std::vector<std::uint8_t> mask;
};

inline NaiveSegregation naive_segregated(const std::vector<std::int64_t>& cells) {
    std::vector<double> sorted;
    for (std::int64_t c : cells) {
        double v = static_cast<double>(c);
        std::size_t pos = 0;
        while (pos < sorted.size() && sorted[pos] < v) ++pos;
        sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(pos), v);
    }
    NaiveSegregation out;
    const std::size_t n = sorted.size();
    out.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    out.mask.assign(n, 0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (static_cast<double>(cells[i]) > out.median) {
            out.mask[i] = 1;
            ++out.n_above;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic generators (portable rng only, bit-stable across platforms).

// Three blobs over three integer informative variables (overlapping per-blob
// level spans) plus three continuous uniform noise variables.
struct BlobData {
    cluscore::Dataset dataset;
    std::vector<std::int32_t> true_labels;  // 1..3
    std::vector<std::string> informative{"f1", "f2", "f3"};
    std::vector<std::string> noise{"n1", "n2", "n3"};
};

inline BlobData make_blobs3(std::uint64_t seed, std::size_t n_per_blob = 100) {
    const int bases[3][3] = {{0, 2, 4}, {4, 0, 2}, {2, 4, 0}};  // [dim][blob]
    auto rng = cluscore::make_engine(cluscore::derive_seed(seed, 0xb10b));

    const std::size_t n = 3 * n_per_blob;
    BlobData out;
    out.dataset.name = "blobs3";
    out.dataset.n_obs = n;

    std::vector<std::vector<double>> cols(6, std::vector<double>(n, 0.0));
    for (std::size_t b = 0; b < 3; ++b) {
        for (std::size_t r = 0; r < n_per_blob; ++r) {
            const std::size_t row = b * n_per_blob + r;
            for (std::size_t dim = 0; dim < 3; ++dim)
                cols[dim][row] = static_cast<double>(bases[dim][b]) +
                                 static_cast<double>(cluscore::uniform_index(rng, 4));
            for (std::size_t dim = 0; dim < 3; ++dim)
                cols[3 + dim][row] = cluscore::uniform01(rng);
            out.true_labels.push_back(static_cast<std::int32_t>(b + 1));
        }
    }

    const std::vector<std::string> names = {"f1", "f2", "f3", "n1", "n2", "n3"};
    for (std::size_t j = 0; j < 6; ++j) {
        cluscore::Variable v;
        v.name = names[j];
        v.kind = cluscore::VarKind::Numeric;
        v.numeric = std::move(cols[j]);
        v.missing.assign(n, 0);
        out.dataset.variables.push_back(std::move(v));
    }
    return out;
}

// 846 x 18 stand-in with four latent classes and coarse integer features;
// the feature layout is fixed, only the sampling varies with the seed.
inline cluscore::Dataset make_standin_vehicle(std::uint64_t seed) {
    const std::size_t sizes[4] = {212, 217, 218, 199};
    auto layout = cluscore::make_engine(424242);
    auto rng = cluscore::make_engine(cluscore::derive_seed(seed, 0x5174));

    cluscore::Dataset d;
    d.name = "vehicle_standin";
    d.n_obs = 846;

    for (std::size_t j = 0; j < 18; ++j) {
        const std::size_t width = 2 + cluscore::uniform_index(layout, 2);  // 2..3 levels per class
        std::size_t perm[4] = {0, 1, 2, 3};
        for (std::size_t i = 3; i > 0; --i)
            std::swap(perm[i], perm[cluscore::uniform_index(layout, i + 1)]);

        cluscore::Variable v;
        v.name = "f" + std::to_string(j + 1);
        v.kind = cluscore::VarKind::Numeric;
        v.missing.assign(d.n_obs, 0);
        v.numeric.reserve(d.n_obs);
        for (std::size_t c = 0; c < 4; ++c) {
            const double base = static_cast<double>(perm[c]);  // unit class offsets
            for (std::size_t r = 0; r < sizes[c]; ++r)
                v.numeric.push_back(base +
                                    static_cast<double>(cluscore::uniform_index(rng, width)));
        }
        d.variables.push_back(std::move(v));
    }
    return d;
}

// ---------------------------------------------------------------------------

inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("cluscore_" + tag + "_" + std::to_string(++counter));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace fixtures
