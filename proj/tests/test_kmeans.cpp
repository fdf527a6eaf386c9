#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "cluscore/analysis.hpp"
#include "cluscore/error.hpp"
#include "cluscore/kmeans.hpp"
#include "cluscore/rng.hpp"
#include "support/fixtures.hpp"

using namespace cluscore;

namespace {

Dataset two_clouds(std::uint64_t seed, std::size_t per_cloud = 50) {
    auto rng = make_engine(seed);
    Dataset d;
    d.name = "clouds";
    d.n_obs = 2 * per_cloud;
    Variable x, y;
    x.name = "x";
    y.name = "y";
    x.kind = y.kind = VarKind::Numeric;
    x.missing.assign(d.n_obs, 0);
    y.missing.assign(d.n_obs, 0);
    for (std::size_t i = 0; i < d.n_obs; ++i) {
        const double cx = i < per_cloud ? 0.0 : 100.0;
        x.numeric.push_back(cx + normal01(rng));
        y.numeric.push_back(cx + normal01(rng));
    }
    d.variables = {x, y};
    return d;
}

}  // namespace

TEST_CASE("k=1 labels everything 1") {
    Dataset d = two_clouds(3);
    KMeansConfig cfg;
    cfg.k = 1;
    cfg.seed = 42;
    ClusterAssignment a = kmeans(d, cfg);
    CHECK(a.k == 1);
    for (auto l : a.labels) CHECK(l == 1);
}

TEST_CASE("two well-separated clouds split perfectly, up to label permutation") {
    for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
        Dataset d = two_clouds(seed);
        KMeansConfig cfg;
        cfg.k = 2;
        cfg.seed = seed;
        ClusterAssignment a = kmeans(d, cfg);

        // Brute-force check: all of cloud one shares a label, cloud two the other.
        std::set<std::int32_t> first(a.labels.begin(), a.labels.begin() + 50);
        std::set<std::int32_t> second(a.labels.begin() + 50, a.labels.end());
        CHECK(first.size() == 1);
        CHECK(second.size() == 1);
        CHECK(*first.begin() != *second.begin());
    }
}

TEST_CASE("same seed twice produces identical labels") {
    Dataset d = two_clouds(9);
    KMeansConfig cfg;
    cfg.k = 3;
    cfg.seed = 1234;
    ClusterAssignment a = kmeans(d, cfg);
    ClusterAssignment b = kmeans(d, cfg);
    CHECK(a.labels == b.labels);

    cfg.seed = 1235;  // different stream may differ, but must stay valid
    ClusterAssignment c = kmeans(d, cfg);
    c.validate(d.n_obs);
}

TEST_CASE("objective trace is non-increasing across Lloyd iterations") {
    Dataset d = two_clouds(11, 100);
    KMeansConfig cfg;
    cfg.k = 4;
    cfg.seed = 7;
    cfg.n_restarts = 3;
    KMeansResult r = kmeans_fit(d, {"x", "y"}, cfg);
    REQUIRE(r.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-9);
    CHECK(r.wcss == r.objective_trace.back());
}

TEST_CASE("restart winner is deterministic for a fixed seed") {
    Dataset d = two_clouds(21, 80);
    KMeansConfig cfg;
    cfg.k = 5;
    cfg.seed = 99;
    cfg.n_restarts = 8;
    KMeansResult a = kmeans_fit(d, {"x", "y"}, cfg);
    KMeansResult b = kmeans_fit(d, {"x", "y"}, cfg);
    CHECK(a.restart_index == b.restart_index);
    CHECK(a.wcss == b.wcss);
    CHECK(a.assignment.labels == b.assignment.labels);
}

TEST_CASE("kmeans validates k, variable kinds and missing values") {
    Dataset d = parse_dataset("a,b\n1,x\n2,y\n", "t");
    KMeansConfig cfg;
    cfg.k = 5;
    CHECK_THROWS_WITH_AS(kmeans_fit(d, {"a"}, cfg), doctest::Contains("exceeds n_obs"), Error);
    cfg.k = 1;
    CHECK_THROWS_WITH_AS(kmeans_fit(d, {"b"}, cfg), doctest::Contains("not numeric"), Error);

    Dataset m = parse_dataset("a\n1\nNA\n3\n", "t");
    CHECK_THROWS_WITH_AS(kmeans_fit(m, {"a"}, cfg), doctest::Contains("missing"), Error);
}

TEST_CASE("label permutations of an assignment score identically end-to-end") {
    fixtures::BlobData blobs = fixtures::make_blobs3(5, 40);
    KMeansConfig cfg;
    cfg.k = 3;
    cfg.seed = 5;
    ClusterAssignment a = kmeans(blobs.dataset, cfg);

    ClusterAssignment permuted = a;  // swap labels 1 and 3
    for (auto& l : permuted.labels) l = (l == 1) ? 3 : (l == 3 ? 1 : l);

    ScoreReport ra = score_assignment(blobs.dataset, a);
    ScoreReport rb = score_assignment(blobs.dataset, permuted);
    CHECK(ra.total == rb.total);
    for (std::size_t i = 0; i < ra.per_variable.size(); ++i)
        CHECK(ra.per_variable[i].score == rb.per_variable[i].score);
}

TEST_CASE("load_assignment compacts labels in order of first appearance") {
    Dataset d = parse_dataset("v\n1\n2\n3\n", "t");
    auto dir = fixtures::make_temp_dir("assign");
    auto path = (dir / "labels.csv").string();
    {
        std::ofstream out(path);
        out << "cluster\na\nb\na\n";
    }
    ClusterAssignment a = load_assignment(path, d);
    CHECK(a.k == 2);
    CHECK(a.labels == std::vector<std::int32_t>{1, 2, 1});
    CHECK(a.source.kind == ClusterAssignment::Source::Kind::Imported);
}

TEST_CASE("load_assignment maps rows through a 0-based row_id column") {
    Dataset d = parse_dataset("v\n10\n20\n30\n", "t");
    auto dir = fixtures::make_temp_dir("assign_id");
    auto path = (dir / "labels.csv").string();
    {
        std::ofstream out(path);
        out << "row_id,cluster\n2,9\n0,7\n1,9\n";
    }
    ClusterAssignment a = load_assignment(path, d);
    CHECK(a.k == 2);
    // row 0 -> 7 (first appearance in dataset order), rows 1,2 -> 9
    CHECK(a.labels == std::vector<std::int32_t>{1, 2, 2});
}

TEST_CASE("load_assignment error paths") {
    Dataset d = parse_dataset("v\n1\n2\n3\n", "t");
    auto dir = fixtures::make_temp_dir("assign_err");

    auto write = [&](const std::string& name, const std::string& body) {
        auto p = (dir / name).string();
        std::ofstream out(p);
        out << body;
        return p;
    };

    CHECK_THROWS_WITH_AS(load_assignment(write("short.csv", "cluster\na\nb\n"), d),
                         doctest::Contains("labels"), Error);
    CHECK_THROWS_WITH_AS(load_assignment(write("cols.csv", "foo\na\nb\nc\n"), d),
                         doctest::Contains("columns"), Error);
    CHECK_THROWS_WITH_AS(
        load_assignment(write("dup.csv", "row_id,cluster\n0,a\n0,b\n2,c\n"), d),
        doctest::Contains("duplicate"), Error);
    CHECK_THROWS_WITH_AS(
        load_assignment(write("range.csv", "row_id,cluster\n0,a\n1,b\n7,c\n"), d),
        doctest::Contains("unmappable"), Error);
    CHECK_THROWS_WITH_AS(load_assignment(write("empty.csv", "cluster\na\n\"\"\nc\n"), d),
                         doctest::Contains("empty label"), Error);
    CHECK_THROWS_AS(load_assignment((dir / "missing.csv").string(), d), Error);
}

TEST_CASE("imported PAM-style labels for the reconstructed fixture") {
    auto fx = fixtures::reconstructed_fixture();
    Dataset d = fixtures::fixture_dataset(fx);
    auto dir = fixtures::make_temp_dir("assign_fx");
    auto path = (dir / "pam.csv").string();
    fixtures::write_fixture_assignment(path);
    ClusterAssignment a = load_assignment(path, d);
    CHECK(a.k == 5);
    CHECK(a.labels.size() == 846);
}
