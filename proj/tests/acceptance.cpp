// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Criterion 7 uses tests/data/vehicle.csv when present (see
// tools/fetch_vehicle.py) and otherwise a deterministic 846x18 stand-in.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "cluscore/analysis.hpp"
#include "cluscore/error.hpp"
#include "cluscore/kmeans.hpp"
#include "cluscore/metric.hpp"
#include "cluscore/report_io.hpp"
#include "cluscore/rng.hpp"
#include "support/fixtures.hpp"

using namespace cluscore;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// cmd_* print run summaries; keep the acceptance output to one line each.
struct StdoutMute {
    std::streambuf* saved;
    std::ostringstream sink;
    StdoutMute() : saved(std::cout.rdbuf(sink.rdbuf())) {}
    ~StdoutMute() { std::cout.rdbuf(saved); }
};

// --- criterion 7 helpers ----------------------------------------------------

std::string vehicle_path() {
    if (const char* env = std::getenv("CLUSCORE_VEHICLE")) return env;
#ifdef CLUSCORE_SOURCE_DIR
    return std::string(CLUSCORE_SOURCE_DIR) + "/tests/data/vehicle.csv";
#else
    return "tests/data/vehicle.csv";
#endif
}

bool load_vehicle(Dataset& out, std::string& note) {
    const std::string path = vehicle_path();
    if (!fs::exists(path)) {
        note = "UCI file absent, deterministic stand-in used";
        return false;
    }
    try {
        Dataset d = load_dataset(path);
        std::set<std::string> to_drop;
        for (const auto& v : d.variables)
            if (v.kind == VarKind::Categorical) to_drop.insert(v.name);
        d = drop_variables(d, to_drop);
        if (d.n_obs != 846 || d.variables.size() != 18) {
            note = "file at " + path + " is not 846x18, stand-in used";
            return false;
        }
        out = std::move(d);
        note = "UCI Vehicle Silhouettes data";
        return true;
    } catch (const std::exception& e) {
        note = std::string("failed to load ") + path + " (" + e.what() + "), stand-in used";
        return false;
    }
}

}  // namespace

int main() {
    std::cout << "cluscore acceptance suite\n";

    criterion(1, "published matrices reproduce the sparse masks exactly", [](std::string& d) {
        CrossTabMatrix circ = crosstab_from_counts("circularity", fixtures::circularity_counts(),
                                                   fixtures::circularity_labels());
        CrossTabMatrix skew = crosstab_from_counts("skewness", fixtures::skewness_counts(),
                                                   fixtures::skewness_labels());
        const auto t0 = std::chrono::steady_clock::now();
        SegregationResult cs = segregated_count(circ);
        SegregationResult ss = segregated_count(skew);
        const double ms = elapsed_ms(t0);

        const bool circ_ok = cs.median == 6.5 && cs.n_segregated == 15 &&
                             sparse_mask_render(cs) == fixtures::circularity_mask();
        const bool skew_ok = ss.median == 0.0 && ss.n_segregated == 12 &&
                             sparse_mask_render(ss) == fixtures::skewness_mask();
        std::ostringstream os;
        os << "medians " << cs.median << "/" << ss.median << ", ones " << cs.n_segregated << "/"
           << ss.n_segregated << ", " << ms << " ms";
        d = os.str();
        return circ_ok && skew_ok && ms < 1.0;
    });

    criterion(2, "worked scores match a high-precision evaluation", [](std::string& d) {
        const VariableScore circ = variable_score(15, 6, 5, 846);
        const VariableScore skew = variable_score(12, 5, 5, 846);

        // Independent route: long double arithmetic with factored logarithms.
        const long double circ_hp =
            (15.0L / 6.0L) * (std::log(846.0L) - std::log(6.0L) - std::log(5.0L));
        const long double skew_hp =
            (12.0L / 5.0L) * (std::log(846.0L) - std::log(5.0L) - std::log(5.0L));

        VariableScore a = circ, b = skew;
        a.variable = "circularity";
        b.variable = "skewness";
        const ScoreReport sum = dataset_score({a, b});

        std::ostringstream os;
        os << "scores " << format_g17(circ.score) << " / " << format_g17(skew.score);
        d = os.str();
        return std::fabs(circ.score - static_cast<double>(circ_hp)) <= 1e-9 &&
               std::fabs(skew.score - static_cast<double>(skew_hp)) <= 1e-9 &&
               std::fabs(sum.total - (circ.score + skew.score)) <= 1e-12;
    });

    criterion(3, "rebuilt cross-tabs from the 846-row fixture conserve the total",
              [](std::string& d) {
                  auto fx = fixtures::reconstructed_fixture();
                  Dataset data = fixtures::fixture_dataset(fx);
                  ClusterAssignment a = fixtures::fixture_assignment(fx);

                  BinnedVariable bc = bin_variable(data.at("circularity"),
                                                   BinStrategy::fixed_width(5));
                  BinnedVariable bs = bin_variable(data.at("skewness"),
                                                   BinStrategy::fixed_width(50));
                  CrossTabMatrix mc = crosstab(bc, a);
                  CrossTabMatrix ms = crosstab(bs, a);

                  bool cells_ok = mc.l == 6 && ms.l == 5;
                  const auto cc = fixtures::circularity_counts();
                  const auto sc = fixtures::skewness_counts();
                  for (std::size_t i = 0; cells_ok && i < mc.l; ++i)
                      for (std::size_t j = 0; j < mc.k; ++j)
                          if (mc.at(i, j) != cc[i][j]) cells_ok = false;
                  for (std::size_t i = 0; cells_ok && i < ms.l; ++i)
                      for (std::size_t j = 0; j < ms.k; ++j)
                          if (ms.at(i, j) != sc[i][j]) cells_ok = false;

                  std::ostringstream os;
                  os << "totals " << mc.total << " / " << ms.total;
                  d = os.str();
                  return cells_ok && mc.total == 846 && ms.total == 846;
              });

    criterion(4, "segregated_count matches the naive oracle on 1000 random matrices",
              [](std::string& d) {
                  auto rng = make_engine(20250808);
                  std::size_t agreements = 0;
                  for (int t = 0; t < 1000; ++t) {
                      const std::size_t l = 1 + uniform_index(rng, 12);
                      const std::size_t k = 1 + uniform_index(rng, 12);
                      std::vector<std::vector<std::int64_t>> counts(
                          l, std::vector<std::int64_t>(k));
                      for (auto& row : counts)
                          for (auto& c : row)
                              c = static_cast<std::int64_t>(uniform_index(rng, 501));
                      CrossTabMatrix m = crosstab_from_counts("r", counts);
                      SegregationResult seg = segregated_count(m);
                      auto naive = fixtures::naive_segregated(m.counts);
                      if (seg.median == naive.median && seg.n_segregated == naive.n_above &&
                          seg.mask == naive.mask)
                          ++agreements;
                  }
                  d = std::to_string(agreements) + "/1000 agree";
                  return agreements == 1000;
              });

    criterion(5, "relabel, bucket-reorder and row-permutation invariance, bit-identical",
              [](std::string& d) {
                  auto rng = make_engine(777001);
                  std::size_t ok_runs = 0;
                  for (int t = 0; t < 100; ++t) {
                      // Random dataset: 2-4 numeric variables, random assignment.
                      const std::size_t n = 30 + uniform_index(rng, 170);
                      const std::size_t n_vars = 2 + uniform_index(rng, 3);
                      const std::size_t k = 2 + uniform_index(rng, 5);
                      Dataset data;
                      data.name = "rand";
                      data.n_obs = n;
                      for (std::size_t j = 0; j < n_vars; ++j) {
                          Variable v;
                          v.name = "v" + std::to_string(j);
                          v.kind = VarKind::Numeric;
                          v.missing.assign(n, 0);
                          for (std::size_t i = 0; i < n; ++i)
                              v.numeric.push_back(
                                  std::floor(uniform01(rng) * 12.0));  // coarse ints
                          data.variables.push_back(std::move(v));
                      }
                      ClusterAssignment a;
                      a.k = k;
                      for (std::size_t i = 0; i < n; ++i)
                          a.labels.push_back(
                              static_cast<std::int32_t>(1 + uniform_index(rng, k)));

                      const double base = score_assignment(data, a).total;

                      // (a) cluster relabel
                      std::vector<std::int32_t> perm(k);
                      for (std::size_t j = 0; j < k; ++j)
                          perm[j] = static_cast<std::int32_t>(j + 1);
                      for (std::size_t j = k; j > 1; --j)
                          std::swap(perm[j - 1], perm[uniform_index(rng, j)]);
                      ClusterAssignment relabeled = a;
                      for (auto& l : relabeled.labels)
                          l = perm[static_cast<std::size_t>(l - 1)];
                      const bool relabel_ok = score_assignment(data, relabeled).total == base;

                      // (b) row permutation (observations + labels together)
                      std::vector<std::size_t> rperm(n);
                      for (std::size_t i = 0; i < n; ++i) rperm[i] = i;
                      for (std::size_t i = n; i > 1; --i)
                          std::swap(rperm[i - 1], rperm[uniform_index(rng, i)]);
                      Dataset shuffled = data;
                      ClusterAssignment shuffled_a = a;
                      for (std::size_t j = 0; j < n_vars; ++j)
                          for (std::size_t i = 0; i < n; ++i)
                              shuffled.variables[j].numeric[rperm[i]] =
                                  data.variables[j].numeric[i];
                      for (std::size_t i = 0; i < n; ++i)
                          shuffled_a.labels[rperm[i]] = a.labels[i];
                      const bool rows_ok = score_assignment(shuffled, shuffled_a).total == base;

                      // (c) bucket reorder at the matrix level
                      bool buckets_ok = true;
                      const BinningPlan plan = make_binning_plan(data);
                      for (const auto& binned : plan.binned) {
                          CrossTabMatrix m = crosstab(binned, a);
                          SegregationResult seg = segregated_count(m);
                          const double s =
                              variable_score(seg.n_segregated, m.l, m.k, plan.n_scored).score;
                          CrossTabMatrix moved = m;
                          std::vector<std::size_t> bperm(m.l);
                          for (std::size_t i = 0; i < m.l; ++i) bperm[i] = i;
                          for (std::size_t i = m.l; i > 1; --i)
                              std::swap(bperm[i - 1], bperm[uniform_index(rng, i)]);
                          for (std::size_t i = 0; i < m.l; ++i)
                              for (std::size_t j = 0; j < m.k; ++j)
                                  moved.counts[bperm[i] * m.k + j] = m.at(i, j);
                          SegregationResult seg2 = segregated_count(moved);
                          const double s2 =
                              variable_score(seg2.n_segregated, moved.l, moved.k, plan.n_scored)
                                  .score;
                          if (s2 != s || seg2.median != seg.median) buckets_ok = false;
                      }

                      if (relabel_ok && rows_ok && buckets_ok) ++ok_runs;
                  }
                  d = std::to_string(ok_runs) + "/100 invariant";
                  return ok_runs == 100;
              });

    criterion(6, "explanation factor strictly decreases in k and in l", [](std::string& d) {
        bool ok = true;
        for (std::size_t k = 1; k < 50; ++k)
            if (!(variable_score(1, 6, k + 1, 846).explanation_factor <
                  variable_score(1, 6, k, 846).explanation_factor))
                ok = false;
        for (std::size_t l = 1; l < 50; ++l)
            if (!(variable_score(1, l + 1, 6, 846).explanation_factor <
                  variable_score(1, l, 6, 846).explanation_factor))
                ok = false;
        d = "k, l = 1..50 at N_d = 846";
        return ok;
    });

    criterion(7, "vehicle sweep: finite curve, argmax in [4,8] across 5 seeds",
              [](std::string& d) {
                  Dataset vehicle;
                  std::string source;
                  const bool real = load_vehicle(vehicle, source);

                  const auto t0 = std::chrono::steady_clock::now();
                  bool all_finite = true;
                  std::vector<std::size_t> argmaxes;
                  for (std::uint64_t seed = 0; seed < 5; ++seed) {
                      Dataset data = real ? vehicle : fixtures::make_standin_vehicle(seed);
                      KMeansConfig cfg;
                      cfg.seed = seed;
                      cfg.n_restarts = 10;
                      ScoreCurve curve = k_sweep(data, 2, 10, cfg);
                      for (const auto& [k, report] : curve.points)
                          if (!std::isfinite(report.total)) all_finite = false;
                      KSuggestion s = suggest_k(curve);
                      argmaxes.push_back(s.argmax_k.value_or(0));
                  }
                  const double ms = elapsed_ms(t0);

                  bool in_range = true;
                  std::ostringstream os;
                  os << source << "; argmax per seed:";
                  for (auto a : argmaxes) {
                      os << " " << a;
                      if (a < 4 || a > 8) in_range = false;
                  }
                  os << "; " << ms / 1000.0 << " s";
                  d = os.str();
                  return all_finite && in_range && ms < 30000.0;
              });

    criterion(8, "noise variables rank below informative ones in >= 45/50 trials",
              [](std::string& d) {
                  int wins = 0;
                  for (std::uint64_t seed = 0; seed < 50; ++seed) {
                      fixtures::BlobData blobs = fixtures::make_blobs3(seed);
                      KMeansConfig cfg;
                      cfg.k = 3;
                      cfg.seed = seed;
                      cfg.n_restarts = 10;
                      ClusterAssignment a = kmeans(blobs.dataset, cfg);
                      ImpactReport impact = variable_impact(blobs.dataset, a);
                      std::map<std::string, double> score;
                      for (const auto& row : impact.rows) score[row.variable] = row.score;
                      double min_inf = std::numeric_limits<double>::infinity();
                      double max_noise = -std::numeric_limits<double>::infinity();
                      for (const auto& name : blobs.informative)
                          min_inf = std::min(min_inf, score.at(name));
                      for (const auto& name : blobs.noise)
                          max_noise = std::max(max_noise, score.at(name));
                      if (min_inf > max_noise) ++wins;
                  }
                  d = std::to_string(wins) + "/50 trials separated";
                  return wins >= 45;
              });

    criterion(9, "cmd_sweep reruns byte-identically", [](std::string& d) {
        fixtures::BlobData blobs = fixtures::make_blobs3(31, 60);
        auto dir = fixtures::make_temp_dir("accept9");
        const auto data = (dir / "blobs.csv").string();
        save_dataset_csv(blobs.dataset, data);

        RunConfig config;
        config.data_path = data;
        config.k_min = 2;
        config.k_max = 5;
        config.kmeans.n_restarts = 5;
        config.seed = 2024;
        config.out_dir = (dir / "a").string();
        RunConfig again = config;
        again.out_dir = (dir / "b").string();
        {
            StdoutMute mute;
            cmd_sweep(config);
            cmd_sweep(again);
        }

        const std::string a = fixtures::read_file(fs::path(config.out_dir) / "curve.csv");
        const std::string b = fixtures::read_file(fs::path(again.out_dir) / "curve.csv");
        d = std::to_string(a.size()) + " bytes";
        return !a.empty() && a == b;
    });

    std::cout << (g_failures == 0 ? "all criteria passed" :
                                    std::to_string(g_failures) + " criterion(s) failed")
              << std::endl;
    return g_failures;
}
