#include "cluscore/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cluscore/error.hpp"
#include "cluscore/fingerprint.hpp"
#include "cluscore/rng.hpp"

namespace cluscore {

namespace {

BinStrategy strategy_for(const Variable& var, const BinSpec& spec) {
    auto it = spec.per_variable.find(var.name);
    if (it != spec.per_variable.end()) return it->second;
    if (var.kind == VarKind::Numeric && spec.global) return *spec.global;
    return default_strategy(var);
}

std::string canonical_plan_text(const Dataset& dataset,
                                const std::vector<BinnedVariable>& binned,
                                const std::vector<std::string>& strategy_desc,
                                std::size_t n_scored) {
    std::ostringstream os;
    os << "data=" << dataset.name << ";nd=" << n_scored << ";";
    char buf[64];
    for (std::size_t v = 0; v < binned.size(); ++v) {
        os << "var=" << binned[v].source_name << "|" << strategy_desc[v] << "|l=" << binned[v].l
           << "|";
        if (!binned[v].edges.empty()) {
            os << "edges=";
            for (std::size_t i = 0; i < binned[v].edges.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.17g", binned[v].edges[i]);
                os << (i ? "," : "") << buf;
            }
        } else {
            os << "levels=";
            for (std::size_t i = 0; i < binned[v].labels.size(); ++i)
                os << (i ? "," : "") << binned[v].labels[i];
        }
        os << ";";
    }
    return os.str();
}

}  // namespace

BinningPlan make_binning_plan(const Dataset& dataset, const BinSpec& spec) {
    if (dataset.variables.empty()) throw Error("dataset has no variables to score");
    if (dataset.n_obs == 0) throw Error("dataset has no observations");

    for (const auto& [name, strat] : spec.per_variable) {
        (void)strat;
        if (!dataset.find(name)) throw Error("bin override for unknown variable '" + name + "'");
    }

    BinningPlan plan;
    plan.scored.assign(dataset.n_obs, 1);
    std::vector<std::string> strategy_desc;

    std::vector<BinnedVariable> raw;
    for (const auto& var : dataset.variables) {
        BinStrategy strat = strategy_for(var, spec);
        raw.push_back(bin_variable(var, strat));
        strategy_desc.push_back(strat.describe());
        for (std::size_t i = 0; i < dataset.n_obs; ++i)
            if (var.missing[i]) plan.scored[i] = 0;
    }

    plan.n_scored = 0;
    for (char s : plan.scored) plan.n_scored += (s != 0);
    plan.excluded_rows = dataset.n_obs - plan.n_scored;
    if (plan.n_scored == 0)
        throw Error("every row has a missing value among the scored variables");

    plan.binned.reserve(raw.size());
    for (auto& b : raw) plan.binned.push_back(b.masked(plan.scored));

    for (const auto& b : plan.binned)
        if (b.l == 1)
            plan.notes.push_back("variable '" + b.source_name +
                                 "' is degenerate: a single bucket (l = 1)");
    if (plan.excluded_rows > 0)
        plan.notes.push_back(std::to_string(plan.excluded_rows) +
                             " row(s) excluded: missing value in a scored variable");

    plan.fingerprint =
        fnv1a64_hex(canonical_plan_text(dataset, plan.binned, strategy_desc, plan.n_scored));
    return plan;
}

ScoreReport score_with_plan(const BinningPlan& plan, const ClusterAssignment& assignment,
                            const std::map<std::string, double>& weights) {
    assignment.validate(plan.scored.size());

    std::vector<VariableScore> scores;
    std::vector<std::string> warnings = plan.notes;
    scores.reserve(plan.binned.size());
    for (const auto& binned : plan.binned) {
        CrossTabMatrix m = crosstab(binned, assignment);
        if (static_cast<std::size_t>(m.total) != plan.n_scored)
            throw Error("internal: cross-tab total " + std::to_string(m.total) +
                        " != scored rows " + std::to_string(plan.n_scored));
        SegregationResult seg = segregated_count(m);
        VariableScore vs = variable_score(seg.n_segregated, m.l, m.k, plan.n_scored);
        vs.variable = binned.source_name;
        if (vs.explanation_factor <= 0.0)
            warnings.push_back("variable '" + vs.variable +
                               "': explanation factor <= 0 (l*k >= N_d); scores may be negative");
        scores.push_back(std::move(vs));
    }

    ScoreReport report = dataset_score(std::move(scores), weights);
    report.k = assignment.k;
    report.n_d = plan.n_scored;
    report.excluded_rows = plan.excluded_rows;
    report.binning_fingerprint = plan.fingerprint;
    report.warnings = std::move(warnings);
    return report;
}

ScoreReport score_assignment(const Dataset& dataset, const ClusterAssignment& assignment,
                             const BinSpec& spec, const std::map<std::string, double>& weights) {
    return score_with_plan(make_binning_plan(dataset, spec), assignment, weights);
}

ScoreCurve k_sweep(const Dataset& dataset, std::size_t k_min, std::size_t k_max,
                   const KMeansConfig& config, const BinSpec& spec,
                   const std::map<std::string, double>& weights) {
    if (k_min < 1 || k_min > k_max) throw Error("k_sweep: need 1 <= k_min <= k_max");
    if (k_max > dataset.n_obs) throw Error("k_sweep: k_max exceeds n_obs");

    std::vector<std::string> numeric;
    for (const auto& v : dataset.variables)
        if (v.kind == VarKind::Numeric) numeric.push_back(v.name);
    if (numeric.empty()) throw Error("k_sweep: dataset has no numeric variables to cluster");

    const BinningPlan plan = make_binning_plan(dataset, spec);

    ScoreCurve curve;
    curve.method = "kmeans";
    curve.binning_fingerprint = plan.fingerprint;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        KMeansConfig cfg = config;
        cfg.k = k;
        cfg.seed = derive_seed(config.seed, k);
        ClusterAssignment assignment = kmeans_fit(dataset, numeric, cfg).assignment;
        curve.points.emplace_back(k, score_with_plan(plan, assignment, weights));
    }
    return curve;
}

ComparisonReport compare_methods(
    const Dataset& dataset,
    const std::vector<std::pair<std::string, ClusterAssignment>>& assignments,
    const BinSpec& spec, const std::map<std::string, double>& weights) {
    if (assignments.empty()) throw Error("compare_methods: no assignments given");

    const BinningPlan plan = make_binning_plan(dataset, spec);

    ComparisonReport report;
    report.binning_fingerprint = plan.fingerprint;
    report.n_d = plan.n_scored;
    report.excluded_rows = plan.excluded_rows;
    for (const auto& [name, assignment] : assignments) {
        ScoreReport sr = score_with_plan(plan, assignment, weights);
        ComparisonEntry entry;
        entry.method = name;
        entry.k = assignment.k;
        entry.total = sr.total;
        entry.per_variable = std::move(sr.per_variable);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

ImpactReport variable_impact(const Dataset& dataset, const ClusterAssignment& assignment,
                             const BinSpec& spec) {
    ScoreReport sr = score_assignment(dataset, assignment, spec);

    ImpactReport report;
    report.k = sr.k;
    report.binning_fingerprint = sr.binning_fingerprint;
    report.warnings = sr.warnings;
    for (const auto& vs : sr.per_variable) {
        ImpactRow row;
        row.variable = vs.variable;
        row.score = vs.score;
        row.segregation_factor = vs.segregation_factor;
        row.explanation_factor = vs.explanation_factor;
        row.degenerate = (vs.l == 1);
        report.rows.push_back(std::move(row));
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const ImpactRow& a, const ImpactRow& b) { return a.score > b.score; });
    return report;
}

KSuggestion suggest_k(const std::vector<std::pair<std::size_t, double>>& points) {
    if (points.size() < 2) throw Error("suggest_k: curve has fewer than 2 points");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].first <= points[i - 1].first)
            throw Error("suggest_k: k values must be strictly increasing");

    KSuggestion out;
    bool any_nonfinite = false;
    for (const auto& [k, t] : points)
        if (!std::isfinite(t)) any_nonfinite = true;
    if (any_nonfinite) out.warnings.push_back("curve contains non-finite totals");

    // argmax, smallest k on ties
    std::size_t arg = 0;
    bool have = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].second)) continue;
        if (!have || points[i].second > points[arg].second) {
            arg = i;
            have = true;
        }
    }
    if (have) out.argmax_k = points[arg].first;

    bool nondecreasing = true, nonincreasing = true;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].second < points[i - 1].second) nondecreasing = false;
        if (points[i].second > points[i - 1].second) nonincreasing = false;
    }
    if (nondecreasing || nonincreasing) {
        out.warnings.push_back("no interior optimum: totals are monotone over the k range");
        return out;
    }

    // Knee: interior point with maximum perpendicular distance to the chord
    // joining the curve's endpoints.
    const double x0 = static_cast<double>(points.front().first), y0 = points.front().second;
    const double x1 = static_cast<double>(points.back().first), y1 = points.back().second;
    const double norm = std::hypot(x1 - x0, y1 - y0);
    double best = 0.0;
    std::optional<std::size_t> knee;
    for (std::size_t i = 1; i + 1 < points.size(); ++i) {
        if (!std::isfinite(points[i].second)) continue;
        const double xi = static_cast<double>(points[i].first), yi = points[i].second;
        const double dist =
            std::fabs((x1 - x0) * (y0 - yi) - (x0 - xi) * (y1 - y0)) / (norm > 0 ? norm : 1.0);
        if (dist > best) {
            best = dist;
            knee = points[i].first;
        }
    }
    if (best > 0.0) out.knee_k = knee;
    return out;
}

KSuggestion suggest_k(const ScoreCurve& curve) {
    std::vector<std::pair<std::size_t, double>> points;
    points.reserve(curve.points.size());
    for (const auto& [k, report] : curve.points) points.emplace_back(k, report.total);
    return suggest_k(points);
}

}  // namespace cluscore
