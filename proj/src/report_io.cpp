#include "cluscore/report_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cluscore/error.hpp"
#include "cluscore/fingerprint.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cluscore {

namespace {

constexpr const char* kToolVersion = "0.1.0";

}  // namespace

std::string format_g17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string fingerprint_hex(const std::string& canonical) {
    return fnv1a64_hex(canonical);
}

namespace {

// ---------------------------------------------------------------------------
// Run assembly

struct NamedAssignment {
    std::string name;
    ClusterAssignment assignment;
};

Dataset prepare_dataset(const RunConfig& config) {
    if (config.data_path.empty()) throw ConfigError("--data is required");
    Dataset dataset = load_dataset(config.data_path, config.csv);
    if (!config.include.empty()) dataset = select_variables(dataset, config.include);
    if (!config.exclude.empty())
        dataset = drop_variables(dataset,
                                 std::set<std::string>(config.exclude.begin(),
                                                       config.exclude.end()));
    if (dataset.variables.empty()) throw Error("no variables left after include/exclude");
    return dataset;
}

ClusterAssignment run_builtin_kmeans(const RunConfig& config, const Dataset& dataset,
                                     std::size_t k) {
    KMeansConfig cfg = config.kmeans;
    cfg.k = k;
    cfg.seed = config.seed;
    return kmeans(dataset, cfg);
}

// Exactly one clustering source for score/impact/outliers.
NamedAssignment single_source(const RunConfig& config, const Dataset& dataset) {
    const bool has_k = config.k.has_value();
    const bool has_file = !config.assignments.empty();
    if (has_k == has_file || config.assignments.size() > 1)
        throw ConfigError("exactly one clustering source required: --k N or one --assignment");
    if (has_k) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "kmeans@%zu", *config.k);
        return {buf, run_builtin_kmeans(config, dataset, *config.k)};
    }
    const auto& [name, path] = config.assignments.front();
    return {name, load_assignment(path, dataset)};
}

struct VariableDetail {
    CrossTabMatrix matrix;
    SegregationResult seg;
    std::vector<OutlierCell> outliers;
};

std::vector<VariableDetail> compute_details(const BinningPlan& plan,
                                            const ClusterAssignment& assignment) {
    std::vector<VariableDetail> details;
    details.reserve(plan.binned.size());
    for (const auto& binned : plan.binned) {
        VariableDetail d;
        d.matrix = crosstab(binned, assignment);
        d.seg = segregated_count(d.matrix);
        d.outliers = outlier_cells(d.matrix, d.seg);
        details.push_back(std::move(d));
    }
    return details;
}

// ---------------------------------------------------------------------------
// JSON pieces

json strategy_json(const RunConfig& config) {
    json j;
    j["global"] = config.bins.global ? config.bins.global->describe() : "default";
    json overrides = json::object();
    for (const auto& [name, strat] : config.bins.per_variable) overrides[name] = strat.describe();
    j["overrides"] = overrides;
    return j;
}

json config_json(const RunConfig& config, const std::string& command) {
    json j;
    j["data"] = config.data_path;
    j["delimiter"] = std::string(1, config.csv.delimiter);
    j["header"] = config.csv.header;
    j["missing_markers"] = config.csv.missing_markers;
    json overrides = json::object();
    for (const auto& [name, kind] : config.csv.type_overrides) overrides[name] = to_string(kind);
    j["type_overrides"] = overrides;
    j["include"] = config.include;
    j["exclude"] = config.exclude;
    j["bins"] = strategy_json(config);
    json weights = json::object();
    for (const auto& [name, w] : config.weights) weights[name] = w;
    j["weights"] = weights;
    j["seed"] = config.seed;
    j["command"] = command;
    if (command == "sweep") {
        j["k_min"] = config.k_min;
        j["k_max"] = config.k_max;
    }
    if (config.k) j["k"] = *config.k;
    json sources = json::array();
    for (const auto& [name, path] : config.assignments)
        sources.push_back({{"name", name}, {"path", path}});
    j["assignments"] = sources;
    j["kmeans"] = {{"restarts", config.kmeans.n_restarts},
                   {"max_iters", config.kmeans.max_iters},
                   {"tolerance", config.kmeans.tolerance},
                   {"standardize", config.kmeans.standardize}};
    return j;
}

json matrix_json(const CrossTabMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.l; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.k; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json mask_json(const SegregationResult& seg) {
    json rows = json::array();
    for (const auto& row : sparse_mask_render(seg)) rows.push_back(row);
    return rows;
}

json variable_json(const BinnedVariable& binned, const VariableDetail& d,
                   const VariableScore& vs) {
    json j;
    j["name"] = vs.variable;
    j["l"] = vs.l;
    j["k"] = vs.k;
    j["weight"] = vs.weight;
    j["bucket_labels"] = binned.labels;
    if (!binned.edges.empty()) j["bin_edges"] = binned.edges;
    j["matrix"] = matrix_json(d.matrix);
    j["median"] = d.seg.median;
    j["n_segregated"] = d.seg.n_segregated;
    j["mask"] = mask_json(d.seg);
    j["segregation_factor"] = vs.segregation_factor;
    j["explanation_factor"] = vs.explanation_factor;
    j["score"] = vs.score;
    return j;
}

json outliers_json(const std::string& variable, const std::vector<OutlierCell>& cells) {
    json arr = json::array();
    for (const auto& c : cells) {
        arr.push_back({{"variable", variable},
                       {"bucket", c.bucket},
                       {"bucket_label", c.bucket_label},
                       {"cluster", c.cluster_id},
                       {"count", c.count},
                       {"row_ids", c.observation_ids}});
    }
    return arr;
}

std::string out_path(const RunConfig& config, const std::string& file) {
    return (fs::path(config.out_dir) / file).string();
}

void emit_warnings(const ScoreReport& report) {
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
}

// ---------------------------------------------------------------------------
// CSV assembly

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string score_csv(const ScoreReport& report, const std::vector<VariableDetail>& details) {
    std::ostringstream os;
    os << "variable,l,k,n_d,weight,median,n_segregated,segregation_factor,"
          "explanation_factor,score\n";
    for (std::size_t i = 0; i < report.per_variable.size(); ++i) {
        const auto& vs = report.per_variable[i];
        os << csv_quote(vs.variable) << "," << vs.l << "," << vs.k << "," << report.n_d << ","
           << format_g17(vs.weight) << "," << format_g17(details[i].seg.median) << ","
           << vs.n_segregated << "," << format_g17(vs.segregation_factor) << ","
           << format_g17(vs.explanation_factor) << "," << format_g17(vs.score) << "\n";
    }
    os << "TOTAL,,,,,,,,," << format_g17(report.total) << "\n";
    return os.str();
}

std::string curve_csv(const ScoreCurve& curve) {
    std::ostringstream os;
    os << "k,total";
    if (!curve.points.empty())
        for (const auto& vs : curve.points.front().second.per_variable)
            os << "," << csv_quote(vs.variable);
    os << "\n";
    for (const auto& [k, report] : curve.points) {
        os << k << "," << format_g17(report.total);
        for (const auto& vs : report.per_variable) os << "," << format_g17(vs.weight * vs.score);
        os << "\n";
    }
    return os.str();
}

std::string compare_csv(const ComparisonReport& report) {
    std::ostringstream os;
    os << "method,k,total";
    if (!report.entries.empty())
        for (const auto& vs : report.entries.front().per_variable)
            os << "," << csv_quote(vs.variable);
    os << "\n";
    for (const auto& e : report.entries) {
        os << csv_quote(e.method) << "," << e.k << "," << format_g17(e.total);
        for (const auto& vs : e.per_variable) os << "," << format_g17(vs.weight * vs.score);
        os << "\n";
    }
    return os.str();
}

std::string impact_csv(const ImpactReport& report) {
    std::ostringstream os;
    os << "variable,score,segregation_factor,explanation_factor,degenerate\n";
    for (const auto& row : report.rows) {
        os << csv_quote(row.variable) << "," << format_g17(row.score) << ","
           << format_g17(row.segregation_factor) << "," << format_g17(row.explanation_factor)
           << "," << (row.degenerate ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string outliers_csv(const std::vector<std::pair<std::string, std::vector<OutlierCell>>>&
                             per_variable_cells) {
    std::ostringstream os;
    os << "variable,bucket,bucket_label,cluster,count,row_ids\n";
    for (const auto& [variable, cells] : per_variable_cells) {
        for (const auto& c : cells) {
            std::string ids;
            for (std::size_t i = 0; i < c.observation_ids.size(); ++i) {
                if (i) ids += ";";
                ids += std::to_string(c.observation_ids[i]);
            }
            os << csv_quote(variable) << "," << c.bucket << "," << csv_quote(c.bucket_label)
               << "," << c.cluster_id << "," << c.count << "," << csv_quote(ids) << "\n";
        }
    }
    return os.str();
}

json report_header_json(const RunConfig& config, const std::string& command,
                        const Dataset& dataset, const ScoreReport& report) {
    json j;
    j["tool"] = "cluscore";
    j["version"] = kToolVersion;
    j["command"] = command;
    json cfg = config_json(config, command);
    j["config"] = cfg;
    j["config_fingerprint"] = fingerprint_hex(cfg.dump());
    j["binning_fingerprint"] = report.binning_fingerprint;
    j["dataset"] = {{"name", dataset.name},
                    {"n_obs", dataset.n_obs},
                    {"n_d", report.n_d},
                    {"excluded_rows", report.excluded_rows}};
    j["warnings"] = report.warnings;
    return j;
}

struct ScoreRun {
    Dataset dataset;
    BinningPlan plan;
    NamedAssignment source;
    ScoreReport report;
    std::vector<VariableDetail> details;
};

ScoreRun execute_single(const RunConfig& config) {
    ScoreRun run;
    run.dataset = prepare_dataset(config);
    run.plan = make_binning_plan(run.dataset, config.bins);
    run.source = single_source(config, run.dataset);
    run.report = score_with_plan(run.plan, run.source.assignment, config.weights);
    run.details = compute_details(run.plan, run.source.assignment);
    return run;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

void cmd_score(const RunConfig& config) {
    ScoreRun run = execute_single(config);

    if (config.emit_json) {
        json j = report_header_json(config, "score", run.dataset, run.report);
        j["method"] = run.source.name;
        j["k"] = run.report.k;
        j["total"] = run.report.total;
        json vars = json::array();
        for (std::size_t i = 0; i < run.report.per_variable.size(); ++i)
            vars.push_back(
                variable_json(run.plan.binned[i], run.details[i], run.report.per_variable[i]));
        j["variables"] = vars;
        atomic_write(out_path(config, "report.json"), j.dump(2) + "\n");
    }
    if (config.emit_csv)
        atomic_write(out_path(config, "report.csv"), score_csv(run.report, run.details));

    emit_warnings(run.report);
    std::cout << "score: S^k = " << format_g17(run.report.total) << "  (method "
              << run.source.name << ", k = " << run.report.k << ", N_d = " << run.report.n_d
              << ", " << run.report.per_variable.size() << " variables)\n";
}

void cmd_sweep(const RunConfig& config) {
    if (!config.assignments.empty())
        throw ConfigError("sweep clusters with built-in k-means; --assignment is not accepted");
    if (config.k_min < 1 || config.k_min > config.k_max)
        throw ConfigError("sweep requires 1 <= k-min <= k-max");

    Dataset dataset = prepare_dataset(config);
    KMeansConfig cfg = config.kmeans;
    cfg.seed = config.seed;
    ScoreCurve curve =
        k_sweep(dataset, config.k_min, config.k_max, cfg, config.bins, config.weights);

    KSuggestion suggestion;
    try {
        suggestion = suggest_k(curve);
    } catch (const Error& e) {
        suggestion.warnings.push_back(e.what());
    }

    atomic_write(out_path(config, "curve.csv"), curve_csv(curve));

    json sj;
    sj["argmax_k"] = suggestion.argmax_k ? json(*suggestion.argmax_k) : json(nullptr);
    sj["knee_k"] = suggestion.knee_k ? json(*suggestion.knee_k) : json(nullptr);
    sj["recommended_k"] = suggestion.argmax_k ? json(*suggestion.argmax_k) : json(nullptr);
    sj["recommendation_basis"] = "argmax of the score curve (heuristic)";
    sj["warnings"] = suggestion.warnings;
    atomic_write(out_path(config, "suggestion.json"), sj.dump(2) + "\n");

    if (config.emit_json) {
        const ScoreReport& first = curve.points.front().second;
        json j = report_header_json(config, "sweep", dataset, first);
        j["method"] = curve.method;
        json points = json::array();
        for (const auto& [k, report] : curve.points) {
            json p;
            p["k"] = k;
            p["total"] = report.total;
            json vars = json::array();
            for (const auto& vs : report.per_variable)
                vars.push_back({{"name", vs.variable},
                                {"l", vs.l},
                                {"n_segregated", vs.n_segregated},
                                {"weight", vs.weight},
                                {"segregation_factor", vs.segregation_factor},
                                {"explanation_factor", vs.explanation_factor},
                                {"score", vs.score}});
            p["variables"] = vars;
            points.push_back(std::move(p));
        }
        j["points"] = points;
        j["suggestion"] = sj;
        atomic_write(out_path(config, "sweep.json"), j.dump(2) + "\n");
    }

    for (const auto& w : suggestion.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "sweep: k in [" << config.k_min << "," << config.k_max << "]";
    if (suggestion.argmax_k) std::cout << ", argmax_k = " << *suggestion.argmax_k;
    if (suggestion.knee_k) std::cout << ", knee_k = " << *suggestion.knee_k;
    std::cout << "\n";
    for (const auto& [k, report] : curve.points)
        std::cout << "  k = " << k << "  S^k = " << format_g17(report.total) << "\n";
}

void cmd_compare(const RunConfig& config) {
    Dataset dataset = prepare_dataset(config);

    std::vector<std::pair<std::string, ClusterAssignment>> named;
    if (config.k) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "kmeans@%zu", *config.k);
        named.emplace_back(buf, run_builtin_kmeans(config, dataset, *config.k));
    }
    for (const auto& [name, path] : config.assignments)
        named.emplace_back(name, load_assignment(path, dataset));
    if (named.empty())
        throw ConfigError("compare needs at least one --assignment or --k for built-in k-means");

    ComparisonReport report = compare_methods(dataset, named, config.bins, config.weights);

    if (config.emit_csv) atomic_write(out_path(config, "compare.csv"), compare_csv(report));
    if (config.emit_json) {
        json j;
        j["tool"] = "cluscore";
        j["version"] = kToolVersion;
        j["command"] = "compare";
        json cfg = config_json(config, "compare");
        j["config"] = cfg;
        j["config_fingerprint"] = fingerprint_hex(cfg.dump());
        j["binning_fingerprint"] = report.binning_fingerprint;
        j["dataset"] = {{"name", dataset.name},
                        {"n_obs", dataset.n_obs},
                        {"n_d", report.n_d},
                        {"excluded_rows", report.excluded_rows}};
        json entries = json::array();
        for (const auto& e : report.entries) {
            json vars = json::array();
            for (const auto& vs : e.per_variable)
                vars.push_back({{"name", vs.variable},
                                {"weight", vs.weight},
                                {"segregation_factor", vs.segregation_factor},
                                {"explanation_factor", vs.explanation_factor},
                                {"score", vs.score}});
            entries.push_back(
                {{"method", e.method}, {"k", e.k}, {"total", e.total}, {"variables", vars}});
        }
        j["entries"] = entries;
        atomic_write(out_path(config, "compare.json"), j.dump(2) + "\n");
    }

    std::cout << "compare: " << report.entries.size() << " method(s), N_d = " << report.n_d
              << "\n";
    for (const auto& e : report.entries)
        std::cout << "  " << e.method << " (k = " << e.k << ")  S^k = " << format_g17(e.total)
                  << "\n";
}

void cmd_impact(const RunConfig& config) {
    Dataset dataset = prepare_dataset(config);
    NamedAssignment source = single_source(config, dataset);
    ImpactReport report = variable_impact(dataset, source.assignment, config.bins);

    if (config.emit_csv) atomic_write(out_path(config, "impact.csv"), impact_csv(report));
    if (config.emit_json) {
        json j;
        j["tool"] = "cluscore";
        j["version"] = kToolVersion;
        j["command"] = "impact";
        json cfg = config_json(config, "impact");
        j["config"] = cfg;
        j["config_fingerprint"] = fingerprint_hex(cfg.dump());
        j["binning_fingerprint"] = report.binning_fingerprint;
        j["method"] = source.name;
        j["k"] = report.k;
        j["warnings"] = report.warnings;
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back({{"variable", r.variable},
                            {"score", r.score},
                            {"segregation_factor", r.segregation_factor},
                            {"explanation_factor", r.explanation_factor},
                            {"degenerate", r.degenerate}});
        j["rows"] = rows;
        atomic_write(out_path(config, "impact.json"), j.dump(2) + "\n");
    }

    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "impact: " << report.rows.size() << " variables (method " << source.name
              << ", k = " << report.k << ")\n";
    for (const auto& r : report.rows)
        std::cout << "  " << r.variable << "  score = " << format_g17(r.score)
                  << (r.degenerate ? "  [degenerate]" : "") << "\n";
}

void cmd_outliers(const RunConfig& config) {
    ScoreRun run = execute_single(config);

    std::vector<std::pair<std::string, std::vector<OutlierCell>>> per_variable;
    for (std::size_t i = 0; i < run.plan.binned.size(); ++i)
        per_variable.emplace_back(run.plan.binned[i].source_name, run.details[i].outliers);

    if (config.emit_csv)
        atomic_write(out_path(config, "outliers.csv"), outliers_csv(per_variable));
    if (config.emit_json) {
        json j = report_header_json(config, "outliers", run.dataset, run.report);
        j["method"] = run.source.name;
        j["k"] = run.report.k;
        json cells = json::array();
        for (const auto& [variable, list] : per_variable)
            for (const auto& item : outliers_json(variable, list)) cells.push_back(item);
        j["cells"] = cells;
        atomic_write(out_path(config, "outliers.json"), j.dump(2) + "\n");
    }

    std::size_t n_cells = 0;
    for (const auto& [variable, list] : per_variable) n_cells += list.size();
    std::cout << "outliers: " << n_cells << " sub-median cell(s) across "
              << per_variable.size() << " variables\n";
}

// ---------------------------------------------------------------------------
// Config parsing

BinStrategy parse_bin_strategy(const std::string& text, std::size_t bins_flag) {
    std::string kind = text;
    std::string param;
    for (char sep : {':', '=', '('}) {
        auto pos = text.find(sep);
        if (pos != std::string::npos) {
            kind = text.substr(0, pos);
            param = text.substr(pos + 1);
            if (!param.empty() && param.back() == ')') param.pop_back();
            break;
        }
    }
    std::transform(kind.begin(), kind.end(), kind.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    auto parse_double = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("bad bin strategy parameter '" + s + "'");
        }
    };

    if (kind == "fixedwidth" || kind == "width") {
        if (param.empty()) throw ConfigError("fixedwidth strategy needs a width, e.g. fixedwidth:5");
        double w = parse_double(param);
        if (!(w > 0)) throw ConfigError("fixedwidth width must be > 0");
        return BinStrategy::fixed_width(w);
    }
    if (kind == "fixedcount" || kind == "count") {
        std::size_t bins = bins_flag;
        if (!param.empty()) {
            double b = parse_double(param);
            if (b < 1 || b != static_cast<std::size_t>(b))
                throw ConfigError("fixedcount bins must be a positive integer");
            bins = static_cast<std::size_t>(b);
        }
        if (bins < 1) throw ConfigError("fixedcount bins must be >= 1");
        return BinStrategy::fixed_count(bins);
    }
    if (kind == "decile") return BinStrategy::decile();
    if (kind == "levels" || kind == "categorical") return BinStrategy::categorical_levels();
    throw ConfigError("unknown bin strategy '" + text +
                      "' (expected fixedcount[:N], fixedwidth:W, decile, levels)");
}

std::map<std::string, double> parse_weights(const std::string& text) {
    std::map<std::string, double> weights;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto pos = item.find('=');
        if (pos == std::string::npos || pos == 0)
            throw ConfigError("bad weight '" + item + "' (expected name=value)");
        std::string name = item.substr(0, pos);
        double w;
        try {
            std::size_t used = 0;
            w = std::stod(item.substr(pos + 1), &used);
            if (used != item.size() - pos - 1) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad weight value in '" + item + "'");
        }
        if (w < 0) throw ConfigError("weight for '" + name + "' is negative");
        weights[name] = w;
    }
    return weights;
}

void apply_config_file(RunConfig& config, const std::string& path,
                       const std::vector<std::string>& flags_set) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");

    std::set<std::string> set_flags(flags_set.begin(), flags_set.end());
    auto unset = [&](const char* flag) { return !set_flags.count(flag); };

    try {
        if (j.contains("data") && unset("data")) config.data_path = j["data"].get<std::string>();
        if (j.contains("delimiter") && unset("delimiter")) {
            std::string d = j["delimiter"].get<std::string>();
            if (d.size() != 1) throw ConfigError("delimiter must be a single character");
            config.csv.delimiter = d[0];
        }
        if (j.contains("header") && unset("header")) config.csv.header = j["header"].get<bool>();
        if (j.contains("missing") && unset("missing"))
            config.csv.missing_markers = j["missing"].get<std::vector<std::string>>();
        if (j.contains("type_overrides")) {
            for (const auto& [name, kind] : j["type_overrides"].items()) {
                std::string v = kind.get<std::string>();
                if (v == "numeric") config.csv.type_overrides[name] = VarKind::Numeric;
                else if (v == "categorical") config.csv.type_overrides[name] = VarKind::Categorical;
                else throw ConfigError("type override for '" + name + "' must be numeric|categorical");
            }
        }
        if (j.contains("include") && unset("include"))
            config.include = j["include"].get<std::vector<std::string>>();
        if (j.contains("exclude") && unset("exclude"))
            config.exclude = j["exclude"].get<std::vector<std::string>>();
        if (j.contains("bin_strategy") && unset("bin-strategy"))
            config.bins.global = parse_bin_strategy(j["bin_strategy"].get<std::string>(),
                                                    j.value("bins", std::size_t{10}));
        if (j.contains("bin_overrides")) {
            for (const auto& [name, strat] : j["bin_overrides"].items())
                config.bins.per_variable[name] =
                    parse_bin_strategy(strat.get<std::string>(), j.value("bins", std::size_t{10}));
        }
        if (j.contains("weights") && unset("weights")) {
            for (const auto& [name, w] : j["weights"].items()) {
                double value = w.get<double>();
                if (value < 0) throw ConfigError("weight for '" + name + "' is negative");
                config.weights[name] = value;
            }
        }
        if (j.contains("k") && unset("k")) config.k = j["k"].get<std::size_t>();
        if (j.contains("assignments") && unset("assignment")) {
            for (const auto& a : j["assignments"])
                config.assignments.emplace_back(a.at("name").get<std::string>(),
                                                a.at("path").get<std::string>());
        }
        if (j.contains("k_min") && unset("k-min")) config.k_min = j["k_min"].get<std::size_t>();
        if (j.contains("k_max") && unset("k-max")) config.k_max = j["k_max"].get<std::size_t>();
        if (j.contains("seed") && unset("seed")) config.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("restarts") && unset("restarts"))
            config.kmeans.n_restarts = j["restarts"].get<std::size_t>();
        if (j.contains("max_iters") && unset("max-iters"))
            config.kmeans.max_iters = j["max_iters"].get<std::size_t>();
        if (j.contains("tolerance") && unset("tolerance"))
            config.kmeans.tolerance = j["tolerance"].get<double>();
        if (j.contains("standardize") && unset("standardize"))
            config.kmeans.standardize = j["standardize"].get<bool>();
        if (j.contains("out") && unset("out")) config.out_dir = j["out"].get<std::string>();
        if (j.contains("format") && unset("format")) {
            std::string f = j["format"].get<std::string>();
            config.emit_json = f.find("json") != std::string::npos;
            config.emit_csv = f.find("csv") != std::string::npos;
            if (!config.emit_json && !config.emit_csv)
                throw ConfigError("format must name json and/or csv");
        }
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

}  // namespace cluscore
