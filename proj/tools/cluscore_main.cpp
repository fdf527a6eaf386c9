#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cluscore/error.hpp"
#include "cluscore/report_io.hpp"

namespace {

struct CliArgs {
    std::string data;
    std::string config_file;
    std::string delimiter = ",";
    bool no_header = false;
    std::string missing;
    std::vector<std::string> include;
    std::vector<std::string> exclude;
    std::vector<std::string> as_categorical;
    std::vector<std::string> as_numeric;
    std::size_t bins = 10;
    std::string bin_strategy;
    std::vector<std::string> bin_overrides;
    std::string weights;
    std::size_t k = 0;
    std::vector<std::string> assignments;
    std::size_t k_min = 2;
    std::size_t k_max = 10;
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    std::size_t max_iters = 100;
    double tolerance = 1e-6;
    bool no_standardize = false;
    std::string out = ".";
    std::string format = "json,csv";
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.push_back("");
    return parts;
}

void add_common_options(CLI::App* cmd, CliArgs& a) {
    cmd->add_option("--data", a.data, "dataset CSV path");
    cmd->add_option("--config", a.config_file, "JSON config file (flags win)");
    cmd->add_option("--delimiter", a.delimiter, "field delimiter (default ',')");
    cmd->add_flag("--no-header", a.no_header, "dataset has no header row");
    cmd->add_option("--missing", a.missing,
                    "comma-separated missing-value markers (default: empty,NA,?)");
    cmd->add_option("--include", a.include, "score only these variables")->delimiter(',');
    cmd->add_option("--exclude", a.exclude, "leave these variables out")->delimiter(',');
    cmd->add_option("--categorical", a.as_categorical, "force variables to categorical")
        ->delimiter(',');
    cmd->add_option("--numeric", a.as_numeric, "force variables to numeric")->delimiter(',');
    cmd->add_option("--bins", a.bins, "bin count for fixedcount strategies (default 10)");
    cmd->add_option("--bin-strategy", a.bin_strategy,
                    "global numeric strategy: fixedcount[:N] | fixedwidth:W | decile");
    cmd->add_option("--bin-override", a.bin_overrides,
                    "per-variable strategy, name=strategy (repeatable)");
    cmd->add_option("--weights", a.weights, "variable weights, name=w[,name=w...]");
    cmd->add_option("--seed", a.seed, "random seed (default 0)");
    cmd->add_option("--out", a.out, "output directory")->envname("CLUSCORE_OUT");
    cmd->add_option("--format", a.format, "report formats: json,csv (default both)");
}

void add_kmeans_options(CLI::App* cmd, CliArgs& a) {
    cmd->add_option("--restarts", a.restarts, "k-means restarts (default 10)");
    cmd->add_option("--max-iters", a.max_iters, "k-means iteration cap (default 100)");
    cmd->add_option("--tolerance", a.tolerance, "k-means center-movement tolerance");
    cmd->add_flag("--no-standardize", a.no_standardize, "skip z-score standardization");
}

std::vector<std::string> flags_given(const CLI::App* cmd) {
    std::vector<std::string> set;
    for (const auto* opt : cmd->get_options()) {
        if (opt->count() == 0) continue;
        std::string name = opt->get_name();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        set.push_back(name);
    }
    return set;
}

cluscore::RunConfig build_config(const CLI::App* cmd, const CliArgs& a) {
    using cluscore::ConfigError;
    cluscore::RunConfig config;

    config.data_path = a.data;
    if (a.delimiter.size() != 1) throw ConfigError("delimiter must be a single character");
    config.csv.delimiter = a.delimiter[0];
    config.csv.header = !a.no_header;
    if (cmd->count("--missing")) config.csv.missing_markers = split(a.missing, ',');
    for (const auto& n : a.as_categorical)
        config.csv.type_overrides[n] = cluscore::VarKind::Categorical;
    for (const auto& n : a.as_numeric) config.csv.type_overrides[n] = cluscore::VarKind::Numeric;

    config.include = a.include;
    config.exclude = a.exclude;

    if (cmd->count("--bins") && a.bins < 1) throw ConfigError("--bins must be >= 1");
    if (!a.bin_strategy.empty())
        config.bins.global = cluscore::parse_bin_strategy(a.bin_strategy, a.bins);
    else if (cmd->count("--bins"))
        config.bins.global = cluscore::BinStrategy::fixed_count(a.bins);
    for (const auto& item : a.bin_overrides) {
        auto pos = item.find('=');
        if (pos == std::string::npos || pos == 0)
            throw ConfigError("bad --bin-override '" + item + "' (expected name=strategy)");
        config.bins.per_variable[item.substr(0, pos)] =
            cluscore::parse_bin_strategy(item.substr(pos + 1), a.bins);
    }

    if (!a.weights.empty()) config.weights = cluscore::parse_weights(a.weights);
    const CLI::Option* k_opt = cmd->get_option_no_throw("--k");
    if (k_opt && k_opt->count()) config.k = a.k;
    for (const auto& item : a.assignments) {
        auto pos = item.find('=');
        if (pos == std::string::npos || pos == 0) {
            std::string stem = item;
            if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
                stem = stem.substr(slash + 1);
            if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
            config.assignments.emplace_back(stem, item);
        } else {
            config.assignments.emplace_back(item.substr(0, pos), item.substr(pos + 1));
        }
    }

    config.k_min = a.k_min;
    config.k_max = a.k_max;
    config.seed = a.seed;
    config.kmeans.n_restarts = a.restarts;
    config.kmeans.max_iters = a.max_iters;
    config.kmeans.tolerance = a.tolerance;
    config.kmeans.standardize = !a.no_standardize;
    config.out_dir = a.out;

    config.emit_json = a.format.find("json") != std::string::npos;
    config.emit_csv = a.format.find("csv") != std::string::npos;
    if (!config.emit_json && !config.emit_csv)
        throw ConfigError("--format must name json and/or csv");

    if (!a.config_file.empty())
        cluscore::apply_config_file(config, a.config_file, flags_given(cmd));
    if (config.data_path.empty()) throw ConfigError("--data is required");
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluscore - method-agnostic cluster health scoring"};
    app.set_version_flag("--version", "cluscore 0.1.0");
    app.require_subcommand(1);

    CliArgs args;

    CLI::App* score = app.add_subcommand("score", "score one cluster assignment");
    add_common_options(score, args);
    add_kmeans_options(score, args);
    score->add_option("--k", args.k, "built-in k-means cluster count");
    score->add_option("--assignment", args.assignments,
                      "imported assignment, name=path (CSV: row_id,cluster or cluster)");

    CLI::App* sweep = app.add_subcommand("sweep", "score built-in k-means over a k range");
    add_common_options(sweep, args);
    add_kmeans_options(sweep, args);
    sweep->add_option("--k-min", args.k_min, "smallest k (default 2)");
    sweep->add_option("--k-max", args.k_max, "largest k (default 10)");

    CLI::App* compare = app.add_subcommand("compare", "compare methods on one scale");
    add_common_options(compare, args);
    add_kmeans_options(compare, args);
    compare->add_option("--k", args.k, "add a built-in k-means entry with this k");
    compare->add_option("--assignment", args.assignments,
                        "imported assignment, name=path (repeatable)");

    CLI::App* impact = app.add_subcommand("impact", "rank variables by score");
    add_common_options(impact, args);
    add_kmeans_options(impact, args);
    impact->add_option("--k", args.k, "built-in k-means cluster count");
    impact->add_option("--assignment", args.assignments, "imported assignment, name=path");

    CLI::App* outliers = app.add_subcommand("outliers", "extract sub-median cells and rows");
    add_common_options(outliers, args);
    add_kmeans_options(outliers, args);
    outliers->add_option("--k", args.k, "built-in k-means cluster count");
    outliers->add_option("--assignment", args.assignments, "imported assignment, name=path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // usage/config problems exit 2
    }

    try {
        if (score->parsed()) cluscore::cmd_score(build_config(score, args));
        else if (sweep->parsed()) cluscore::cmd_sweep(build_config(sweep, args));
        else if (compare->parsed()) cluscore::cmd_compare(build_config(compare, args));
        else if (impact->parsed()) cluscore::cmd_impact(build_config(impact, args));
        else if (outliers->parsed()) cluscore::cmd_outliers(build_config(outliers, args));
    } catch (const cluscore::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cluscore::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
