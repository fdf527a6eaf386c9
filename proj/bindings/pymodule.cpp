#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cluscore/analysis.hpp"
#include "cluscore/binning.hpp"
#include "cluscore/dataset.hpp"
#include "cluscore/error.hpp"
#include "cluscore/kmeans.hpp"
#include "cluscore/metric.hpp"
#include "cluscore/report_io.hpp"

namespace py = pybind11;
using namespace cluscore;

namespace {

CsvOptions make_csv_options(const std::string& delimiter, bool header,
                            const std::optional<std::vector<std::string>>& missing,
                            const std::map<std::string, std::string>& type_overrides) {
    CsvOptions opts;
    if (delimiter.size() != 1) throw Error("delimiter must be a single character");
    opts.delimiter = delimiter[0];
    opts.header = header;
    if (missing) opts.missing_markers = *missing;
    for (const auto& [name, kind] : type_overrides) {
        if (kind == "numeric") opts.type_overrides[name] = VarKind::Numeric;
        else if (kind == "categorical") opts.type_overrides[name] = VarKind::Categorical;
        else throw Error("type override must be 'numeric' or 'categorical'");
    }
    return opts;
}

BinSpec make_bin_spec(const std::optional<std::string>& global,
                      const std::map<std::string, std::string>& overrides) {
    BinSpec spec;
    if (global) spec.global = parse_bin_strategy(*global, 10);
    for (const auto& [name, text] : overrides)
        spec.per_variable[name] = parse_bin_strategy(text, 10);
    return spec;
}

KMeansConfig make_kmeans_config(std::size_t k, std::uint64_t seed, std::size_t restarts,
                                std::size_t max_iters, double tolerance, bool standardize) {
    KMeansConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    cfg.n_restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.tolerance = tolerance;
    cfg.standardize = standardize;
    return cfg;
}

ClusterAssignment assignment_from_labels(const std::vector<std::int32_t>& labels) {
    ClusterAssignment a;
    a.labels = labels;
    std::int32_t mx = 0;
    for (auto v : labels) mx = std::max(mx, v);
    a.k = static_cast<std::size_t>(std::max(mx, 1));
    a.source.kind = ClusterAssignment::Source::Kind::Imported;
    a.source.path = "<python>";
    a.validate(labels.size());
    return a;
}

}  // namespace

PYBIND11_MODULE(_cluscore, m) {
    m.doc() = "cluster health scoring from cross-tab segregation";

    py::register_exception<Error>(m, "ClusError");

    py::class_<Variable>(m, "Variable")
        .def_readonly("name", &Variable::name)
        .def_property_readonly("kind",
                               [](const Variable& v) { return std::string(to_string(v.kind)); })
        .def_property_readonly("values",
                               [](const Variable& v) -> py::object {
                                   if (v.kind == VarKind::Numeric) return py::cast(v.numeric);
                                   return py::cast(v.categorical);
                               })
        .def_property_readonly("missing",
                               [](const Variable& v) {
                                   std::vector<bool> out(v.missing.begin(), v.missing.end());
                                   return out;
                               })
        .def("missing_count", &Variable::missing_count)
        .def("distinct_count", &Variable::distinct_count);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("name", &Dataset::name)
        .def_readonly("n_obs", &Dataset::n_obs)
        .def_property_readonly("variables", [](const Dataset& d) { return d.variables; })
        .def("variable_names", &Dataset::variable_names)
        .def("variable", &Dataset::at, py::arg("name"),
             py::return_value_policy::reference_internal)
        .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; })
        .def("__repr__", [](const Dataset& d) {
            return "<Dataset '" + d.name + "' " + std::to_string(d.n_obs) + " x " +
                   std::to_string(d.variables.size()) + ">";
        });

    m.def(
        "load_dataset",
        [](const std::string& path, const std::string& delimiter, bool header,
           const std::optional<std::vector<std::string>>& missing,
           const std::map<std::string, std::string>& type_overrides) {
            return load_dataset(path,
                                make_csv_options(delimiter, header, missing, type_overrides));
        },
        py::arg("path"), py::arg("delimiter") = ",", py::arg("header") = true,
        py::arg("missing") = py::none(), py::arg("type_overrides") = py::dict());

    m.def(
        "parse_dataset",
        [](const std::string& text, const std::string& name, const std::string& delimiter,
           bool header, const std::optional<std::vector<std::string>>& missing,
           const std::map<std::string, std::string>& type_overrides) {
            return parse_dataset(text, name,
                                 make_csv_options(delimiter, header, missing, type_overrides));
        },
        py::arg("text"), py::arg("name") = "dataset", py::arg("delimiter") = ",",
        py::arg("header") = true, py::arg("missing") = py::none(),
        py::arg("type_overrides") = py::dict());

    m.def("drop_variables",
          [](const Dataset& d, const std::vector<std::string>& names) {
              return drop_variables(d, std::set<std::string>(names.begin(), names.end()));
          },
          py::arg("dataset"), py::arg("names"));
    m.def("select_variables", &select_variables, py::arg("dataset"), py::arg("names"));

    py::class_<BinStrategy>(m, "BinStrategy")
        .def_static("fixed_width", &BinStrategy::fixed_width, py::arg("width"),
                    py::arg("max_bins") = 100)
        .def_static("fixed_count", &BinStrategy::fixed_count, py::arg("bins"))
        .def_static("decile", &BinStrategy::decile)
        .def_static("categorical_levels", &BinStrategy::categorical_levels)
        .def("describe", &BinStrategy::describe)
        .def("__repr__", [](const BinStrategy& s) { return "<BinStrategy " + s.describe() + ">"; });

    py::class_<BinnedVariable>(m, "BinnedVariable")
        .def_readonly("source_name", &BinnedVariable::source_name)
        .def_readonly("l", &BinnedVariable::l)
        .def_readonly("labels", &BinnedVariable::labels)
        .def_readonly("edges", &BinnedVariable::edges)
        .def_readonly("bin_index", &BinnedVariable::bin_index)
        .def("included_count", &BinnedVariable::included_count);

    m.def(
        "bin_numeric",
        [](const std::vector<double>& values, const BinStrategy& strategy,
           const std::string& name) { return bin_numeric(values, strategy, name); },
        py::arg("values"), py::arg("strategy"), py::arg("name") = "");
    m.def(
        "encode_categorical",
        [](const std::vector<std::string>& values,
           const std::optional<std::vector<bool>>& missing, const std::string& name) {
            std::vector<char> mask(values.size(), 0);
            if (missing) {
                if (missing->size() != values.size())
                    throw Error("missing mask length mismatch");
                for (std::size_t i = 0; i < values.size(); ++i) mask[i] = (*missing)[i] ? 1 : 0;
            }
            return encode_categorical(values, mask, name);
        },
        py::arg("values"), py::arg("missing") = py::none(), py::arg("name") = "");
    m.def(
        "bin_variable",
        [](const Dataset& dataset, const std::string& variable, const BinStrategy& strategy) {
            return bin_variable(dataset.at(variable), strategy);
        },
        py::arg("dataset"), py::arg("variable"), py::arg("strategy"));
    m.def("default_strategy",
          [](const Dataset& dataset, const std::string& variable) {
              return default_strategy(dataset.at(variable));
          },
          py::arg("dataset"), py::arg("variable"));

    py::class_<ClusterAssignment>(m, "ClusterAssignment")
        .def(py::init(&assignment_from_labels), py::arg("labels"))
        .def_readonly("k", &ClusterAssignment::k)
        .def_readonly("labels", &ClusterAssignment::labels)
        .def_property_readonly("source",
                               [](const ClusterAssignment& a) {
                                   using K = ClusterAssignment::Source::Kind;
                                   py::dict d;
                                   d["kind"] = a.source.kind == K::BuiltInKMeans ? "kmeans"
                                                                                 : "imported";
                                   if (a.source.kind == K::BuiltInKMeans)
                                       d["seed"] = a.source.seed;
                                   else
                                       d["path"] = a.source.path;
                                   return d;
                               })
        .def("__repr__", [](const ClusterAssignment& a) {
            return "<ClusterAssignment k=" + std::to_string(a.k) + " n=" +
                   std::to_string(a.labels.size()) + ">";
        });

    py::class_<CrossTabMatrix>(m, "CrossTabMatrix")
        .def_readonly("variable", &CrossTabMatrix::variable)
        .def_readonly("l", &CrossTabMatrix::l)
        .def_readonly("k", &CrossTabMatrix::k)
        .def_readonly("row_labels", &CrossTabMatrix::row_labels)
        .def_readonly("total", &CrossTabMatrix::total)
        .def_property_readonly("counts", [](const CrossTabMatrix& m_) {
            std::vector<std::vector<std::int64_t>> rows(m_.l);
            for (std::size_t i = 0; i < m_.l; ++i)
                for (std::size_t j = 0; j < m_.k; ++j) rows[i].push_back(m_.at(i, j));
            return rows;
        });

    py::class_<SegregationResult>(m, "SegregationResult")
        .def_readonly("l", &SegregationResult::l)
        .def_readonly("k", &SegregationResult::k)
        .def_readonly("median", &SegregationResult::median)
        .def_readonly("n_segregated", &SegregationResult::n_segregated)
        .def_property_readonly("mask", [](const SegregationResult& s) {
            return sparse_mask_render(s);
        });

    py::class_<VariableScore>(m, "VariableScore")
        .def_readonly("variable", &VariableScore::variable)
        .def_readonly("l", &VariableScore::l)
        .def_readonly("k", &VariableScore::k)
        .def_readonly("n_segregated", &VariableScore::n_segregated)
        .def_readonly("segregation_factor", &VariableScore::segregation_factor)
        .def_readonly("explanation_factor", &VariableScore::explanation_factor)
        .def_readonly("score", &VariableScore::score)
        .def_readonly("weight", &VariableScore::weight);

    py::class_<ScoreReport>(m, "ScoreReport")
        .def_readonly("k", &ScoreReport::k)
        .def_readonly("n_d", &ScoreReport::n_d)
        .def_readonly("excluded_rows", &ScoreReport::excluded_rows)
        .def_readonly("per_variable", &ScoreReport::per_variable)
        .def_readonly("total", &ScoreReport::total)
        .def_readonly("binning_fingerprint", &ScoreReport::binning_fingerprint)
        .def_readonly("warnings", &ScoreReport::warnings);

    py::class_<OutlierCell>(m, "OutlierCell")
        .def_readonly("bucket_label", &OutlierCell::bucket_label)
        .def_readonly("bucket", &OutlierCell::bucket)
        .def_readonly("cluster_id", &OutlierCell::cluster_id)
        .def_readonly("count", &OutlierCell::count)
        .def_readonly("observation_ids", &OutlierCell::observation_ids);

    m.def("crosstab", &crosstab, py::arg("binned"), py::arg("assignment"));
    m.def("crosstab_from_counts", &crosstab_from_counts, py::arg("variable"), py::arg("counts"),
          py::arg("row_labels") = std::vector<std::string>{});
    m.def("segregated_count", &segregated_count, py::arg("matrix"));
    m.def("variable_score", &variable_score, py::arg("n_segregated"), py::arg("l"), py::arg("k"),
          py::arg("n_d"));
    m.def("dataset_score", &dataset_score, py::arg("scores"),
          py::arg("weights") = std::map<std::string, double>{});
    m.def("outlier_cells", &outlier_cells, py::arg("matrix"), py::arg("segregation"));
    m.def("sparse_mask_render", &sparse_mask_render, py::arg("segregation"));

    m.def(
        "kmeans",
        [](const Dataset& dataset, std::size_t k, std::uint64_t seed, std::size_t restarts,
           std::size_t max_iters, double tolerance, bool standardize) {
            return kmeans(dataset,
                          make_kmeans_config(k, seed, restarts, max_iters, tolerance, standardize));
        },
        py::arg("dataset"), py::arg("k"), py::arg("seed") = 0, py::arg("restarts") = 10,
        py::arg("max_iters") = 100, py::arg("tolerance") = 1e-6, py::arg("standardize") = true);
    m.def(
        "kmeans_fit",
        [](const Dataset& dataset, const std::vector<std::string>& variables, std::size_t k,
           std::uint64_t seed, std::size_t restarts, std::size_t max_iters, double tolerance,
           bool standardize) {
            KMeansResult r = kmeans_fit(
                dataset, variables,
                make_kmeans_config(k, seed, restarts, max_iters, tolerance, standardize));
            py::dict d;
            d["assignment"] = r.assignment;
            d["wcss"] = r.wcss;
            d["iterations"] = r.iterations;
            d["restart_index"] = r.restart_index;
            d["objective_trace"] = r.objective_trace;
            return d;
        },
        py::arg("dataset"), py::arg("variables"), py::arg("k"), py::arg("seed") = 0,
        py::arg("restarts") = 10, py::arg("max_iters") = 100, py::arg("tolerance") = 1e-6,
        py::arg("standardize") = true);
    m.def("load_assignment", &load_assignment, py::arg("path"), py::arg("dataset"));

    m.def(
        "score",
        [](const Dataset& dataset, const ClusterAssignment& assignment,
           const std::optional<std::string>& bins,
           const std::map<std::string, std::string>& bin_overrides,
           const std::map<std::string, double>& weights) {
            return score_assignment(dataset, assignment, make_bin_spec(bins, bin_overrides),
                                    weights);
        },
        py::arg("dataset"), py::arg("assignment"), py::arg("bins") = py::none(),
        py::arg("bin_overrides") = py::dict(), py::arg("weights") = py::dict());

    py::class_<ScoreCurve>(m, "ScoreCurve")
        .def_readonly("method", &ScoreCurve::method)
        .def_readonly("binning_fingerprint", &ScoreCurve::binning_fingerprint)
        .def_property_readonly("points",
                               [](const ScoreCurve& c) {
                                   py::list out;
                                   for (const auto& [k, report] : c.points)
                                       out.append(py::make_tuple(k, report));
                                   return out;
                               })
        .def_property_readonly("totals", [](const ScoreCurve& c) {
            std::vector<std::pair<std::size_t, double>> out;
            for (const auto& [k, report] : c.points) out.emplace_back(k, report.total);
            return out;
        });

    m.def(
        "k_sweep",
        [](const Dataset& dataset, std::size_t k_min, std::size_t k_max, std::uint64_t seed,
           std::size_t restarts, std::size_t max_iters, double tolerance, bool standardize,
           const std::optional<std::string>& bins,
           const std::map<std::string, std::string>& bin_overrides,
           const std::map<std::string, double>& weights) {
            KMeansConfig cfg =
                make_kmeans_config(2, seed, restarts, max_iters, tolerance, standardize);
            return k_sweep(dataset, k_min, k_max, cfg, make_bin_spec(bins, bin_overrides), weights);
        },
        py::arg("dataset"), py::arg("k_min"), py::arg("k_max"), py::arg("seed") = 0,
        py::arg("restarts") = 10, py::arg("max_iters") = 100, py::arg("tolerance") = 1e-6,
        py::arg("standardize") = true, py::arg("bins") = py::none(),
        py::arg("bin_overrides") = py::dict(), py::arg("weights") = py::dict());

    py::class_<ComparisonEntry>(m, "ComparisonEntry")
        .def_readonly("method", &ComparisonEntry::method)
        .def_readonly("k", &ComparisonEntry::k)
        .def_readonly("total", &ComparisonEntry::total)
        .def_readonly("per_variable", &ComparisonEntry::per_variable);

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("entries", &ComparisonReport::entries)
        .def_readonly("binning_fingerprint", &ComparisonReport::binning_fingerprint)
        .def_readonly("n_d", &ComparisonReport::n_d)
        .def_readonly("excluded_rows", &ComparisonReport::excluded_rows);

    m.def(
        "compare_methods",
        [](const Dataset& dataset,
           const std::vector<std::pair<std::string, ClusterAssignment>>& assignments,
           const std::optional<std::string>& bins,
           const std::map<std::string, std::string>& bin_overrides,
           const std::map<std::string, double>& weights) {
            return compare_methods(dataset, assignments, make_bin_spec(bins, bin_overrides),
                                   weights);
        },
        py::arg("dataset"), py::arg("assignments"), py::arg("bins") = py::none(),
        py::arg("bin_overrides") = py::dict(), py::arg("weights") = py::dict());

    py::class_<ImpactRow>(m, "ImpactRow")
        .def_readonly("variable", &ImpactRow::variable)
        .def_readonly("score", &ImpactRow::score)
        .def_readonly("segregation_factor", &ImpactRow::segregation_factor)
        .def_readonly("explanation_factor", &ImpactRow::explanation_factor)
        .def_readonly("degenerate", &ImpactRow::degenerate);

    py::class_<ImpactReport>(m, "ImpactReport")
        .def_readonly("k", &ImpactReport::k)
        .def_readonly("rows", &ImpactReport::rows)
        .def_readonly("binning_fingerprint", &ImpactReport::binning_fingerprint)
        .def_readonly("warnings", &ImpactReport::warnings);

    m.def(
        "variable_impact",
        [](const Dataset& dataset, const ClusterAssignment& assignment,
           const std::optional<std::string>& bins,
           const std::map<std::string, std::string>& bin_overrides) {
            return variable_impact(dataset, assignment, make_bin_spec(bins, bin_overrides));
        },
        py::arg("dataset"), py::arg("assignment"), py::arg("bins") = py::none(),
        py::arg("bin_overrides") = py::dict());

    m.def("suggest_k",
          [](const std::vector<std::pair<std::size_t, double>>& points) {
              KSuggestion s = suggest_k(points);
              py::dict d;
              d["argmax_k"] = s.argmax_k ? py::object(py::cast(*s.argmax_k)) : py::none();
              d["knee_k"] = s.knee_k ? py::object(py::cast(*s.knee_k)) : py::none();
              d["warnings"] = s.warnings;
              return d;
          },
          py::arg("points"));

    m.attr("__version__") = "0.1.0";
}
