#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cluscore {

enum class VarKind { Numeric, Categorical };

const char* to_string(VarKind kind);

// One column of a dataset. Numeric columns hold doubles (entries at missing
// positions are NaN), categorical columns hold tokens. `missing` is the
// per-observation mask shared by both kinds.
struct Variable {
    std::string name;
    VarKind kind = VarKind::Numeric;
    std::vector<double> numeric;          // size n_obs when Numeric
    std::vector<std::string> categorical; // size n_obs when Categorical
    std::vector<char> missing;            // size n_obs, 1 = missing

    std::size_t size() const { return missing.size(); }
    std::size_t missing_count() const;
    std::size_t distinct_count() const;   // over non-missing entries

    bool operator==(const Variable& other) const;
};

struct Dataset {
    std::string name;
    std::size_t n_obs = 0;
    std::vector<Variable> variables;

    const Variable* find(const std::string& var_name) const;
    const Variable& at(const std::string& var_name) const;  // throws on unknown name
    std::vector<std::string> variable_names() const;

    bool operator==(const Dataset& other) const;
};

struct CsvOptions {
    char delimiter = ',';
    bool header = true;
    std::vector<std::string> missing_markers = {"", "NA", "?"};
    std::map<std::string, VarKind> type_overrides;
};

// Parse an RFC-4180-style CSV file into a typed dataset. A column is Numeric
// iff every non-missing field parses as a finite real, unless overridden.
Dataset load_dataset(const std::string& path, const CsvOptions& options = {});

// Same parser over an in-memory buffer; `name` becomes the dataset name.
Dataset parse_dataset(const std::string& csv_text, const std::string& name,
                      const CsvOptions& options = {});

// Writes a dataset back out; reloading with the same options round-trips.
void save_dataset_csv(const Dataset& dataset, const std::string& path,
                      const CsvOptions& options = {});

Dataset drop_variables(const Dataset& dataset, const std::set<std::string>& names);

// Keep only the named variables, preserving dataset order. Unknown name throws.
Dataset select_variables(const Dataset& dataset, const std::vector<std::string>& names);

}  // namespace cluscore
