#include "cluscore/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cluscore/error.hpp"

namespace cluscore {

const char* to_string(VarKind kind) {
    return kind == VarKind::Numeric ? "numeric" : "categorical";
}

std::size_t Variable::missing_count() const {
    std::size_t n = 0;
    for (char m : missing) n += (m != 0);
    return n;
}

std::size_t Variable::distinct_count() const {
    if (kind == VarKind::Numeric) {
        std::set<double> seen;
        for (std::size_t i = 0; i < missing.size(); ++i)
            if (!missing[i]) seen.insert(numeric[i]);
        return seen.size();
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < missing.size(); ++i)
        if (!missing[i]) seen.insert(categorical[i]);
    return seen.size();
}

bool Variable::operator==(const Variable& other) const {
    if (name != other.name || kind != other.kind || missing != other.missing) return false;
    for (std::size_t i = 0; i < missing.size(); ++i) {
        if (missing[i]) continue;
        if (kind == VarKind::Numeric) {
            if (numeric[i] != other.numeric[i]) return false;
        } else {
            if (categorical[i] != other.categorical[i]) return false;
        }
    }
    return true;
}

const Variable* Dataset::find(const std::string& var_name) const {
    for (const auto& v : variables)
        if (v.name == var_name) return &v;
    return nullptr;
}

const Variable& Dataset::at(const std::string& var_name) const {
    const Variable* v = find(var_name);
    if (!v) throw Error("unknown variable '" + var_name + "'");
    return *v;
}

std::vector<std::string> Dataset::variable_names() const {
    std::vector<std::string> names;
    names.reserve(variables.size());
    for (const auto& v : variables) names.push_back(v.name);
    return names;
}

bool Dataset::operator==(const Dataset& other) const {
    return n_obs == other.n_obs && variables == other.variables;
}

namespace {

struct RawCell {
    std::string text;
    bool quoted = false;
};

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

// RFC-4180-style tokenizer: quoted fields may contain the delimiter, newlines
// and doubled quotes. Unquoted fields are whitespace-trimmed.
std::vector<std::vector<RawCell>> tokenize_csv(const std::string& text, char delimiter) {
    std::vector<std::vector<RawCell>> rows;
    std::vector<RawCell> row;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;

    auto end_field = [&] {
        RawCell cell;
        cell.quoted = was_quoted;
        cell.text = was_quoted ? field : trimmed(field);
        row.push_back(std::move(cell));
        field.clear();
        was_quoted = false;
    };
    // Every newline outside quotes terminates a record, so blank lines stay
    // visible as single empty fields (a missing value in a one-column file).
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && trimmed(field).empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
            field.clear();
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (was_quoted && (c == ' ' || c == '\t' || c == '\r')) {
            // whitespace between a closing quote and the field terminator
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw Error("unterminated quoted field at end of input");
    if (!field.empty() || !row.empty() || was_quoted) end_row();
    return rows;
}

bool parse_finite_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+' && s.size() > 1) ++begin;  // from_chars rejects a leading '+'
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return false;
    if (!std::isfinite(value)) return false;
    out = value;
    return true;
}

bool is_missing(const RawCell& cell, const std::vector<std::string>& markers) {
    if (cell.quoted) return cell.text.empty();
    for (const auto& m : markers)
        if (cell.text == m) return true;
    return false;
}

std::string csv_escape(const std::string& s, char delimiter,
                       const std::vector<std::string>& markers) {
    bool needs_quotes = s.find(delimiter) != std::string::npos ||
                        s.find('"') != std::string::npos ||
                        s.find('\n') != std::string::npos ||
                        s.find('\r') != std::string::npos;
    if (!needs_quotes && !s.empty() && (s.front() == ' ' || s.back() == ' ')) needs_quotes = true;
    if (!needs_quotes)
        for (const auto& m : markers)
            if (s == m) { needs_quotes = true; break; }
    if (!needs_quotes) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset parse_dataset(const std::string& csv_text, const std::string& name,
                      const CsvOptions& options) {
    auto rows = tokenize_csv(csv_text, options.delimiter);
    if (rows.empty()) throw Error("dataset '" + name + "': no rows found");

    std::vector<std::string> column_names;
    std::size_t first_data_row = 0;
    if (options.header) {
        for (const auto& cell : rows[0]) column_names.push_back(cell.text);
        first_data_row = 1;
    } else {
        for (std::size_t j = 0; j < rows[0].size(); ++j)
            column_names.push_back("v" + std::to_string(j + 1));
    }

    std::unordered_set<std::string> seen;
    for (const auto& cn : column_names) {
        if (cn.empty()) throw Error("dataset '" + name + "': empty column name in header");
        if (!seen.insert(cn).second)
            throw Error("dataset '" + name + "': duplicate column name '" + cn + "'");
    }

    const std::size_t n_cols = column_names.size();
    const std::size_t n_obs = rows.size() - first_data_row;
    if (n_obs == 0) throw Error("dataset '" + name + "': zero data rows");

    for (std::size_t r = first_data_row; r < rows.size(); ++r) {
        if (rows[r].size() != n_cols)
            throw Error("dataset '" + name + "': ragged row " + std::to_string(r + 1) +
                        " has " + std::to_string(rows[r].size()) + " fields, expected " +
                        std::to_string(n_cols));
    }

    Dataset dataset;
    dataset.name = name;
    dataset.n_obs = n_obs;
    dataset.variables.resize(n_cols);

    for (std::size_t j = 0; j < n_cols; ++j) {
        Variable& var = dataset.variables[j];
        var.name = column_names[j];
        var.missing.assign(n_obs, 0);

        // Typing pass: Numeric iff every non-missing field parses as a finite real.
        bool numeric_ok = true;
        std::vector<double> parsed(n_obs, std::numeric_limits<double>::quiet_NaN());
        std::size_t first_bad_row = 0;
        for (std::size_t i = 0; i < n_obs; ++i) {
            const RawCell& cell = rows[first_data_row + i][j];
            if (is_missing(cell, options.missing_markers)) {
                var.missing[i] = 1;
                continue;
            }
            if (numeric_ok && !parse_finite_real(cell.text, parsed[i])) {
                numeric_ok = false;
                first_bad_row = first_data_row + i + 1;
            }
        }

        auto ov = options.type_overrides.find(var.name);
        VarKind kind = numeric_ok ? VarKind::Numeric : VarKind::Categorical;
        if (ov != options.type_overrides.end()) kind = ov->second;
        if (kind == VarKind::Numeric && !numeric_ok)
            throw Error("dataset '" + name + "': column '" + var.name +
                        "' overridden to numeric but row " + std::to_string(first_bad_row) +
                        " does not parse as a finite real");

        var.kind = kind;
        if (kind == VarKind::Numeric) {
            var.numeric = std::move(parsed);
        } else {
            var.categorical.assign(n_obs, "");
            for (std::size_t i = 0; i < n_obs; ++i)
                if (!var.missing[i]) var.categorical[i] = rows[first_data_row + i][j].text;
        }
    }
    return dataset;
}

Dataset load_dataset(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string base = path;
    if (auto pos = base.find_last_of("/\\"); pos != std::string::npos) base = base.substr(pos + 1);
    if (auto pos = base.rfind('.'); pos != std::string::npos) base = base.substr(0, pos);
    return parse_dataset(buf.str(), base, options);
}

void save_dataset_csv(const Dataset& dataset, const std::string& path,
                      const CsvOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write dataset file '" + path + "'");
    const char d = options.delimiter;
    const std::string missing_marker =
        options.missing_markers.empty() ? "" : options.missing_markers.front();

    if (options.header) {
        for (std::size_t j = 0; j < dataset.variables.size(); ++j) {
            if (j) out << d;
            out << csv_escape(dataset.variables[j].name, d, options.missing_markers);
        }
        out << "\n";
    }
    char buf[64];
    for (std::size_t i = 0; i < dataset.n_obs; ++i) {
        for (std::size_t j = 0; j < dataset.variables.size(); ++j) {
            const Variable& var = dataset.variables[j];
            if (j) out << d;
            if (var.missing[i]) {
                out << missing_marker;
            } else if (var.kind == VarKind::Numeric) {
                std::snprintf(buf, sizeof(buf), "%.17g", var.numeric[i]);
                out << buf;
            } else {
                out << csv_escape(var.categorical[i], d, options.missing_markers);
            }
        }
        out << "\n";
    }
    if (!out) throw Error("write failed for '" + path + "'");
}

Dataset drop_variables(const Dataset& dataset, const std::set<std::string>& names) {
    for (const auto& n : names)
        if (!dataset.find(n)) throw Error("drop_variables: unknown variable '" + n + "'");
    Dataset out;
    out.name = dataset.name;
    out.n_obs = dataset.n_obs;
    for (const auto& v : dataset.variables)
        if (!names.count(v.name)) out.variables.push_back(v);
    return out;
}

Dataset select_variables(const Dataset& dataset, const std::vector<std::string>& names) {
    std::set<std::string> wanted(names.begin(), names.end());
    for (const auto& n : wanted)
        if (!dataset.find(n)) throw Error("select_variables: unknown variable '" + n + "'");
    Dataset out;
    out.name = dataset.name;
    out.n_obs = dataset.n_obs;
    for (const auto& v : dataset.variables)
        if (wanted.count(v.name)) out.variables.push_back(v);
    return out;
}

}  // namespace cluscore
