#include "cluscore/binning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "cluscore/error.hpp"

namespace cluscore {

BinStrategy BinStrategy::fixed_width(double width, std::size_t max_bins) {
    if (!(width > 0)) throw Error("fixed-width binning requires width > 0");
    BinStrategy s;
    s.kind = Kind::FixedWidth;
    s.width = width;
    s.max_bins = max_bins;
    return s;
}

BinStrategy BinStrategy::fixed_count(std::size_t bins) {
    if (bins < 1) throw Error("fixed-count binning requires bins >= 1");
    BinStrategy s;
    s.kind = Kind::FixedCount;
    s.bins = bins;
    return s;
}

BinStrategy BinStrategy::decile() {
    BinStrategy s;
    s.kind = Kind::Decile;
    return s;
}

BinStrategy BinStrategy::categorical_levels() {
    BinStrategy s;
    s.kind = Kind::CategoricalLevels;
    return s;
}

std::string BinStrategy::describe() const {
    char buf[64];
    switch (kind) {
        case Kind::FixedWidth:
            std::snprintf(buf, sizeof(buf), "fixedwidth(%.12g)", width);
            return buf;
        case Kind::FixedCount:
            std::snprintf(buf, sizeof(buf), "fixedcount(%zu)", bins);
            return buf;
        case Kind::Decile:
            return "decile";
        case Kind::CategoricalLevels:
            return "levels";
    }
    return "?";
}

std::size_t BinnedVariable::included_count() const {
    std::size_t n = 0;
    for (auto b : bin_index) n += (b != kExcluded);
    return n;
}

BinnedVariable BinnedVariable::masked(const std::vector<char>& keep) const {
    if (keep.size() != bin_index.size())
        throw Error("mask length mismatch for variable '" + source_name + "'");
    BinnedVariable out = *this;
    for (std::size_t i = 0; i < keep.size(); ++i)
        if (!keep[i]) out.bin_index[i] = kExcluded;
    return out;
}

namespace {

std::string format_edge(double x, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    return buf;
}

std::vector<std::string> interval_labels(const std::vector<double>& edges, int precision) {
    const std::size_t l = edges.size() - 1;
    std::vector<std::string> labels(l);
    for (std::size_t i = 0; i < l; ++i) {
        labels[i] = "[" + format_edge(edges[i], precision) + "," +
                    format_edge(edges[i + 1], precision) + (i + 1 == l ? "]" : ")");
    }
    return labels;
}

bool all_unique(const std::vector<std::string>& labels) {
    std::set<std::string> seen(labels.begin(), labels.end());
    return seen.size() == labels.size();
}

// Type-7 empirical quantile (linear interpolation) over sorted values.
double quantile7(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    double h = static_cast<double>(n - 1) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo >= n - 1) return sorted[n - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

BinnedVariable bin_numeric(std::span<const double> values, const BinStrategy& strategy,
                           const std::string& name) {
    if (strategy.kind == BinStrategy::Kind::CategoricalLevels)
        throw Error("variable '" + name + "': categorical-levels strategy on numeric values");

    std::vector<double> present;
    present.reserve(values.size());
    for (double v : values) {
        if (std::isnan(v)) continue;
        if (!std::isfinite(v))
            throw Error("variable '" + name + "': non-finite value in numeric input");
        present.push_back(v);
    }
    if (present.empty()) throw Error("variable '" + name + "': all values missing");

    auto [mn_it, mx_it] = std::minmax_element(present.begin(), present.end());
    const double mn = *mn_it, mx = *mx_it;

    std::vector<double> edges;
    switch (strategy.kind) {
        case BinStrategy::Kind::FixedWidth: {
            const double w = strategy.width;
            if (!(w > 0)) throw Error("variable '" + name + "': fixed width must be > 0");
            const double anchor = std::floor(mn / w) * w;
            std::size_t l = 1;
            if (mx > anchor) {
                double q = (mx - anchor) / w;
                l = static_cast<std::size_t>(std::ceil(q - 1e-9));
                if (l == 0) l = 1;
            }
            if (l > strategy.max_bins)
                throw Error("variable '" + name + "': width " + format_edge(w, 12) +
                            " yields " + std::to_string(l) + " bins, exceeding max_bins " +
                            std::to_string(strategy.max_bins));
            edges.resize(l + 1);
            for (std::size_t i = 0; i <= l; ++i) edges[i] = anchor + static_cast<double>(i) * w;
            break;
        }
        case BinStrategy::Kind::FixedCount: {
            std::size_t b = strategy.bins;
            if (b < 1) throw Error("variable '" + name + "': bins must be >= 1");
            if (b > strategy.max_bins)
                throw Error("variable '" + name + "': bins " + std::to_string(b) +
                            " exceeds max_bins " + std::to_string(strategy.max_bins));
            if (mx == mn) {
                edges = {mn, mx};
                break;
            }
            edges.resize(b + 1);
            for (std::size_t i = 0; i <= b; ++i)
                edges[i] = mn + (mx - mn) * (static_cast<double>(i) / static_cast<double>(b));
            edges.front() = mn;
            edges.back() = mx;
            break;
        }
        case BinStrategy::Kind::Decile: {
            std::vector<double> sorted = present;
            std::sort(sorted.begin(), sorted.end());
            edges.push_back(sorted.front());
            for (int i = 1; i <= 10; ++i) {
                double q = quantile7(sorted, static_cast<double>(i) / 10.0);
                if (q > edges.back()) edges.push_back(q);  // duplicate edges merged
            }
            if (edges.size() == 1) edges.push_back(edges.front());
            break;
        }
        case BinStrategy::Kind::CategoricalLevels:
            break;  // unreachable
    }

    const std::size_t l = edges.size() - 1;
    if (l > strategy.max_bins)
        throw Error("variable '" + name + "': " + std::to_string(l) +
                    " bins exceeds max_bins " + std::to_string(strategy.max_bins));

    BinnedVariable out;
    out.source_name = name;
    out.l = l;
    out.edges = edges;
    out.labels = interval_labels(edges, 12);
    if (!all_unique(out.labels)) out.labels = interval_labels(edges, 17);

    out.bin_index.assign(values.size(), BinnedVariable::kExcluded);
    // Interior edges are edges[1..l-1]; an observation lands in the first
    // interval whose right edge exceeds it, and the last interval is closed.
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) continue;
        const double x = values[i];
        auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, x);
        auto idx = static_cast<std::size_t>(it - (edges.begin() + 1));
        out.bin_index[i] = static_cast<std::int32_t>(idx + 1);
    }
    return out;
}

BinnedVariable encode_categorical(std::span<const std::string> values,
                                  std::span<const char> missing,
                                  const std::string& name) {
    if (missing.size() != values.size())
        throw Error("variable '" + name + "': missing mask length mismatch");

    std::set<std::string> distinct;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (missing[i]) continue;
        if (values[i].empty())
            throw Error("variable '" + name + "': empty category token at row " +
                        std::to_string(i + 1));
        distinct.insert(values[i]);
    }
    if (distinct.empty()) throw Error("variable '" + name + "': all values missing");

    BinnedVariable out;
    out.source_name = name;
    out.labels.assign(distinct.begin(), distinct.end());  // lexicographic via std::set
    out.l = out.labels.size();

    std::map<std::string, std::int32_t> rank;
    for (std::size_t i = 0; i < out.labels.size(); ++i)
        rank[out.labels[i]] = static_cast<std::int32_t>(i + 1);

    out.bin_index.assign(values.size(), BinnedVariable::kExcluded);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!missing[i]) out.bin_index[i] = rank[values[i]];
    return out;
}

BinnedVariable bin_variable(const Variable& variable, const BinStrategy& strategy) {
    if (variable.kind == VarKind::Categorical)
        return encode_categorical(variable.categorical, variable.missing, variable.name);

    std::vector<double> vals = variable.numeric;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (variable.missing[i]) vals[i] = std::numeric_limits<double>::quiet_NaN();
    return bin_numeric(vals, strategy, variable.name);
}

BinStrategy default_strategy(const Variable& variable) {
    if (variable.kind == VarKind::Categorical) return BinStrategy::categorical_levels();
    std::size_t distinct = variable.distinct_count();
    if (distinct == 0) distinct = 1;
    return BinStrategy::fixed_count(std::min<std::size_t>(10, distinct));
}

}  // namespace cluscore
