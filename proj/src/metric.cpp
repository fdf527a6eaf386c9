#include "cluscore/metric.hpp"

#include <algorithm>
#include <cmath>

#include "cluscore/error.hpp"

namespace cluscore {

void ClusterAssignment::validate(std::size_t n_obs) const {
    if (k < 1) throw Error("cluster assignment has k = 0");
    if (labels.size() != n_obs)
        throw Error("cluster assignment covers " + std::to_string(labels.size()) +
                    " observations, dataset has " + std::to_string(n_obs));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 1 || static_cast<std::size_t>(labels[i]) > k)
            throw Error("cluster label " + std::to_string(labels[i]) + " at row " +
                        std::to_string(i + 1) + " outside 1.." + std::to_string(k));
    }
}

CrossTabMatrix crosstab(const BinnedVariable& binned, const ClusterAssignment& assignment) {
    if (binned.bin_index.size() != assignment.labels.size())
        throw Error("crosstab: variable '" + binned.source_name + "' covers " +
                    std::to_string(binned.bin_index.size()) + " observations, assignment " +
                    std::to_string(assignment.labels.size()));

    CrossTabMatrix m;
    m.variable = binned.source_name;
    m.l = binned.l;
    m.k = assignment.k;
    m.row_labels = binned.labels;
    m.counts.assign(m.l * m.k, 0);
    m.row_ids.assign(m.l * m.k, {});

    for (std::size_t i = 0; i < binned.bin_index.size(); ++i) {
        const std::int32_t b = binned.bin_index[i];
        if (b == BinnedVariable::kExcluded) continue;
        const std::int32_t c = assignment.labels[i];
        const std::size_t cell = static_cast<std::size_t>(b - 1) * m.k +
                                 static_cast<std::size_t>(c - 1);
        ++m.counts[cell];
        m.row_ids[cell].push_back(static_cast<std::int32_t>(i));
        ++m.total;
    }
    return m;
}

CrossTabMatrix crosstab_from_counts(const std::string& variable,
                                    const std::vector<std::vector<std::int64_t>>& counts,
                                    std::vector<std::string> row_labels) {
    if (counts.empty() || counts.front().empty())
        throw Error("crosstab_from_counts: empty matrix");
    CrossTabMatrix m;
    m.variable = variable;
    m.l = counts.size();
    m.k = counts.front().size();
    for (std::size_t i = 0; i < m.l; ++i) {
        if (counts[i].size() != m.k)
            throw Error("crosstab_from_counts: ragged row " + std::to_string(i + 1));
        for (std::int64_t c : counts[i]) {
            if (c < 0) throw Error("crosstab_from_counts: negative cell count");
            m.counts.push_back(c);
            m.total += c;
        }
    }
    if (row_labels.empty()) {
        for (std::size_t i = 1; i <= m.l; ++i) row_labels.push_back("bucket" + std::to_string(i));
    }
    if (row_labels.size() != m.l)
        throw Error("crosstab_from_counts: row label count mismatch");
    m.row_labels = std::move(row_labels);
    return m;
}

SegregationResult segregated_count(const CrossTabMatrix& m) {
    if (m.l == 0 || m.k == 0 || m.counts.size() != m.l * m.k)
        throw Error("segregated_count: invalid cross-tab for '" + m.variable + "'");

    // Median over ALL l*k cells, zeros included; even cell counts average the
    // two middle order statistics.
    std::vector<std::int64_t> sorted(m.counts);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double median;
    if (n % 2 == 1) {
        median = static_cast<double>(sorted[n / 2]);
    } else {
        median = 0.5 * (static_cast<double>(sorted[n / 2 - 1]) +
                        static_cast<double>(sorted[n / 2]));
    }

    SegregationResult seg;
    seg.l = m.l;
    seg.k = m.k;
    seg.median = median;
    seg.mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<double>(m.counts[i]) > median) {  // strict inequality
            seg.mask[i] = 1;
            ++seg.n_segregated;
        }
    }
    return seg;
}

VariableScore variable_score(std::size_t n_segregated, std::size_t l, std::size_t k,
                             std::size_t n_d) {
    if (l < 1 || k < 1 || n_d < 1)
        throw Error("variable_score: l, k and n_d must all be >= 1");
    if (n_segregated > l * k)
        throw Error("variable_score: n_segregated exceeds l*k");

    VariableScore s;
    s.l = l;
    s.k = k;
    s.n_segregated = n_segregated;
    s.segregation_factor =
        static_cast<double>(n_segregated) / static_cast<double>(std::max(l, k));
    s.explanation_factor =
        std::log(static_cast<double>(n_d) / static_cast<double>(l * k));
    s.score = s.segregation_factor * s.explanation_factor;
    return s;
}

ScoreReport dataset_score(std::vector<VariableScore> scores,
                          const std::map<std::string, double>& weights) {
    for (const auto& [name, w] : weights) {
        if (w < 0) throw Error("weight for '" + name + "' is negative");
        bool known = false;
        for (const auto& s : scores)
            if (s.variable == name) { known = true; break; }
        if (!known) throw Error("weight given for unknown variable '" + name + "'");
    }

    ScoreReport report;
    double total = 0.0;
    for (auto& s : scores) {
        auto it = weights.find(s.variable);
        s.weight = (it == weights.end()) ? 1.0 : it->second;
        total += s.weight * s.score;
    }
    report.per_variable = std::move(scores);
    report.total = total;
    return report;
}

std::vector<OutlierCell> outlier_cells(const CrossTabMatrix& m, const SegregationResult& seg) {
    if (seg.l != m.l || seg.k != m.k)
        throw Error("outlier_cells: segregation result does not match matrix shape");

    std::vector<OutlierCell> cells;
    for (std::size_t i = 0; i < m.l; ++i) {
        for (std::size_t j = 0; j < m.k; ++j) {
            const std::int64_t c = m.at(i, j);
            if (c <= 0 || static_cast<double>(c) > seg.median) continue;
            OutlierCell cell;
            cell.bucket_label = m.row_labels[i];
            cell.bucket = i + 1;
            cell.cluster_id = j + 1;
            cell.count = c;
            if (!m.row_ids.empty()) cell.observation_ids = m.row_ids[i * m.k + j];
            cells.push_back(std::move(cell));
        }
    }
    std::stable_sort(cells.begin(), cells.end(), [](const OutlierCell& a, const OutlierCell& b) {
        if (a.count != b.count) return a.count < b.count;
        if (a.bucket != b.bucket) return a.bucket < b.bucket;
        return a.cluster_id < b.cluster_id;
    });
    return cells;
}

std::vector<std::vector<int>> sparse_mask_render(const SegregationResult& seg) {
    std::vector<std::vector<int>> table(seg.l, std::vector<int>(seg.k, 0));
    for (std::size_t i = 0; i < seg.l; ++i)
        for (std::size_t j = 0; j < seg.k; ++j)
            table[i][j] = seg.mask[i * seg.k + j] ? 1 : 0;
    return table;
}

}  // namespace cluscore
