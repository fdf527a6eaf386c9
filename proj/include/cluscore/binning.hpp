#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cluscore/dataset.hpp"

namespace cluscore {

struct BinStrategy {
    enum class Kind { FixedWidth, FixedCount, Decile, CategoricalLevels };

    Kind kind = Kind::FixedCount;
    double width = 1.0;          // FixedWidth only
    std::size_t bins = 10;       // FixedCount only
    std::size_t max_bins = 100;  // coarseness cap

    static BinStrategy fixed_width(double width, std::size_t max_bins = 100);
    static BinStrategy fixed_count(std::size_t bins);
    static BinStrategy decile();
    static BinStrategy categorical_levels();

    // Short reproducible description, e.g. "fixedwidth(5)"; goes into report
    // fingerprints.
    std::string describe() const;
};

// A variable reduced to l ordered buckets. bin_index holds 1..l per
// observation, or 0 (kExcluded) for observations left out of a scoring run.
struct BinnedVariable {
    static constexpr std::int32_t kExcluded = 0;

    std::string source_name;
    std::size_t l = 0;
    std::vector<std::string> labels;   // size l
    std::vector<double> edges;         // size l+1 for numeric bins, empty for categorical
    std::vector<std::int32_t> bin_index;

    std::size_t included_count() const;

    // Copy with bin_index forced to kExcluded wherever keep[i] is false;
    // used to apply the run-level missing-row exclusion.
    BinnedVariable masked(const std::vector<char>& keep) const;
};

// Bin a numeric value sequence (NaN = missing). Intervals are half-open
// [lo, hi) with the final interval closed so the max is included.
BinnedVariable bin_numeric(std::span<const double> values, const BinStrategy& strategy,
                           const std::string& name = "");

// One bucket per distinct token, labels sorted lexicographically. Empty-string
// entries flagged in `missing` are excluded.
BinnedVariable encode_categorical(std::span<const std::string> values,
                                  std::span<const char> missing,
                                  const std::string& name = "");

// Dispatch on the variable kind; CategoricalLevels strategy is implied for
// categorical variables regardless of the passed strategy.
BinnedVariable bin_variable(const Variable& variable, const BinStrategy& strategy);

// Spec default: numeric -> FixedCount(min(10, distinct)), categorical -> levels.
BinStrategy default_strategy(const Variable& variable);

}  // namespace cluscore
