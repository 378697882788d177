#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "morphml/core/rng.hpp"
#include "morphml/dataset/table.hpp"

namespace morphml {

struct TabularSpec {
    std::size_t n_samples = 178;
    std::size_t n_features = 10;  // first column is named fd and drives labels
    double class_balance = 0.37;  // positive fraction, allocated deterministically
    double label_noise = 0.0;     // sd of noise added to fd before thresholding
    std::size_t n_outliers = 0;   // injected cells far beyond the 2-sigma band
    std::size_t n_duplicate_columns = 0;
    std::uint64_t seed = 0;
};

struct InjectedOutlier {
    std::size_t row, col;
    double value;
};

struct TabularData {
    FeatureTable table;
    std::vector<InjectedOutlier> injected_outliers;
    std::vector<std::string> duplicate_columns; // names of the injected copies
};

// Seeded numeric table whose label is a threshold on the fd column (plus
// optional noise), with the positive count fixed exactly by class_balance.
// Base features are uniform in [-1, 1] so the natural spread never crosses
// the 2-sigma band; injected outliers are therefore exactly the cells any
// correct outlier imputation must touch.
inline TabularData gen_tabular(const TabularSpec& spec) {
    if (spec.n_samples < 4) throw InvalidArgument("need at least 4 samples");
    if (spec.n_features < 1) throw InvalidArgument("need at least 1 feature");
    const std::size_t n_pos = static_cast<std::size_t>(
        std::llround(spec.class_balance * static_cast<double>(spec.n_samples)));
    if (n_pos < 1 || n_pos >= spec.n_samples)
        throw InvalidArgument("class balance leaves a class empty");
    if (spec.n_duplicate_columns > spec.n_features)
        throw InvalidArgument("more duplicate columns than source columns");

    TableSchema schema;
    schema.push_back({"fd", ColumnKind::Numeric, {}});
    for (std::size_t c = 1; c < spec.n_features; ++c)
        schema.push_back({"x" + std::to_string(c), ColumnKind::Numeric, {}});
    for (std::size_t d = 0; d < spec.n_duplicate_columns; ++d)
        schema.push_back({schema[d].name + "_dup", ColumnKind::Numeric, {}});

    TabularData data{FeatureTable::build(schema, spec.n_samples), {}, {}};
    Rng values_rng(spec.seed, "tabular-values");
    for (std::size_t r = 0; r < spec.n_samples; ++r)
        for (std::size_t c = 0; c < spec.n_features; ++c)
            data.table.set_cell(r, c, values_rng.uniform(-1.0, 1.0));
    for (std::size_t d = 0; d < spec.n_duplicate_columns; ++d) {
        data.duplicate_columns.push_back(schema[spec.n_features + d].name);
        for (std::size_t r = 0; r < spec.n_samples; ++r)
            data.table.set_cell(r, spec.n_features + d, data.table.cell(r, d));
    }

    // labels: the n_pos rows with the highest noisy fd score are positive
    Rng label_rng(spec.seed, "tabular-labels");
    std::vector<double> score(spec.n_samples);
    for (std::size_t r = 0; r < spec.n_samples; ++r)
        score[r] = data.table.cell(r, 0) + spec.label_noise * label_rng.normal();
    std::vector<std::size_t> order(spec.n_samples);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    std::vector<int> labels(spec.n_samples, 0);
    for (std::size_t k = 0; k < n_pos; ++k) labels[order[k]] = 1;
    data.table.set_labels(std::move(labels));

    // outliers: magnitude 10 against a [-1, 1] base; unique cells
    Rng outlier_rng(spec.seed, "tabular-outliers");
    std::size_t attempts = 0;
    while (data.injected_outliers.size() < spec.n_outliers) {
        if (++attempts > 100 * spec.n_outliers + 100)
            throw InvalidArgument("could not place the requested outliers");
        const std::size_t r = outlier_rng.below(spec.n_samples);
        const std::size_t c = outlier_rng.below(spec.n_features);
        bool taken = false;
        for (const auto& o : data.injected_outliers)
            taken = taken || (o.row == r && o.col == c);
        if (taken) continue;
        const double v = outlier_rng.below(2) ? 10.0 : -10.0;
        data.table.set_cell(r, c, v);
        if (c < spec.n_duplicate_columns) data.table.set_cell(r, spec.n_features + c, v);
        data.injected_outliers.push_back({r, c, v});
    }
    return data;
}

} // namespace morphml
