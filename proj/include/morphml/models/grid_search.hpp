#pragma once

#include <map>
#include <string>
#include <vector>

#include "morphml/eval/metrics.hpp"
#include "morphml/models/fit.hpp"

namespace morphml {

struct GridCell {
    ClassifierSpec spec;
    std::map<std::string, std::string> assignment; // textual, in enumeration order
    double mean_auc = 0.0;
    bool failed = false;
    std::string error;
};

struct GridSearchResult {
    ClassifierSpec best;
    double best_score = 0.0;
    std::vector<GridCell> table;
};

// Exhaustive Cartesian grid over textual hyperparameter values; each cell is
// scored by stratified k-fold mean AUC. Ties go to the earlier cell in
// enumeration order (first key varies slowest, map-sorted keys).
inline GridSearchResult grid_search(const ClassifierSpec& base,
                                    const std::map<std::string, std::vector<std::string>>& grid,
                                    const Matrix& x,
                                    const std::vector<std::string>& feature_names,
                                    const std::vector<int>& y, int folds, std::uint64_t seed) {
    if (grid.empty()) throw InvalidArgument("empty hyperparameter grid");
    for (const auto& [name, values] : grid)
        if (values.empty()) throw InvalidArgument("empty value list for '" + name + "'");
    if (folds < 2) throw InvalidArgument("grid search needs >= 2 folds");

    std::vector<std::string> keys;
    for (const auto& [name, values] : grid) keys.push_back(name);

    const std::vector<int> fold_of = stratified_folds(y, folds, seed);

    GridSearchResult result;
    std::vector<std::size_t> index(keys.size(), 0);
    bool done = false;
    while (!done) {
        GridCell cell;
        cell.spec = base;
        cell.spec.seed = seed;
        try {
            for (std::size_t k = 0; k < keys.size(); ++k) {
                const std::string& value = grid.at(keys[k])[index[k]];
                cell.assignment[keys[k]] = value;
                cell.spec.set_param_text(keys[k], value);
            }
            for (int f = 0; f < folds; ++f) {
                std::vector<std::size_t> train_rows, test_rows;
                for (std::size_t i = 0; i < y.size(); ++i)
                    (fold_of[i] == f ? test_rows : train_rows).push_back(i);
                Matrix xt(train_rows.size(), x.cols()), xv(test_rows.size(), x.cols());
                std::vector<int> yt(train_rows.size()), yv(test_rows.size());
                for (std::size_t i = 0; i < train_rows.size(); ++i) {
                    yt[i] = y[train_rows[i]];
                    for (std::size_t c = 0; c < x.cols(); ++c) xt(i, c) = x(train_rows[i], c);
                }
                for (std::size_t i = 0; i < test_rows.size(); ++i) {
                    yv[i] = y[test_rows[i]];
                    for (std::size_t c = 0; c < x.cols(); ++c) xv(i, c) = x(test_rows[i], c);
                }
                const ClassifierModel model = fit(cell.spec, xt, feature_names, yt);
                cell.mean_auc += auc(yv, predict_proba(model, xv, feature_names));
            }
            cell.mean_auc /= static_cast<double>(folds);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
            cell.mean_auc = 0.0;
        }
        result.table.push_back(cell);

        // odometer increment: last key fastest
        done = true;
        for (std::size_t k = keys.size(); k-- > 0;) {
            if (++index[k] < grid.at(keys[k]).size()) {
                done = false;
                break;
            }
            index[k] = 0;
        }
    }

    std::ptrdiff_t best = -1;
    for (std::size_t i = 0; i < result.table.size(); ++i) {
        if (result.table[i].failed) continue;
        if (best < 0 || result.table[i].mean_auc >
                            result.table[static_cast<std::size_t>(best)].mean_auc)
            best = static_cast<std::ptrdiff_t>(i);
    }
    if (best < 0) throw ConfigError("every grid cell failed: " + result.table.front().error);
    result.best = result.table[static_cast<std::size_t>(best)].spec;
    result.best_score = result.table[static_cast<std::size_t>(best)].mean_auc;
    return result;
}

} // namespace morphml
