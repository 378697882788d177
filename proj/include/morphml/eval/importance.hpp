#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "morphml/eval/metrics.hpp"
#include "morphml/models/fit.hpp"

namespace morphml {

struct ImportanceEntry {
    std::string feature;
    double score = 0.0;
};

// Mean AUC drop over n_shuffles seeded permutations of one column at a time.
// Applies uniformly to every model kind; ranking is descending by drop with
// ties broken by original column order.
inline std::vector<ImportanceEntry> permutation_importance(const ClassifierModel& model,
                                                           const Matrix& x,
                                                           const std::vector<std::string>& names,
                                                           const std::vector<int>& y,
                                                           int n_shuffles, std::uint64_t seed) {
    if (n_shuffles < 1) throw InvalidArgument("need >= 1 shuffle");
    const double baseline = auc(y, predict_proba(model, x, names));
    const Rng base(seed, "perm-importance");

    std::vector<ImportanceEntry> entries(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
        entries[c].feature = names[c];
        const Rng col_rng = base.split(static_cast<std::uint64_t>(c));
        double drop_sum = 0.0;
        for (int s = 0; s < n_shuffles; ++s) {
            Rng rng = col_rng.split(static_cast<std::uint64_t>(s));
            std::vector<std::size_t> perm(x.rows());
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(perm);
            Matrix shuffled = x;
            for (std::size_t r = 0; r < x.rows(); ++r) shuffled(r, c) = x(perm[r], c);
            drop_sum += baseline - auc(y, predict_proba(model, shuffled, names));
        }
        entries[c].score = drop_sum / n_shuffles;
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) {
                         return a.score > b.score;
                     });
    return entries;
}

// Total weighted impurity decrease per split feature, summed over all trees
// and normalized to sum 1. Tree-based kinds only.
inline std::vector<ImportanceEntry> impurity_importance(const ClassifierModel& model) {
    const std::vector<DecisionTree>* trees = nullptr;
    if (model.kind == ModelKind::RandomForest)
        trees = &std::get<ForestParams>(model.params).trees;
    else if (model.kind == ModelKind::Gbt)
        trees = &std::get<GbtParams>(model.params).trees;
    else
        throw UnsupportedKindError("impurity importance requires a tree-based model, got " +
                                   to_string(model.kind));

    std::vector<double> totals(model.feature_names.size(), 0.0);
    for (const auto& tree : *trees)
        for (const auto& node : tree.nodes)
            if (node.feature >= 0)
                totals[static_cast<std::size_t>(node.feature)] += node.impurity_decrease;
    double sum = 0.0;
    for (double t : totals) sum += t;

    std::vector<ImportanceEntry> entries(totals.size());
    for (std::size_t c = 0; c < totals.size(); ++c) {
        entries[c].feature = model.feature_names[c];
        entries[c].score = sum > 0.0 ? totals[c] / sum : 0.0;
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) {
                         return a.score > b.score;
                     });
    return entries;
}

} // namespace morphml
