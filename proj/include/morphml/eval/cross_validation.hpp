#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphml/dataset/preprocess.hpp"
#include "morphml/eval/metrics.hpp"
#include "morphml/models/fit.hpp"

namespace morphml {

struct FoldPlan {
    int n_repetitions = 5;
    int n_folds = 5;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> assignments; // [repetition][row] -> fold

    static FoldPlan make(const std::vector<int>& labels, int n_repetitions, int n_folds,
                         std::uint64_t seed) {
        if (n_repetitions < 1) throw InvalidArgument("need >= 1 repetition");
        FoldPlan plan{n_repetitions, n_folds, seed, {}};
        const Rng base(seed, "fold-plan");
        for (int rep = 0; rep < n_repetitions; ++rep) {
            Rng r = base.split(static_cast<std::uint64_t>(rep));
            plan.assignments.push_back(stratified_folds(labels, n_folds, r.next_u64()));
        }
        return plan;
    }
};

struct RepetitionResult {
    std::vector<ClassificationMetrics> fold_metrics; // threshold 0.5, fold order
    ClassificationMetrics pooled_metrics;            // over all held-out rows
    std::vector<RocPoint> roc;                       // pooled held-out scores
    double auc = 0.0;
    std::vector<double> pooled_scores; // held-out scores in row order
    std::vector<int> pooled_labels;
};

struct ModelEvaluation {
    std::string name;
    ClassifierSpec spec;
    std::vector<RepetitionResult> repetitions;
    double median_auc = 0.0;
    std::size_t selected_repetition = 0; // AUC equals the median, first on ties
};

struct CvOptions {
    double outlier_sigma = 2.0;
    double corr_threshold = 0.8;
    bool paper_mode = false;        // true: preprocess once on the full table
    bool use_class_weights = true;  // balanced n/(2 n_c) from the training rows
    int grid_resolution_unused = 0; // reserved
};

namespace detail {

// Preprocessing fitted on the training rows only and applied to the whole
// table: 2-sigma outlier replacement with training medians, correlation
// pruning on training correlations, median fill of missing numerics.
inline std::pair<EncodedMatrix, std::map<int, double>> preprocess_for_fold(
    const FeatureTable& table, const std::vector<std::size_t>& train_rows,
    const CvOptions& opts) {
    FeatureTable work = table;
    const FeatureTable train = table.subset_rows(train_rows);

    // outlier imputation with training statistics
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
        if (table.column(c).kind != ColumnKind::Numeric) continue;
        const auto vals = train.non_missing(c);
        if (vals.size() < 3) continue;
        const auto [mean, sd] = mean_sample_sd(vals);
        if (sd == 0.0) continue;
        const double median = median_of(vals);
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            if (work.is_missing(r, c)) continue;
            if (std::abs(work.cell(r, c) - mean) > opts.outlier_sigma * sd)
                work.set_cell(r, c, median);
        }
    }

    // correlation pruning decided on the training rows
    FeatureTable train_imputed = work.subset_rows(train_rows);
    const auto [pruned_train, prune_report] =
        prune_correlated(train_imputed, opts.corr_threshold);
    std::set<std::size_t> drop;
    for (const auto& d : prune_report.dropped_columns) drop.insert(*work.find_column(d.name));
    work = work.without_columns(drop);

    // fill missing numerics everywhere with the training median
    const FeatureTable train_kept = work.subset_rows(train_rows);
    for (std::size_t c = 0; c < work.n_cols(); ++c) {
        if (work.column(c).kind == ColumnKind::Categorical) continue;
        const double fill = median_of(train_kept.non_missing(c));
        for (std::size_t r = 0; r < work.n_rows(); ++r)
            if (work.is_missing(r, c)) work.set_cell(r, c, fill);
    }

    std::map<int, double> weights;
    if (opts.use_class_weights) weights = class_weights(train_kept);
    return {encode(work), std::move(weights)};
}

inline double median_value(std::vector<double> v) { return median_of(std::move(v)); }

} // namespace detail

// The repeated stratified CV protocol: per repetition, fit on four folds and
// score the fifth, pool the held-out scores into one ROC/AUC per repetition;
// the model's AUC is the median over repetitions and the repetition achieving
// it (first on ties) is recorded.
inline ModelEvaluation repeated_cv(const ClassifierSpec& spec, const FeatureTable& table,
                                   const FoldPlan& plan, const CvOptions& opts = {}) {
    if (!table.has_labels()) throw SchemaError("repeated_cv needs a labeled table");
    const std::vector<int>& y = table.labels();
    for (const auto& rep : plan.assignments)
        if (rep.size() != table.n_rows())
            throw InvalidArgument("fold plan does not cover the table's rows");

    ModelEvaluation eval;
    eval.name = to_string(spec.kind);
    eval.spec = spec;

    // paper mode: one global preprocessing pass, shared by every fold
    std::optional<std::pair<EncodedMatrix, std::map<int, double>>> global;
    if (opts.paper_mode) {
        std::vector<std::size_t> all(table.n_rows());
        std::iota(all.begin(), all.end(), 0);
        global = detail::preprocess_for_fold(table, all, opts);
    }

    for (int rep = 0; rep < plan.n_repetitions; ++rep) {
        const std::vector<int>& fold_of = plan.assignments[static_cast<std::size_t>(rep)];
        RepetitionResult result;
        result.pooled_scores.assign(table.n_rows(), 0.0);
        result.pooled_labels = y;
        std::vector<int> pooled_pred(table.n_rows(), 0);

        for (int f = 0; f < plan.n_folds; ++f) {
            std::vector<std::size_t> train_rows, test_rows;
            for (std::size_t i = 0; i < fold_of.size(); ++i)
                (fold_of[i] == f ? test_rows : train_rows).push_back(i);
            try {
                const auto& [encoded, weights] =
                    opts.paper_mode ? *global
                                    : detail::preprocess_for_fold(table, train_rows, opts);
                Matrix xt(train_rows.size(), encoded.x.cols());
                Matrix xv(test_rows.size(), encoded.x.cols());
                std::vector<int> yt(train_rows.size()), yv(test_rows.size());
                for (std::size_t i = 0; i < train_rows.size(); ++i) {
                    yt[i] = y[train_rows[i]];
                    for (std::size_t c = 0; c < encoded.x.cols(); ++c)
                        xt(i, c) = encoded.x(train_rows[i], c);
                }
                for (std::size_t i = 0; i < test_rows.size(); ++i) {
                    yv[i] = y[test_rows[i]];
                    for (std::size_t c = 0; c < encoded.x.cols(); ++c)
                        xv(i, c) = encoded.x(test_rows[i], c);
                }
                ClassifierSpec fold_spec = spec;
                if (opts.use_class_weights && fold_spec.class_weights.empty())
                    fold_spec.class_weights = weights;
                const ClassifierModel model = fit(fold_spec, xt, encoded.names, yt);
                const auto scores = predict_proba(model, xv, encoded.names);
                std::vector<int> pred(scores.size());
                for (std::size_t i = 0; i < scores.size(); ++i) {
                    result.pooled_scores[test_rows[i]] = scores[i];
                    pred[i] = scores[i] >= 0.5 ? 1 : 0;
                    pooled_pred[test_rows[i]] = pred[i];
                }
                result.fold_metrics.push_back(classification_metrics(yv, pred));
            } catch (const Error& e) {
                throw Error("repetition " + std::to_string(rep) + ", fold " +
                            std::to_string(f) + ": " + e.what());
            }
        }
        result.pooled_metrics = classification_metrics(y, pooled_pred);
        result.roc = roc_curve(y, result.pooled_scores);
        result.auc = auc(y, result.pooled_scores);
        eval.repetitions.push_back(std::move(result));
    }

    // median AUC; the selected repetition is the first whose AUC attains it
    std::vector<double> aucs;
    for (const auto& r : eval.repetitions) aucs.push_back(r.auc);
    eval.median_auc = detail::median_value(aucs);
    eval.selected_repetition = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < aucs.size(); ++i) {
        const double gap = std::abs(aucs[i] - eval.median_auc);
        if (gap < best_gap) {
            best_gap = gap;
            eval.selected_repetition = i;
        }
    }
    return eval;
}

struct PairwiseTest {
    std::string model_a, model_b;
    double w = 0.0;
    double p_two_sided = 1.0, p_greater = 1.0, p_less = 1.0;
    int n_effective = 0;
    bool degenerate = false;
};

// All-pairs Wilcoxon signed-rank over per-repetition AUC vectors.
inline std::vector<PairwiseTest> pairwise_wilcoxon(const std::vector<ModelEvaluation>& models) {
    std::vector<PairwiseTest> tests;
    for (std::size_t a = 0; a < models.size(); ++a) {
        for (std::size_t b = a + 1; b < models.size(); ++b) {
            std::vector<double> va, vb;
            for (const auto& r : models[a].repetitions) va.push_back(r.auc);
            for (const auto& r : models[b].repetitions) vb.push_back(r.auc);
            if (va.size() != vb.size())
                throw InvalidArgument("repetition count mismatch between models");
            PairwiseTest t;
            t.model_a = models[a].name;
            t.model_b = models[b].name;
            const auto two = wilcoxon_signed_rank(va, vb, Alternative::TwoSided);
            t.w = two.w;
            t.p_two_sided = two.p_value;
            t.p_greater = wilcoxon_signed_rank(va, vb, Alternative::Greater).p_value;
            t.p_less = wilcoxon_signed_rank(va, vb, Alternative::Less).p_value;
            t.n_effective = two.n_effective;
            t.degenerate = two.degenerate;
            tests.push_back(std::move(t));
        }
    }
    return tests;
}

} // namespace morphml
