#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "morphml/models/classifier.hpp"

namespace morphml::detail {

// CART builder shared by the forest (Gini) and the booster (Newton gain).
// A criterion accumulates per-sample statistics; `score` is the quantity the
// split maximizes the reduction of (lower is purer), `leaf_value` the
// prediction payload.

struct GiniCriterion {
    // per sample: weight, weighted label
    struct Stats {
        double w = 0.0, wy = 0.0;
        void add(double weight, double target) {
            w += weight;
            wy += weight * target;
        }
        void subtract_from(const Stats& total, Stats& out) const {
            out.w = total.w - w;
            out.wy = total.wy - wy;
        }
        // weighted Gini mass: w * (1 - p1^2 - p0^2)
        double score() const {
            if (w <= 0.0) return 0.0;
            const double w0 = w - wy;
            return w - (wy * wy + w0 * w0) / w;
        }
        double leaf_value() const { return w > 0.0 ? wy / w : 0.5; }
    };
};

struct NewtonCriterion {
    // per sample: gradient, hessian (sample weight folded into both)
    struct Stats {
        double g = 0.0, h = 0.0;
        double lambda = 1.0;
        void add(double grad, double hess) {
            g += grad;
            h += hess;
        }
        void subtract_from(const Stats& total, Stats& out) const {
            out.g = total.g - g;
            out.h = total.h - h;
            out.lambda = lambda;
        }
        // negative of the Newton objective improvement; minimized
        double score() const { return -(g * g) / (h + lambda); }
        double leaf_value() const { return -g / (h + lambda); }
    };
};

struct TreeConfig {
    int max_depth = 0;        // 0 = unlimited
    std::size_t min_leaf = 1; // minimum samples per leaf
    std::size_t features_per_split = 0; // 0 = all; otherwise seeded subsample
    double min_gain = 1e-12;
};

template <class Stats>
struct SplitSearch {
    const Matrix& x;
    const std::vector<double>& stat_a; // weight / gradient per sample
    const std::vector<double>& stat_b; // target / hessian per sample
    TreeConfig config;
    Rng* rng = nullptr;
    double lambda = 1.0;

    DecisionTree tree;

    Stats make_stats() const {
        Stats s{};
        if constexpr (requires { s.lambda; }) s.lambda = lambda;
        return s;
    }

    int build(std::vector<std::size_t>& samples, int depth) {
        Stats total = make_stats();
        for (auto i : samples) total.add(stat_a[i], stat_b[i]);

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[node_id].value = total.leaf_value();

        const bool depth_ok = config.max_depth == 0 || depth < config.max_depth;
        if (!depth_ok || samples.size() < 2 * config.min_leaf || samples.size() < 2)
            return node_id;

        // candidate features: all, or a seeded subsample without replacement
        std::vector<std::size_t> features(x.cols());
        std::iota(features.begin(), features.end(), 0);
        if (config.features_per_split > 0 && config.features_per_split < x.cols()) {
            rng->shuffle(features);
            features.resize(config.features_per_split);
            std::sort(features.begin(), features.end());
        }

        const double parent_score = total.score();
        double best_gain = config.min_gain;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;

        std::vector<std::size_t> order(samples);
        for (std::size_t f : features) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return x(a, f) < x(b, f);
            });
            Stats left = make_stats();
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                left.add(stat_a[order[k]], stat_b[order[k]]);
                const double v = x(order[k], f);
                const double next = x(order[k + 1], f);
                if (v == next) continue;
                if (k + 1 < config.min_leaf || order.size() - k - 1 < config.min_leaf) continue;
                Stats right = make_stats();
                left.subtract_from(total, right);
                const double gain = parent_score - left.score() - right.score();
                const double threshold = v + (next - v) / 2.0;
                // ties: lowest feature index, then lowest threshold (scan order)
                if (gain > best_gain + 1e-15) {
                    best_gain = gain;
                    best_feature = f;
                    best_threshold = threshold;
                    found = true;
                }
            }
        }
        if (!found) return node_id;

        std::vector<std::size_t> left_samples, right_samples;
        for (auto i : samples)
            (x(i, best_feature) <= best_threshold ? left_samples : right_samples).push_back(i);
        if (left_samples.empty() || right_samples.empty()) return node_id;

        tree.nodes[node_id].feature = static_cast<int>(best_feature);
        tree.nodes[node_id].threshold = best_threshold;
        tree.nodes[node_id].impurity_decrease = best_gain;
        const int left_id = build(left_samples, depth + 1);
        tree.nodes[node_id].left = left_id;
        const int right_id = build(right_samples, depth + 1);
        tree.nodes[node_id].right = right_id;
        return node_id;
    }
};

// Classification tree on weighted Gini. stat_a = sample weight, stat_b = label.
inline DecisionTree build_gini_tree(const Matrix& x, const std::vector<int>& y,
                                    const std::vector<double>& w,
                                    std::vector<std::size_t> samples, const TreeConfig& config,
                                    Rng* rng = nullptr) {
    std::vector<double> targets(y.begin(), y.end());
    SplitSearch<GiniCriterion::Stats> search{x, w, targets, config, rng};
    search.build(samples, 0);
    return std::move(search.tree);
}

// Regression tree on the Newton gain. stat_a = gradient, stat_b = hessian.
inline DecisionTree build_newton_tree(const Matrix& x, const std::vector<double>& grad,
                                      const std::vector<double>& hess, double lambda,
                                      const TreeConfig& config) {
    SplitSearch<NewtonCriterion::Stats> search{x, grad, hess, config, nullptr, lambda};
    std::vector<std::size_t> samples(x.rows());
    std::iota(samples.begin(), samples.end(), 0);
    search.build(samples, 0);
    return std::move(search.tree);
}

} // namespace morphml::detail
