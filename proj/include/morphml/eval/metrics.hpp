#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/core/rng.hpp"

namespace morphml {

// Per-class round-robin assignment after a seeded shuffle. Fold sizes differ
// by at most one, per-fold class counts are within one of proportional.
inline std::vector<int> stratified_folds(const std::vector<int>& labels, int n_folds,
                                         std::uint64_t seed) {
    if (n_folds < 2) throw InvalidArgument("stratification needs >= 2 folds");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
    if (static_cast<int>(pos.size()) < n_folds || static_cast<int>(neg.size()) < n_folds)
        throw InfeasibleStratificationError("each class needs at least n_folds members");
    Rng rng(seed, "stratified-folds");
    rng.shuffle(neg);
    rng.shuffle(pos);
    std::vector<int> fold(labels.size(), -1);
    std::size_t t = 0;
    for (auto i : neg) fold[i] = static_cast<int>(t++ % n_folds);
    for (auto i : pos) fold[i] = static_cast<int>(t++ % n_folds);
    return fold;
}

struct ClassificationMetrics {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
    bool precision_undefined = false; // 0/0 reported as 0 with this flag
    bool recall_undefined = false;
    bool f1_undefined = false;
};

inline ClassificationMetrics classification_metrics(const std::vector<int>& y_true,
                                                    const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw InvalidArgument("length mismatch");
    ClassificationMetrics m;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] && y_pred[i]) ++m.tp;
        else if (!y_true[i] && y_pred[i]) ++m.fp;
        else if (y_true[i] && !y_pred[i]) ++m.fn;
        else ++m.tn;
    }
    const double n = static_cast<double>(y_true.size());
    m.accuracy = (m.tp + m.tn) / n;
    if (m.tp + m.fp == 0) m.precision_undefined = true;
    else m.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
    if (m.tp + m.fn == 0) m.recall_undefined = true;
    else m.recall = static_cast<double>(m.tp) / (m.tp + m.fn);
    if (m.precision + m.recall == 0) m.f1_undefined = true;
    else m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

struct RocPoint {
    double fpr, tpr, threshold;
};

// One point per distinct score, descending; tied scores collapse into one
// step. Starts at (0,0), ends at (1,1).
inline std::vector<RocPoint> roc_curve(const std::vector<int>& y_true,
                                       const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw InvalidArgument("length mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : y_true) (y ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw DegenerateLabelsError("ROC needs both classes");
    for (double s : scores)
        if (!std::isfinite(s)) throw InvalidArgument("non-finite score");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<RocPoint> points;
    points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0, fp = 0, i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (y_true[order[i]] ? tp : fp)++;
            ++i;
        }
        points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                          static_cast<double>(tp) / static_cast<double>(n_pos), s});
    }
    return points;
}

// Trapezoidal area under roc_curve; equals the Mann-Whitney pair statistic.
inline double auc(const std::vector<int>& y_true, const std::vector<double>& scores) {
    const auto points = roc_curve(y_true, scores);
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
    return area;
}

enum class Alternative { TwoSided, Greater, Less };

struct WilcoxonResult {
    double w = 0.0;        // sum of positive-difference ranks
    double p_value = 1.0;
    int n_effective = 0;   // nonzero differences
    bool degenerate = false; // all differences zero
};

// Paired signed-rank test. Zeros dropped, midranks for ties. Exact p by
// enumerating the 2^n sign assignments for n <= 25, normal approximation with
// tie correction above that.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                           const std::vector<double>& b,
                                           Alternative alternative = Alternative::TwoSided) {
    if (a.size() != b.size() || a.empty()) throw InvalidArgument("paired samples required");
    std::vector<double> abs_d;
    std::vector<int> sign;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) {
            abs_d.push_back(std::abs(d));
            sign.push_back(d > 0 ? 1 : -1);
        }
    }
    WilcoxonResult result;
    result.n_effective = static_cast<int>(abs_d.size());
    if (abs_d.empty()) {
        result.degenerate = true;
        return result;
    }
    const std::size_t n = abs_d.size();

    // midranks of |d|
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return abs_d[x] < abs_d[y]; });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && abs_d[order[j]] == abs_d[order[i]]) ++j;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = mid;
        i = j;
    }
    double w_pos = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (sign[i] > 0) w_pos += rank[i];
    result.w = w_pos;

    if (n <= 25) {
        // exact: distribution of the positive-rank sum over all sign patterns
        const std::uint64_t total = 1ULL << n;
        std::uint64_t ge = 0, le = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) s += rank[i];
            if (s >= w_pos - 1e-12) ++ge;
            if (s <= w_pos + 1e-12) ++le;
        }
        const double p_ge = static_cast<double>(ge) / static_cast<double>(total);
        const double p_le = static_cast<double>(le) / static_cast<double>(total);
        switch (alternative) {
            case Alternative::Greater: result.p_value = p_ge; break;
            case Alternative::Less: result.p_value = p_le; break;
            case Alternative::TwoSided:
                result.p_value = std::min(1.0, 2.0 * std::min(p_ge, p_le));
                break;
        }
    } else {
        const double dn = static_cast<double>(n);
        const double mean = dn * (dn + 1.0) / 4.0;
        double tie_term = 0.0;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && abs_d[order[j]] == abs_d[order[i]]) ++j;
            const double t = static_cast<double>(j - i);
            tie_term += t * t * t - t;
            i = j;
        }
        const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
        auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
        const double z_ge = (w_pos - 0.5 - mean) / std::sqrt(var);
        const double z_le = (w_pos + 0.5 - mean) / std::sqrt(var);
        const double p_ge = 1.0 - phi(z_ge);
        const double p_le = phi(z_le);
        switch (alternative) {
            case Alternative::Greater: result.p_value = p_ge; break;
            case Alternative::Less: result.p_value = p_le; break;
            case Alternative::TwoSided:
                result.p_value = std::min(1.0, 2.0 * std::min(p_ge, p_le));
                break;
        }
    }
    return result;
}

} // namespace morphml
