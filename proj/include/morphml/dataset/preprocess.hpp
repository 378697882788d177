#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "morphml/core/matrix.hpp"
#include "morphml/dataset/table.hpp"

namespace morphml {

struct ColumnSummary {
    std::string name;
    ColumnKind kind;
    std::size_t missing = 0;
    // numeric / binary
    double mean = 0, sd = 0, median = 0, min = 0, max = 0;
    // categorical: level counts, descending
    std::vector<std::pair<std::string, std::size_t>> level_counts;
};

struct TableSummary {
    std::vector<ColumnSummary> columns;
    std::size_t n_rows = 0;
    double positive_fraction = -1.0; // -1 when unlabeled
};

struct ImputedCell {
    std::size_t row;
    std::string column;
    double old_value;
    double replacement;
};

struct DroppedColumn {
    std::string name;
    std::string partner;
    double correlation;
};

struct LabeledMatrix {
    std::vector<std::string> labels;
    Matrix values;
};

struct PreprocessReport {
    std::vector<ImputedCell> imputed_cells;          // 2-sigma outlier replacements
    std::vector<ImputedCell> missing_imputed;        // median fills for missing cells
    std::vector<DroppedColumn> dropped_columns;
    std::map<int, double> class_weights;
    LabeledMatrix correlation_matrix;
    std::vector<std::string> notes;
};

namespace detail {

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

inline std::pair<double, double> mean_sample_sd(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, sd};
}

} // namespace detail

inline TableSummary summarize(const FeatureTable& table) {
    if (table.n_rows() == 0) throw InvalidArgument("cannot summarize an empty table");
    TableSummary summary;
    summary.n_rows = table.n_rows();
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
        const ColumnSpec& spec = table.column(c);
        ColumnSummary s;
        s.name = spec.name;
        s.kind = spec.kind;
        s.missing = table.n_rows() - table.non_missing(c).size();
        if (spec.kind == ColumnKind::Categorical) {
            std::map<std::string, std::size_t> counts;
            for (std::size_t r = 0; r < table.n_rows(); ++r)
                if (!table.is_missing(r, c))
                    counts[spec.levels[static_cast<std::size_t>(table.cell(r, c))]]++;
            s.level_counts.assign(counts.begin(), counts.end());
            std::stable_sort(s.level_counts.begin(), s.level_counts.end(),
                             [](const auto& a, const auto& b) { return a.second > b.second; });
        } else {
            const auto vals = table.non_missing(c);
            if (!vals.empty()) {
                std::tie(s.mean, s.sd) = detail::mean_sample_sd(vals);
                s.median = detail::median_of(vals);
                s.min = *std::min_element(vals.begin(), vals.end());
                s.max = *std::max_element(vals.begin(), vals.end());
            }
        }
        summary.columns.push_back(std::move(s));
    }
    if (table.has_labels()) {
        double pos = 0;
        for (int y : table.labels()) pos += y;
        summary.positive_fraction = pos / static_cast<double>(table.n_rows());
    }
    return summary;
}

// Replace every numeric cell more than two sample standard deviations from
// its column mean with the column median (statistics over the original
// non-missing values). Binary and categorical columns are untouched.
inline std::pair<FeatureTable, PreprocessReport> impute_outliers(const FeatureTable& table,
                                                                 double sigma = 2.0) {
    FeatureTable out = table;
    PreprocessReport report;
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
        if (table.column(c).kind != ColumnKind::Numeric) continue;
        const auto vals = table.non_missing(c);
        if (vals.size() < 3) {
            report.notes.push_back(table.column(c).name + ": fewer than 3 values, skipped");
            continue;
        }
        const auto [mean, sd] = detail::mean_sample_sd(vals);
        if (sd == 0.0) {
            report.notes.push_back(table.column(c).name + ": zero variance, skipped");
            continue;
        }
        const double median = detail::median_of(vals);
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            if (table.is_missing(r, c)) continue;
            const double x = table.cell(r, c);
            if (std::abs(x - mean) > sigma * sd) {
                out.set_cell(r, c, median);
                report.imputed_cells.push_back({r, table.column(c).name, x, median});
            }
        }
    }
    return {std::move(out), std::move(report)};
}

// Pearson correlation over pairwise-complete cells; unit diagonal. Zero
// variance columns report 0 correlation with a note.
inline LabeledMatrix correlation_matrix(const FeatureTable& table,
                                        std::vector<std::string>* flags = nullptr) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < table.n_cols(); ++c)
        if (table.column(c).kind != ColumnKind::Categorical) cols.push_back(c);
    if (cols.size() < 2) throw InvalidArgument("correlation needs >= 2 numeric columns");

    LabeledMatrix m;
    for (auto c : cols) m.labels.push_back(table.column(c).name);
    m.values = Matrix(cols.size(), cols.size(), 0.0);
    for (std::size_t i = 0; i < cols.size(); ++i) m.values(i, i) = 1.0;

    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t j = i + 1; j < cols.size(); ++j) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            std::size_t n = 0;
            for (std::size_t r = 0; r < table.n_rows(); ++r) {
                if (table.is_missing(r, cols[i]) || table.is_missing(r, cols[j])) continue;
                const double x = table.cell(r, cols[i]);
                const double y = table.cell(r, cols[j]);
                sx += x;
                sy += y;
                sxx += x * x;
                syy += y * y;
                sxy += x * y;
                ++n;
            }
            double rho = 0.0;
            if (n >= 2) {
                const double dn = static_cast<double>(n);
                const double vx = sxx - sx * sx / dn;
                const double vy = syy - sy * sy / dn;
                if (vx > 0 && vy > 0) {
                    rho = (sxy - sx * sy / dn) / std::sqrt(vx * vy);
                } else if (flags) {
                    flags->push_back(m.labels[vx > 0 ? j : i] + ": zero variance");
                }
            }
            m.values(i, j) = rho;
            m.values(j, i) = rho;
        }
    }
    return m;
}

// Greedy pass in schema order: for each pair with |r| above the threshold,
// drop the later column. The label is never a column, so it is never dropped.
inline std::pair<FeatureTable, PreprocessReport> prune_correlated(const FeatureTable& table,
                                                                  double threshold = 0.8) {
    PreprocessReport report;
    report.correlation_matrix = correlation_matrix(table, &report.notes);
    const auto& corr = report.correlation_matrix;

    std::set<std::size_t> dropped_corr_idx;
    for (std::size_t i = 0; i < corr.labels.size(); ++i) {
        if (dropped_corr_idx.count(i)) continue;
        for (std::size_t j = i + 1; j < corr.labels.size(); ++j) {
            if (dropped_corr_idx.count(j)) continue;
            if (std::abs(corr.values(i, j)) > threshold) {
                dropped_corr_idx.insert(j);
                report.dropped_columns.push_back(
                    {corr.labels[j], corr.labels[i], corr.values(i, j)});
            }
        }
    }
    std::set<std::size_t> dropped_table_idx;
    for (auto i : dropped_corr_idx)
        dropped_table_idx.insert(*table.find_column(corr.labels[i]));
    return {table.without_columns(dropped_table_idx), std::move(report)};
}

// Balanced weights w_c = n / (2 n_c).
inline std::map<int, double> class_weights(const FeatureTable& table) {
    if (!table.has_labels()) throw SchemaError("class weights need labels");
    double n0 = 0, n1 = 0;
    for (int y : table.labels()) (y ? n1 : n0) += 1.0;
    if (n0 == 0 || n1 == 0) throw DegenerateLabelsError("both classes must be present");
    const double n = n0 + n1;
    return {{0, n / (2.0 * n0)}, {1, n / (2.0 * n1)}};
}

// One-hot encode categoricals (column names `<col>_<level>`), pass numeric
// and binary through, fill missing numeric cells with the column median.
struct EncodedMatrix {
    Matrix x;
    std::vector<std::string> names;
};

inline EncodedMatrix encode(const FeatureTable& table, PreprocessReport* report = nullptr) {
    std::vector<std::string> names;
    struct Source {
        std::size_t col;
        int level; // -1 for passthrough
        double fill;
    };
    std::vector<Source> sources;
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
        const ColumnSpec& spec = table.column(c);
        if (spec.kind == ColumnKind::Categorical) {
            if (spec.levels.empty()) throw EncodingError(spec.name + ": no declared levels");
            for (std::size_t l = 0; l < spec.levels.size(); ++l) {
                names.push_back(spec.name + "_" + spec.levels[l]);
                sources.push_back({c, static_cast<int>(l), 0.0});
            }
        } else {
            names.push_back(spec.name);
            sources.push_back({c, -1, detail::median_of(table.non_missing(c))});
        }
    }
    Matrix x(table.n_rows(), sources.size(), 0.0);
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        for (std::size_t k = 0; k < sources.size(); ++k) {
            const Source& s = sources[k];
            if (table.is_missing(r, s.col)) {
                if (s.level < 0) {
                    x(r, k) = s.fill;
                    if (report)
                        report->missing_imputed.push_back({r, names[k], std::nan(""), s.fill});
                }
                continue;
            }
            const double v = table.cell(r, s.col);
            x(r, k) = s.level < 0 ? v : (static_cast<int>(v) == s.level ? 1.0 : 0.0);
        }
    }
    return {std::move(x), std::move(names)};
}

} // namespace morphml
