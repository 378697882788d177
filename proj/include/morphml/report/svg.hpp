#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/dataset/preprocess.hpp"
#include "morphml/eval/cross_validation.hpp"
#include "morphml/eval/importance.hpp"

namespace morphml {

namespace detail {

// Fixed-precision number formatting keeps SVG output byte-deterministic.
inline std::string svg_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

inline std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

inline const std::vector<std::string>& svg_palette() {
    static const std::vector<std::string> colors = {"#1f77b4", "#d62728", "#2ca02c",
                                                    "#9467bd", "#ff7f0e", "#8c564b",
                                                    "#17becf", "#7f7f7f"};
    return colors;
}

inline std::string svg_header(int width, int height) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    return out.str();
}

} // namespace detail

struct RocSeries {
    std::string name;
    std::vector<RocPoint> points;
    double auc = 0.0;
};

// ROC overlay: one polyline per model, the chance diagonal, AUC in the legend.
inline std::string svg_roc(const std::vector<RocSeries>& series) {
    if (series.empty()) throw PlotDataError("no ROC series to plot");
    const int w = 560, h = 560, m = 60;
    const double span = static_cast<double>(w - 2 * m);
    auto px = [&](double fpr) { return m + fpr * span; };
    auto py = [&](double tpr) { return h - m - tpr * span; };

    std::ostringstream out;
    out << detail::svg_header(w, h);
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\""
        << py(1) << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n"; // chance diagonal
    out << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << span << "\" height=\"" << span
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 16
        << "\" text-anchor=\"middle\" font-size=\"14\">False positive rate</text>\n";
    out << "<text x=\"18\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
        << "transform=\"rotate(-90 18 " << h / 2 << ")\">True positive rate</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        if (series[s].points.empty()) throw PlotDataError(series[s].name + ": empty ROC");
        const std::string& color = detail::svg_palette()[s % detail::svg_palette().size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : series[s].points)
            out << detail::svg_num(px(p.fpr)) << "," << detail::svg_num(py(p.tpr)) << " ";
        out << "\"/>\n";
        const int ly = m + 22 + static_cast<int>(s) * 20;
        out << "<line x1=\"" << px(0.55) << "\" y1=\"" << ly << "\" x2=\"" << px(0.62)
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        char label[128];
        std::snprintf(label, sizeof label, "%s (AUC %.3f)", series[s].name.c_str(),
                      series[s].auc);
        out << "<text x=\"" << px(0.64) << "\" y=\"" << ly + 4 << "\" font-size=\"13\">"
            << detail::svg_escape(label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Horizontal bar chart of importance scores, descending.
inline std::string svg_importance(const std::vector<ImportanceEntry>& entries,
                                  const std::string& title) {
    if (entries.empty()) throw PlotDataError("no importance entries to plot");
    std::vector<ImportanceEntry> sorted = entries;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ImportanceEntry& a, const ImportanceEntry& b) {
                         return a.score > b.score;
                     });
    const int bar_h = 22, gap = 6, m_left = 170, m_top = 50, m_right = 40;
    const int w = 640;
    const int h = m_top + static_cast<int>(sorted.size()) * (bar_h + gap) + 30;
    double max_score = 0.0;
    for (const auto& e : sorted) max_score = std::max(max_score, std::abs(e.score));
    if (max_score == 0.0) max_score = 1.0;
    const double span = static_cast<double>(w - m_left - m_right);

    std::ostringstream out;
    out << detail::svg_header(w, h);
    out << "<text x=\"" << w / 2 << "\" y=\"26\" text-anchor=\"middle\" font-size=\"15\">"
        << detail::svg_escape(title) << "</text>\n";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const int y = m_top + static_cast<int>(i) * (bar_h + gap);
        const double len = std::max(0.0, sorted[i].score) / max_score * span;
        out << "<text x=\"" << m_left - 8 << "\" y=\"" << y + bar_h - 6
            << "\" text-anchor=\"end\" font-size=\"12\">" << detail::svg_escape(sorted[i].feature)
            << "</text>\n";
        out << "<rect x=\"" << m_left << "\" y=\"" << y << "\" width=\""
            << detail::svg_num(len) << "\" height=\"" << bar_h << "\" fill=\"#1f77b4\"/>\n";
        char value[32];
        std::snprintf(value, sizeof value, "%.4f", sorted[i].score);
        out << "<text x=\"" << detail::svg_num(m_left + len + 6) << "\" y=\"" << y + bar_h - 6
            << "\" font-size=\"11\">" << value << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

// Correlation heatmap; both axes labeled with the column names.
inline std::string svg_correlation(const LabeledMatrix& corr) {
    if (corr.labels.empty()) throw PlotDataError("no correlation matrix to plot");
    const std::size_t n = corr.labels.size();
    const int cell = 26, m_left = 150, m_top = 150;
    const int w = m_left + static_cast<int>(n) * cell + 40;
    const int h = m_top + static_cast<int>(n) * cell + 40;

    std::ostringstream out;
    out << detail::svg_header(w, h);
    for (std::size_t i = 0; i < n; ++i) {
        const int x = m_left + static_cast<int>(i) * cell;
        const int y = m_top + static_cast<int>(i) * cell;
        out << "<text x=\"" << m_left - 6 << "\" y=\"" << y + cell - 8
            << "\" text-anchor=\"end\" font-size=\"11\">" << detail::svg_escape(corr.labels[i])
            << "</text>\n";
        out << "<text x=\"" << x + cell / 2 << "\" y=\"" << m_top - 6
            << "\" font-size=\"11\" text-anchor=\"start\" transform=\"rotate(-60 "
            << x + cell / 2 << " " << m_top - 6 << ")\">" << detail::svg_escape(corr.labels[i])
            << "</text>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = corr.values(i, j); // [-1, 1] -> blue..white..red
            const double t = std::clamp(v, -1.0, 1.0);
            const int r = static_cast<int>(255 * (t > 0 ? 1.0 : 1.0 + t));
            const int b = static_cast<int>(255 * (t < 0 ? 1.0 : 1.0 - t));
            const int g = static_cast<int>(255 * (1.0 - std::abs(t)));
            char color[10];
            std::snprintf(color, sizeof color, "#%02x%02x%02x", r, g, b);
            out << "<rect x=\"" << m_left + static_cast<int>(j) * cell << "\" y=\""
                << m_top + static_cast<int>(i) * cell << "\" width=\"" << cell << "\" height=\""
                << cell << "\" fill=\"" << color << "\" stroke=\"#dddddd\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

inline void write_svg(const std::string& svg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write SVG file: " + path);
    out << svg;
}

} // namespace morphml
