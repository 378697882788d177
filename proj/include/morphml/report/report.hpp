#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "morphml/dataset/preprocess.hpp"
#include "morphml/eval/cross_validation.hpp"
#include "morphml/eval/importance.hpp"

namespace morphml {

// Everything one evaluate run produces, ready for serialization and plotting.
struct EvaluationReport {
    std::uint64_t seed = 0;
    std::vector<ModelEvaluation> models;
    std::vector<PairwiseTest> pairwise;
    std::map<std::string, std::vector<ImportanceEntry>> permutation_importance;
    std::map<std::string, std::vector<ImportanceEntry>> impurity_importance;
    LabeledMatrix correlation; // empty labels when not computed
    std::vector<std::string> preprocess_notes;
};

namespace detail {

inline nlohmann::json metrics_json(const ClassificationMetrics& m) {
    return {{"tp", m.tp},       {"fp", m.fp},
            {"fn", m.fn},       {"tn", m.tn},
            {"accuracy", m.accuracy}, {"precision", m.precision},
            {"recall", m.recall},     {"f1", m.f1},
            {"precision_undefined", m.precision_undefined},
            {"recall_undefined", m.recall_undefined},
            {"f1_undefined", m.f1_undefined}};
}

inline ClassificationMetrics metrics_from_json(const nlohmann::json& j) {
    ClassificationMetrics m;
    m.tp = j.at("tp");
    m.fp = j.at("fp");
    m.fn = j.at("fn");
    m.tn = j.at("tn");
    m.accuracy = j.at("accuracy");
    m.precision = j.at("precision");
    m.recall = j.at("recall");
    m.f1 = j.at("f1");
    m.precision_undefined = j.at("precision_undefined");
    m.recall_undefined = j.at("recall_undefined");
    m.f1_undefined = j.at("f1_undefined");
    return m;
}

inline nlohmann::json importance_json(const std::vector<ImportanceEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) arr.push_back({{"feature", e.feature}, {"score", e.score}});
    return arr;
}

inline std::vector<ImportanceEntry> importance_from_json(const nlohmann::json& arr) {
    std::vector<ImportanceEntry> out;
    for (const auto& e : arr) out.push_back({e.at("feature"), e.at("score")});
    return out;
}

} // namespace detail

inline nlohmann::json report_to_json(const EvaluationReport& report) {
    nlohmann::json j;
    j["format"] = "morphml-report";
    j["version"] = 1;
    j["seed"] = report.seed;
    j["models"] = nlohmann::json::array();
    for (const auto& model : report.models) {
        nlohmann::json m;
        m["name"] = model.name;
        m["kind"] = to_string(model.spec.kind);
        m["median_auc"] = model.median_auc;
        m["selected_repetition"] = model.selected_repetition;
        m["repetitions"] = nlohmann::json::array();
        for (const auto& rep : model.repetitions) {
            nlohmann::json r;
            r["auc"] = rep.auc;
            r["pooled_metrics"] = detail::metrics_json(rep.pooled_metrics);
            r["fold_metrics"] = nlohmann::json::array();
            for (const auto& fm : rep.fold_metrics)
                r["fold_metrics"].push_back(detail::metrics_json(fm));
            nlohmann::json roc = nlohmann::json::array();
            for (const auto& p : rep.roc) {
                const double thr = std::isfinite(p.threshold) ? p.threshold : 1e308;
                roc.push_back({p.fpr, p.tpr, thr});
            }
            r["roc"] = std::move(roc);
            m["repetitions"].push_back(std::move(r));
        }
        j["models"].push_back(std::move(m));
    }
    j["pairwise"] = nlohmann::json::array();
    for (const auto& t : report.pairwise)
        j["pairwise"].push_back({{"model_a", t.model_a},
                                 {"model_b", t.model_b},
                                 {"w", t.w},
                                 {"p_two_sided", t.p_two_sided},
                                 {"p_greater", t.p_greater},
                                 {"p_less", t.p_less},
                                 {"n_effective", t.n_effective},
                                 {"degenerate", t.degenerate}});
    for (const auto& [name, entries] : report.permutation_importance)
        j["permutation_importance"][name] = detail::importance_json(entries);
    for (const auto& [name, entries] : report.impurity_importance)
        j["impurity_importance"][name] = detail::importance_json(entries);
    if (!report.correlation.labels.empty()) {
        j["correlation"]["labels"] = report.correlation.labels;
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < report.correlation.values.rows(); ++r)
            rows.push_back(report.correlation.values.row(r));
        j["correlation"]["values"] = std::move(rows);
    }
    j["preprocess_notes"] = report.preprocess_notes;
    return j;
}

inline EvaluationReport report_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j.at("format") != "morphml-report")
        throw FormatError("not a morphml report file");
    EvaluationReport report;
    report.seed = j.at("seed");
    for (const auto& m : j.at("models")) {
        ModelEvaluation model;
        model.name = m.at("name");
        model.spec.kind = model_kind_from(m.at("kind"));
        model.median_auc = m.at("median_auc");
        model.selected_repetition = m.at("selected_repetition");
        for (const auto& r : m.at("repetitions")) {
            RepetitionResult rep;
            rep.auc = r.at("auc");
            rep.pooled_metrics = detail::metrics_from_json(r.at("pooled_metrics"));
            for (const auto& fm : r.at("fold_metrics"))
                rep.fold_metrics.push_back(detail::metrics_from_json(fm));
            for (const auto& p : r.at("roc"))
                rep.roc.push_back({p.at(0), p.at(1), p.at(2)});
            model.repetitions.push_back(std::move(rep));
        }
        report.models.push_back(std::move(model));
    }
    for (const auto& t : j.at("pairwise"))
        report.pairwise.push_back({t.at("model_a"), t.at("model_b"), t.at("w"),
                                   t.at("p_two_sided"), t.at("p_greater"), t.at("p_less"),
                                   t.at("n_effective"), t.at("degenerate")});
    if (j.contains("permutation_importance"))
        for (const auto& [name, entries] : j.at("permutation_importance").items())
            report.permutation_importance[name] = detail::importance_from_json(entries);
    if (j.contains("impurity_importance"))
        for (const auto& [name, entries] : j.at("impurity_importance").items())
            report.impurity_importance[name] = detail::importance_from_json(entries);
    if (j.contains("correlation")) {
        report.correlation.labels =
            j.at("correlation").at("labels").get<std::vector<std::string>>();
        const auto& rows = j.at("correlation").at("values");
        report.correlation.values = Matrix(rows.size(), rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows.size(); ++c)
                report.correlation.values(r, c) = rows.at(r).at(c);
    }
    if (j.contains("preprocess_notes"))
        report.preprocess_notes = j.at("preprocess_notes").get<std::vector<std::string>>();
    return report;
}

inline void save_report(const EvaluationReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write report file: " + path);
    out << report_to_json(report).dump(2) << "\n";
}

inline EvaluationReport load_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open report file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("report parse error: ") + e.what());
    }
    return report_from_json(j);
}

// Metrics table in the familiar benchmark layout (Model | Accuracy |
// Precision | Recall | F1-Score | AUC), values from the selected
// (median-AUC) repetition's pooled held-out predictions.
inline std::string format_metrics_table(const EvaluationReport& report) {
    std::ostringstream out;
    out << "Model                         Accuracy  Precision  Recall  F1-Score  AUC\n";
    out << "---------------------------------------------------------------------------\n";
    char line[160];
    for (const auto& model : report.models) {
        const auto& m = model.repetitions.at(model.selected_repetition).pooled_metrics;
        std::snprintf(line, sizeof line, "%-29s %8.2f  %9.2f  %6.2f  %8.2f  %0.2f\n",
                      model.name.c_str(), m.accuracy, m.precision, m.recall, m.f1,
                      model.median_auc);
        out << line;
    }
    return out.str();
}

// Pairwise Wilcoxon results as a plain table.
inline std::string format_pairwise_table(const std::vector<PairwiseTest>& tests) {
    std::ostringstream out;
    out << "Model A            Model B            W      p(two-sided)  p(greater)  p(less)   n\n";
    out << "-------------------------------------------------------------------------------------\n";
    char line[200];
    for (const auto& t : tests) {
        std::snprintf(line, sizeof line, "%-18s %-18s %-6.1f %-13.5f %-11.5f %-9.5f %d%s\n",
                      t.model_a.c_str(), t.model_b.c_str(), t.w, t.p_two_sided, t.p_greater,
                      t.p_less, t.n_effective, t.degenerate ? "  (degenerate)" : "");
        out << line;
    }
    return out.str();
}

} // namespace morphml
