#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "morphml/report/report.hpp"
#include "morphml/report/svg.hpp"
#include "morphml/synth/tabular.hpp"

using namespace morphml;
using Catch::Approx;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

EvaluationReport tiny_report() {
    TabularSpec spec;
    spec.n_samples = 60;
    spec.n_features = 4;
    spec.class_balance = 0.4;
    spec.label_noise = 0.3;
    spec.seed = 19;
    const TabularData data = gen_tabular(spec);
    const FoldPlan plan = FoldPlan::make(data.table.labels(), 3, 5, 4);

    EvaluationReport report;
    report.seed = 4;
    for (ModelKind kind : {ModelKind::Logistic, ModelKind::RandomForest}) {
        ClassifierSpec m;
        m.kind = kind;
        if (kind == ModelKind::RandomForest) m.set_param("n_trees", 10);
        report.models.push_back(repeated_cv(m, data.table, plan));
    }
    report.pairwise = pairwise_wilcoxon(report.models);

    const EncodedMatrix encoded = encode(data.table);
    ClassifierSpec forest;
    forest.kind = ModelKind::RandomForest;
    forest.set_param("n_trees", 10);
    const ClassifierModel model =
        fit(forest, encoded.x, encoded.names, data.table.labels());
    report.permutation_importance["random_forest"] =
        permutation_importance(model, encoded.x, encoded.names, data.table.labels(), 5, 2);
    report.impurity_importance["random_forest"] = impurity_importance(model);
    report.correlation = correlation_matrix(data.table);
    return report;
}

} // namespace

TEST_CASE("evaluation report round-trips through JSON") {
    const EvaluationReport report = tiny_report();
    const auto path = temp_path("morphml_report.json");
    save_report(report, path);
    const EvaluationReport loaded = load_report(path);

    REQUIRE(loaded.models.size() == report.models.size());
    for (std::size_t m = 0; m < report.models.size(); ++m) {
        CHECK(loaded.models[m].name == report.models[m].name);
        CHECK(loaded.models[m].median_auc == report.models[m].median_auc);
        CHECK(loaded.models[m].selected_repetition == report.models[m].selected_repetition);
        REQUIRE(loaded.models[m].repetitions.size() == report.models[m].repetitions.size());
        for (std::size_t r = 0; r < report.models[m].repetitions.size(); ++r)
            CHECK(loaded.models[m].repetitions[r].auc ==
                  report.models[m].repetitions[r].auc);
    }
    REQUIRE(loaded.pairwise.size() == report.pairwise.size());
    CHECK(loaded.pairwise[0].p_two_sided == report.pairwise[0].p_two_sided);
    CHECK(loaded.correlation.labels == report.correlation.labels);
    CHECK(loaded.permutation_importance.at("random_forest").size() ==
          report.permutation_importance.at("random_forest").size());
}

TEST_CASE("report serialization is byte-deterministic") {
    const EvaluationReport report = tiny_report();
    const auto a = temp_path("morphml_report_a.json");
    const auto b = temp_path("morphml_report_b.json");
    save_report(report, a);
    save_report(report, b);
    CHECK(slurp(a) == slurp(b));
    // save -> load -> save is also stable
    const auto c = temp_path("morphml_report_c.json");
    save_report(load_report(a), c);
    CHECK(slurp(a) == slurp(c));
}

TEST_CASE("malformed report files raise typed errors") {
    const auto path = temp_path("morphml_report_bad.json");
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_report(path), FormatError);
    std::ofstream(path) << "{\"format\": \"something-else\"}";
    CHECK_THROWS_AS(load_report(path), FormatError);
}

TEST_CASE("metrics table mirrors the benchmark layout") {
    const EvaluationReport report = tiny_report();
    const std::string table = format_metrics_table(report);
    CHECK(table.find("Model") != std::string::npos);
    CHECK(table.find("Accuracy") != std::string::npos);
    CHECK(table.find("Precision") != std::string::npos);
    CHECK(table.find("Recall") != std::string::npos);
    CHECK(table.find("F1-Score") != std::string::npos);
    CHECK(table.find("logistic") != std::string::npos);
    CHECK(table.find("random_forest") != std::string::npos);

    const std::string pairwise = format_pairwise_table(report.pairwise);
    CHECK(pairwise.find("p(two-sided)") != std::string::npos);
    CHECK(pairwise.find("logistic") != std::string::npos);
}

TEST_CASE("ROC SVG contains one polyline per model plus the diagonal") {
    const EvaluationReport report = tiny_report();
    std::vector<RocSeries> series;
    for (const auto& model : report.models)
        series.push_back({model.name,
                          model.repetitions[model.selected_repetition].roc,
                          model.median_auc});
    const std::string svg = svg_roc(series);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count_occurrences(svg, "<polyline") == 2);
    CHECK(svg.find("stroke-dasharray") != std::string::npos); // chance diagonal
    CHECK(svg.find("AUC") != std::string::npos);
    CHECK(svg_roc(series) == svg); // byte determinism
    CHECK_THROWS_AS(svg_roc({}), PlotDataError);
}

TEST_CASE("importance SVG has one bar per feature, sorted descending") {
    const EvaluationReport report = tiny_report();
    const auto& entries = report.permutation_importance.at("random_forest");
    const std::string svg = svg_importance(entries, "Permutation importance");
    CHECK(svg.rfind("<?xml", 0) == 0);
    // one background rect + one bar rect per feature
    CHECK(count_occurrences(svg, "<rect") == entries.size() + 1);
    // feature labels appear in score order
    std::size_t prev = 0;
    std::vector<ImportanceEntry> sorted = entries;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.score > b.score; });
    for (const auto& e : sorted) {
        const std::size_t pos = svg.find(">" + e.feature + "<");
        REQUIRE(pos != std::string::npos);
        CHECK(pos > prev);
        prev = pos;
    }
    CHECK_THROWS_AS(svg_importance({}, "x"), PlotDataError);
}

TEST_CASE("correlation heatmap labels both axes") {
    const EvaluationReport report = tiny_report();
    const std::string svg = svg_correlation(report.correlation);
    CHECK(svg.rfind("<?xml", 0) == 0);
    for (const auto& label : report.correlation.labels)
        CHECK(count_occurrences(svg, ">" + label + "<") == 2); // row + column label
    const std::size_t n = report.correlation.labels.size();
    CHECK(count_occurrences(svg, "<rect") == n * n + 1);
    CHECK(svg_correlation(report.correlation) == svg);
}
