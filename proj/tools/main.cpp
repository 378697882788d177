// morphml command-line interface: extract, preprocess, evaluate, compare,
// plot, synth. Exit codes: 0 success, 1 usage/config error, 2 data error,
// 3 internal error.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morphml/dataset/preprocess.hpp"
#include "morphml/dataset/table.hpp"
#include "morphml/eval/cross_validation.hpp"
#include "morphml/eval/importance.hpp"
#include "morphml/geometry/morphometrics.hpp"
#include "morphml/models/grid_search.hpp"
#include "morphml/report/report.hpp"
#include "morphml/report/svg.hpp"
#include "morphml/synth/geometry.hpp"
#include "morphml/synth/grids.hpp"
#include "morphml/synth/tabular.hpp"

namespace fs = std::filesystem;
using namespace morphml;

namespace {

// ---------------------------------------------------------------------------
// Flat key-value config file with [section] headers; '#' starts a comment.
// Values are whitespace-separated lists; single-value keys use the first.
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::vector<std::string>>> sections;

    static ConfigFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        ConfigFile cfg;
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto last = line.find_last_not_of(" \t\r");
            line = line.substr(first, last - first + 1);
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(path + ":" + std::to_string(lineno) +
                                      ": unterminated section header");
                section = line.substr(1, line.size() - 2);
                cfg.sections[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
            std::string key = line.substr(0, eq);
            key.erase(key.find_last_not_of(" \t") + 1);
            std::istringstream values(line.substr(eq + 1));
            std::vector<std::string> list;
            std::string v;
            while (values >> v) list.push_back(v);
            if (key.empty() || list.empty())
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": empty key or value");
            cfg.sections[section][key] = std::move(list);
        }
        return cfg;
    }

    const std::vector<std::string>* find(const std::string& section,
                                         const std::string& key) const {
        const auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        const auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        return &k->second;
    }

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const {
        const auto* v = find(section, key);
        return v ? v->front() : fallback;
    }

    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        const auto* v = find(section, key);
        if (!v) return fallback;
        try {
            return std::stod(v->front());
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "] " + key + ": '" + v->front() +
                              "' is not a number");
        }
    }

    int get_int(const std::string& section, const std::string& key, int fallback) const {
        const double d = get_double(section, key, fallback);
        return static_cast<int>(d);
    }
};

// ---------------------------------------------------------------------------
// Shared helpers

std::string resolve_out_dir(const std::string& flag_value) {
    // Environment variable override applies to the output directory only.
    if (flag_value.empty()) {
        if (const char* env = std::getenv("MORPHML_OUT_DIR")) return env;
        return ".";
    }
    return flag_value;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw InvalidArgument("cannot create output directory: " + dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

nlohmann::json preprocess_report_json(const PreprocessReport& report) {
    nlohmann::json j;
    j["format"] = "morphml-preprocess";
    j["version"] = 1;
    j["imputed_cells"] = nlohmann::json::array();
    for (const auto& c : report.imputed_cells)
        j["imputed_cells"].push_back({{"row", c.row},
                                      {"column", c.column},
                                      {"old_value", c.old_value},
                                      {"replacement", c.replacement}});
    j["missing_imputed"] = nlohmann::json::array();
    for (const auto& c : report.missing_imputed)
        j["missing_imputed"].push_back(
            {{"row", c.row}, {"column", c.column}, {"replacement", c.replacement}});
    j["dropped_columns"] = nlohmann::json::array();
    for (const auto& d : report.dropped_columns)
        j["dropped_columns"].push_back(
            {{"name", d.name}, {"partner", d.partner}, {"correlation", d.correlation}});
    j["notes"] = report.notes;
    return j;
}

// Fold-safe preprocessing happens inside repeated_cv; this global pass exists
// for reporting, grid search, and the importance fits.
struct GlobalPreprocess {
    FeatureTable table; // imputed, pruned
    EncodedMatrix encoded;
    PreprocessReport report;
    LabeledMatrix correlation; // computed before pruning
};

GlobalPreprocess global_preprocess(const FeatureTable& raw, double sigma, double threshold) {
    GlobalPreprocess out;
    auto [imputed, impute_report] = impute_outliers(raw, sigma);
    out.correlation = correlation_matrix(imputed);
    auto [pruned, prune_report] = prune_correlated(imputed, threshold);
    out.report = std::move(impute_report);
    out.report.dropped_columns = std::move(prune_report.dropped_columns);
    out.report.correlation_matrix = out.correlation;
    out.table = std::move(pruned);
    out.encoded = encode(out.table, &out.report);
    return out;
}

// ---------------------------------------------------------------------------
// extract

struct ExtractOptions {
    std::vector<std::string> meshes;
    std::vector<std::string> annotations; // "" or "-" = none, paired by order
    int resolution = 64;
    std::string out_csv;
};

const std::vector<std::string>& extract_feature_names() {
    static const std::vector<std::string> names = {
        "fd",     "lacunarity", "sphericity",
        "ui",     "savol_ratio", "sa",
        "size_mm", "flatness",  "cp",
        "Max 3D diameter (Feret diameter)", "neck_width_mm", "ar", "bf"};
    return names;
}

int cmd_extract(const ExtractOptions& opts) {
    if (opts.meshes.empty()) throw InvalidArgument("extract: no input meshes given");
    if (!opts.annotations.empty() && opts.annotations.size() != opts.meshes.size())
        throw InvalidArgument("extract: annotation count must match mesh count");
    if (opts.resolution < 8) throw InvalidArgument("extract: resolution must be >= 8");

    struct Row {
        std::string mesh;
        std::optional<MorphometricRecord> record;
        std::string error;
    };
    std::vector<Row> rows;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < opts.meshes.size(); ++i) {
        Row row;
        row.mesh = opts.meshes[i];
        try {
            TriangleMesh mesh = load_mesh(opts.meshes[i]);
            if (!opts.annotations.empty() && !opts.annotations[i].empty() &&
                opts.annotations[i] != "-")
                mesh.neck_plane = load_neck_plane(opts.annotations[i]);
            row.record = morphometrics(mesh, opts.resolution);
        } catch (const std::exception& e) {
            row.error = e.what();
            ++failures;
        }
        rows.push_back(std::move(row));
    }

    std::ostringstream csv;
    csv << "mesh";
    for (const auto& name : extract_feature_names()) csv << "," << detail::csv_escape(name);
    csv << ",error\n";
    for (const auto& row : rows) {
        csv << detail::csv_escape(row.mesh);
        if (row.record) {
            const MorphometricRecord& r = *row.record;
            auto cell = [&](double v) { csv << "," << detail::format_cell(v); };
            auto opt = [&](const std::optional<double>& v) {
                csv << ",";
                if (v) csv << detail::format_cell(*v);
            };
            cell(r.fd);
            cell(r.lacunarity);
            cell(r.sphericity);
            cell(r.ui);
            cell(r.savol_ratio);
            cell(r.sa);
            cell(r.size_mm);
            cell(r.flatness);
            cell(r.cp);
            cell(r.max_3d_diameter);
            opt(r.neck_width_mm);
            opt(r.ar);
            opt(r.bf);
        } else {
            for (std::size_t c = 0; c < extract_feature_names().size(); ++c) csv << ",";
        }
        csv << "," << detail::csv_escape(row.error) << "\n";
    }
    write_text(opts.out_csv, csv.str());
    std::cout << "extracted " << (rows.size() - failures) << "/" << rows.size()
              << " meshes -> " << opts.out_csv << "\n";
    if (failures == rows.size()) throw FormatError("extract: every mesh failed");
    return 0;
}

// ---------------------------------------------------------------------------
// preprocess

struct PreprocessOptions {
    std::string in_csv;
    std::string out_dir;
    std::string label_column = "ruptured";
    double sigma = 2.0;
    double threshold = 0.8;
};

int cmd_preprocess(const PreprocessOptions& opts) {
    if (opts.sigma <= 0) throw ConfigError("outlier sigma must be > 0");
    if (opts.threshold <= 0 || opts.threshold > 1)
        throw ConfigError("correlation threshold must be in (0, 1]");
    CsvOptions csv_opts;
    csv_opts.label_column = opts.label_column;
    const FeatureTable raw = read_csv(opts.in_csv, csv_opts);
    const GlobalPreprocess prep = global_preprocess(raw, opts.sigma, opts.threshold);
    ensure_dir(opts.out_dir);
    write_csv(prep.table, opts.out_dir + "/preprocessed.csv", opts.label_column);
    write_text(opts.out_dir + "/preprocess_report.json",
               preprocess_report_json(prep.report).dump(2) + "\n");
    write_svg(svg_correlation(prep.correlation), opts.out_dir + "/correlation.svg");
    std::cout << "preprocessed " << raw.n_rows() << " rows: "
              << prep.report.imputed_cells.size() << " outlier cells imputed, "
              << prep.report.dropped_columns.size() << " correlated columns dropped\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
    std::string data_csv;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool paper_mode = false;
    int workers = 1;
};

std::map<std::string, std::vector<std::string>> default_grid(ModelKind kind) {
    switch (kind) {
        case ModelKind::Logistic: return {{"l2", {"1e-6", "1e-2", "1"}}};
        case ModelKind::RandomForest:
            return {{"n_trees", {"100", "300"}}, {"max_depth", {"3", "5", "0"}}};
        case ModelKind::Gbt:
            return {{"n_rounds", {"100"}},
                    {"learning_rate", {"0.05", "0.1"}},
                    {"max_depth", {"3"}}};
        case ModelKind::Svm: return {{"C", {"0.1", "1", "10"}}, {"gamma", {"0", "0.1"}}};
        case ModelKind::Mlp:
            return {{"hidden_layers", {"16", "32x16"}}, {"learning_rate", {"0.05", "0.1"}}};
    }
    return {};
}

// PHASES-adjacent columns; the baseline logistic row uses whichever of these
// the table provides, and all columns when none are present.
const std::set<std::string>& phases_columns() {
    static const std::set<std::string> cols = {
        "age",          "HTN",          "prior_SAH",       "size_mm",
        "location_acomm", "location_pcomm", "location_basilar", "location_pca",
        "location_pica", "location_sca",  "location_aica",   "location_vert"};
    return cols;
}

struct ModelRun {
    ModelKind kind;
    GridSearchResult grid;
    ModelEvaluation evaluation;
    std::vector<ImportanceEntry> permutation;
    std::vector<ImportanceEntry> impurity; // trees only
};

int cmd_evaluate(const EvaluateOptions& opts) {
    ConfigFile cfg;
    if (!opts.config_path.empty()) cfg = ConfigFile::load(opts.config_path);

    const int n_repetitions = cfg.get_int("plan", "n_repetitions", 5);
    const int n_folds = cfg.get_int("plan", "n_folds", 5);
    std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_double("plan", "seed", 0));
    if (opts.seed_given) seed = opts.seed;
    const double sigma = cfg.get_double("preprocess", "outlier_sigma", 2.0);
    const double threshold = cfg.get_double("preprocess", "corr_threshold", 0.8);
    bool paper_mode = cfg.get_int("preprocess", "paper_mode", 0) != 0;
    if (opts.paper_mode) paper_mode = true;
    const std::string label_column = cfg.get("data", "label_column", "ruptured");

    if (n_repetitions < 1) throw ConfigError("n_repetitions must be >= 1");
    if (n_folds < 2) throw ConfigError("n_folds must be >= 2");
    if (sigma <= 0) throw ConfigError("outlier_sigma must be > 0");
    if (threshold <= 0 || threshold > 1)
        throw ConfigError("corr_threshold must be in (0, 1]");

    std::vector<ModelKind> kinds;
    if (const auto* list = cfg.find("models", "kinds")) {
        for (const auto& name : *list) kinds.push_back(model_kind_from(name));
    } else {
        kinds = {ModelKind::Logistic, ModelKind::RandomForest, ModelKind::Gbt,
                 ModelKind::Svm, ModelKind::Mlp};
    }
    if (kinds.empty()) throw ConfigError("no model kinds configured");

    CsvOptions csv_opts;
    csv_opts.label_column = label_column;
    const FeatureTable raw = read_csv(opts.data_csv, csv_opts);
    if (!raw.has_labels())
        throw SchemaError(opts.data_csv + ": no '" + label_column + "' label column");

    ensure_dir(opts.out_dir);
    std::vector<std::string> written;
    auto manifest = [&](const std::string& status, const std::string& error) {
        std::ostringstream m;
        m << "morphml evaluate manifest\n"
          << "status: " << status << "\n";
        if (!error.empty()) m << "error: " << error << "\n";
        m << "files:\n";
        for (const auto& f : written) m << "  " << f << "\n";
        write_text(opts.out_dir + "/MANIFEST", m.str());
    };
    auto emit = [&](const std::string& name, const std::string& content) {
        write_text(opts.out_dir + "/" + name, content);
        written.push_back(name);
    };

    std::string stage = "preprocess";
    try {
        const GlobalPreprocess prep = global_preprocess(raw, sigma, threshold);
        emit("preprocess_report.json", preprocess_report_json(prep.report).dump(2) + "\n");
        emit("correlation.svg", svg_correlation(prep.correlation));

        const FoldPlan plan = FoldPlan::make(raw.labels(), n_repetitions, n_folds, seed);
        CvOptions cv_opts;
        cv_opts.outlier_sigma = sigma;
        cv_opts.corr_threshold = threshold;
        cv_opts.paper_mode = paper_mode;

        stage = "models";
        std::vector<ModelRun> runs(kinds.size());
        std::vector<std::exception_ptr> failures(kinds.size());
        std::atomic<std::size_t> next{0};
        auto run_one = [&](std::size_t k) {
            ModelRun& run = runs[k];
            run.kind = kinds[k];
            ClassifierSpec base;
            base.kind = kinds[k];
            auto grid = default_grid(kinds[k]);
            if (const auto s = cfg.sections.find("grid." + to_string(kinds[k]));
                s != cfg.sections.end() && !s->second.empty())
                grid = {s->second.begin(), s->second.end()};
            run.grid = grid_search(base, grid, prep.encoded.x, prep.encoded.names,
                                   raw.labels(), n_folds, seed);
            run.evaluation = repeated_cv(run.grid.best, raw, plan, cv_opts);

            ClassifierSpec final_spec = run.grid.best;
            final_spec.class_weights = class_weights(prep.table);
            const ClassifierModel model =
                fit(final_spec, prep.encoded.x, prep.encoded.names, raw.labels());
            run.permutation = permutation_importance(model, prep.encoded.x,
                                                     prep.encoded.names, raw.labels(),
                                                     10, seed);
            if (kinds[k] == ModelKind::RandomForest || kinds[k] == ModelKind::Gbt)
                run.impurity = impurity_importance(model);
        };
        const int workers =
            std::max(1, std::min<int>(opts.workers, static_cast<int>(kinds.size())));
        if (workers == 1) {
            for (std::size_t k = 0; k < kinds.size(); ++k) run_one(k);
        } else {
            auto worker = [&] {
                for (std::size_t k; (k = next.fetch_add(1)) < kinds.size();) {
                    try {
                        run_one(k);
                    } catch (...) {
                        failures[k] = std::current_exception();
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
            for (const auto& f : failures)
                if (f) std::rethrow_exception(f);
        }

        stage = "baseline";
        // PHASES-style logistic baseline: default hyperparameters on the
        // clinical-score columns when the table has them.
        ClassifierSpec baseline;
        baseline.kind = ModelKind::Logistic;
        baseline.seed = seed;
        std::set<std::size_t> drop;
        bool any_phases = false;
        for (std::size_t c = 0; c < raw.n_cols(); ++c)
            if (phases_columns().count(raw.column(c).name)) any_phases = true;
        FeatureTable baseline_table = raw;
        if (any_phases) {
            for (std::size_t c = 0; c < raw.n_cols(); ++c)
                if (!phases_columns().count(raw.column(c).name)) drop.insert(c);
            baseline_table = raw.without_columns(drop);
        }
        ModelEvaluation baseline_eval = repeated_cv(baseline, baseline_table, plan, cv_opts);
        baseline_eval.name = "logistic_baseline";

        stage = "report";
        EvaluationReport report;
        report.seed = seed;
        report.models.push_back(std::move(baseline_eval));
        for (auto& run : runs) report.models.push_back(std::move(run.evaluation));
        report.pairwise = pairwise_wilcoxon(report.models);
        for (auto& run : runs) {
            report.permutation_importance[to_string(run.kind)] = std::move(run.permutation);
            if (!run.impurity.empty())
                report.impurity_importance[to_string(run.kind)] = std::move(run.impurity);
        }
        report.correlation = prep.correlation;
        report.preprocess_notes.push_back(
            paper_mode ? "paper_mode: single global preprocessing pass"
                       : "fold-safe preprocessing fitted on training rows only");
        report.preprocess_notes.push_back(
            "grid search scored on the globally preprocessed table");
        if (!any_phases)
            report.preprocess_notes.push_back(
                "logistic_baseline: no PHASES columns present, used all features");

        save_report(report, opts.out_dir + "/report.json");
        written.push_back("report.json");
        emit("metrics_table.txt", format_metrics_table(report));
        emit("pairwise_table.txt", format_pairwise_table(report.pairwise));

        stage = "plots";
        std::vector<RocSeries> series;
        for (const auto& model : report.models)
            series.push_back({model.name,
                              model.repetitions.at(model.selected_repetition).roc,
                              model.median_auc});
        emit("roc.svg", svg_roc(series));
        for (const auto& [name, entries] : report.permutation_importance)
            emit("importance_" + name + ".svg",
                 svg_importance(entries, "Permutation importance: " + name));
        for (const auto& [name, entries] : report.impurity_importance)
            emit("impurity_" + name + ".svg",
                 svg_importance(entries, "Impurity importance: " + name));

        manifest("complete", "");
        std::cout << format_metrics_table(report) << "\n"
                  << format_pairwise_table(report.pairwise);
        std::cout << "wrote " << written.size() + 1 << " files to " << opts.out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        // Preserve the concrete exception type (it drives the exit code);
        // the stage name goes to stderr and the MANIFEST.
        manifest("incomplete", stage + ": " + e.what());
        std::cerr << "evaluate stage '" << stage << "' failed\n";
        throw;
    }
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const std::string& path_a, const std::string& path_b,
                const std::string& out_json) {
    const EvaluationReport a = load_report(path_a);
    std::vector<PairwiseTest> tests;
    if (path_b.empty()) {
        tests = pairwise_wilcoxon(a.models);
    } else {
        const EvaluationReport b = load_report(path_b);
        for (const auto& ma : a.models) {
            for (const auto& mb : b.models) {
                if (ma.name != mb.name) continue;
                if (ma.repetitions.size() != mb.repetitions.size())
                    throw InvalidArgument("compare: '" + ma.name +
                                          "' has mismatched repetition counts");
                std::vector<double> va, vb;
                for (const auto& r : ma.repetitions) va.push_back(r.auc);
                for (const auto& r : mb.repetitions) vb.push_back(r.auc);
                PairwiseTest t;
                t.model_a = ma.name + "@a";
                t.model_b = mb.name + "@b";
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
        if (tests.empty())
            throw InvalidArgument("compare: the two reports share no model names");
    }
    std::cout << format_pairwise_table(tests);
    if (!out_json.empty()) {
        nlohmann::json j;
        j["format"] = "morphml-compare";
        j["version"] = 1;
        j["tests"] = nlohmann::json::array();
        for (const auto& t : tests)
            j["tests"].push_back({{"model_a", t.model_a},
                                  {"model_b", t.model_b},
                                  {"w", t.w},
                                  {"p_two_sided", t.p_two_sided},
                                  {"p_greater", t.p_greater},
                                  {"p_less", t.p_less},
                                  {"n_effective", t.n_effective},
                                  {"degenerate", t.degenerate}});
        write_text(out_json, j.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// plot

int cmd_plot(const std::string& report_path, const std::string& kind,
             const std::string& out_svg, const std::string& model) {
    const EvaluationReport report = load_report(report_path);
    std::string svg;
    if (kind == "roc") {
        std::vector<RocSeries> series;
        for (const auto& m : report.models) {
            if (m.repetitions.empty()) throw PlotDataError(m.name + ": no repetitions");
            series.push_back(
                {m.name, m.repetitions.at(m.selected_repetition).roc, m.median_auc});
        }
        svg = svg_roc(series);
    } else if (kind == "importance") {
        if (report.permutation_importance.empty())
            throw PlotDataError("report has no importance section");
        std::string name = model;
        if (name.empty()) name = report.permutation_importance.begin()->first;
        const auto it = report.permutation_importance.find(name);
        if (it == report.permutation_importance.end())
            throw PlotDataError("no importance entries for model '" + name + "'");
        svg = svg_importance(it->second, "Permutation importance: " + name);
    } else if (kind == "correlation") {
        if (report.correlation.labels.empty())
            throw PlotDataError("report has no correlation section");
        svg = svg_correlation(report.correlation);
    } else {
        throw InvalidArgument("plot: unknown kind '" + kind + "'");
    }
    write_svg(svg, out_svg);
    std::cout << "wrote " << out_svg << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
    std::string kind = "tabular"; // tabular | mesh | grid
    std::string out_path;
    std::uint64_t seed = 0;
    // tabular
    std::size_t n_samples = 178;
    std::size_t n_features = 10;
    double balance = 0.37;
    double noise = 0.0;
    std::size_t outliers = 0;
    std::size_t duplicates = 0;
    // mesh
    std::string shape = "icosphere"; // icosphere | dome | cube | notched | dumbbell
    double radius = 1.0;
    int subdivisions = 3;
    double amplitude = 0.1;
    int lobes = 6;
    // grid
    std::string grid_kind = "menger"; // menger | line | solid
    int depth = 3;
    int extent = 64;
};

int cmd_synth(const SynthOptions& opts) {
    if (opts.kind == "tabular") {
        TabularSpec spec;
        spec.n_samples = opts.n_samples;
        spec.n_features = opts.n_features;
        spec.class_balance = opts.balance;
        spec.label_noise = opts.noise;
        spec.n_outliers = opts.outliers;
        spec.n_duplicate_columns = opts.duplicates;
        spec.seed = opts.seed;
        const TabularData data = gen_tabular(spec);
        write_csv(data.table, opts.out_path);
        std::cout << "wrote " << data.table.n_rows() << " rows to " << opts.out_path << "\n";
        return 0;
    }
    if (opts.kind == "mesh") {
        TriangleMesh mesh;
        if (opts.shape == "icosphere") mesh = synth::icosphere(opts.radius, opts.subdivisions);
        else if (opts.shape == "dome")
            mesh = synth::perturbed_dome(opts.radius, opts.subdivisions, opts.amplitude,
                                         opts.lobes);
        else if (opts.shape == "cube") mesh = synth::unit_cube();
        else if (opts.shape == "notched") mesh = synth::notched_cube();
        else if (opts.shape == "dumbbell") mesh = synth::dumbbell();
        else throw InvalidArgument("synth: unknown shape '" + opts.shape + "'");
        save_stl_binary(mesh, opts.out_path);
        std::cout << "wrote " << mesh.triangles.size() << " triangles to " << opts.out_path
                  << "\n";
        return 0;
    }
    if (opts.kind == "grid") {
        VoxelGrid grid;
        if (opts.grid_kind == "menger") grid = synth::menger_grid(opts.depth);
        else if (opts.grid_kind == "line") grid = synth::line_grid(opts.extent);
        else if (opts.grid_kind == "solid") grid = synth::solid_grid(opts.extent);
        else throw InvalidArgument("synth: unknown grid '" + opts.grid_kind + "'");
        save_grid(grid, opts.out_path);
        std::cout << "wrote " << grid.occupied_count() << " occupied voxels to "
                  << opts.out_path << "\n";
        return 0;
    }
    throw InvalidArgument("synth: unknown kind '" + opts.kind + "'");
}

// ---------------------------------------------------------------------------
// exit-code mapping: 0 success, 1 usage/config, 2 data, 3 internal

int classify_exception(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
        dynamic_cast<const UnsupportedKindError*>(&e))
        return 1;
    if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
        dynamic_cast<const EncodingError*>(&e) || dynamic_cast<const CorruptionError*>(&e) ||
        dynamic_cast<const UnsupportedVersionError*>(&e) ||
        dynamic_cast<const NotClosedError*>(&e) ||
        dynamic_cast<const DegenerateGeometryError*>(&e) ||
        dynamic_cast<const AnnotationError*>(&e) || dynamic_cast<const EmptySetError*>(&e) ||
        dynamic_cast<const InsufficientScalesError*>(&e) ||
        dynamic_cast<const DegenerateFitError*>(&e) ||
        dynamic_cast<const DegenerateLabelsError*>(&e) ||
        dynamic_cast<const InfeasibleStratificationError*>(&e) ||
        dynamic_cast<const PlotDataError*>(&e))
        return 2;
    return 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"morphml: morphometric feature extraction and rupture-prediction "
                 "model benchmarking"};
    app.require_subcommand(1);

    // extract
    ExtractOptions ex;
    auto* extract = app.add_subcommand("extract", "Extract geometric features from meshes");
    extract->add_option("meshes", ex.meshes, "Input STL meshes");
    extract->add_option("--annotations", ex.annotations,
                        "Neck-plane files paired with meshes ('-' = none)");
    extract->add_option("--resolution", ex.resolution, "Voxelization resolution");
    extract->add_option("--out", ex.out_csv, "Output feature CSV")->required();

    // preprocess
    PreprocessOptions pp;
    auto* preprocess = app.add_subcommand("preprocess", "Impute outliers and prune "
                                                        "correlated columns");
    preprocess->add_option("--data", pp.in_csv, "Input feature CSV")->required();
    std::string pp_out_dir;
    preprocess->add_option("--out-dir", pp_out_dir, "Output directory");
    preprocess->add_option("--label-column", pp.label_column, "Label column name");
    preprocess->add_option("--sigma", pp.sigma, "Outlier threshold in SDs");
    preprocess->add_option("--threshold", pp.threshold, "Correlation pruning threshold");

    // evaluate
    EvaluateOptions ev;
    auto* evaluate = app.add_subcommand("evaluate", "Run the full benchmarking protocol");
    evaluate->add_option("--data", ev.data_csv, "Labeled feature CSV")->required();
    evaluate->add_option("--config", ev.config_path, "Run configuration file");
    std::string ev_out_dir;
    evaluate->add_option("--out-dir", ev_out_dir, "Output directory");
    auto* seed_opt = evaluate->add_option("--seed", ev.seed, "Master seed");
    evaluate->add_flag("--paper-mode", ev.paper_mode,
                       "Single global preprocessing pass (as published)");
    evaluate->add_option("--workers", ev.workers, "Worker pool size");

    // compare
    std::string cmp_a, cmp_b, cmp_out;
    auto* compare = app.add_subcommand("compare", "Wilcoxon tests over report AUCs");
    compare->add_option("report_a", cmp_a, "First report")->required();
    compare->add_option("report_b", cmp_b, "Second report (omit for within-report pairs)");
    compare->add_option("--out", cmp_out, "Machine-readable output JSON");

    // plot
    std::string plot_report, plot_kind, plot_out, plot_model;
    auto* plot = app.add_subcommand("plot", "Render an SVG from a report");
    plot->add_option("--report", plot_report, "Report JSON")->required();
    plot->add_option("--kind", plot_kind, "roc | importance | correlation")->required();
    plot->add_option("--out", plot_out, "Output SVG")->required();
    plot->add_option("--model", plot_model, "Model name for importance plots");

    // synth
    SynthOptions sy;
    auto* synth = app.add_subcommand("synth", "Generate synthetic data");
    synth->add_option("--kind", sy.kind, "tabular | mesh | grid");
    synth->add_option("--out", sy.out_path, "Output path")->required();
    synth->add_option("--seed", sy.seed, "Generation seed");
    synth->add_option("--samples", sy.n_samples, "Tabular: row count");
    synth->add_option("--features", sy.n_features, "Tabular: feature count");
    synth->add_option("--balance", sy.balance, "Tabular: positive fraction");
    synth->add_option("--noise", sy.noise, "Tabular: label noise SD");
    synth->add_option("--outliers", sy.outliers, "Tabular: injected outlier cells");
    synth->add_option("--duplicates", sy.duplicates, "Tabular: duplicated columns");
    synth->add_option("--shape", sy.shape, "Mesh: icosphere|dome|cube|notched|dumbbell");
    synth->add_option("--radius", sy.radius, "Mesh: radius");
    synth->add_option("--subdivisions", sy.subdivisions, "Mesh: icosphere subdivisions");
    synth->add_option("--amplitude", sy.amplitude, "Mesh: dome perturbation amplitude");
    synth->add_option("--lobes", sy.lobes, "Mesh: dome lobe count");
    synth->add_option("--grid", sy.grid_kind, "Grid: menger|line|solid");
    synth->add_option("--depth", sy.depth, "Grid: menger depth");
    synth->add_option("--extent", sy.extent, "Grid: line/solid edge length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*extract) return cmd_extract(ex);
        if (*preprocess) {
            pp.out_dir = resolve_out_dir(pp_out_dir);
            return cmd_preprocess(pp);
        }
        if (*evaluate) {
            ev.out_dir = resolve_out_dir(ev_out_dir);
            ev.seed_given = seed_opt->count() > 0;
            return cmd_evaluate(ev);
        }
        if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_out);
        if (*plot) return cmd_plot(plot_report, plot_kind, plot_out, plot_model);
        if (*synth) return cmd_synth(sy);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_exception(e);
    }
    return 0;
}
