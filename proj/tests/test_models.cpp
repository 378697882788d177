#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "morphml/core/rng.hpp"
#include "morphml/models/fit.hpp"
#include "morphml/models/grid_search.hpp"
#include "morphml/models/serialize.hpp"

using namespace morphml;
using Catch::Approx;

namespace {

// Two Gaussian blobs along the first feature; the rest is noise.
struct Blob {
    Matrix x;
    std::vector<int> y;
    std::vector<std::string> names;
};

Blob make_blob(std::size_t n, std::size_t d, double separation, std::uint64_t seed) {
    Blob b;
    b.x = Matrix(n, d);
    b.y.resize(n);
    Rng rng(seed, "test-blob");
    for (std::size_t i = 0; i < n; ++i) {
        b.y[i] = i % 2 == 0 ? 1 : 0;
        b.x(i, 0) = rng.normal() + (b.y[i] ? separation : -separation);
        for (std::size_t c = 1; c < d; ++c) b.x(i, c) = rng.normal();
    }
    for (std::size_t c = 0; c < d; ++c) b.names.push_back("f" + std::to_string(c));
    return b;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

double bce_loss(const MlpParams& p, const Matrix& x, const std::vector<int>& y,
                const std::vector<double>& w) {
    double loss = 0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double prob = detail::mlp_forward(p, x.data().data() + i * x.cols());
        loss -= w[i] * (y[i] * std::log(std::max(prob, 1e-300)) +
                        (1 - y[i]) * std::log(std::max(1.0 - prob, 1e-300)));
    }
    return loss;
}

// Exhaustive best-stump oracle mirroring the documented tie rule: lowest
// feature index, then lowest threshold.
struct Stump {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0;
};

Stump exhaustive_stump(const Matrix& x, const std::vector<int>& y, const std::vector<double>& w) {
    auto gini = [](double wt, double wy) {
        return wt > 0 ? wt - (wy * wy + (wt - wy) * (wt - wy)) / wt : 0.0;
    };
    double w_tot = 0, wy_tot = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        w_tot += w[i];
        wy_tot += w[i] * y[i];
    }
    const double parent = gini(w_tot, wy_tot);
    Stump best;
    double best_gain = 1e-12;
    for (std::size_t f = 0; f < x.cols(); ++f) {
        std::vector<double> vals = x.col(f);
        std::vector<double> sorted = vals;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
            const double thr = sorted[k] + (sorted[k + 1] - sorted[k]) / 2.0;
            double wl = 0, wyl = 0;
            for (std::size_t i = 0; i < y.size(); ++i)
                if (vals[i] <= thr) {
                    wl += w[i];
                    wyl += w[i] * y[i];
                }
            const double gain = parent - gini(wl, wyl) - gini(w_tot - wl, wy_tot - wyl);
            if (gain > best_gain + 1e-15) {
                best_gain = gain;
                best = {true, f, thr};
            }
        }
    }
    return best;
}

} // namespace

TEST_CASE("intercept-only logistic model recovers the closed-form MLE") {
    Matrix x(4, 0);
    const std::vector<int> y = {1, 1, 1, 0};
    ClassifierSpec spec;
    spec.kind = ModelKind::Logistic;
    const ClassifierModel model = fit(spec, x, {}, y);
    const auto& p = std::get<LogisticParams>(model.params);
    CHECK(p.bias == Approx(std::log(3.0)).epsilon(1e-6));
    const auto proba = predict_proba(model, Matrix(2, 0), {});
    CHECK(proba[0] == Approx(0.75).epsilon(1e-6));
    CHECK(proba[1] == proba[0]);
}

TEST_CASE("logistic separates a wide-margin blob") {
    const Blob b = make_blob(60, 2, 3.0, 7);
    ClassifierSpec spec;
    spec.kind = ModelKind::Logistic;
    const ClassifierModel model = fit(spec, b.x, b.names, b.y);
    Matrix probe(2, 2, 0.0);
    probe(0, 0) = -5.0;
    probe(1, 0) = 5.0;
    const auto proba = predict_proba(model, probe, b.names);
    CHECK(proba[0] < 0.5);
    CHECK(proba[1] > 0.5);
}

TEST_CASE("single gini tree matches the exhaustive stump oracle") {
    Rng rng(99, "stump-oracle");
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng.below(9); // up to 12 rows
        Matrix x(n, 3);
        std::vector<int> y(n);
        std::vector<double> w(n);
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.below(2));
            (y[i] ? has1 : has0) = true;
            w[i] = 0.25 + rng.uniform();
            for (std::size_t c = 0; c < 3; ++c) x(i, c) = std::floor(rng.uniform(0, 5));
        }
        if (!has0 || !has1) continue;
        detail::TreeConfig config;
        config.max_depth = 1;
        std::vector<std::size_t> samples(n);
        std::iota(samples.begin(), samples.end(), 0);
        const DecisionTree tree = detail::build_gini_tree(x, y, w, samples, config);
        const Stump oracle = exhaustive_stump(x, y, w);
        if (!oracle.found) {
            CHECK(tree.nodes[0].feature == -1);
        } else {
            REQUIRE(tree.nodes[0].feature >= 0);
            CHECK(static_cast<std::size_t>(tree.nodes[0].feature) == oracle.feature);
            CHECK(tree.nodes[0].threshold == Approx(oracle.threshold).margin(1e-12));
        }
    }
}

TEST_CASE("one-tree forest learns the 4-point stump") {
    Matrix x(4, 1);
    for (int i = 0; i < 4; ++i) x(i, 0) = i + 1;
    const std::vector<int> y = {0, 0, 1, 1};
    ClassifierSpec spec;
    spec.kind = ModelKind::RandomForest;
    spec.set_param("n_trees", 1);
    spec.set_param("max_depth", 1);
    // a one-tree forest bootstraps, so pick a seed whose bootstrap spans both
    // classes adjacent to the boundary
    bool solved = false;
    for (std::uint64_t seed = 0; seed < 16 && !solved; ++seed) {
        spec.seed = seed;
        const ClassifierModel model = fit(spec, x, {"x"}, y);
        const auto pred = predict(model, x, {"x"});
        solved = pred == y;
        if (solved) {
            const auto& forest = std::get<ForestParams>(model.params);
            REQUIRE(forest.trees.size() == 1);
            const auto& root = forest.trees[0].nodes[0];
            CHECK(root.feature == 0);
            CHECK(root.threshold > 2.0);
            CHECK(root.threshold < 3.0);
        }
    }
    CHECK(solved);
}

TEST_CASE("forest prediction variance across seeds shrinks with more trees") {
    const Blob b = make_blob(24, 2, 1.0, 5);
    Matrix probe(1, 2, 0.0);
    probe(0, 0) = 0.3;
    std::vector<double> variances;
    for (int n_trees : {1, 10, 100}) {
        std::vector<double> preds;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            ClassifierSpec spec;
            spec.kind = ModelKind::RandomForest;
            spec.set_param("n_trees", n_trees);
            spec.seed = seed;
            preds.push_back(predict_proba(fit(spec, b.x, b.names, b.y), probe, b.names)[0]);
        }
        double m = 0;
        for (double p : preds) m += p;
        m /= preds.size();
        double v = 0;
        for (double p : preds) v += (p - m) * (p - m);
        variances.push_back(v / preds.size());
    }
    CHECK(variances[1] < variances[0]);
    CHECK(variances[2] < variances[1]);
}

TEST_CASE("one-round unit-rate boosting equals a direct Newton tree") {
    const Blob b = make_blob(16, 2, 1.5, 11);
    ClassifierSpec spec;
    spec.kind = ModelKind::Gbt;
    spec.set_param("n_rounds", 1);
    spec.set_param("learning_rate", 1.0);
    spec.set_param("max_depth", 2);
    const ClassifierModel model = fit(spec, b.x, b.names, b.y);
    const auto proba = predict_proba(model, b.x, b.names);

    // oracle: prior log-odds, one Newton tree on (g, h), sigmoid of the sum
    double pos = 0;
    for (int v : b.y) pos += v;
    const double p0 = pos / static_cast<double>(b.y.size());
    const double base = std::log(p0 / (1.0 - p0));
    std::vector<double> g(b.y.size()), h(b.y.size());
    for (std::size_t i = 0; i < b.y.size(); ++i) {
        g[i] = p0 - b.y[i];
        h[i] = p0 * (1.0 - p0);
    }
    detail::TreeConfig config;
    config.max_depth = 2;
    const DecisionTree tree = detail::build_newton_tree(b.x, g, h, 1.0, config);
    for (std::size_t i = 0; i < b.y.size(); ++i) {
        const double margin = base + tree.predict_row(b.x.data().data() + i * 2);
        CHECK(proba[i] == Approx(1.0 / (1.0 + std::exp(-margin))).margin(1e-12));
    }
}

TEST_CASE("linear SVM on two points recovers the analytic max-margin plane") {
    Matrix x(2, 1);
    x(0, 0) = -1.0;
    x(1, 0) = 1.0;
    const std::vector<int> y = {0, 1};
    ClassifierSpec spec;
    spec.kind = ModelKind::Svm;
    spec.kernel = SvmKernel::Linear;
    spec.set_param("C", 1000.0);
    spec.set_param("standardize", 0);
    const ClassifierModel model = fit(spec, x, {"x"}, y);
    const auto& p = std::get<SvmParams>(model.params);
    // w = sum alpha_i y_i x_i = 1, b = 0
    double w = 0;
    for (std::size_t s = 0; s < p.dual_coef.size(); ++s)
        w += p.dual_coef[s] * p.support_vectors(s, 0);
    CHECK(w == Approx(1.0).margin(2e-3));
    CHECK(p.bias == Approx(0.0).margin(2e-3));
    const auto proba = predict_proba(model, x, {"x"});
    CHECK(proba[0] < 0.5);
    CHECK(proba[1] > 0.5);
}

TEST_CASE("SMO solution satisfies the KKT conditions on every training point") {
    const Blob b = make_blob(40, 2, 1.0, 3);
    detail::SmoProblem prob{b.x, {}, {}, SvmKernel::Rbf, 0.5};
    for (int v : b.y) prob.y.push_back(v ? 1.0 : -1.0);
    prob.cap.assign(b.y.size(), 2.0);
    std::vector<double> alpha;
    double bias = 0;
    const bool converged = detail::smo_solve(prob, 1e-3, 400000, alpha, bias);
    REQUIRE(converged);
    const double tol = 2.5e-3; // KKT tolerance 1e-3 on the f-gap, slack for bias
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        REQUIRE(alpha[i] >= -1e-12);
        REQUIRE(alpha[i] <= prob.cap[i] + 1e-12);
        double f = bias;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            if (alpha[j] > 0) f += alpha[j] * prob.y[j] * prob.k(i, j);
        const double margin = prob.y[i] * f;
        if (alpha[i] < 1e-9) CHECK(margin >= 1.0 - tol);
        else if (alpha[i] > prob.cap[i] - 1e-9) CHECK(margin <= 1.0 + tol);
        else CHECK(margin == Approx(1.0).margin(tol));
    }
}

TEST_CASE("MLP analytic gradients match central finite differences") {
    Rng rng(13, "mlp-fd");
    for (int net = 0; net < 3; ++net) {
        ClassifierSpec spec;
        spec.kind = ModelKind::Mlp;
        spec.hidden_layers = net == 0 ? std::vector<int>{5}
                            : net == 1 ? std::vector<int>{8, 4}
                                       : std::vector<int>{6, 5, 3};
        spec.seed = 100 + static_cast<std::uint64_t>(net);
        const std::size_t d = 4, n = 6;
        Matrix x(n, d);
        std::vector<int> y(n);
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.below(2));
            w[i] = 0.5 + rng.uniform();
            for (std::size_t c = 0; c < d; ++c) x(i, c) = rng.normal();
        }
        MlpParams params = detail::init_mlp(spec, d);
        // move biases off zero so no unit sits exactly on the ReLU kink,
        // where central differences and the subgradient legitimately differ
        for (auto& layer : params.biases)
            for (auto& bias : layer) bias = 0.1 + 0.2 * rng.uniform();

        std::vector<Matrix> gw;
        std::vector<std::vector<double>> gb;
        for (const auto& wm : params.weights) {
            gw.emplace_back(wm.rows(), wm.cols());
            gb.emplace_back(wm.rows(), 0.0);
        }
        for (std::size_t i = 0; i < n; ++i)
            detail::mlp_backprop(params, x.data().data() + i * d, y[i], w[i], gw, gb);

        const double h = 1e-6;
        for (std::size_t l = 0; l < params.weights.size(); ++l) {
            for (std::size_t k = 0; k < params.weights[l].data().size(); ++k) {
                const double orig = params.weights[l].data()[k];
                params.weights[l].data()[k] = orig + h;
                const double up = bce_loss(params, x, y, w);
                params.weights[l].data()[k] = orig - h;
                const double down = bce_loss(params, x, y, w);
                params.weights[l].data()[k] = orig;
                const double numeric = (up - down) / (2 * h);
                const double analytic = gw[l].data()[k];
                CHECK(std::abs(numeric - analytic) <=
                      1e-4 * std::max(1.0, std::abs(numeric)));
            }
            for (std::size_t k = 0; k < gb[l].size(); ++k) {
                const double orig = params.biases[l][k];
                params.biases[l][k] = orig + h;
                const double up = bce_loss(params, x, y, w);
                params.biases[l][k] = orig - h;
                const double down = bce_loss(params, x, y, w);
                params.biases[l][k] = orig;
                const double numeric = (up - down) / (2 * h);
                CHECK(std::abs(numeric - gb[l][k]) <= 1e-4 * std::max(1.0, std::abs(numeric)));
            }
        }
    }
}

TEST_CASE("all five kinds separate an easy blob and are bit-deterministic") {
    const Blob b = make_blob(40, 2, 3.0, 21);
    Matrix probe(2, 2, 0.0);
    probe(0, 0) = -5.0;
    probe(1, 0) = 5.0;
    for (ModelKind kind : {ModelKind::Logistic, ModelKind::RandomForest, ModelKind::Gbt,
                           ModelKind::Svm, ModelKind::Mlp}) {
        ClassifierSpec spec;
        spec.kind = kind;
        spec.seed = 42;
        if (kind == ModelKind::Mlp) spec.set_param("epochs", 100);
        const ClassifierModel m1 = fit(spec, b.x, b.names, b.y);
        const ClassifierModel m2 = fit(spec, b.x, b.names, b.y);
        const auto p1 = predict_proba(m1, probe, b.names);
        const auto p2 = predict_proba(m2, probe, b.names);
        INFO(to_string(kind));
        CHECK(p1[0] < 0.5);
        CHECK(p1[1] > 0.5);
        CHECK(p1 == p2); // bit-identical refit
        const auto train1 = predict_proba(m1, b.x, b.names);
        const auto train2 = predict_proba(m2, b.x, b.names);
        CHECK(train1 == train2);
    }
}

TEST_CASE("duplicate rows get identical probabilities; empty input gives empty output") {
    const Blob b = make_blob(30, 2, 2.0, 8);
    ClassifierSpec spec;
    spec.kind = ModelKind::Gbt;
    spec.set_param("n_rounds", 20);
    const ClassifierModel model = fit(spec, b.x, b.names, b.y);
    Matrix dup(2, 2);
    for (std::size_t c = 0; c < 2; ++c) dup(0, c) = dup(1, c) = b.x(0, c);
    const auto proba = predict_proba(model, dup, b.names);
    CHECK(proba[0] == proba[1]);
    CHECK(predict_proba(model, Matrix(0, 2), b.names).empty());
}

TEST_CASE("training input validation") {
    Matrix x(4, 1);
    ClassifierSpec spec;
    CHECK_THROWS_AS(fit(spec, x, {"x"}, {1, 1, 1, 1}), DegenerateLabelsError);
    CHECK_THROWS_AS(fit(spec, x, {"x"}, {0, 1, 0, 2}), InvalidArgument);
    x(2, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit(spec, x, {"x"}, {0, 1, 0, 1}), InvalidArgument);
}

TEST_CASE("predict rejects mismatched schemas with a listing") {
    const Blob b = make_blob(20, 2, 2.0, 4);
    ClassifierSpec spec;
    const ClassifierModel model = fit(spec, b.x, b.names, b.y);
    try {
        predict_proba(model, b.x, {"f0", "other"});
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("f1") != std::string::npos);
        CHECK(msg.find("other") != std::string::npos);
    }
}

TEST_CASE("hyperparameters are validated against the kind registry") {
    ClassifierSpec spec;
    spec.kind = ModelKind::RandomForest;
    CHECK_THROWS_AS(spec.set_param("C", 1.0), InvalidArgument);
    CHECK_THROWS_AS(spec.set_param("n_trees", 0.0), InvalidArgument);
    spec.set_param("n_trees", 50);
    CHECK(spec.param("n_trees") == 50.0);
    CHECK(spec.param("max_depth") == 0.0); // default
    spec.kind = ModelKind::Mlp;
    spec.set_param_text("hidden_layers", "32x16");
    CHECK(spec.hidden_layers == std::vector<int>{32, 16});
}

TEST_CASE("doubling all sample weights leaves decisions unchanged") {
    const Blob b = make_blob(24, 2, 1.0, 17);
    Rng rng(55, "weights");
    std::vector<double> w1(b.y.size()), w2;
    for (auto& v : w1) v = 0.5 + rng.uniform();
    for (double v : w1) w2.push_back(2.0 * v);

    // tree splits identical
    detail::TreeConfig config;
    config.max_depth = 3;
    std::vector<std::size_t> samples(b.y.size());
    std::iota(samples.begin(), samples.end(), 0);
    const DecisionTree t1 = detail::build_gini_tree(b.x, b.y, w1, samples, config);
    std::iota(samples.begin(), samples.end(), 0);
    const DecisionTree t2 = detail::build_gini_tree(b.x, b.y, w2, samples, config);
    REQUIRE(t1.nodes.size() == t2.nodes.size());
    for (std::size_t i = 0; i < t1.nodes.size(); ++i) {
        CHECK(t1.nodes[i].feature == t2.nodes[i].feature);
        CHECK(t1.nodes[i].threshold == t2.nodes[i].threshold);
    }

    // logistic decision function invariant when unpenalized
    ClassifierSpec spec;
    spec.kind = ModelKind::Logistic;
    spec.set_param("l2", 0.0);
    const auto pa = predict_proba(fit(spec, b.x, b.names, b.y, &w1), b.x, b.names);
    const auto pb = predict_proba(fit(spec, b.x, b.names, b.y, &w2), b.x, b.names);
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == Approx(pb[i]).margin(1e-6));
}

TEST_CASE("class weighting lifts minority recall on an imbalanced set") {
    // 90/10 imbalance with overlapping classes
    const std::size_t n = 100;
    Matrix x(n, 1);
    std::vector<int> y(n);
    Rng rng(70, "imbalance");
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i < 10 ? 1 : 0;
        x(i, 0) = rng.normal() + (y[i] ? 1.0 : -1.0);
    }
    ClassifierSpec plain;
    plain.kind = ModelKind::Logistic;
    ClassifierSpec weighted = plain;
    weighted.class_weights = {{0, n / (2.0 * 90)}, {1, n / (2.0 * 10)}};
    const auto pred_plain = predict(fit(plain, x, {"x"}, y), x, {"x"});
    const auto pred_weighted = predict(fit(weighted, x, {"x"}, y), x, {"x"});
    int rec_plain = 0, rec_weighted = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        rec_plain += pred_plain[i];
        rec_weighted += pred_weighted[i];
    }
    CHECK(rec_weighted >= rec_plain);
    CHECK(rec_weighted > 5); // weighted model actually finds the minority
}

TEST_CASE("save/load round-trips every kind bit-exactly") {
    const Blob b = make_blob(30, 3, 2.0, 31);
    Matrix probe(5, 3);
    Rng rng(77, "probe");
    for (auto& v : probe.data()) v = rng.normal();
    for (ModelKind kind : {ModelKind::Logistic, ModelKind::RandomForest, ModelKind::Gbt,
                           ModelKind::Svm, ModelKind::Mlp}) {
        ClassifierSpec spec;
        spec.kind = kind;
        spec.seed = 9;
        if (kind == ModelKind::Mlp) spec.set_param("epochs", 50);
        if (kind == ModelKind::RandomForest) spec.set_param("n_trees", 10);
        const ClassifierModel model = fit(spec, b.x, b.names, b.y);
        const auto path = temp_path("morphml_model_" + to_string(kind) + ".bin");
        save_model(model, path);
        const ClassifierModel loaded = load_model(path);
        INFO(to_string(kind));
        CHECK(loaded.kind == kind);
        CHECK(loaded.feature_names == b.names);
        CHECK(predict_proba(loaded, probe, b.names) == predict_proba(model, probe, b.names));
    }
}

TEST_CASE("truncated model file raises a corruption error") {
    const Blob b = make_blob(20, 2, 2.0, 2);
    ClassifierSpec spec;
    const ClassifierModel model = fit(spec, b.x, b.names, b.y);
    const auto path = temp_path("morphml_model_trunc.bin");
    save_model(model, path);
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    out.close();
    CHECK_THROWS_AS(load_model(path), CorruptionError);
}

TEST_CASE("future format version raises an unsupported-version error") {
    detail::ByteWriter w;
    w.raw(detail::kModelMagic, 8);
    w.u32(detail::kModelVersion + 7);
    w.str("logistic");
    const std::uint64_t checksum = detail::fnv1a_bytes(w.bytes);
    w.u64(checksum);
    const auto path = temp_path("morphml_model_future.bin");
    std::ofstream out(path, std::ios::binary);
    out.write(w.bytes.data(), static_cast<std::streamsize>(w.bytes.size()));
    out.close();
    CHECK_THROWS_AS(load_model(path), UnsupportedVersionError);
}

TEST_CASE("grid search enumerates the Cartesian grid and prefers stronger cells") {
    const Blob b = make_blob(60, 2, 1.0, 23);
    ClassifierSpec base;
    base.kind = ModelKind::RandomForest;

    SECTION("single-point grid returns that spec") {
        const auto result =
            grid_search(base, {{"n_trees", {"5"}}}, b.x, b.names, b.y, 3, 1);
        CHECK(result.table.size() == 1);
        CHECK(result.best.param("n_trees") == 5.0);
    }
    SECTION("2x2 grid yields 4 score rows") {
        const auto result = grid_search(
            base, {{"n_trees", {"5", "20"}}, {"max_depth", {"2", "4"}}}, b.x, b.names, b.y, 3, 1);
        CHECK(result.table.size() == 4);
        for (const auto& cell : result.table) CHECK_FALSE(cell.failed);
    }
    SECTION("a dominated cell loses on mean AUC") {
        const auto result =
            grid_search(base, {{"n_trees", {"1", "200"}}}, b.x, b.names, b.y, 3, 1);
        CHECK(result.best.param("n_trees") == 200.0);
    }
    SECTION("empty grid is an error") {
        CHECK_THROWS_AS(grid_search(base, {}, b.x, b.names, b.y, 3, 1), InvalidArgument);
    }
    SECTION("invalid values fail per cell, not the whole grid") {
        const auto result =
            grid_search(base, {{"n_trees", {"0", "20"}}}, b.x, b.names, b.y, 3, 1);
        REQUIRE(result.table.size() == 2);
        CHECK(result.table[0].failed);
        CHECK_FALSE(result.table[1].failed);
        CHECK(result.best.param("n_trees") == 20.0);
    }
}
