#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/core/matrix.hpp"
#include "morphml/core/rng.hpp"

namespace morphml {

enum class ModelKind { Logistic, RandomForest, Gbt, Svm, Mlp };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Logistic: return "logistic";
        case ModelKind::RandomForest: return "random_forest";
        case ModelKind::Gbt: return "gbt";
        case ModelKind::Svm: return "svm";
        case ModelKind::Mlp: return "mlp";
    }
    return "?";
}

inline ModelKind model_kind_from(const std::string& s) {
    if (s == "logistic") return ModelKind::Logistic;
    if (s == "random_forest") return ModelKind::RandomForest;
    if (s == "gbt" || s == "xgboost") return ModelKind::Gbt;
    if (s == "svm") return ModelKind::Svm;
    if (s == "mlp") return ModelKind::Mlp;
    throw UnsupportedKindError("unknown model kind: " + s);
}

enum class SvmKernel { Linear, Rbf };

namespace detail {

struct ParamRange {
    double def, lo, hi;
};

inline const std::map<std::string, ParamRange>& param_registry(ModelKind kind) {
    static const std::map<ModelKind, std::map<std::string, ParamRange>> registries = {
        {ModelKind::Logistic,
         {{"l2", {1e-6, 0.0, 1e6}},
          {"max_iter", {100, 1, 1e6}},
          {"tol", {1e-8, 0.0, 1.0}}}},
        {ModelKind::RandomForest,
         {{"n_trees", {100, 1, 1e5}},
          {"max_depth", {0, 0, 1e4}}, // 0 = unlimited
          {"min_leaf", {1, 1, 1e6}}}},
        {ModelKind::Gbt,
         {{"n_rounds", {100, 1, 1e5}},
          {"learning_rate", {0.1, 1e-9, 1.0}},
          {"max_depth", {3, 1, 64}},
          {"min_leaf", {1, 1, 1e6}},
          {"lambda", {1.0, 0.0, 1e9}}}},
        {ModelKind::Svm,
         {{"C", {1.0, 1e-9, 1e9}},
          {"gamma", {0.0, 0.0, 1e9}}, // 0 = 1/d
          {"tol", {1e-3, 1e-12, 1.0}},
          {"max_iter", {2000, 1, 1e7}},
          {"standardize", {1, 0, 1}}}},
        {ModelKind::Mlp,
         {{"epochs", {200, 1, 1e6}},
          {"batch", {16, 1, 1e6}},
          {"learning_rate", {0.05, 1e-9, 1.0}},
          {"l2", {0.0, 0.0, 1e6}},
          {"standardize", {1, 0, 1}}}}};
    return registries.at(kind);
}

} // namespace detail

// Everything the fit of one model depends on; all stochastic choices flow
// from `seed` via named Rng streams.
struct ClassifierSpec {
    ModelKind kind = ModelKind::Logistic;
    std::map<std::string, double> params;
    SvmKernel kernel = SvmKernel::Rbf;
    std::vector<int> hidden_layers = {16};
    std::map<int, double> class_weights; // empty = unweighted
    std::uint64_t seed = 0;

    double param(const std::string& name) const {
        const auto& registry = detail::param_registry(kind);
        const auto reg = registry.find(name);
        if (reg == registry.end())
            throw InvalidArgument("unknown hyperparameter '" + name + "' for " +
                                  to_string(kind));
        const auto it = params.find(name);
        return it == params.end() ? reg->second.def : it->second;
    }

    void set_param(const std::string& name, double value) {
        const auto& registry = detail::param_registry(kind);
        const auto reg = registry.find(name);
        if (reg == registry.end())
            throw InvalidArgument("unknown hyperparameter '" + name + "' for " +
                                  to_string(kind));
        if (value < reg->second.lo || value > reg->second.hi)
            throw InvalidArgument("hyperparameter '" + name + "' out of range");
        params[name] = value;
    }

    // Textual assignment used by grid/config files. Understands the two
    // non-numeric knobs ("kernel", "hidden_layers", e.g. "32x16").
    void set_param_text(const std::string& name, const std::string& value) {
        if (name == "kernel") {
            if (value == "linear") kernel = SvmKernel::Linear;
            else if (value == "rbf") kernel = SvmKernel::Rbf;
            else throw InvalidArgument("unknown kernel: " + value);
            return;
        }
        if (name == "hidden_layers") {
            std::vector<int> layers;
            std::size_t pos = 0;
            while (pos < value.size()) {
                std::size_t next = value.find('x', pos);
                if (next == std::string::npos) next = value.size();
                layers.push_back(std::stoi(value.substr(pos, next - pos)));
                pos = next + 1;
            }
            if (layers.empty()) throw InvalidArgument("empty hidden_layers");
            for (int h : layers)
                if (h < 1 || h > 4096) throw InvalidArgument("hidden layer width out of range");
            hidden_layers = layers;
            return;
        }
        set_param(name, std::stod(value));
    }
};

// --- learned parameter payloads -------------------------------------------

struct TreeNode {
    int feature = -1; // -1 = leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;              // leaf payload
    double impurity_decrease = 0.0;  // weighted, for importance
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict_row(const double* x) const {
        int i = 0;
        while (nodes[i].feature >= 0)
            i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
        return nodes[i].value;
    }
};

struct LogisticParams {
    std::vector<double> weights;
    double bias = 0.0;
};

struct ForestParams {
    std::vector<DecisionTree> trees;
};

struct GbtParams {
    std::vector<DecisionTree> trees;
    double base_score = 0.0; // log-odds prior
    double learning_rate = 0.1;
};

struct SvmParams {
    Matrix support_vectors;            // rows = support vectors (standardized space)
    std::vector<double> dual_coef;     // alpha_i * y_i
    double bias = 0.0;
    SvmKernel kernel = SvmKernel::Rbf;
    double gamma = 0.0;
    double platt_a = 0.0, platt_b = 0.0;
    std::vector<double> scale_mean, scale_sd; // empty when unstandardized
};

struct MlpParams {
    std::vector<Matrix> weights;               // layer l: out x in
    std::vector<std::vector<double>> biases;
    std::vector<double> scale_mean, scale_sd;
};

struct ClassifierModel {
    ModelKind kind = ModelKind::Logistic;
    ClassifierSpec spec;
    std::vector<std::string> feature_names;
    std::variant<LogisticParams, ForestParams, GbtParams, SvmParams, MlpParams> params;
    std::vector<double> training_log;   // loss per epoch/round where meaningful
    std::vector<std::string> warnings;  // e.g. SMO hit its iteration cap
};

namespace detail {

inline std::uint64_t schema_hash(const std::vector<std::string>& names) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& n : names) {
        for (unsigned char c : n) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline void check_features(const ClassifierModel& model, const std::vector<std::string>& names) {
    if (names == model.feature_names) return;
    std::string msg = "feature mismatch; missing:";
    for (const auto& n : model.feature_names)
        if (std::find(names.begin(), names.end(), n) == names.end()) msg += " " + n;
    msg += "; extra:";
    for (const auto& n : names)
        if (std::find(model.feature_names.begin(), model.feature_names.end(), n) ==
            model.feature_names.end())
            msg += " " + n;
    throw SchemaError(msg);
}

inline void check_training_inputs(const Matrix& x, const std::vector<int>& y) {
    if (x.rows() != y.size()) throw InvalidArgument("rows(X) != len(y)");
    for (double v : x.data())
        if (!std::isfinite(v)) throw InvalidArgument("non-finite value in design matrix");
    bool has0 = false, has1 = false;
    for (int v : y) {
        if (v == 0) has0 = true;
        else if (v == 1) has1 = true;
        else throw InvalidArgument("labels must be 0/1");
    }
    if (!has0 || !has1) throw DegenerateLabelsError("training labels are single-class");
}

inline std::vector<double> resolve_sample_weights(const ClassifierSpec& spec,
                                                  const std::vector<int>& y,
                                                  const std::vector<double>* sample_weights) {
    if (sample_weights) {
        if (sample_weights->size() != y.size())
            throw InvalidArgument("sample weight count mismatch");
        for (double w : *sample_weights)
            if (!(w >= 0.0)) throw InvalidArgument("sample weights must be >= 0");
        return *sample_weights;
    }
    std::vector<double> w(y.size(), 1.0);
    if (!spec.class_weights.empty())
        for (std::size_t i = 0; i < y.size(); ++i) {
            const auto it = spec.class_weights.find(y[i]);
            if (it != spec.class_weights.end()) w[i] = it->second;
        }
    return w;
}

inline std::pair<std::vector<double>, std::vector<double>> fit_standardizer(
    const Matrix& x, const std::vector<double>& w) {
    std::vector<double> mean(x.cols(), 0.0), sd(x.cols(), 1.0);
    double wsum = 0;
    for (double wi : w) wsum += wi;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double m = 0;
        for (std::size_t r = 0; r < x.rows(); ++r) m += w[r] * x(r, c);
        m /= wsum;
        double v = 0;
        for (std::size_t r = 0; r < x.rows(); ++r) v += w[r] * (x(r, c) - m) * (x(r, c) - m);
        v /= wsum;
        mean[c] = m;
        sd[c] = v > 0 ? std::sqrt(v) : 1.0;
    }
    return {mean, sd};
}

inline Matrix apply_standardizer(Matrix x, const std::vector<double>& mean,
                                 const std::vector<double>& sd) {
    if (mean.empty()) return x;
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) = (x(r, c) - mean[c]) / sd[c];
    return x;
}

} // namespace detail

} // namespace morphml
