#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "morphml/models/classifier.hpp"
#include "morphml/models/tree.hpp"

namespace morphml {

namespace detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// --- logistic regression: weighted MLE with L2, Newton-IRLS ----------------

inline LogisticParams fit_logistic(const ClassifierSpec& spec, const Matrix& x,
                                   const std::vector<int>& y, const std::vector<double>& w,
                                   std::vector<double>& training_log) {
    const std::size_t n = x.rows(), d = x.cols();
    const double l2 = spec.param("l2");
    const double tol = spec.param("tol");
    const int max_iter = static_cast<int>(spec.param("max_iter"));

    std::vector<double> beta(d + 1, 0.0); // [bias, weights]
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<double> grad(d + 1, 0.0);
        Matrix hess(d + 1, d + 1, 0.0);
        double loss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double z = beta[0];
            for (std::size_t c = 0; c < d; ++c) z += beta[c + 1] * x(r, c);
            const double p = sigmoid(z);
            const double err = w[r] * (p - y[r]);
            loss -= w[r] * (y[r] * std::log(std::max(p, 1e-300)) +
                            (1 - y[r]) * std::log(std::max(1.0 - p, 1e-300)));
            const double wr = std::max(w[r] * p * (1.0 - p), 1e-12);
            grad[0] += err;
            hess(0, 0) += wr;
            for (std::size_t c = 0; c < d; ++c) {
                grad[c + 1] += err * x(r, c);
                hess(0, c + 1) += wr * x(r, c);
                hess(c + 1, 0) += wr * x(r, c);
                for (std::size_t c2 = c; c2 < d; ++c2) {
                    hess(c + 1, c2 + 1) += wr * x(r, c) * x(r, c2);
                    if (c2 != c) hess(c2 + 1, c + 1) = hess(c + 1, c2 + 1);
                }
            }
        }
        for (std::size_t c = 0; c < d; ++c) { // no penalty on the intercept
            grad[c + 1] += l2 * beta[c + 1];
            hess(c + 1, c + 1) += l2;
            loss += 0.5 * l2 * beta[c + 1] * beta[c + 1];
        }
        training_log.push_back(loss);
        double gnorm = 0;
        for (double g : grad) gnorm += g * g;
        if (std::sqrt(gnorm) < tol) break;
        hess(0, 0) += 1e-12;
        const std::vector<double> step = solve_spd(hess, grad);
        for (std::size_t k = 0; k <= d; ++k) beta[k] -= step[k];
    }
    LogisticParams params;
    params.bias = beta[0];
    params.weights.assign(beta.begin() + 1, beta.end());
    return params;
}

inline double predict_logistic(const LogisticParams& p, const double* x) {
    double z = p.bias;
    for (std::size_t c = 0; c < p.weights.size(); ++c) z += p.weights[c] * x[c];
    return sigmoid(z);
}

// --- random forest: bagged Gini CART, sqrt(d) features per split -----------

inline ForestParams fit_forest(const ClassifierSpec& spec, const Matrix& x,
                               const std::vector<int>& y, const std::vector<double>& w) {
    const int n_trees = static_cast<int>(spec.param("n_trees"));
    TreeConfig config;
    config.max_depth = static_cast<int>(spec.param("max_depth"));
    config.min_leaf = static_cast<std::size_t>(spec.param("min_leaf"));
    config.features_per_split = static_cast<std::size_t>(
        std::max(1.0, std::floor(std::sqrt(static_cast<double>(x.cols())))));

    const Rng base(spec.seed, "random-forest");
    ForestParams params;
    params.trees.resize(static_cast<std::size_t>(n_trees));
    for (int t = 0; t < n_trees; ++t) {
        Rng rng = base.split(static_cast<std::uint64_t>(t));
        std::vector<std::size_t> bootstrap(x.rows());
        for (auto& i : bootstrap) i = static_cast<std::size_t>(rng.below(x.rows()));
        std::sort(bootstrap.begin(), bootstrap.end());
        params.trees[static_cast<std::size_t>(t)] =
            build_gini_tree(x, y, w, std::move(bootstrap), config, &rng);
    }
    return params;
}

inline double predict_forest(const ForestParams& p, const double* x) {
    double sum = 0.0;
    for (const auto& tree : p.trees) sum += tree.predict_row(x);
    return sum / static_cast<double>(p.trees.size());
}

// --- gradient boosting: Newton steps on logistic loss ----------------------

inline GbtParams fit_gbt(const ClassifierSpec& spec, const Matrix& x, const std::vector<int>& y,
                         const std::vector<double>& w, std::vector<double>& training_log) {
    const int n_rounds = static_cast<int>(spec.param("n_rounds"));
    const double lambda = spec.param("lambda");
    TreeConfig config;
    config.max_depth = static_cast<int>(spec.param("max_depth"));
    config.min_leaf = static_cast<std::size_t>(spec.param("min_leaf"));

    GbtParams params;
    params.learning_rate = spec.param("learning_rate");
    // weighted log-odds prior
    double wpos = 0, wtot = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        wpos += w[i] * y[i];
        wtot += w[i];
    }
    const double p0 = std::clamp(wpos / wtot, 1e-9, 1.0 - 1e-9);
    params.base_score = std::log(p0 / (1.0 - p0));

    std::vector<double> margin(x.rows(), params.base_score);
    std::vector<double> grad(x.rows()), hess(x.rows());
    for (int round = 0; round < n_rounds; ++round) {
        double loss = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double p = sigmoid(margin[i]);
            grad[i] = w[i] * (p - y[i]);
            hess[i] = std::max(w[i] * p * (1.0 - p), 1e-16);
            loss -= w[i] * (y[i] * std::log(std::max(p, 1e-300)) +
                            (1 - y[i]) * std::log(std::max(1.0 - p, 1e-300)));
        }
        training_log.push_back(loss);
        DecisionTree tree = build_newton_tree(x, grad, hess, lambda, config);
        for (std::size_t i = 0; i < x.rows(); ++i)
            margin[i] += params.learning_rate * tree.predict_row(&x.data()[i * x.cols()]);
        params.trees.push_back(std::move(tree));
    }
    return params;
}

inline double predict_gbt(const GbtParams& p, const double* x) {
    double margin = p.base_score;
    for (const auto& tree : p.trees) margin += p.learning_rate * tree.predict_row(x);
    return sigmoid(margin);
}

// --- SVM: weighted soft-margin dual via SMO, Platt-scaled probabilities ----

struct SmoProblem {
    const Matrix& x;
    std::vector<double> y;   // +-1
    std::vector<double> cap; // per-sample C_i = C * w_i
    SvmKernel kernel;
    double gamma;

    double k(std::size_t i, std::size_t j) const {
        const double* a = &x.data()[i * x.cols()];
        const double* b = &x.data()[j * x.cols()];
        if (kernel == SvmKernel::Linear) {
            double dot = 0;
            for (std::size_t c = 0; c < x.cols(); ++c) dot += a[c] * b[c];
            return dot;
        }
        double d2 = 0;
        for (std::size_t c = 0; c < x.cols(); ++c) d2 += (a[c] - b[c]) * (a[c] - b[c]);
        return std::exp(-gamma * d2);
    }
};

// Keerthi-style SMO with maximal-violating-pair selection.
inline bool smo_solve(const SmoProblem& prob, double tol, long max_iter,
                      std::vector<double>& alpha, double& bias) {
    const std::size_t n = prob.y.size();
    alpha.assign(n, 0.0);
    std::vector<double> f(n); // f_i = sum_j alpha_j y_j K(i,j) - y_i
    for (std::size_t i = 0; i < n; ++i) f[i] = -prob.y[i];

    // cache kernel rows lazily; n is small (<200) so a full matrix is fine
    Matrix k(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = prob.k(i, j);
            k(i, j) = v;
            k(j, i) = v;
        }

    long iter = 0;
    for (; iter < max_iter; ++iter) {
        // i in I_up: alpha < C for y=+1 or alpha > 0 for y=-1 (can increase f direction)
        double f_up = std::numeric_limits<double>::infinity();
        double f_low = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i_up = -1, i_low = -1;
        for (std::size_t i = 0; i < n; ++i) {
            const bool up = (prob.y[i] > 0 && alpha[i] < prob.cap[i] - 1e-12) ||
                            (prob.y[i] < 0 && alpha[i] > 1e-12);
            const bool low = (prob.y[i] > 0 && alpha[i] > 1e-12) ||
                             (prob.y[i] < 0 && alpha[i] < prob.cap[i] - 1e-12);
            if (up && f[i] < f_up) {
                f_up = f[i];
                i_up = static_cast<std::ptrdiff_t>(i);
            }
            if (low && f[i] > f_low) {
                f_low = f[i];
                i_low = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (i_up < 0 || i_low < 0 || f_low - f_up <= 2.0 * tol) {
            bias = -(f_up + f_low) / 2.0;
            return true;
        }
        const std::size_t i = static_cast<std::size_t>(i_up);
        const std::size_t j = static_cast<std::size_t>(i_low);

        const double eta = std::max(k(i, i) + k(j, j) - 2.0 * k(i, j), 1e-12);
        // minimize along the pair, respecting the box and equality constraint
        double delta = (f_low - f_up) / eta; // step in alpha_i * y_i direction
        // translate to alpha updates: a_i' = a_i + y_i * delta, a_j' = a_j - y_j * delta
        double max_step = delta;
        if (prob.y[i] > 0) max_step = std::min(max_step, prob.cap[i] - alpha[i]);
        else max_step = std::min(max_step, alpha[i]);
        if (prob.y[j] > 0) max_step = std::min(max_step, alpha[j]);
        else max_step = std::min(max_step, prob.cap[j] - alpha[j]);
        if (max_step <= 0) {
            bias = -(f_up + f_low) / 2.0;
            return true; // numerically stuck at the box
        }
        alpha[i] += prob.y[i] > 0 ? max_step : -max_step;
        alpha[j] += prob.y[j] > 0 ? -max_step : max_step;
        for (std::size_t t = 0; t < n; ++t)
            f[t] += max_step * (k(t, i) - k(t, j));
    }
    // cap hit: best-effort bias from current state
    double f_up = std::numeric_limits<double>::infinity();
    double f_low = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        f_up = std::min(f_up, f[i]);
        f_low = std::max(f_low, f[i]);
    }
    bias = -(f_up + f_low) / 2.0;
    return false;
}

inline double svm_decision(const SvmParams& p, const double* x) {
    double sum = p.bias;
    for (std::size_t s = 0; s < p.support_vectors.rows(); ++s) {
        const double* sv = &p.support_vectors.data()[s * p.support_vectors.cols()];
        if (p.kernel == SvmKernel::Linear) {
            double dot = 0;
            for (std::size_t c = 0; c < p.support_vectors.cols(); ++c) dot += sv[c] * x[c];
            sum += p.dual_coef[s] * dot;
        } else {
            double d2 = 0;
            for (std::size_t c = 0; c < p.support_vectors.cols(); ++c)
                d2 += (sv[c] - x[c]) * (sv[c] - x[c]);
            sum += p.dual_coef[s] * std::exp(-p.gamma * d2);
        }
    }
    return sum;
}

// Platt's sigmoid fit on training decision values (regularized targets).
inline void fit_platt(const std::vector<double>& decision, const std::vector<int>& y,
                      double& a_out, double& b_out) {
    const std::size_t n = decision.size();
    double n_pos = 0, n_neg = 0;
    for (int v : y) (v ? n_pos : n_neg) += 1;
    const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
    const double t_neg = 1.0 / (n_neg + 2.0);

    double a = 0.0, b = std::log((n_neg + 1.0) / (n_pos + 1.0));
    for (int iter = 0; iter < 100; ++iter) {
        double g_a = 0, g_b = 0, h_aa = 1e-12, h_ab = 0, h_bb = 1e-12;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = y[i] ? t_pos : t_neg;
            const double z = a * decision[i] + b;
            const double p = sigmoid(-z); // P(y=1) = 1/(1+exp(a f + b))
            // dE/dz = t - p for the cross entropy in z, hence in (a, b):
            g_a += (t - p) * decision[i];
            g_b += (t - p);
            const double w = std::max(p * (1.0 - p), 1e-12);
            h_aa += w * decision[i] * decision[i];
            h_ab += w * decision[i];
            h_bb += w;
        }
        const double det = h_aa * h_bb - h_ab * h_ab;
        const double da = (g_a * h_bb - g_b * h_ab) / det;
        const double db = (g_b * h_aa - g_a * h_ab) / det;
        a -= da;
        b -= db;
        if (std::abs(da) + std::abs(db) < 1e-10) break;
    }
    a_out = a;
    b_out = b;
}

inline SvmParams fit_svm(const ClassifierSpec& spec, const Matrix& x_raw,
                         const std::vector<int>& y, const std::vector<double>& w,
                         std::vector<std::string>& warnings) {
    SvmParams params;
    params.kernel = spec.kernel;
    const bool standardize = spec.param("standardize") != 0.0;
    Matrix x = x_raw;
    if (standardize) {
        std::tie(params.scale_mean, params.scale_sd) = fit_standardizer(x_raw, w);
        x = apply_standardizer(std::move(x), params.scale_mean, params.scale_sd);
    }
    params.gamma = spec.param("gamma");
    if (params.gamma == 0.0) params.gamma = 1.0 / static_cast<double>(x.cols());

    SmoProblem prob{x, {}, {}, params.kernel, params.gamma};
    prob.y.resize(y.size());
    prob.cap.resize(y.size());
    const double c = spec.param("C");
    for (std::size_t i = 0; i < y.size(); ++i) {
        prob.y[i] = y[i] ? 1.0 : -1.0;
        prob.cap[i] = c * w[i];
    }
    std::vector<double> alpha;
    double bias = 0.0;
    const bool converged = smo_solve(prob, spec.param("tol"),
                                     static_cast<long>(spec.param("max_iter")) *
                                         static_cast<long>(y.size()),
                                     alpha, bias);
    if (!converged) warnings.push_back("SMO hit its iteration cap before reaching KKT tolerance");

    std::vector<std::size_t> sv;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] > 1e-10) sv.push_back(i);
    params.support_vectors = Matrix(sv.size(), x.cols());
    params.dual_coef.resize(sv.size());
    for (std::size_t s = 0; s < sv.size(); ++s) {
        for (std::size_t cidx = 0; cidx < x.cols(); ++cidx)
            params.support_vectors(s, cidx) = x(sv[s], cidx);
        params.dual_coef[s] = alpha[sv[s]] * prob.y[sv[s]];
    }
    params.bias = bias;

    std::vector<double> decision(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        decision[i] = svm_decision(params, &x.data()[i * x.cols()]);
    fit_platt(decision, y, params.platt_a, params.platt_b);
    return params;
}

inline double predict_svm(const SvmParams& p, const double* x_raw, std::size_t d) {
    std::vector<double> x(x_raw, x_raw + d);
    if (!p.scale_mean.empty())
        for (std::size_t c = 0; c < d; ++c) x[c] = (x[c] - p.scale_mean[c]) / p.scale_sd[c];
    const double f = svm_decision(p, x.data());
    return sigmoid(-(p.platt_a * f + p.platt_b));
}

// --- MLP: ReLU hidden layers, sigmoid output, weighted cross-entropy -------

inline MlpParams init_mlp(const ClassifierSpec& spec, std::size_t d) {
    MlpParams params;
    std::vector<std::size_t> sizes;
    sizes.push_back(d);
    for (int h : spec.hidden_layers) sizes.push_back(static_cast<std::size_t>(h));
    sizes.push_back(1);
    Rng rng(spec.seed, "mlp-init");
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Matrix w(sizes[l + 1], sizes[l]);
        const double scale = std::sqrt(2.0 / static_cast<double>(sizes[l]));
        for (auto& v : w.data()) v = rng.normal() * scale;
        params.weights.push_back(std::move(w));
        params.biases.emplace_back(sizes[l + 1], 0.0);
    }
    return params;
}

// forward pass storing activations; returns P(y=1)
inline double mlp_forward(const MlpParams& p, const double* x,
                          std::vector<std::vector<double>>* activations = nullptr) {
    std::vector<double> cur(x, x + p.weights[0].cols());
    if (!p.scale_mean.empty())
        for (std::size_t c = 0; c < cur.size(); ++c)
            cur[c] = (cur[c] - p.scale_mean[c]) / p.scale_sd[c];
    if (activations) activations->push_back(cur);
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        const Matrix& w = p.weights[l];
        std::vector<double> next(w.rows());
        for (std::size_t o = 0; o < w.rows(); ++o) {
            double z = p.biases[l][o];
            for (std::size_t in = 0; in < w.cols(); ++in) z += w(o, in) * cur[in];
            next[o] = l + 1 == p.weights.size() ? z : std::max(z, 0.0);
        }
        cur = std::move(next);
        if (activations) activations->push_back(cur);
    }
    return sigmoid(cur[0]);
}

// backprop for one sample; accumulates gradients. Returns weighted loss.
inline double mlp_backprop(const MlpParams& p, const double* x, int y, double w,
                           std::vector<Matrix>& gw, std::vector<std::vector<double>>& gb) {
    std::vector<std::vector<double>> acts;
    const double prob = mlp_forward(p, x, &acts);
    const double loss = -w * (y * std::log(std::max(prob, 1e-300)) +
                              (1 - y) * std::log(std::max(1.0 - prob, 1e-300)));
    // output delta for sigmoid + cross entropy
    std::vector<double> delta{w * (prob - y)};
    for (std::size_t l = p.weights.size(); l-- > 0;) {
        const std::vector<double>& in = acts[l];
        for (std::size_t o = 0; o < p.weights[l].rows(); ++o) {
            gb[l][o] += delta[o];
            for (std::size_t i = 0; i < p.weights[l].cols(); ++i)
                gw[l](o, i) += delta[o] * in[i];
        }
        if (l == 0) break;
        std::vector<double> prev(p.weights[l].cols(), 0.0);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            double s = 0;
            for (std::size_t o = 0; o < p.weights[l].rows(); ++o)
                s += p.weights[l](o, i) * delta[o];
            prev[i] = acts[l][i] > 0.0 ? s : 0.0; // ReLU gate
        }
        delta = std::move(prev);
    }
    return loss;
}

inline MlpParams fit_mlp(const ClassifierSpec& spec, const Matrix& x_raw,
                         const std::vector<int>& y, const std::vector<double>& w,
                         std::vector<double>& training_log) {
    Matrix x = x_raw;
    MlpParams params = init_mlp(spec, x.cols());
    if (spec.param("standardize") != 0.0) {
        std::tie(params.scale_mean, params.scale_sd) = fit_standardizer(x_raw, w);
        // standardization lives inside the model; keep raw inputs for training too
    }
    const int epochs = static_cast<int>(spec.param("epochs"));
    const std::size_t batch = static_cast<std::size_t>(spec.param("batch"));
    const double lr = spec.param("learning_rate");
    const double l2 = spec.param("l2");

    Rng shuffle_rng(spec.seed, "mlp-shuffle");
    std::vector<std::size_t> order(x.rows());
    std::iota(order.begin(), order.end(), 0);

    std::vector<Matrix> gw;
    std::vector<std::vector<double>> gb;
    for (const auto& wm : params.weights) {
        gw.emplace_back(wm.rows(), wm.cols());
        gb.emplace_back(wm.rows(), 0.0);
    }
    for (int epoch = 0; epoch < epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t end = std::min(start + batch, order.size());
            for (auto& m : gw) std::fill(m.data().begin(), m.data().end(), 0.0);
            for (auto& b : gb) std::fill(b.begin(), b.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t i = order[k];
                epoch_loss += mlp_backprop(params, &x.data()[i * x.cols()], y[i], w[i], gw, gb);
            }
            const double scale = lr / static_cast<double>(end - start);
            for (std::size_t l = 0; l < params.weights.size(); ++l) {
                for (std::size_t k = 0; k < gw[l].data().size(); ++k)
                    params.weights[l].data()[k] -=
                        scale * (gw[l].data()[k] + l2 * params.weights[l].data()[k]);
                for (std::size_t o = 0; o < gb[l].size(); ++o)
                    params.biases[l][o] -= scale * gb[l][o];
            }
        }
        training_log.push_back(epoch_loss);
    }
    return params;
}

} // namespace detail

// Deterministic given (spec, X, y, weights); every stochastic choice flows
// from spec.seed through named Rng streams.
inline ClassifierModel fit(const ClassifierSpec& spec, const Matrix& x,
                           const std::vector<std::string>& feature_names,
                           const std::vector<int>& y,
                           const std::vector<double>* sample_weights = nullptr) {
    if (x.cols() != feature_names.size())
        throw InvalidArgument("feature name count != column count");
    detail::check_training_inputs(x, y);
    const std::vector<double> w = detail::resolve_sample_weights(spec, y, sample_weights);

    ClassifierModel model;
    model.kind = spec.kind;
    model.spec = spec;
    model.feature_names = feature_names;
    switch (spec.kind) {
        case ModelKind::Logistic:
            model.params = detail::fit_logistic(spec, x, y, w, model.training_log);
            break;
        case ModelKind::RandomForest:
            model.params = detail::fit_forest(spec, x, y, w);
            break;
        case ModelKind::Gbt:
            model.params = detail::fit_gbt(spec, x, y, w, model.training_log);
            break;
        case ModelKind::Svm:
            model.params = detail::fit_svm(spec, x, y, w, model.warnings);
            break;
        case ModelKind::Mlp:
            model.params = detail::fit_mlp(spec, x, y, w, model.training_log);
            break;
    }
    return model;
}

inline std::vector<double> predict_proba(const ClassifierModel& model, const Matrix& x,
                                         const std::vector<std::string>& feature_names) {
    detail::check_features(model, feature_names);
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double* row = x.data().data() + r * x.cols();
        switch (model.kind) {
            case ModelKind::Logistic:
                out[r] = detail::predict_logistic(std::get<LogisticParams>(model.params), row);
                break;
            case ModelKind::RandomForest:
                out[r] = detail::predict_forest(std::get<ForestParams>(model.params), row);
                break;
            case ModelKind::Gbt:
                out[r] = detail::predict_gbt(std::get<GbtParams>(model.params), row);
                break;
            case ModelKind::Svm:
                out[r] = detail::predict_svm(std::get<SvmParams>(model.params), row, x.cols());
                break;
            case ModelKind::Mlp:
                out[r] = detail::mlp_forward(std::get<MlpParams>(model.params), row);
                break;
        }
    }
    return out;
}

inline std::vector<int> predict(const ClassifierModel& model, const Matrix& x,
                                const std::vector<std::string>& feature_names,
                                double threshold = 0.5) {
    const auto proba = predict_proba(model, x, feature_names);
    std::vector<int> out(proba.size());
    for (std::size_t i = 0; i < proba.size(); ++i) out[i] = proba[i] >= threshold ? 1 : 0;
    return out;
}

} // namespace morphml
