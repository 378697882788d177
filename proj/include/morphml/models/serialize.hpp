#pragma once

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "morphml/models/classifier.hpp"

namespace morphml {

namespace detail {

// Versioned binary container: magic, format version, kind, schema hash,
// parameter payload, FNV-1a checksum of everything before it. Doubles are
// stored as raw little-endian bytes so round-trips are bit-exact.

inline constexpr char kModelMagic[8] = {'M', 'M', 'L', 'M', 'O', 'D', 'L', '\0'};
inline constexpr std::uint32_t kModelVersion = 1;

struct ByteWriter {
    std::string bytes;
    void raw(const void* p, std::size_t n) {
        bytes.append(static_cast<const char*>(p), n);
    }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void f64(double v) { raw(&v, 8); }
    void str(const std::string& s) {
        u64(s.size());
        raw(s.data(), s.size());
    }
    void f64v(const std::vector<double>& v) {
        u64(v.size());
        raw(v.data(), v.size() * 8);
    }
    void matrix(const Matrix& m) {
        u64(m.rows());
        u64(m.cols());
        raw(m.data().data(), m.data().size() * 8);
    }
};

struct ByteReader {
    const std::string& bytes;
    std::size_t pos = 0;
    void raw(void* p, std::size_t n) {
        if (pos + n > bytes.size()) throw CorruptionError("model file truncated");
        std::memcpy(p, bytes.data() + pos, n);
        pos += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, 8);
        return v;
    }
    double f64() {
        double v;
        raw(&v, 8);
        return v;
    }
    std::string str() {
        const std::uint64_t n = u64();
        if (pos + n > bytes.size()) throw CorruptionError("model file truncated");
        std::string s(bytes.data() + pos, n);
        pos += n;
        return s;
    }
    std::vector<double> f64v() {
        const std::uint64_t n = u64();
        std::vector<double> v(n);
        raw(v.data(), n * 8);
        return v;
    }
    Matrix matrix() {
        const std::uint64_t r = u64(), c = u64();
        Matrix m(r, c);
        raw(m.data().data(), r * c * 8);
        return m;
    }
};

inline std::uint64_t fnv1a_bytes(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline void write_tree(ByteWriter& w, const DecisionTree& t) {
    w.u64(t.nodes.size());
    for (const auto& n : t.nodes) {
        w.u32(static_cast<std::uint32_t>(n.feature + 1));
        w.f64(n.threshold);
        w.u32(static_cast<std::uint32_t>(n.left + 1));
        w.u32(static_cast<std::uint32_t>(n.right + 1));
        w.f64(n.value);
        w.f64(n.impurity_decrease);
    }
}

inline DecisionTree read_tree(ByteReader& r) {
    DecisionTree t;
    t.nodes.resize(r.u64());
    for (auto& n : t.nodes) {
        n.feature = static_cast<int>(r.u32()) - 1;
        n.threshold = r.f64();
        n.left = static_cast<int>(r.u32()) - 1;
        n.right = static_cast<int>(r.u32()) - 1;
        n.value = r.f64();
        n.impurity_decrease = r.f64();
    }
    return t;
}

} // namespace detail

inline void save_model(const ClassifierModel& model, const std::string& path) {
    detail::ByteWriter w;
    w.raw(detail::kModelMagic, 8);
    w.u32(detail::kModelVersion);
    w.str(to_string(model.kind));
    w.u64(detail::schema_hash(model.feature_names));
    w.u64(model.feature_names.size());
    for (const auto& n : model.feature_names) w.str(n);

    // spec essentials: seed, params, kernel, hidden layers, class weights
    w.u64(model.spec.seed);
    w.u64(model.spec.params.size());
    for (const auto& [k, v] : model.spec.params) {
        w.str(k);
        w.f64(v);
    }
    w.u32(model.spec.kernel == SvmKernel::Rbf ? 1 : 0);
    w.u64(model.spec.hidden_layers.size());
    for (int h : model.spec.hidden_layers) w.u32(static_cast<std::uint32_t>(h));
    w.u64(model.spec.class_weights.size());
    for (const auto& [k, v] : model.spec.class_weights) {
        w.u32(static_cast<std::uint32_t>(k));
        w.f64(v);
    }

    switch (model.kind) {
        case ModelKind::Logistic: {
            const auto& p = std::get<LogisticParams>(model.params);
            w.f64(p.bias);
            w.f64v(p.weights);
            break;
        }
        case ModelKind::RandomForest: {
            const auto& p = std::get<ForestParams>(model.params);
            w.u64(p.trees.size());
            for (const auto& t : p.trees) detail::write_tree(w, t);
            break;
        }
        case ModelKind::Gbt: {
            const auto& p = std::get<GbtParams>(model.params);
            w.f64(p.base_score);
            w.f64(p.learning_rate);
            w.u64(p.trees.size());
            for (const auto& t : p.trees) detail::write_tree(w, t);
            break;
        }
        case ModelKind::Svm: {
            const auto& p = std::get<SvmParams>(model.params);
            w.matrix(p.support_vectors);
            w.f64v(p.dual_coef);
            w.f64(p.bias);
            w.u32(p.kernel == SvmKernel::Rbf ? 1 : 0);
            w.f64(p.gamma);
            w.f64(p.platt_a);
            w.f64(p.platt_b);
            w.f64v(p.scale_mean);
            w.f64v(p.scale_sd);
            break;
        }
        case ModelKind::Mlp: {
            const auto& p = std::get<MlpParams>(model.params);
            w.u64(p.weights.size());
            for (std::size_t l = 0; l < p.weights.size(); ++l) {
                w.matrix(p.weights[l]);
                w.f64v(p.biases[l]);
            }
            w.f64v(p.scale_mean);
            w.f64v(p.scale_sd);
            break;
        }
    }
    w.f64v(model.training_log);
    w.u64(model.warnings.size());
    for (const auto& s : model.warnings) w.str(s);

    const std::uint64_t checksum = detail::fnv1a_bytes(w.bytes);
    w.u64(checksum);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write model file: " + path);
    out.write(w.bytes.data(), static_cast<std::streamsize>(w.bytes.size()));
}

inline ClassifierModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    if (bytes.size() < 8 + 4 + 8) throw CorruptionError("model file truncated");
    if (std::memcmp(bytes.data(), detail::kModelMagic, 8) != 0)
        throw FormatError("not a model file (bad magic)");

    const std::string body = bytes.substr(0, bytes.size() - 8);
    std::uint64_t stored_checksum;
    std::memcpy(&stored_checksum, bytes.data() + bytes.size() - 8, 8);
    if (detail::fnv1a_bytes(body) != stored_checksum)
        throw CorruptionError("model file checksum mismatch");

    detail::ByteReader r{body, 8};
    const std::uint32_t version = r.u32();
    if (version > detail::kModelVersion)
        throw UnsupportedVersionError("model format version " + std::to_string(version) +
                                      " is newer than supported version " +
                                      std::to_string(detail::kModelVersion));

    ClassifierModel model;
    model.kind = model_kind_from(r.str());
    model.spec.kind = model.kind;
    const std::uint64_t schema = r.u64();
    model.feature_names.resize(r.u64());
    for (auto& n : model.feature_names) n = r.str();
    if (detail::schema_hash(model.feature_names) != schema)
        throw CorruptionError("model schema hash mismatch");

    model.spec.seed = r.u64();
    const std::uint64_t n_params = r.u64();
    for (std::uint64_t i = 0; i < n_params; ++i) {
        const std::string k = r.str();
        model.spec.params[k] = r.f64();
    }
    model.spec.kernel = r.u32() ? SvmKernel::Rbf : SvmKernel::Linear;
    model.spec.hidden_layers.resize(r.u64());
    for (auto& h : model.spec.hidden_layers) h = static_cast<int>(r.u32());
    const std::uint64_t n_cw = r.u64();
    for (std::uint64_t i = 0; i < n_cw; ++i) {
        const int k = static_cast<int>(r.u32());
        model.spec.class_weights[k] = r.f64();
    }

    switch (model.kind) {
        case ModelKind::Logistic: {
            LogisticParams p;
            p.bias = r.f64();
            p.weights = r.f64v();
            model.params = std::move(p);
            break;
        }
        case ModelKind::RandomForest: {
            ForestParams p;
            p.trees.resize(r.u64());
            for (auto& t : p.trees) t = detail::read_tree(r);
            model.params = std::move(p);
            break;
        }
        case ModelKind::Gbt: {
            GbtParams p;
            p.base_score = r.f64();
            p.learning_rate = r.f64();
            p.trees.resize(r.u64());
            for (auto& t : p.trees) t = detail::read_tree(r);
            model.params = std::move(p);
            break;
        }
        case ModelKind::Svm: {
            SvmParams p;
            p.support_vectors = r.matrix();
            p.dual_coef = r.f64v();
            p.bias = r.f64();
            p.kernel = r.u32() ? SvmKernel::Rbf : SvmKernel::Linear;
            p.gamma = r.f64();
            p.platt_a = r.f64();
            p.platt_b = r.f64();
            p.scale_mean = r.f64v();
            p.scale_sd = r.f64v();
            model.params = std::move(p);
            break;
        }
        case ModelKind::Mlp: {
            MlpParams p;
            const std::uint64_t layers = r.u64();
            for (std::uint64_t l = 0; l < layers; ++l) {
                p.weights.push_back(r.matrix());
                p.biases.push_back(r.f64v());
            }
            p.scale_mean = r.f64v();
            p.scale_sd = r.f64v();
            model.params = std::move(p);
            break;
        }
    }
    model.training_log = r.f64v();
    model.warnings.resize(r.u64());
    for (auto& s : model.warnings) s = r.str();
    return model;
}

} // namespace morphml
