#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/core/matrix.hpp"

namespace morphml {

enum class ColumnKind { Numeric, Binary, Categorical };

inline std::string to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Binary: return "binary";
        case ColumnKind::Categorical: return "categorical";
    }
    return "?";
}

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<std::string> levels; // declared levels for categorical columns
};

using TableSchema = std::vector<ColumnSpec>;

// The 53 feature names of the documented aneurysm schema with their kinds.
// Morphometric and demographic quantities are numeric, clinical flags and
// one-hot location/laterality readings are binary, free-text readings are
// categorical with data-defined levels.
inline const std::map<std::string, ColumnKind>& documented_schema() {
    static const std::map<std::string, ColumnKind> kinds = {
        {"age", ColumnKind::Numeric},
        {"ar", ColumnKind::Numeric},
        {"autoimmune_disease", ColumnKind::Binary},
        {"bf", ColumnKind::Numeric},
        {"bifurcation", ColumnKind::Binary},
        {"CAD", ColumnKind::Binary},
        {"circulation", ColumnKind::Categorical},
        {"circulation_anterior", ColumnKind::Binary},
        {"circulation_posterior", ColumnKind::Binary},
        {"cp", ColumnKind::Numeric},
        {"current_smoker", ColumnKind::Binary},
        {"DM", ColumnKind::Binary},
        {"familyhx_IA", ColumnKind::Binary},
        {"familyhx_SAH", ColumnKind::Binary},
        {"fd", ColumnKind::Numeric},
        {"flatness", ColumnKind::Numeric},
        {"gender_female", ColumnKind::Binary},
        {"gross_morphology", ColumnKind::Categorical},
        {"HTN", ColumnKind::Binary},
        {"hx_smoking", ColumnKind::Binary},
        {"irregular_shape", ColumnKind::Binary},
        {"lacunarity", ColumnKind::Numeric},
        {"laterality", ColumnKind::Categorical},
        {"laterality_left", ColumnKind::Binary},
        {"laterality_midline", ColumnKind::Binary},
        {"laterality_right", ColumnKind::Binary},
        {"location", ColumnKind::Categorical},
        {"location_aca", ColumnKind::Binary},
        {"location_acomm", ColumnKind::Binary},
        {"location_aica", ColumnKind::Binary},
        {"location_basilar", ColumnKind::Binary},
        {"location_ica", ColumnKind::Binary},
        {"location_ica_cavernous", ColumnKind::Binary},
        {"location_mca", ColumnKind::Binary},
        {"location_pca", ColumnKind::Binary},
        {"location_pcomm", ColumnKind::Binary},
        {"location_pica", ColumnKind::Binary},
        {"location_sca", ColumnKind::Binary},
        {"location_vert", ColumnKind::Binary},
        {"Max 3D diameter (Feret diameter)", ColumnKind::Numeric},
        {"multilobular", ColumnKind::Binary},
        {"multiple_aneurysms", ColumnKind::Binary},
        {"neck_width_mm", ColumnKind::Numeric},
        {"prior_SAH", ColumnKind::Binary},
        {"PVD", ColumnKind::Binary},
        {"sa", ColumnKind::Numeric},
        {"savol_ratio", ColumnKind::Numeric},
        {"sidewall", ColumnKind::Binary},
        {"size_mm", ColumnKind::Numeric},
        {"sphericity", ColumnKind::Numeric},
        {"total_number_IA", ColumnKind::Numeric},
        {"ui", ColumnKind::Numeric},
        {"wide_neck", ColumnKind::Binary}};
    return kinds;
}

inline const std::set<std::string>& known_feature_names() {
    static const std::set<std::string> names = [] {
        std::set<std::string> out;
        for (const auto& [name, kind] : documented_schema()) out.insert(name);
        return out;
    }();
    return names;
}

// Named-column tabular dataset with a per-cell missing mask and an optional
// binary rupture label. Immutable in spirit: transformations return copies.
class FeatureTable {
public:
    FeatureTable() = default;

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return columns_.size(); }
    const std::vector<ColumnSpec>& columns() const { return columns_; }
    const ColumnSpec& column(std::size_t c) const { return columns_[c]; }
    bool has_labels() const { return !labels_.empty(); }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<std::string>& unknown_columns() const { return unknown_columns_; }

    std::optional<std::size_t> find_column(std::string_view name) const {
        for (std::size_t c = 0; c < columns_.size(); ++c)
            if (columns_[c].name == name) return c;
        return std::nullopt;
    }

    // numeric value / level index; meaningless when missing
    double cell(std::size_t r, std::size_t c) const { return cells_[r * n_cols() + c]; }
    bool is_missing(std::size_t r, std::size_t c) const { return missing_[r * n_cols() + c]; }

    void set_cell(std::size_t r, std::size_t c, double v) {
        cells_[r * n_cols() + c] = v;
        missing_[r * n_cols() + c] = false;
    }

    std::vector<double> non_missing(std::size_t c) const {
        std::vector<double> out;
        for (std::size_t r = 0; r < n_rows_; ++r)
            if (!is_missing(r, c)) out.push_back(cell(r, c));
        return out;
    }

    static FeatureTable build(TableSchema schema, std::size_t n_rows) {
        FeatureTable t;
        std::set<std::string> seen;
        for (const auto& c : schema)
            if (!seen.insert(c.name).second)
                throw SchemaError("duplicate column name: " + c.name);
        t.columns_ = std::move(schema);
        t.n_rows_ = n_rows;
        t.cells_.assign(n_rows * t.columns_.size(), 0.0);
        t.missing_.assign(n_rows * t.columns_.size(), true);
        for (const auto& c : t.columns_)
            if (!known_feature_names().count(c.name)) t.unknown_columns_.push_back(c.name);
        return t;
    }

    void set_labels(std::vector<int> labels) {
        if (labels.size() != n_rows_) throw SchemaError("label count != row count");
        for (int y : labels)
            if (y != 0 && y != 1) throw SchemaError("labels must be binary");
        labels_ = std::move(labels);
    }

    FeatureTable without_columns(const std::set<std::size_t>& drop) const {
        TableSchema schema;
        for (std::size_t c = 0; c < n_cols(); ++c)
            if (!drop.count(c)) schema.push_back(columns_[c]);
        FeatureTable t = build(std::move(schema), n_rows_);
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < n_cols(); ++c) {
            if (drop.count(c)) continue;
            for (std::size_t r = 0; r < n_rows_; ++r)
                if (!is_missing(r, c)) t.set_cell(r, out_c, cell(r, c));
            ++out_c;
        }
        t.labels_ = labels_;
        return t;
    }

    FeatureTable subset_rows(const std::vector<std::size_t>& rows) const {
        FeatureTable t = build(columns_, rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t c = 0; c < n_cols(); ++c)
                if (!is_missing(rows[i], c)) t.set_cell(i, c, cell(rows[i], c));
        if (!labels_.empty()) {
            std::vector<int> y(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) y[i] = labels_[rows[i]];
            t.labels_ = std::move(y);
        }
        return t;
    }

private:
    TableSchema columns_;
    std::size_t n_rows_ = 0;
    std::vector<double> cells_;   // row-major
    std::vector<bool> missing_;
    std::vector<int> labels_;
    std::vector<std::string> unknown_columns_;
};

namespace detail {

inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    char ch;
    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            any = true;
            continue;
        }
        switch (ch) {
            case '"': quoted = true; any = true; break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r': break;
            case '\n':
                if (any || !field.empty() || !row.empty()) {
                    row.push_back(std::move(field));
                    rows.push_back(std::move(row));
                }
                field.clear();
                row.clear();
                any = false;
                break;
            default: field.push_back(ch); any = true;
        }
    }
    if (quoted) throw FormatError("unterminated quoted CSV field");
    if (any || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::optional<double> parse_number(const std::string& s) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
    double v;
    const auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end || begin == end) return std::nullopt;
    return v;
}

inline std::optional<int> parse_binary(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "0" || s == "false") return 0;
    if (s == "1" || s == "true") return 1;
    return std::nullopt;
}

} // namespace detail

struct CsvOptions {
    std::string label_column = "ruptured";
    std::optional<TableSchema> schema; // inferred from the data when absent
};

inline FeatureTable read_csv(const std::string& path, const CsvOptions& options = {}) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path);
    auto rows = detail::parse_csv(f);
    if (rows.empty()) throw FormatError(path + ": empty CSV");
    const auto& header = rows[0];
    {
        std::set<std::string> seen;
        for (const auto& h : header)
            if (!seen.insert(h).second) throw SchemaError(path + ": duplicate header " + h);
    }
    const std::size_t n_rows = rows.size() - 1;
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != header.size())
            throw FormatError(path + ": row " + std::to_string(r) + " has " +
                              std::to_string(rows[r].size()) + " fields, header has " +
                              std::to_string(header.size()));

    std::optional<std::size_t> label_col;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == options.label_column) label_col = c;

    // resolve per-column kinds
    TableSchema schema;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (label_col && c == *label_col) continue;
        ColumnSpec spec;
        spec.name = header[c];
        if (options.schema) {
            bool found = false;
            for (const auto& s : *options.schema)
                if (s.name == header[c]) {
                    spec = s;
                    found = true;
                }
            if (!found) spec.kind = ColumnKind::Numeric;
        } else if (auto doc = documented_schema().find(header[c]);
                   doc != documented_schema().end()) {
            spec.kind = doc->second;
            if (spec.kind == ColumnKind::Categorical) {
                std::set<std::string> levels;
                for (std::size_t r = 1; r < rows.size(); ++r)
                    if (!rows[r][c].empty()) levels.insert(rows[r][c]);
                spec.levels.assign(levels.begin(), levels.end());
            }
        } else {
            bool all_binary = true, all_numeric = true;
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const std::string& cell = rows[r][c];
                if (cell.empty()) continue;
                if (!detail::parse_binary(cell)) all_binary = false;
                if (!detail::parse_number(cell)) all_numeric = false;
            }
            if (all_binary)
                spec.kind = ColumnKind::Binary;
            else if (all_numeric)
                spec.kind = ColumnKind::Numeric;
            else {
                spec.kind = ColumnKind::Categorical;
                std::set<std::string> levels;
                for (std::size_t r = 1; r < rows.size(); ++r)
                    if (!rows[r][c].empty()) levels.insert(rows[r][c]);
                spec.levels.assign(levels.begin(), levels.end());
            }
        }
        schema.push_back(std::move(spec));
    }

    FeatureTable table = FeatureTable::build(std::move(schema), n_rows);
    std::vector<int> labels;
    std::size_t out_c = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (label_col && c == *label_col) {
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const auto b = detail::parse_binary(rows[r][c]);
                if (!b)
                    throw FormatError(path + ": row " + std::to_string(r) + ", column " +
                                      header[c] + ": '" + rows[r][c] + "' is not a binary label");
                labels.push_back(*b);
            }
            continue;
        }
        const ColumnSpec& spec = table.column(out_c);
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const std::string& cell = rows[r][c];
            if (cell.empty()) continue; // missing
            switch (spec.kind) {
                case ColumnKind::Numeric: {
                    const auto v = detail::parse_number(cell);
                    if (!v)
                        throw FormatError(path + ": row " + std::to_string(r) + ", column " +
                                          spec.name + ": '" + cell + "' is not numeric");
                    table.set_cell(r - 1, out_c, *v);
                    break;
                }
                case ColumnKind::Binary: {
                    const auto b = detail::parse_binary(cell);
                    if (!b)
                        throw FormatError(path + ": row " + std::to_string(r) + ", column " +
                                          spec.name + ": '" + cell + "' is not binary");
                    table.set_cell(r - 1, out_c, *b);
                    break;
                }
                case ColumnKind::Categorical: {
                    const auto it = std::find(spec.levels.begin(), spec.levels.end(), cell);
                    if (it == spec.levels.end())
                        throw EncodingError(path + ": row " + std::to_string(r) + ", column " +
                                            spec.name + ": undeclared level '" + cell + "'");
                    table.set_cell(r - 1, out_c,
                                   static_cast<double>(it - spec.levels.begin()));
                    break;
                }
            }
        }
        ++out_c;
    }
    if (label_col) table.set_labels(std::move(labels));
    return table;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

inline std::string format_cell(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

inline void write_csv(const FeatureTable& table, const std::string& path,
                      const std::string& label_column = "ruptured") {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + path);
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
        if (c) f << ",";
        f << detail::csv_escape(table.column(c).name);
    }
    if (table.has_labels()) f << (table.n_cols() ? "," : "") << label_column;
    f << "\n";
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        for (std::size_t c = 0; c < table.n_cols(); ++c) {
            if (c) f << ",";
            if (table.is_missing(r, c)) continue;
            const ColumnSpec& spec = table.column(c);
            if (spec.kind == ColumnKind::Categorical)
                f << detail::csv_escape(spec.levels[static_cast<std::size_t>(table.cell(r, c))]);
            else if (spec.kind == ColumnKind::Binary)
                f << static_cast<int>(table.cell(r, c));
            else
                f << detail::format_cell(table.cell(r, c));
        }
        if (table.has_labels()) f << (table.n_cols() ? "," : "") << table.labels()[r];
        f << "\n";
    }
}

// Schema file: one column per line, "name kind [levels...]"; '#' comments.
// Names containing spaces use quoting as in CSV.
inline TableSchema load_schema(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot open " + path);
    TableSchema schema;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        ColumnSpec spec;
        std::string kind;
        if (line[0] == '"') {
            const auto close = line.find('"', 1);
            if (close == std::string::npos) throw FormatError(path + ": unterminated name quote");
            spec.name = line.substr(1, close - 1);
            is.seekg(static_cast<std::streamoff>(close + 1));
        } else {
            is >> spec.name;
        }
        if (!(is >> kind)) throw FormatError(path + ": missing kind for " + spec.name);
        if (kind == "numeric") spec.kind = ColumnKind::Numeric;
        else if (kind == "binary") spec.kind = ColumnKind::Binary;
        else if (kind == "categorical") spec.kind = ColumnKind::Categorical;
        else throw FormatError(path + ": unknown kind '" + kind + "'");
        std::string level;
        while (is >> level) spec.levels.push_back(level);
        schema.push_back(std::move(spec));
    }
    return schema;
}

} // namespace morphml
