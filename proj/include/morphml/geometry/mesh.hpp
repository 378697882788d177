#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/geometry/vec3.hpp"

namespace morphml {

struct NeckPlane {
    Vec3 point;  // a point on the plane, mm
    Vec3 normal; // unit normal; the dome lies on the +normal side
};

// Indexed triangle surface of an aneurysm dome.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::optional<NeckPlane> neck_plane;

    bool empty() const { return triangles.empty(); }

    // Closed and consistently oriented: every directed edge appears exactly
    // once and is matched by its reverse.
    bool is_closed() const {
        std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
        for (const auto& t : triangles) {
            for (int e = 0; e < 3; ++e) {
                const std::uint32_t a = t[e], b = t[(e + 1) % 3];
                if (++edges[{a, b}] > 1) return false;
            }
        }
        for (const auto& [edge, count] : edges) {
            auto rev = edges.find({edge.second, edge.first});
            if (rev == edges.end() || rev->second != 1) return false;
        }
        return true;
    }

    void require_closed() const {
        if (!is_closed()) throw NotClosedError("mesh is not closed / consistently oriented");
    }

    std::pair<Vec3, Vec3> bounding_box() const {
        if (vertices.empty()) throw InvalidArgument("empty mesh has no bounding box");
        Vec3 lo = vertices[0], hi = vertices[0];
        for (const auto& v : vertices) {
            for (int k = 0; k < 3; ++k) {
                lo[k] = std::min(lo[k], v[k]);
                hi[k] = std::max(hi[k], v[k]);
            }
        }
        return {lo, hi};
    }
};

enum class StlFormat { Binary, Ascii };

namespace detail {

constexpr double kMergeTolerance = 1e-9; // mm, far below clinical scale

inline std::tuple<std::int64_t, std::int64_t, std::int64_t> quantize(const Vec3& v) {
    return {static_cast<std::int64_t>(std::llround(v.x / kMergeTolerance)),
            static_cast<std::int64_t>(std::llround(v.y / kMergeTolerance)),
            static_cast<std::int64_t>(std::llround(v.z / kMergeTolerance))};
}

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

// Merge duplicate vertices and drop zero-area triangles from raw soup.
inline TriangleMesh index_soup(const std::vector<std::array<Vec3, 3>>& soup) {
    TriangleMesh mesh;
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::uint32_t> seen;
    for (const auto& tri : soup) {
        Triangle idx{};
        for (int k = 0; k < 3; ++k) {
            auto key = quantize(tri[static_cast<std::size_t>(k)]);
            auto it = seen.find(key);
            if (it == seen.end()) {
                it = seen.emplace(key, static_cast<std::uint32_t>(mesh.vertices.size())).first;
                mesh.vertices.push_back(tri[static_cast<std::size_t>(k)]);
            }
            idx[static_cast<std::size_t>(k)] = it->second;
        }
        if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) continue;
        if (triangle_area(mesh.vertices[idx[0]], mesh.vertices[idx[1]], mesh.vertices[idx[2]]) <= 0.0)
            continue;
        mesh.triangles.push_back(idx);
    }
    if (mesh.triangles.empty()) throw InvalidArgument("mesh is empty after cleaning");
    return mesh;
}

inline float read_f32(const char* p) {
    float f;
    std::memcpy(&f, p, 4);
    return f;
}

inline TriangleMesh load_stl_binary(const std::string& bytes, const std::string& path) {
    if (bytes.size() < 84)
        throw FormatError(path + ": binary STL truncated at byte " + std::to_string(bytes.size()) +
                          " (header + count need 84)");
    std::uint32_t count;
    std::memcpy(&count, bytes.data() + 80, 4);
    const std::size_t need = 84 + static_cast<std::size_t>(count) * 50;
    if (bytes.size() < need)
        throw FormatError(path + ": binary STL truncated at byte " + std::to_string(bytes.size()) +
                          " (expected " + std::to_string(need) + ")");
    std::vector<std::array<Vec3, 3>> soup;
    soup.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const char* rec = bytes.data() + 84 + static_cast<std::size_t>(i) * 50;
        std::array<Vec3, 3> tri;
        for (int v = 0; v < 3; ++v) {
            const char* p = rec + 12 + v * 12; // skip 12-byte facet normal
            tri[static_cast<std::size_t>(v)] = {read_f32(p), read_f32(p + 4), read_f32(p + 8)};
        }
        soup.push_back(tri);
    }
    if (soup.empty()) throw InvalidArgument(path + ": binary STL holds zero triangles");
    return index_soup(soup);
}

inline TriangleMesh load_stl_ascii(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string tok;
    std::vector<std::array<Vec3, 3>> soup;
    std::array<Vec3, 3> tri;
    int vcount = 0;
    while (in >> tok) {
        if (tok == "vertex") {
            Vec3 v;
            if (!(in >> v.x >> v.y >> v.z))
                throw FormatError(path + ": ASCII STL vertex parse failure at byte " +
                                  std::to_string(static_cast<long long>(in.tellg())));
            if (vcount >= 3) throw FormatError(path + ": facet with more than 3 vertices");
            tri[static_cast<std::size_t>(vcount++)] = v;
        } else if (tok == "endfacet") {
            if (vcount != 3)
                throw FormatError(path + ": facet with " + std::to_string(vcount) + " vertices");
            soup.push_back(tri);
            vcount = 0;
        }
    }
    if (vcount != 0) throw FormatError(path + ": ASCII STL ends inside a facet");
    if (soup.empty()) throw InvalidArgument(path + ": ASCII STL holds zero facets");
    return index_soup(soup);
}

} // namespace detail

inline TriangleMesh load_mesh(const std::string& path, StlFormat format) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return format == StlFormat::Binary ? detail::load_stl_binary(bytes, path)
                                       : detail::load_stl_ascii(bytes, path);
}

// Sniff the format: ASCII files start with "solid" and contain "facet".
inline TriangleMesh load_mesh(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const bool ascii = bytes.rfind("solid", 0) == 0 &&
                       bytes.find("facet") != std::string::npos;
    return ascii ? detail::load_stl_ascii(bytes, path) : detail::load_stl_binary(bytes, path);
}

inline void save_stl_binary(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + path);
    char header[80] = {};
    std::snprintf(header, sizeof(header), "morphml binary STL");
    f.write(header, 80);
    const std::uint32_t count = static_cast<std::uint32_t>(mesh.triangles.size());
    f.write(reinterpret_cast<const char*>(&count), 4);
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        Vec3 n = cross(b - a, c - a);
        const double len = norm(n);
        if (len > 0) n = n / len;
        float rec[12] = {
            static_cast<float>(n.x), static_cast<float>(n.y), static_cast<float>(n.z),
            static_cast<float>(a.x), static_cast<float>(a.y), static_cast<float>(a.z),
            static_cast<float>(b.x), static_cast<float>(b.y), static_cast<float>(b.z),
            static_cast<float>(c.x), static_cast<float>(c.y), static_cast<float>(c.z)};
        f.write(reinterpret_cast<const char*>(rec), 48);
        const std::uint16_t attr = 0;
        f.write(reinterpret_cast<const char*>(&attr), 2);
    }
}

// Neck-plane sidecar: six whitespace-separated reals, point then normal.
inline NeckPlane load_neck_plane(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot open " + path);
    NeckPlane np;
    if (!(f >> np.point.x >> np.point.y >> np.point.z >> np.normal.x >> np.normal.y >> np.normal.z))
        throw FormatError(path + ": neck plane file needs six reals (point, normal)");
    const double len = norm(np.normal);
    if (len == 0.0) throw FormatError(path + ": neck plane normal is zero");
    np.normal = np.normal / len;
    return np;
}

} // namespace morphml
