#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "vclod/error.hpp"
#include "vclod/vec3.hpp"

namespace vclod {

// Triangles below this area (m^2) count as degenerate.
inline constexpr double kDegenerateAreaM2 = 1e-12;

struct TriangleMesh {
    std::vector<Vec3> vertices;                 // positions in meters
    std::vector<std::array<int, 3>> triangles;  // 0-based vertex indices
    std::string name;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }
};

struct MeshMetrics {
    std::size_t triangle_count = 0;
    std::size_t vertex_count = 0;
    double surface_area = 0.0; // m^2
    Vec3 bbox_min, bbox_max;
};

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

inline Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    return cross(b - a, c - a); // unnormalized, length = 2*area
}

// Structural checks only; cheap enough to run before every consumer.
inline void validate_indices(const TriangleMesh& mesh) {
    const int n = static_cast<int>(mesh.vertices.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= n)
                throw ValidationError("triangle " + std::to_string(t) +
                                      ": vertex index " + std::to_string(tri[k]) +
                                      " out of range (vertex count " + std::to_string(n) + ")");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw ValidationError("triangle " + std::to_string(t) + ": repeated vertex index");
    }
}

// Full invariant check: indices in range, no repeated corner, no
// degenerate triangle. Throws ValidationError on the first violation.
inline void validate(const TriangleMesh& mesh) {
    validate_indices(mesh);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                          mesh.vertices[tri[2]]);
        if (!(area >= kDegenerateAreaM2))
            throw ValidationError("triangle " + std::to_string(t) + ": degenerate (area " +
                                  std::to_string(area) + " m^2)");
    }
}

inline MeshMetrics metrics(const TriangleMesh& mesh) {
    MeshMetrics m;
    m.triangle_count = mesh.triangles.size();
    m.vertex_count = mesh.vertices.size();
    if (!mesh.vertices.empty()) {
        m.bbox_min = m.bbox_max = mesh.vertices.front();
        for (const Vec3& v : mesh.vertices) {
            m.bbox_min = min_components(m.bbox_min, v);
            m.bbox_max = max_components(m.bbox_max, v);
        }
    }
    for (const auto& tri : mesh.triangles)
        m.surface_area += triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                        mesh.vertices[tri[2]]);
    return m;
}

} // namespace vclod
