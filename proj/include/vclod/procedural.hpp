#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "vclod/mesh.hpp"

namespace vclod {
namespace procedural {

// Closed column with a sinusoidally displaced wall and fan-capped
// ends. Triangle count: 2*segments*rows + 2*(segments-2).
// bumpy_column(61, 98) lands on exactly 12074 triangles, the size of
// the reference statue stand-in used across the test corpus.
inline TriangleMesh bumpy_column(int segments, int rows, double height = 1.8,
                                 double radius = 0.30, double bump = 0.22) {
    TriangleMesh mesh;
    mesh.name = "bumpy_column";
    const double two_pi = 2.0 * std::numbers::pi;
    for (int r = 0; r <= rows; ++r) {
        const double t = static_cast<double>(r) / rows;
        const double z = t * height;
        // envelope sin(pi t) keeps both rims circular so the caps stay planar
        const double envelope = bump * std::sin(std::numbers::pi * t);
        for (int s = 0; s < segments; ++s) {
            const double theta = two_pi * s / segments;
            const double wobble =
                0.6 * std::sin(3.0 * theta + 5.0 * t) + 0.4 * std::sin(7.0 * theta - 3.0 * t);
            const double rad = radius * (1.0 + envelope * wobble);
            mesh.vertices.push_back({rad * std::cos(theta), rad * std::sin(theta), z});
        }
    }
    auto ring = [segments](int r, int s) { return r * segments + (s % segments); };
    for (int r = 0; r < rows; ++r) {
        for (int s = 0; s < segments; ++s) {
            const int a = ring(r, s), b = ring(r, s + 1);
            const int c = ring(r + 1, s + 1), d = ring(r + 1, s);
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
        }
    }
    // rim fans (no apex vertex): bottom wound to face -z, top to face +z
    for (int s = 1; s + 1 < segments; ++s)
        mesh.triangles.push_back({ring(0, 0), ring(0, s + 1), ring(0, s)});
    for (int s = 1; s + 1 < segments; ++s)
        mesh.triangles.push_back({ring(rows, 0), ring(rows, s), ring(rows, s + 1)});
    return mesh;
}

// The ~12k-triangle corpus mesh (12074 triangles exactly).
inline TriangleMesh statue_stand_in() { return bumpy_column(61, 98); }

// Flat grid in the z=0 plane; nx*ny*2 triangles over extent x extent.
inline TriangleMesh planar_grid(int nx, int ny, double extent = 1.0) {
    TriangleMesh mesh;
    mesh.name = "planar_grid";
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices.push_back({extent * i / nx, extent * j / ny, 0.0});
    auto at = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            mesh.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            mesh.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    }
    return mesh;
}

inline TriangleMesh unit_cube() {
    TriangleMesh mesh;
    mesh.name = "unit_cube";
    for (int i = 0; i < 8; ++i)
        mesh.vertices.push_back(
            {static_cast<double>(i & 1), static_cast<double>((i >> 1) & 1),
             static_cast<double>((i >> 2) & 1)});
    const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                             {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (const auto& q : quads) {
        mesh.triangles.push_back({q[0], q[1], q[2]});
        mesh.triangles.push_back({q[0], q[2], q[3]});
    }
    return mesh;
}

// Longitude/latitude sphere: 2*segments*(rings-1) triangles.
inline TriangleMesh uv_sphere(int segments, int rings, double radius = 0.5) {
    TriangleMesh mesh;
    mesh.name = "uv_sphere";
    const double two_pi = 2.0 * std::numbers::pi;
    mesh.vertices.push_back({0.0, 0.0, radius}); // north pole
    for (int r = 1; r < rings; ++r) {
        const double phi = std::numbers::pi * r / rings;
        for (int s = 0; s < segments; ++s) {
            const double theta = two_pi * s / segments;
            mesh.vertices.push_back({radius * std::sin(phi) * std::cos(theta),
                                     radius * std::sin(phi) * std::sin(theta),
                                     radius * std::cos(phi)});
        }
    }
    mesh.vertices.push_back({0.0, 0.0, -radius}); // south pole
    auto band = [segments](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };
    const int south = static_cast<int>(mesh.vertices.size()) - 1;
    for (int s = 0; s < segments; ++s) mesh.triangles.push_back({0, band(1, s), band(1, s + 1)});
    for (int r = 1; r + 1 < rings; ++r) {
        for (int s = 0; s < segments; ++s) {
            mesh.triangles.push_back({band(r, s), band(r + 1, s), band(r + 1, s + 1)});
            mesh.triangles.push_back({band(r, s), band(r + 1, s + 1), band(r, s + 1)});
        }
    }
    for (int s = 0; s < segments; ++s)
        mesh.triangles.push_back({south, band(rings - 1, s + 1), band(rings - 1, s)});
    return mesh;
}

// Open triangle strip along +x; n quads, boundary everywhere.
inline TriangleMesh open_strip(int n, double width = 0.2) {
    TriangleMesh mesh;
    mesh.name = "open_strip";
    for (int i = 0; i <= n; ++i) {
        const double x = 0.3 * i;
        mesh.vertices.push_back({x, 0.0, 0.05 * std::sin(1.3 * i)});
        mesh.vertices.push_back({x, width, 0.05 * std::cos(0.9 * i)});
    }
    for (int i = 0; i < n; ++i) {
        const int a = 2 * i, b = 2 * i + 1, c = 2 * i + 3, d = 2 * i + 2;
        mesh.triangles.push_back({a, b, c});
        mesh.triangles.push_back({a, c, d});
    }
    return mesh;
}

} // namespace procedural
} // namespace vclod
