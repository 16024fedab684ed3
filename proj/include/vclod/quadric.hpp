#pragma once

#include <array>
#include <cmath>

#include "vclod/mesh.hpp"

namespace vclod {

// Symmetric 4x4 error form Q = w * p p^T for plane p = (a,b,c,d) with
// unit normal. Evaluating [x,1]^T Q [x,1] gives w * squared
// point-plane distance; sums of quadrics accumulate squared distances
// to all contributing planes. Upper triangle stored row-major:
//   [0] aa [1] ab [2] ac [3] ad
//          [4] bb [5] bc [6] bd
//                 [7] cc [8] cd
//                        [9] dd
struct Quadric {
    std::array<double, 10> m{};

    Quadric& operator+=(const Quadric& o) {
        for (int i = 0; i < 10; ++i) m[i] += o.m[i];
        return *this;
    }
    friend Quadric operator+(Quadric a, const Quadric& b) { return a += b; }
    friend Quadric operator*(Quadric q, double s) {
        for (double& c : q.m) c *= s;
        return q;
    }

    double evaluate(const Vec3& v) const {
        return m[0] * v.x * v.x + 2.0 * m[1] * v.x * v.y + 2.0 * m[2] * v.x * v.z +
               2.0 * m[3] * v.x + m[4] * v.y * v.y + 2.0 * m[5] * v.y * v.z + 2.0 * m[6] * v.y +
               m[7] * v.z * v.z + 2.0 * m[8] * v.z + m[9];
    }

    static Quadric from_plane(const Vec3& n, double d, double weight = 1.0) {
        Quadric q;
        q.m = {n.x * n.x, n.x * n.y, n.x * n.z, n.x * d,
               n.y * n.y, n.y * n.z, n.y * d,
               n.z * n.z, n.z * d,
               d * d};
        if (weight != 1.0)
            for (double& c : q.m) c *= weight;
        return q;
    }
};

// Fundamental quadric of a triangle's supporting plane (unit normal,
// weight 1): evaluate() returns the squared distance to that plane.
inline Quadric plane_quadric(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 n = cross(b - a, c - a);
    const double len = norm(n);
    if (!(0.5 * len >= kDegenerateAreaM2))
        throw ValidationError("plane_quadric: degenerate triangle");
    const Vec3 unit = n * (1.0 / len);
    return Quadric::from_plane(unit, -dot(unit, a));
}

// Per-vertex quadrics: area-weighted sum of incident face planes.
// Isolated vertices keep a zero quadric.
inline std::vector<Quadric> vertex_quadrics(const TriangleMesh& mesh) {
    std::vector<Quadric> q(mesh.vertices.size());
    for (const auto& t : mesh.triangles) {
        const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
        const double area = triangle_area(a, b, c);
        const Quadric fq = plane_quadric(a, b, c) * area;
        q[t[0]] += fq;
        q[t[1]] += fq;
        q[t[2]] += fq;
    }
    return q;
}

struct CollapseTarget {
    Vec3 position;
    double cost = 0.0;
    bool solved_system = false; // false when the endpoint/midpoint fallback fired
};

inline constexpr double kCollapseDetTolerance = 1e-10;

// Position minimizing v^T Q v for the summed endpoint quadric. The
// 3x3 system A v = -b comes from zeroing the gradient; when |det A|
// is at or below tolerance the best of {v1, v2, midpoint} is used.
inline CollapseTarget optimal_collapse(const Quadric& q, const Vec3& v1, const Vec3& v2,
                                       double det_tolerance = kCollapseDetTolerance) {
    const double a00 = q.m[0], a01 = q.m[1], a02 = q.m[2];
    const double a11 = q.m[4], a12 = q.m[5], a22 = q.m[7];
    const double b0 = -q.m[3], b1 = -q.m[6], b2 = -q.m[8];

    const double det = a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
                       a02 * (a01 * a12 - a11 * a02);

    CollapseTarget out;
    if (std::fabs(det) > det_tolerance) {
        const double inv = 1.0 / det;
        out.position = {
            inv * (b0 * (a11 * a22 - a12 * a12) - a01 * (b1 * a22 - a12 * b2) +
                   a02 * (b1 * a12 - a11 * b2)),
            inv * (a00 * (b1 * a22 - a12 * b2) - b0 * (a01 * a22 - a12 * a02) +
                   a02 * (a01 * b2 - b1 * a02)),
            inv * (a00 * (a11 * b2 - b1 * a12) - a01 * (a01 * b2 - b1 * a02) +
                   b0 * (a01 * a12 - a11 * a02))};
        out.solved_system = true;
    } else {
        const Vec3 mid = (v1 + v2) * 0.5;
        const double e1 = q.evaluate(v1), e2 = q.evaluate(v2), em = q.evaluate(mid);
        out.position = v1;
        double best = e1;
        if (e2 < best) {
            best = e2;
            out.position = v2;
        }
        if (em < best) out.position = mid;
    }
    out.cost = std::fmax(0.0, q.evaluate(out.position));
    return out;
}

} // namespace vclod
