#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "vclod/mesh.hpp"
#include "vclod/rng.hpp"

namespace vclod {

namespace detail {

// Closest point on triangle (Ericson, Real-Time Collision Detection).
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

// Median-split AABB tree over reference triangles; quadratic scans
// are too slow for the 12k-triangle corpus meshes.
class TriangleBvh {
public:
    explicit TriangleBvh(const TriangleMesh& mesh) : mesh_(mesh) {
        order_.resize(mesh.triangles.size());
        std::iota(order_.begin(), order_.end(), 0);
        centroids_.reserve(order_.size());
        for (const auto& t : mesh.triangles)
            centroids_.push_back((mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0);
        nodes_.reserve(2 * order_.size() / kLeafSize + 2);
        build(0, order_.size());
    }

    double squared_distance(const Vec3& p) const {
        double best = std::numeric_limits<double>::max();
        query(0, p, best);
        return best;
    }

private:
    static constexpr std::size_t kLeafSize = 8;

    struct Node {
        Vec3 lo, hi;
        std::size_t begin = 0, count = 0; // leaf when count > 0
        std::size_t left = 0, right = 0;
    };

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t node_index = nodes_.size();
        nodes_.emplace_back();
        Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
        for (std::size_t i = begin; i < end; ++i) {
            const auto& t = mesh_.triangles[order_[i]];
            for (int k = 0; k < 3; ++k) {
                lo = min_components(lo, mesh_.vertices[t[k]]);
                hi = max_components(hi, mesh_.vertices[t[k]]);
            }
        }
        nodes_[node_index].lo = lo;
        nodes_[node_index].hi = hi;

        if (end - begin <= kLeafSize) {
            nodes_[node_index].begin = begin;
            nodes_[node_index].count = end - begin;
            return node_index;
        }

        const Vec3 extent = hi - lo;
        int axis = 0;
        if (extent.y > extent.x) axis = 1;
        if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + static_cast<long>(begin),
                         order_.begin() + static_cast<long>(mid),
                         order_.begin() + static_cast<long>(end), [&](int ia, int ib) {
                             const Vec3& ca = centroids_[static_cast<std::size_t>(ia)];
                             const Vec3& cb = centroids_[static_cast<std::size_t>(ib)];
                             const double va = axis == 0 ? ca.x : axis == 1 ? ca.y : ca.z;
                             const double vb = axis == 0 ? cb.x : axis == 1 ? cb.y : cb.z;
                             return va < vb || (va == vb && ia < ib);
                         });

        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        nodes_[node_index].left = left;
        nodes_[node_index].right = right;
        return node_index;
    }

    static double box_squared_distance(const Node& n, const Vec3& p) {
        const double dx = std::fmax(0.0, std::fmax(n.lo.x - p.x, p.x - n.hi.x));
        const double dy = std::fmax(0.0, std::fmax(n.lo.y - p.y, p.y - n.hi.y));
        const double dz = std::fmax(0.0, std::fmax(n.lo.z - p.z, p.z - n.hi.z));
        return dx * dx + dy * dy + dz * dz;
    }

    void query(std::size_t node_index, const Vec3& p, double& best) const {
        const Node& n = nodes_[node_index];
        if (box_squared_distance(n, p) >= best) return;
        if (n.count > 0) {
            for (std::size_t i = n.begin; i < n.begin + n.count; ++i) {
                const auto& t = mesh_.triangles[order_[i]];
                const Vec3 q = closest_point_on_triangle(p, mesh_.vertices[t[0]],
                                                         mesh_.vertices[t[1]], mesh_.vertices[t[2]]);
                best = std::fmin(best, norm2(p - q));
            }
            return;
        }
        const double dl = box_squared_distance(nodes_[n.left], p);
        const double dr = box_squared_distance(nodes_[n.right], p);
        if (dl <= dr) {
            query(n.left, p, best);
            query(n.right, p, best);
        } else {
            query(n.right, p, best);
            query(n.left, p, best);
        }
    }

    const TriangleMesh& mesh_;
    std::vector<int> order_;
    std::vector<Vec3> centroids_;
    std::vector<Node> nodes_;
};

} // namespace detail

inline constexpr std::uint64_t kDefaultDeviationSeed = 20240901ull;

// Mean squared distance from points sampled area-uniformly on
// `simplified` to the nearest point of the `reference` surface.
// One-sided by construction; deterministic for a given seed.
inline double mean_squared_deviation(const TriangleMesh& simplified, const TriangleMesh& reference,
                                     std::size_t samples,
                                     std::uint64_t seed = kDefaultDeviationSeed) {
    if (simplified.triangles.empty() || reference.triangles.empty())
        throw ValidationError("mean_squared_deviation: both meshes must be non-empty");
    if (samples < 1) throw ValidationError("mean_squared_deviation: samples must be >= 1");

    std::vector<double> cumulative_area(simplified.triangles.size());
    double total = 0.0;
    for (std::size_t i = 0; i < simplified.triangles.size(); ++i) {
        const auto& t = simplified.triangles[i];
        total += triangle_area(simplified.vertices[t[0]], simplified.vertices[t[1]],
                               simplified.vertices[t[2]]);
        cumulative_area[i] = total;
    }
    if (!(total > 0.0)) throw ValidationError("mean_squared_deviation: zero total surface area");

    const detail::TriangleBvh bvh(reference);
    Rng rng = make_rng(seed);
    double sum = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double pick = uniform01(rng) * total;
        const auto it = std::lower_bound(cumulative_area.begin(), cumulative_area.end(), pick);
        const std::size_t ti = std::min<std::size_t>(
            static_cast<std::size_t>(it - cumulative_area.begin()), cumulative_area.size() - 1);
        const auto& t = simplified.triangles[ti];

        // square-root warp gives an area-uniform barycentric sample
        const double r1 = std::sqrt(uniform01(rng));
        const double r2 = uniform01(rng);
        const Vec3 p = simplified.vertices[t[0]] * (1.0 - r1) +
                       simplified.vertices[t[1]] * (r1 * (1.0 - r2)) +
                       simplified.vertices[t[2]] * (r1 * r2);
        sum += bvh.squared_distance(p);
    }
    return sum / static_cast<double>(samples);
}

} // namespace vclod
