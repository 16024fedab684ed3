#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "vclod/quadric.hpp"

namespace vclod {

struct SimplifyOptions {
    double boundary_weight = 1000.0;  // extra rail quadric on open edges
    double det_tolerance = kCollapseDetTolerance;
    double normal_flip_min_dot = 0.0; // reject collapses rotating a face normal past 90 deg
    double degenerate_area = kDegenerateAreaM2;
    std::size_t min_triangles = 4;
};

struct SimplifyResult {
    TriangleMesh mesh;
    std::size_t achieved_triangles = 0;
    bool reached_target = false; // false flags a partial result: no legal collapse was left
};

struct CollapseRecord {
    int keep = 0;    // surviving vertex (lower index of the edge)
    int remove = 0;  // vertex merged away
    double cost = 0.0;
    Vec3 position;
};

// Greedy quadric edge-collapse. Candidates are keyed (cost, u, v)
// with u < v; ties break toward the lexicographically smaller edge,
// which makes the applied sequence exactly reproducible by an
// exhaustive re-scan (see scan_best_candidate).
class QuadricSimplifier {
public:
    explicit QuadricSimplifier(const TriangleMesh& mesh, SimplifyOptions options = {})
        : opts_(options) {
        validate(mesh);
        positions_ = mesh.vertices;
        vertex_alive_.assign(positions_.size(), 1);
        stamp_.assign(positions_.size(), 0);
        incident_.resize(positions_.size());
        tris_.reserve(mesh.triangles.size());
        for (const auto& t : mesh.triangles) {
            const int id = static_cast<int>(tris_.size());
            tris_.push_back({t, 1});
            for (int k = 0; k < 3; ++k) incident_[t[k]].push_back(id);
        }
        alive_triangles_ = tris_.size();
        name_ = mesh.name;

        quadrics_ = vertex_quadrics(mesh);
        add_boundary_constraints(mesh);
        push_all_edges();
    }

    std::size_t alive_triangles() const { return alive_triangles_; }

    // Applies the cheapest legal collapse; nullopt when none remains.
    std::optional<CollapseRecord> step() {
        while (!heap_.empty()) {
            const Entry e = heap_.top();
            heap_.pop();
            if (!vertex_alive_[e.u] || !vertex_alive_[e.v]) continue;
            if (e.stamp_u != stamp_[e.u] || e.stamp_v != stamp_[e.v]) {
                if (edge_exists(e.u, e.v)) push_edge(e.u, e.v);
                continue;
            }
            if (!collapse_is_legal(e.u, e.v, e.target.position)) {
                parked_.push_back(e);
                continue;
            }
            apply_collapse(e);
            return CollapseRecord{e.u, e.v, e.target.cost, e.target.position};
        }
        return std::nullopt; // parked entries stay illegal until some collapse changes state
    }

    // Exhaustive re-scan of every current edge: evaluates cost and
    // legality from scratch and returns the (cost, u, v) minimum.
    // Independent of the heap; the test oracle for greedy order.
    std::optional<CollapseRecord> scan_best_candidate() const {
        std::optional<CollapseRecord> best;
        for (const auto& [edge, count] : current_edges()) {
            const int u = edge.first, v = edge.second;
            const CollapseTarget t = evaluate_edge(u, v);
            if (!collapse_is_legal(u, v, t.position)) continue;
            if (!best || t.cost < best->cost ||
                (t.cost == best->cost && std::pair(u, v) < std::pair(best->keep, best->remove)))
                best = CollapseRecord{u, v, t.cost, t.position};
        }
        return best;
    }

    TriangleMesh extract_mesh() const {
        TriangleMesh out;
        out.name = name_;
        std::vector<int> remap(positions_.size(), -1);
        for (const Tri& t : tris_) {
            if (!t.alive) continue;
            std::array<int, 3> mapped{};
            for (int k = 0; k < 3; ++k) {
                int& m = remap[t.v[k]];
                if (m < 0) {
                    m = static_cast<int>(out.vertices.size());
                    out.vertices.push_back(positions_[t.v[k]]);
                }
                mapped[k] = m;
            }
            out.triangles.push_back(mapped);
        }
        return out;
    }

private:
    struct Tri {
        std::array<int, 3> v;
        char alive;
        bool contains(int vertex) const { return v[0] == vertex || v[1] == vertex || v[2] == vertex; }
    };

    struct Entry {
        double cost;
        int u, v;
        std::uint32_t stamp_u, stamp_v;
        CollapseTarget target;
    };
    struct EntryGreater {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.cost != b.cost) return a.cost > b.cost;
            if (a.u != b.u) return a.u > b.u;
            return a.v > b.v;
        }
    };

    void add_boundary_constraints(const TriangleMesh& mesh) {
        // an edge on exactly one triangle gets a perpendicular rail
        // plane so open silhouettes resist collapsing inward
        std::map<std::pair<int, int>, std::pair<int, int>> edge_info; // edge -> (count, tri)
        for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
            const auto& t = mesh.triangles[ti];
            for (int k = 0; k < 3; ++k) {
                const int a = t[k], b = t[(k + 1) % 3];
                auto key = std::minmax(a, b);
                auto& info = edge_info[{key.first, key.second}];
                info.first++;
                info.second = static_cast<int>(ti);
            }
        }
        for (const auto& [edge, info] : edge_info) {
            if (info.first != 1) continue;
            const auto& t = mesh.triangles[info.second];
            const Vec3& a = positions_[edge.first];
            const Vec3& b = positions_[edge.second];
            const Vec3 face_n =
                triangle_normal(positions_[t[0]], positions_[t[1]], positions_[t[2]]);
            const Vec3 rail = cross(b - a, face_n);
            const double len = norm(rail);
            if (len <= 0.0) continue;
            const Vec3 unit = rail * (1.0 / len);
            const Quadric q =
                Quadric::from_plane(unit, -dot(unit, a), opts_.boundary_weight * norm2(b - a));
            quadrics_[edge.first] += q;
            quadrics_[edge.second] += q;
        }
    }

    void push_all_edges() {
        for (const auto& [edge, count] : current_edges()) push_edge(edge.first, edge.second);
    }

    std::map<std::pair<int, int>, int> current_edges() const {
        std::map<std::pair<int, int>, int> edges;
        for (const Tri& t : tris_) {
            if (!t.alive) continue;
            for (int k = 0; k < 3; ++k) {
                auto key = std::minmax(t.v[k], t.v[(k + 1) % 3]);
                edges[{key.first, key.second}]++;
            }
        }
        return edges;
    }

    CollapseTarget evaluate_edge(int u, int v) const {
        return optimal_collapse(quadrics_[u] + quadrics_[v], positions_[u], positions_[v],
                                opts_.det_tolerance);
    }

    void push_edge(int u, int v) {
        if (u > v) std::swap(u, v);
        const CollapseTarget target = evaluate_edge(u, v);
        heap_.push(Entry{target.cost, u, v, stamp_[u], stamp_[v], target});
    }

    bool edge_exists(int u, int v) const {
        for (int ti : incident_[u])
            if (tris_[ti].alive && tris_[ti].contains(v)) return true;
        return false;
    }

    std::vector<int> shared_triangles(int u, int v) const {
        std::vector<int> out;
        for (int ti : incident_[u])
            if (tris_[ti].alive && tris_[ti].contains(v)) out.push_back(ti);
        return out;
    }

    std::vector<int> neighbor_vertices(int u) const {
        std::vector<int> out;
        for (int ti : incident_[u]) {
            if (!tris_[ti].alive) continue;
            for (int k = 0; k < 3; ++k)
                if (tris_[ti].v[k] != u) out.push_back(tris_[ti].v[k]);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Legal when: the link condition holds (no pinched non-manifold
    // result), no surviving face flips past 90 deg or degenerates,
    // and the floor of min_triangles is kept.
    bool collapse_is_legal(int u, int v, const Vec3& new_position) const {
        const std::vector<int> shared = shared_triangles(u, v);
        if (shared.empty()) return false;
        if (alive_triangles_ - shared.size() < opts_.min_triangles) return false;

        const std::vector<int> nu = neighbor_vertices(u);
        const std::vector<int> nv = neighbor_vertices(v);
        std::size_t common = 0;
        for (int a : nu)
            if (std::binary_search(nv.begin(), nv.end(), a)) ++common;
        if (common != shared.size()) return false;

        const auto survives_move = [&](int ti, int moved) {
            const Tri& t = tris_[ti];
            Vec3 p[3], q[3];
            for (int k = 0; k < 3; ++k) {
                p[k] = positions_[t.v[k]];
                q[k] = t.v[k] == moved ? new_position : p[k];
            }
            const Vec3 n_old = cross(p[1] - p[0], p[2] - p[0]);
            const Vec3 n_new = cross(q[1] - q[0], q[2] - q[0]);
            const double new_len = norm(n_new);
            if (!(0.5 * new_len >= opts_.degenerate_area)) return false;
            const double denom = norm(n_old) * new_len;
            if (!(denom > 0.0)) return false;
            return dot(n_old, n_new) / denom >= opts_.normal_flip_min_dot;
        };

        for (int endpoint : {u, v}) {
            for (int ti : incident_[endpoint]) {
                const Tri& t = tris_[ti];
                if (!t.alive || (t.contains(u) && t.contains(v))) continue;
                if (!survives_move(ti, endpoint)) return false;
            }
        }
        return true;
    }

    void apply_collapse(const Entry& e) {
        const int u = e.u, v = e.v;
        for (int ti : incident_[v]) {
            Tri& t = tris_[ti];
            if (!t.alive) continue;
            if (t.contains(u)) {
                t.alive = 0;
                --alive_triangles_;
            } else {
                for (int k = 0; k < 3; ++k)
                    if (t.v[k] == v) t.v[k] = u;
                incident_[u].push_back(ti);
            }
        }
        incident_[v].clear();
        vertex_alive_[v] = 0;
        positions_[u] = e.target.position;
        quadrics_[u] += quadrics_[v];
        ++stamp_[u];
        ++stamp_[v];

        prune_incident(u);
        for (int w : neighbor_vertices(u)) push_edge(u, w);

        // parked candidates may have become legal; resubmit them
        for (const Entry& p : parked_) heap_.push(p);
        parked_.clear();
    }

    void prune_incident(int u) {
        auto& list = incident_[u];
        list.erase(std::remove_if(list.begin(), list.end(),
                                  [&](int ti) { return !tris_[ti].alive; }),
                   list.end());
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    SimplifyOptions opts_;
    std::string name_;
    std::vector<Vec3> positions_;
    std::vector<Quadric> quadrics_;
    std::vector<char> vertex_alive_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::vector<int>> incident_;
    std::vector<Tri> tris_;
    std::size_t alive_triangles_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, EntryGreater> heap_;
    std::vector<Entry> parked_;
};

// Greedy reduction until at most target_triangles remain. A result
// with reached_target == false means the legal collapse supply ran
// out first; achieved_triangles reports where it stopped.
inline SimplifyResult simplify(const TriangleMesh& mesh, std::size_t target_triangles,
                               const SimplifyOptions& options = {}) {
    if (target_triangles < options.min_triangles)
        throw ValidationError("simplify: target below minimum of " +
                              std::to_string(options.min_triangles) + " triangles");
    if (target_triangles > mesh.triangles.size())
        throw ValidationError("simplify: target exceeds triangle count");

    QuadricSimplifier worker(mesh, options);
    while (worker.alive_triangles() > target_triangles) {
        if (!worker.step()) break;
    }
    SimplifyResult result;
    result.mesh = worker.extract_mesh();
    result.achieved_triangles = worker.alive_triangles();
    result.reached_target = result.achieved_triangles <= target_triangles;
    return result;
}

} // namespace vclod
