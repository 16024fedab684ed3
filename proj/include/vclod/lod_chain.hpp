#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vclod/simplify.hpp"

namespace vclod {

// Seven-step ladder ending at the factor-20 extreme. Callers can
// swap in their own fractions; the ladder is configuration, not truth.
inline const std::vector<double>& default_aggressiveness_ladder() {
    static const std::vector<double> ladder = {0.50, 0.625, 0.70, 0.775, 0.85, 0.90, 0.95};
    return ladder;
}

struct LodLevel {
    double aggressiveness = 0.0; // fraction of reference triangles removed
    TriangleMesh mesh;
    std::size_t target_triangle_count = 0;
    std::size_t achieved_triangle_count = 0;
    bool reached_target = true;
};

struct LodChain {
    std::vector<LodLevel> levels; // levels[0] is the reference at aggressiveness 0

    const TriangleMesh& reference() const { return levels.front().mesh; }
    std::size_t level_count() const { return levels.size(); }
};

inline std::size_t lod_target_triangles(std::size_t reference_count, double aggressiveness,
                                        std::size_t floor_triangles = 4) {
    const auto target = static_cast<std::size_t>(
        std::llround(static_cast<double>(reference_count) * (1.0 - aggressiveness)));
    return std::max(target, floor_triangles);
}

// Each level is simplified independently from the reference, so a
// chain is a pure function of (mesh, fractions).
inline LodChain generate_lod_chain(const TriangleMesh& reference,
                                   std::span<const double> fractions,
                                   const SimplifyOptions& options = {}) {
    if (fractions.empty())
        throw ValidationError("generate_lod_chain: aggressiveness list must not be empty");
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        if (!(fractions[i] > 0.0 && fractions[i] < 1.0))
            throw ValidationError("generate_lod_chain: aggressiveness must lie in (0,1)");
        if (i > 0 && !(fractions[i] > fractions[i - 1]))
            throw ValidationError("generate_lod_chain: aggressiveness must increase strictly");
    }
    validate(reference);

    LodChain chain;
    chain.levels.push_back(LodLevel{0.0, reference, reference.triangle_count(),
                                    reference.triangle_count(), true});
    for (const double a : fractions) {
        const std::size_t target =
            lod_target_triangles(reference.triangle_count(), a, options.min_triangles);
        SimplifyResult r = simplify(reference, target, options);
        chain.levels.push_back(
            LodLevel{a, std::move(r.mesh), target, r.achieved_triangles, r.reached_target});
    }
    return chain;
}

} // namespace vclod
