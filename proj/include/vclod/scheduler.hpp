#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "vclod/kinematics.hpp"

namespace vclod {

enum class SchedulerMode { Binary, Graded };

inline const char* to_string(SchedulerMode m) {
    return m == SchedulerMode::Binary ? "binary" : "graded";
}

inline SchedulerMode scheduler_mode_from_string(const std::string& s) {
    if (s == "binary") return SchedulerMode::Binary;
    if (s == "graded") return SchedulerMode::Graded;
    throw ValidationError("unknown scheduler mode '" + s + "' (expected binary|graded)");
}

struct SchedulerConfig {
    SchedulerMode mode = SchedulerMode::Binary;
    double threshold_fraction = 0.5;      // of reference peak speed
    double reference_peak_speed_deg_s = 157.0;
    int degraded_level_index = 1;         // Binary: chain index shown above threshold
    int chain_level_count = 8;            // Graded: number of chain levels to quantize into
    double hysteresis_band = 0.0;         // Binary: exit at (fraction - band); 0 = raw threshold

    void validate() const {
        if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
            throw ValidationError("SchedulerConfig: threshold_fraction must lie in (0,1)");
        if (!(reference_peak_speed_deg_s > 0.0))
            throw ValidationError("SchedulerConfig: reference peak speed must be > 0");
        if (mode == SchedulerMode::Binary && degraded_level_index < 1)
            throw ValidationError("SchedulerConfig: degraded_level_index must be >= 1");
        if (mode == SchedulerMode::Graded && chain_level_count < 1)
            throw ValidationError("SchedulerConfig: chain_level_count must be >= 1");
        if (hysteresis_band < 0.0 || hysteresis_band >= threshold_fraction)
            throw ValidationError("SchedulerConfig: hysteresis band must lie in [0, threshold)");
    }
};

struct LodSchedule {
    std::vector<double> timestamps_s;
    std::vector<int> level_index;
    int switch_count = 0;
};

// Per-frame LOD pick from instantaneous speed. Binary: degrade while
// speed >= threshold_fraction * reference peak (entering/leaving can
// be split by a hysteresis band). Graded: floor-quantize the speed
// normalized to [0,1] into chain levels.
inline LodSchedule schedule(const KinematicTrace& trace, const SchedulerConfig& config) {
    config.validate();
    if (trace.size() == 0) throw ValidationError("schedule: empty trace");

    LodSchedule out;
    out.timestamps_s = trace.timestamps_s;
    out.level_index.resize(trace.size(), 0);

    const double peak = config.reference_peak_speed_deg_s;
    if (config.mode == SchedulerMode::Binary) {
        const double enter = config.threshold_fraction * peak;
        const double exit = (config.threshold_fraction - config.hysteresis_band) * peak;
        bool degraded = false;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const double speed = trace.derived_speed_deg_s[i];
            degraded = degraded ? speed >= exit : speed >= enter;
            out.level_index[i] = degraded ? config.degraded_level_index : 0;
        }
    } else {
        const int top = config.chain_level_count - 1;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const double normalized =
                std::fmin(1.0, std::fmax(0.0, trace.derived_speed_deg_s[i] / peak));
            const int idx = static_cast<int>(normalized * config.chain_level_count);
            out.level_index[i] = std::min(idx, top);
        }
    }

    for (std::size_t i = 1; i < out.level_index.size(); ++i)
        if (out.level_index[i] != out.level_index[i - 1]) ++out.switch_count;
    return out;
}

inline double degraded_fraction(const LodSchedule& s) {
    if (s.level_index.empty()) throw ValidationError("degraded_fraction: empty schedule");
    std::size_t degraded = 0;
    for (int idx : s.level_index)
        if (idx > 0) ++degraded;
    return static_cast<double>(degraded) / static_cast<double>(s.level_index.size());
}

} // namespace vclod
