#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "vclod/error.hpp"
#include "vclod/rng.hpp"

namespace vclod {

enum class Condition { Slow = 0, Fast = 1 };

inline const char* to_string(Condition c) { return c == Condition::Slow ? "slow" : "fast"; }

inline Condition condition_from_string(const std::string& s) {
    if (s == "slow") return Condition::Slow;
    if (s == "fast") return Condition::Fast;
    throw ValidationError("unknown condition '" + s + "' (expected slow|fast)");
}

// Defaults mirror the experimental setup: a 100 deg sweep tracked at
// 90 Hz for 2.5 s intervals, with condition peak speeds of 52 and
// 157 deg/s.
struct MotionProfile {
    Condition condition = Condition::Slow;
    double peak_speed_deg_s = 52.0;
    double sweep_half_range_deg = 50.0;
    double interval_duration_s = 2.5;
    double sample_rate_hz = 90.0;
    double start_azimuth_deg = -50.0;
    int direction = +1;

    static MotionProfile slow() { return MotionProfile{}; }
    static MotionProfile fast() {
        MotionProfile p;
        p.condition = Condition::Fast;
        p.peak_speed_deg_s = 157.0;
        return p;
    }
    static MotionProfile for_condition(Condition c) {
        return c == Condition::Fast ? fast() : slow();
    }

    void validate() const {
        if (!(peak_speed_deg_s > 0.0)) throw ValidationError("MotionProfile: peak speed must be > 0");
        if (!(sample_rate_hz > 0.0)) throw ValidationError("MotionProfile: sample rate must be > 0");
        if (!(interval_duration_s > 0.0))
            throw ValidationError("MotionProfile: interval duration must be > 0");
        if (!(sweep_half_range_deg > 0.0))
            throw ValidationError("MotionProfile: sweep half range must be > 0");
        if (std::fabs(start_azimuth_deg) > sweep_half_range_deg)
            throw ValidationError("MotionProfile: start azimuth outside sweep range");
        if (direction != 1 && direction != -1)
            throw ValidationError("MotionProfile: direction must be +1 or -1");
    }
};

struct KinematicTrace {
    std::vector<double> timestamps_s;        // uniform, first = 0
    std::vector<double> azimuth_deg;         // folded into +-sweep_half_range
    std::vector<double> derived_speed_deg_s; // |finite difference|; element 0 is defined as 0
    double sweep_half_range_deg = 50.0;

    std::size_t size() const { return timestamps_s.size(); }
};

// Triangle-wave reflection into [-half_range, +half_range].
inline double fold_into_range(double x, double half_range) {
    if (x >= -half_range && x <= half_range) return x; // already inside; keep bit-exact
    const double period = 4.0 * half_range;
    double z = std::fmod(x + half_range, period);
    if (z < 0.0) z += period;
    return z <= 2.0 * half_range ? z - half_range : 3.0 * half_range - z;
}

// |central difference| per sample; one-sided at the ends.
inline std::vector<double> angular_speed(const KinematicTrace& trace) {
    const auto& t = trace.timestamps_s;
    const auto& a = trace.azimuth_deg;
    if (a.size() < 2) throw ValidationError("angular_speed: need at least 2 samples");
    std::vector<double> speed(a.size());
    speed.front() = std::fabs((a[1] - a[0]) / (t[1] - t[0]));
    speed.back() = std::fabs((a[a.size() - 1] - a[a.size() - 2]) / (t[t.size() - 1] - t[t.size() - 2]));
    for (std::size_t i = 1; i + 1 < a.size(); ++i)
        speed[i] = std::fabs((a[i + 1] - a[i - 1]) / (t[i + 1] - t[i - 1]));
    return speed;
}

namespace detail {
inline void attach_derived_speed(KinematicTrace& trace) {
    trace.derived_speed_deg_s = angular_speed(trace);
    trace.derived_speed_deg_s.front() = 0.0; // motion always starts from fixation
}
} // namespace detail

// Raised-cosine sweep: azimuth(t) = start + dir * R * (1 - cos(2 pi t / T)),
// T = 2 pi R / peak_speed, reflected at the range bounds. Velocity is
// sinusoidal with peak exactly peak_speed, and starts from rest.
inline KinematicTrace fixation_trajectory(const MotionProfile& profile) {
    profile.validate();
    const double range = profile.sweep_half_range_deg;
    const double cycle_s = 2.0 * std::numbers::pi * range / profile.peak_speed_deg_s;
    const double dt = 1.0 / profile.sample_rate_hz;
    const auto n = static_cast<std::size_t>(
                       std::llround(profile.interval_duration_s * profile.sample_rate_hz)) + 1;

    KinematicTrace trace;
    trace.sweep_half_range_deg = range;
    trace.timestamps_s.resize(n);
    trace.azimuth_deg.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double unfolded =
            profile.start_azimuth_deg +
            profile.direction * range * (1.0 - std::cos(2.0 * std::numbers::pi * t / cycle_s));
        trace.timestamps_s[i] = t;
        trace.azimuth_deg[i] = fold_into_range(unfolded, range);
    }
    detail::attach_derived_speed(trace);
    return trace;
}

struct HeadModel {
    double lag_tau_s = 0.1;
    double jitter_sd_deg = 0.5;
};

// Imperfect tracking stand-in: first-order lag toward the target plus
// per-sample Gaussian jitter, folded back into the sweep range.
inline KinematicTrace simulate_head_trace(const KinematicTrace& target, double lag_tau_s,
                                          double jitter_sd_deg, std::uint64_t seed) {
    if (lag_tau_s < 0.0) throw ValidationError("simulate_head_trace: lag_tau must be >= 0");
    if (jitter_sd_deg < 0.0) throw ValidationError("simulate_head_trace: jitter_sd must be >= 0");
    if (target.size() < 2) throw ValidationError("simulate_head_trace: need at least 2 samples");

    const double dt = target.timestamps_s[1] - target.timestamps_s[0];
    const double alpha = lag_tau_s > 0.0 ? 1.0 - std::exp(-dt / lag_tau_s) : 1.0;

    Rng rng = make_rng(seed);
    KinematicTrace head;
    head.sweep_half_range_deg = target.sweep_half_range_deg;
    head.timestamps_s = target.timestamps_s;
    head.azimuth_deg.resize(target.size());

    double filtered = target.azimuth_deg.front();
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (i > 0) filtered += alpha * (target.azimuth_deg[i] - filtered);
        double sample = filtered;
        if (jitter_sd_deg > 0.0) sample += jitter_sd_deg * normal_sample(rng);
        head.azimuth_deg[i] = fold_into_range(sample, head.sweep_half_range_deg);
    }
    detail::attach_derived_speed(head);
    return head;
}

} // namespace vclod
