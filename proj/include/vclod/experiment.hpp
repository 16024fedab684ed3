#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vclod/kinematics.hpp"
#include "vclod/lod_chain.hpp"
#include "vclod/normal.hpp"
#include "vclod/rng.hpp"
#include "vclod/scheduler.hpp"

namespace vclod {

// Method of Constant Stimuli over the speed conditions: under the
// defaults, 7 levels x 20 repetitions x 2 conditions = 280 trials.
struct ExperimentDesign {
    std::vector<double> aggressiveness_levels = default_aggressiveness_ladder(); // fractions
    int repetitions_per_level = 20;
    std::vector<Condition> conditions = {Condition::Slow, Condition::Fast};
    bool interleaved = true; // false blocks the conditions (slow block, then fast)
    std::uint64_t seed = 0;

    std::size_t total_trials() const {
        return aggressiveness_levels.size() * static_cast<std::size_t>(repetitions_per_level) *
               conditions.size();
    }

    void validate() const {
        if (aggressiveness_levels.empty())
            throw ValidationError("ExperimentDesign: need at least one aggressiveness level");
        for (std::size_t i = 0; i < aggressiveness_levels.size(); ++i) {
            if (!(aggressiveness_levels[i] > 0.0 && aggressiveness_levels[i] < 1.0))
                throw ValidationError("ExperimentDesign: levels must lie in (0,1)");
            if (i > 0 && !(aggressiveness_levels[i] > aggressiveness_levels[i - 1]))
                throw ValidationError("ExperimentDesign: levels must increase strictly");
        }
        if (repetitions_per_level < 1)
            throw ValidationError("ExperimentDesign: repetitions must be >= 1");
        if (conditions.empty())
            throw ValidationError("ExperimentDesign: need at least one condition");
    }
};

struct PlannedTrial {
    int trial_index = 0;
    Condition condition = Condition::Slow;
    int level_index = 0;            // position in the aggressiveness ladder
    double aggressiveness_pct = 0;  // ladder fraction * 100
    int reference_interval = 1;     // 1 or 2; the other interval holds the degraded model
};

// Shuffled trial list. The reference interval is balanced within each
// (condition, level) cell -- half first, half second, order shuffled --
// so any design keeps the overall assignment at 50/50.
inline std::vector<PlannedTrial> build_design(const ExperimentDesign& design) {
    design.validate();
    Rng rng = make_rng(design.seed);

    std::vector<PlannedTrial> trials;
    trials.reserve(design.total_trials());
    for (Condition cond : design.conditions) {
        for (std::size_t li = 0; li < design.aggressiveness_levels.size(); ++li) {
            std::vector<int> intervals;
            intervals.reserve(static_cast<std::size_t>(design.repetitions_per_level));
            for (int r = 0; r < design.repetitions_per_level; ++r)
                intervals.push_back(r % 2 == 0 ? 1 : 2);
            if (design.repetitions_per_level % 2 != 0 && coin_flip(rng))
                intervals.back() = intervals.back() == 1 ? 2 : 1;
            shuffle_in_place(intervals, rng);
            for (int r = 0; r < design.repetitions_per_level; ++r)
                trials.push_back(PlannedTrial{0, cond, static_cast<int>(li),
                                              design.aggressiveness_levels[li] * 100.0,
                                              intervals[static_cast<std::size_t>(r)]});
        }
    }

    if (design.interleaved) {
        shuffle_in_place(trials, rng);
    } else {
        // keep condition blocks contiguous, shuffle within each block
        const std::size_t block = design.aggressiveness_levels.size() *
                                  static_cast<std::size_t>(design.repetitions_per_level);
        for (std::size_t start = 0; start < trials.size(); start += block) {
            std::vector<PlannedTrial> chunk(trials.begin() + static_cast<long>(start),
                                            trials.begin() + static_cast<long>(start + block));
            shuffle_in_place(chunk, rng);
            std::copy(chunk.begin(), chunk.end(), trials.begin() + static_cast<long>(start));
        }
    }

    for (std::size_t i = 0; i < trials.size(); ++i) trials[i].trial_index = static_cast<int>(i);
    return trials;
}

// Ground-truth observer for one simulated participant; aggressiveness
// is in percent to match the fitted scale.
struct ObserverParams {
    std::array<double, 2> true_mu_pct{75.0, 82.0};    // [Slow, Fast]
    std::array<double, 2> true_sigma_pct{10.0, 10.0};
    double lapse_rate = 0.0;

    void validate() const {
        for (double s : true_sigma_pct)
            if (!(s > 0.0)) throw ValidationError("ObserverParams: sigma must be > 0");
        if (lapse_rate < 0.0 || lapse_rate > 0.06)
            throw ValidationError("ObserverParams: lapse rate must lie in [0, 0.06]");
    }
};

// P(correct) for a 2-IFC trial: lambda/2 + (1-lambda) * (0.5 + 0.5*Phi((a-mu)/sigma)).
inline double psychometric_probability(double a_pct, double mu_pct, double sigma_pct,
                                       double lapse = 0.0) {
    const double base = 0.5 + 0.5 * normal_cdf((a_pct - mu_pct) / sigma_pct);
    return 0.5 * lapse + (1.0 - lapse) * base;
}

inline bool simulate_response(double aggressiveness_pct, const ObserverParams& observer,
                              Condition condition, Rng& rng) {
    observer.validate();
    const auto c = static_cast<std::size_t>(condition);
    const double p = psychometric_probability(aggressiveness_pct, observer.true_mu_pct[c],
                                              observer.true_sigma_pct[c], observer.lapse_rate);
    return uniform01(rng) < p;
}

struct TrialRecord {
    int participant_id = 0;
    Condition condition = Condition::Slow;
    int trial_index = 0;
    double aggressiveness_pct = 0.0;
    int reference_interval = 1;
    int response_interval = 1;
    bool correct = false; // correct iff the reference (higher-quality) interval was chosen
};

// Per-trial log of the stimulus pathway that would have driven the
// renderer: head trace -> velocity -> LOD schedule.
struct StimulusRecord {
    int participant_id = 0;
    int trial_index = 0;
    Condition condition = Condition::Slow;
    double aggressiveness_pct = 0.0;
    double start_azimuth_deg = 0.0;
    int direction = 1;
    double degraded_fraction = 0.0;
    int switch_count = 0;
    bool threshold_crossed = false;
};

struct StimulusConfig {
    MotionProfile slow_profile = MotionProfile::slow();
    MotionProfile fast_profile = MotionProfile::fast();
    HeadModel head;
    double threshold_fraction = 0.5;
};

// One participant's session. The perceptual decision is a Bernoulli
// draw from the observer's psychometric function; the stimulus
// pathway is still generated per trial (when requested) so schedules
// and threshold-crossing statistics are logged for every run.
inline std::vector<TrialRecord> simulate_participant(
    int participant_id, const ObserverParams& observer, const ExperimentDesign& design,
    std::uint64_t seed, const StimulusConfig* stimulus = nullptr,
    std::vector<StimulusRecord>* stimulus_log = nullptr) {
    observer.validate();
    ExperimentDesign local = design;
    local.seed = seed;
    const std::vector<PlannedTrial> plan = build_design(local);

    Rng response_rng = make_rng(seed, 0x7261776eull);
    std::vector<TrialRecord> records;
    records.reserve(plan.size());

    for (const PlannedTrial& trial : plan) {
        TrialRecord rec;
        rec.participant_id = participant_id;
        rec.condition = trial.condition;
        rec.trial_index = trial.trial_index;
        rec.aggressiveness_pct = trial.aggressiveness_pct;
        rec.reference_interval = trial.reference_interval;
        rec.correct = simulate_response(trial.aggressiveness_pct, observer, trial.condition,
                                        response_rng);
        const int degraded_interval = trial.reference_interval == 1 ? 2 : 1;
        rec.response_interval = rec.correct ? trial.reference_interval : degraded_interval;
        records.push_back(rec);

        if (stimulus != nullptr && stimulus_log != nullptr) {
            Rng trial_rng =
                make_rng(seed, 0x74726961ull + static_cast<std::uint64_t>(trial.trial_index));
            MotionProfile profile = trial.condition == Condition::Fast ? stimulus->fast_profile
                                                                       : stimulus->slow_profile;
            profile.start_azimuth_deg =
                uniform_range(trial_rng, -profile.sweep_half_range_deg, profile.sweep_half_range_deg);
            profile.direction = coin_flip(trial_rng) ? 1 : -1;

            const KinematicTrace target = fixation_trajectory(profile);
            const KinematicTrace head = simulate_head_trace(
                target, stimulus->head.lag_tau_s, stimulus->head.jitter_sd_deg, trial_rng());

            SchedulerConfig sched;
            sched.mode = SchedulerMode::Binary;
            sched.threshold_fraction = stimulus->threshold_fraction;
            sched.reference_peak_speed_deg_s = profile.peak_speed_deg_s;
            sched.degraded_level_index = trial.level_index + 1; // chain slot 0 is the reference
            const LodSchedule sch = schedule(head, sched);

            StimulusRecord sr;
            sr.participant_id = participant_id;
            sr.trial_index = trial.trial_index;
            sr.condition = trial.condition;
            sr.aggressiveness_pct = trial.aggressiveness_pct;
            sr.start_azimuth_deg = profile.start_azimuth_deg;
            sr.direction = profile.direction;
            sr.degraded_fraction = degraded_fraction(sch);
            sr.switch_count = sch.switch_count;
            sr.threshold_crossed = sr.degraded_fraction > 0.0;
            stimulus_log->push_back(sr);
        }
    }
    return records;
}

// Population the simulated cohort is drawn from. Per-condition mu are
// jointly Gaussian with the given correlation (thresholds of one
// person under two speeds are strongly related); sigma is Gaussian,
// clipped from below.
struct PopulationParams {
    std::array<double, 2> mu_mean_pct{74.6, 82.2}; // [Slow, Fast]
    std::array<double, 2> mu_sd_pct{14.8, 13.1};
    double sigma_mean_pct = 10.0;
    double sigma_sd_pct = 2.0;
    double sigma_floor_pct = 2.0;
    double inter_condition_correlation = 0.85;
    double lapse_rate = 0.0;

    void validate() const {
        for (double s : mu_sd_pct)
            if (s < 0.0) throw ValidationError("PopulationParams: mu sd must be >= 0");
        if (sigma_sd_pct < 0.0) throw ValidationError("PopulationParams: sigma sd must be >= 0");
        if (!(sigma_floor_pct > 0.0))
            throw ValidationError("PopulationParams: sigma floor must be > 0");
        if (inter_condition_correlation < -1.0 || inter_condition_correlation > 1.0)
            throw ValidationError("PopulationParams: correlation must lie in [-1, 1]");
        if (lapse_rate < 0.0 || lapse_rate > 0.06)
            throw ValidationError("PopulationParams: lapse rate must lie in [0, 0.06]");
    }
};

inline ObserverParams draw_observer(const PopulationParams& pop, Rng& rng) {
    const double shared = normal_sample(rng);
    const double independent = normal_sample(rng);
    const double rho = pop.inter_condition_correlation;
    const double mixed = rho * shared + std::sqrt(std::fmax(0.0, 1.0 - rho * rho)) * independent;

    ObserverParams obs;
    obs.true_mu_pct[0] = pop.mu_mean_pct[0] + pop.mu_sd_pct[0] * shared;
    obs.true_mu_pct[1] = pop.mu_mean_pct[1] + pop.mu_sd_pct[1] * mixed;
    for (int c = 0; c < 2; ++c)
        obs.true_sigma_pct[static_cast<std::size_t>(c)] =
            std::fmax(pop.sigma_floor_pct, pop.sigma_mean_pct + pop.sigma_sd_pct * normal_sample(rng));
    obs.lapse_rate = pop.lapse_rate;
    return obs;
}

struct CohortResult {
    std::vector<TrialRecord> records;
    std::vector<ObserverParams> observers; // drawn ground truth, by participant id
    std::vector<StimulusRecord> stimulus_log;
};

inline CohortResult run_cohort(int n_participants, const ExperimentDesign& design,
                               const PopulationParams& population, std::uint64_t seed,
                               const StimulusConfig* stimulus = nullptr) {
    if (n_participants < 2)
        throw ValidationError("run_cohort: cohort statistics need at least 2 participants");
    population.validate();

    CohortResult result;
    result.records.reserve(static_cast<std::size_t>(n_participants) * design.total_trials());
    for (int pid = 0; pid < n_participants; ++pid) {
        Rng param_rng = make_rng(seed, 0x70617261ull + static_cast<std::uint64_t>(pid));
        const ObserverParams observer = draw_observer(population, param_rng);
        result.observers.push_back(observer);

        const std::uint64_t participant_seed =
            detail::splitmix64(seed ^ (0x1000ull + static_cast<std::uint64_t>(pid)));
        std::vector<TrialRecord> records =
            simulate_participant(pid, observer, design, participant_seed, stimulus,
                                 stimulus != nullptr ? &result.stimulus_log : nullptr);
        result.records.insert(result.records.end(), records.begin(), records.end());
    }
    return result;
}

// Per-level response counts for one participant x condition.
struct ResponseCell {
    double aggressiveness_pct = 0.0;
    int n_trials = 0;
    int n_correct = 0;
};

struct ResponseTable {
    int participant_id = 0;
    Condition condition = Condition::Slow;
    std::vector<ResponseCell> rows; // ascending by aggressiveness
};

inline std::vector<ResponseTable> aggregate(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw ValidationError("aggregate: no trial records");

    std::map<std::pair<int, int>, std::map<double, ResponseCell>> grouped;
    for (const TrialRecord& r : records) {
        auto& cell = grouped[{r.participant_id, static_cast<int>(r.condition)}]
                            [r.aggressiveness_pct];
        cell.aggressiveness_pct = r.aggressiveness_pct;
        cell.n_trials += 1;
        cell.n_correct += r.correct ? 1 : 0;
    }

    std::vector<ResponseTable> tables;
    tables.reserve(grouped.size());
    for (const auto& [key, cells] : grouped) {
        ResponseTable table;
        table.participant_id = key.first;
        table.condition = static_cast<Condition>(key.second);
        for (const auto& [agg, cell] : cells) table.rows.push_back(cell);
        tables.push_back(std::move(table));
    }
    return tables;
}

} // namespace vclod
