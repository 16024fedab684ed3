#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vclod/error.hpp"
#include "vclod/experiment.hpp"
#include "vclod/nelder_mead.hpp"
#include "vclod/normal.hpp"
#include "vclod/stats.hpp"

namespace vclod {

// 2-IFC psychometric model: guess rate pinned at 0.5, lapse at 0, so
// mean and spread are the only free parameters and the 75% point
// coincides with mu.
inline double psychometric(double a_pct, double mu_pct, double sigma_pct) {
    return 0.5 + 0.5 * normal_cdf((a_pct - mu_pct) / sigma_pct);
}

struct PsychometricFit {
    double mu = 0.0;
    double sigma = 1.0;
    double log_likelihood = 0.0;
    bool converged = false;
    int n_points = 0;
};

// Binomial negative log-likelihood of the table under (mu, sigma).
// Probabilities are clamped to [1e-9, 1 - 1e-9] before the logs.
inline double nll(double mu, double sigma, const ResponseTable& table) {
    if (!(sigma > 0.0)) throw ValidationError("nll: sigma must be > 0");
    double total = 0.0;
    for (const ResponseCell& row : table.rows) {
        if (row.n_trials <= 0) continue;
        const double p =
            std::clamp(psychometric(row.aggressiveness_pct, mu, sigma), 1e-9, 1.0 - 1e-9);
        total -= row.n_correct * std::log(p) +
                 (row.n_trials - row.n_correct) * std::log1p(-p);
    }
    return total;
}

struct FitOptions {
    int mu_grid_points = 9;
    int sigma_grid_points = 6;
    double sigma_lower_frac = 0.01; // of the level range
    double sigma_upper_frac = 3.0;
    double tolerance = 1e-6;        // simplex size, on the normalized axis
    int max_iterations = 400;
    double chance_ceiling = 0.55;   // all proportions at or below this => unfittable
};

// Maximum-likelihood fit of the two-parameter model. The level axis
// is normalized to [0,1] internally, which makes the optimizer
// scale-free: relabeling levels affinely maps (mu, sigma) affinely.
// Search: coarse mu x sigma grid, then a simplex from the best cell.
// converged is false for all-chance data, for fits stalling above
// tolerance, and for optima pinned at the sigma upper bound or far
// outside the sampled range.
inline PsychometricFit fit(const ResponseTable& table, const FitOptions& options = {}) {
    std::vector<ResponseCell> rows;
    for (const ResponseCell& row : table.rows)
        if (row.n_trials > 0) rows.push_back(row);
    std::vector<double> levels;
    for (const ResponseCell& row : rows) levels.push_back(row.aggressiveness_pct);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.size() < 3)
        throw ValidationError("fit: need at least 3 distinct stimulus levels with trials");

    const double lo = levels.front(), hi = levels.back(), range = hi - lo;

    bool all_chance = true;
    for (const ResponseCell& row : rows)
        if (static_cast<double>(row.n_correct) / row.n_trials > options.chance_ceiling)
            all_chance = false;

    // objective over the normalized axis a_hat = (a - lo) / range
    ResponseTable normalized = table;
    normalized.rows = rows;
    for (ResponseCell& row : normalized.rows)
        row.aggressiveness_pct = (row.aggressiveness_pct - lo) / range;

    const double sigma_lo = options.sigma_lower_frac;
    const double sigma_hi = options.sigma_upper_frac;
    const auto objective = [&](const std::vector<double>& x) {
        const double mu_hat = x[0], sigma_hat = x[1];
        if (sigma_hat < sigma_lo || sigma_hat > sigma_hi || mu_hat < -2.0 || mu_hat > 3.0)
            return 1e30;
        return nll(mu_hat, sigma_hat, normalized);
    };

    double best_value = std::numeric_limits<double>::max();
    std::vector<double> best{0.5, 0.25};
    for (int i = 0; i < options.mu_grid_points; ++i) {
        const double mu_hat = static_cast<double>(i) / (options.mu_grid_points - 1);
        for (int j = 0; j < options.sigma_grid_points; ++j) {
            const double f = static_cast<double>(j) / (options.sigma_grid_points - 1);
            const double sigma_hat = 0.05 * std::pow(1.0 / 0.05, f); // log spacing, range/20 .. range
            const double value = objective({mu_hat, sigma_hat});
            if (value < best_value) {
                best_value = value;
                best = {mu_hat, sigma_hat};
            }
        }
    }

    const NelderMeadResult nm = nelder_mead(objective, best, {0.15, 0.5 * best[1]},
                                            options.tolerance, options.max_iterations);

    PsychometricFit out;
    out.mu = lo + range * nm.x[0];
    out.sigma = range * nm.x[1];
    out.log_likelihood = -nll(nm.x[0], nm.x[1], normalized);
    out.n_points = static_cast<int>(rows.size());
    const bool on_sigma_ceiling = nm.x[1] >= 0.999 * sigma_hi;
    const bool mu_escaped = nm.x[0] < -1.0 || nm.x[0] > 2.0;
    out.converged = !all_chance && nm.converged && !on_sigma_ceiling && !mu_escaped;
    return out;
}

// Aggressiveness giving performance level p: mu + sigma * Phi^-1(2p - 1).
// At the canonical p = 0.75 this is exactly the fitted mean.
inline double threshold(const PsychometricFit& fit_result, double p = 0.75) {
    if (!fit_result.converged)
        throw NumericError("threshold: fit did not converge");
    if (!(p >= 0.501 && p < 1.0))
        throw ValidationError("threshold: p must lie in [0.501, 1)");
    return fit_result.mu + fit_result.sigma * normal_quantile(2.0 * p - 1.0);
}

struct ParticipantFits {
    int participant_id = 0;
    std::array<PsychometricFit, 2> by_condition; // [Slow, Fast]
};

struct ExclusionResult {
    std::vector<int> included_ids;
    std::vector<int> excluded_ids;
};

// A participant stays only if both condition fits converged; mirrors
// dropping observers whose data cannot carry summary parameters.
inline ExclusionResult exclude_unfittable(const std::vector<ParticipantFits>& fits) {
    ExclusionResult result;
    for (const ParticipantFits& pf : fits) {
        const bool ok = pf.by_condition[0].converged && pf.by_condition[1].converged;
        (ok ? result.included_ids : result.excluded_ids).push_back(pf.participant_id);
    }
    return result;
}

// One fit per (participant, condition), with the response table kept
// alongside for reporting.
struct ConditionFitRecord {
    ResponseTable table;
    PsychometricFit fit;
};

struct ParticipantFitRecord {
    int participant_id = 0;
    std::array<ConditionFitRecord, 2> by_condition; // [Slow, Fast]
};

inline std::vector<ParticipantFitRecord> fit_all(const std::vector<TrialRecord>& records,
                                                 const FitOptions& options = {}) {
    const std::vector<ResponseTable> tables = aggregate(records);
    std::map<int, ParticipantFitRecord> by_id;
    for (const ResponseTable& table : tables) {
        ParticipantFitRecord& rec = by_id[table.participant_id];
        rec.participant_id = table.participant_id;
        auto& slot = rec.by_condition[static_cast<std::size_t>(table.condition)];
        slot.table = table;
        slot.fit = fit(table, options);
    }
    std::vector<ParticipantFitRecord> out;
    out.reserve(by_id.size());
    for (auto& [id, rec] : by_id) out.push_back(std::move(rec));
    return out;
}

// Exclusion, 75% thresholds per condition, and the paired comparison.
inline CohortStats analyze_fits(const std::vector<ParticipantFitRecord>& fits) {
    std::vector<ParticipantFits> plain;
    plain.reserve(fits.size());
    for (const ParticipantFitRecord& rec : fits)
        plain.push_back(
            ParticipantFits{rec.participant_id,
                            {rec.by_condition[0].fit, rec.by_condition[1].fit}});
    const ExclusionResult exclusion = exclude_unfittable(plain);
    if (exclusion.included_ids.size() < 2)
        throw NumericError("analyze_fits: fewer than 2 fittable participants");

    std::vector<double> slow, fast;
    for (const ParticipantFitRecord& rec : fits) {
        if (std::find(exclusion.included_ids.begin(), exclusion.included_ids.end(),
                      rec.participant_id) == exclusion.included_ids.end())
            continue;
        slow.push_back(threshold(rec.by_condition[0].fit, 0.75));
        fast.push_back(threshold(rec.by_condition[1].fit, 0.75));
    }
    return cohort_stats(std::move(slow), std::move(fast), exclusion.excluded_ids);
}

} // namespace vclod
