#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vclod/error.hpp"

namespace vclod {

inline double mean(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

inline double sample_sd(std::span<const double> xs) {
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

namespace detail {

// Continued fraction for the regularized incomplete beta (Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw NumericError("incomplete_beta: continued fraction failed to converge");
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw NumericError("incomplete_beta: a, b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// P(T >= t) for Student's t with df degrees of freedom.
inline double student_t_upper_tail(double t, double df) {
    if (!(df > 0.0)) throw NumericError("student_t_upper_tail: df must be > 0");
    const double x = df / (df + t * t);
    const double half_tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t >= 0.0 ? half_tail : 1.0 - half_tail;
}

enum class Tail { Greater };

struct PairedTTestResult {
    double t = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
};

// One-tailed paired t-test on d = fast - slow, upper tail: rejects
// when the fast thresholds exceed the slow ones.
inline PairedTTestResult paired_t_test(std::span<const double> slow, std::span<const double> fast,
                                       Tail = Tail::Greater) {
    if (slow.size() != fast.size())
        throw ValidationError("paired_t_test: condition vectors differ in length");
    if (slow.size() < 2) throw ValidationError("paired_t_test: need at least 2 pairs");

    std::vector<double> d(slow.size());
    for (std::size_t i = 0; i < slow.size(); ++i) d[i] = fast[i] - slow[i];
    const double sd = sample_sd(d);
    if (!(sd > 0.0))
        throw ValidationError("paired_t_test: zero variance of paired differences");

    PairedTTestResult r;
    const auto n = static_cast<double>(d.size());
    r.t = mean(d) / (sd / std::sqrt(n));
    r.degrees_of_freedom = n - 1.0;
    r.p_value = student_t_upper_tail(r.t, r.degrees_of_freedom);
    return r;
}

struct ConditionStats {
    std::vector<double> thresholds;
    double mean_threshold = 0.0;
    double sd_threshold = 0.0;
};

struct CohortStats {
    ConditionStats slow, fast;
    double t_statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    int n_included = 0;
    std::vector<int> excluded_ids;
};

inline CohortStats cohort_stats(std::vector<double> slow_thresholds,
                                std::vector<double> fast_thresholds,
                                std::vector<int> excluded_ids) {
    CohortStats s;
    const PairedTTestResult tt = paired_t_test(slow_thresholds, fast_thresholds);
    s.slow.thresholds = std::move(slow_thresholds);
    s.fast.thresholds = std::move(fast_thresholds);
    s.slow.mean_threshold = mean(s.slow.thresholds);
    s.slow.sd_threshold = sample_sd(s.slow.thresholds);
    s.fast.mean_threshold = mean(s.fast.thresholds);
    s.fast.sd_threshold = sample_sd(s.fast.thresholds);
    s.t_statistic = tt.t;
    s.degrees_of_freedom = tt.degrees_of_freedom;
    s.p_value = tt.p_value;
    s.n_included = static_cast<int>(s.slow.thresholds.size());
    s.excluded_ids = std::move(excluded_ids);
    return s;
}

} // namespace vclod
