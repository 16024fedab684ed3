#pragma once

#include <cmath>

#include "vclod/error.hpp"

namespace vclod {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779; // 1/sqrt(2*pi)
inline constexpr double kInvSqrt2 = 0.7071067811865475244;   // 1/sqrt(2)

inline double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// Standard normal CDF. erfc keeps the tails accurate where
// 0.5*(1+erf) would cancel.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

namespace detail {

// Acklam's rational approximation to the probit function,
// relative error below 1.2e-9 across (0,1).
inline double probit_estimate(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace detail

// Inverse of normal_cdf: an initial rational estimate polished by
// Newton steps against normal_cdf itself, so the pair round-trips.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw NumericError("normal_quantile: p must lie strictly inside (0, 1)");
    double x = detail::probit_estimate(p);
    for (int i = 0; i < 3; ++i) {
        const double err = normal_cdf(x) - p;
        const double slope = normal_pdf(x);
        if (slope <= 0.0) break;
        const double step = err / slope;
        x -= step;
        if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

} // namespace vclod
