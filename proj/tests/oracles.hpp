// Independent reference implementations used only by tests. These
// deliberately avoid the library's own code paths: long-double series
// and quadrature stand in for closed forms, dense grid search for the
// quadric solve.
#pragma once

#include <cmath>
#include <functional>

#include "vclod/vec3.hpp"

namespace oracle {

// Standard normal CDF via the Maclaurin-type series
//   Phi(z) = 1/2 + phi(z) * sum_{n>=0} z^(2n+1) / (1*3*...*(2n+1))
// evaluated in long double; converges for the |z| <= 8 range the
// tests exercise, with absolute error far below 1e-15.
inline long double normal_cdf(long double z) {
    const long double phi =
        std::exp(-0.5L * z * z) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    long double term = z;
    long double sum = z;
    for (int n = 1; n < 400; ++n) {
        term *= z * z / (2.0L * n + 1.0L);
        const long double prev = sum;
        sum += term;
        if (sum == prev) break;
    }
    return 0.5L + phi * sum;
}

// Adaptive Simpson quadrature in long double.
inline long double adaptive_simpson(const std::function<long double(long double)>& f,
                                    long double a, long double b, long double fa, long double fb,
                                    long double fm, long double eps, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m), rm = 0.5L * (m + b);
    const long double flm = f(lm), frm = f(rm);
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0L * eps)
        return left + right + (left + right - whole) / 15.0L;
    return adaptive_simpson(f, a, m, fa, fm, flm, 0.5L * eps, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, 0.5L * eps, depth - 1);
}

inline long double integrate(const std::function<long double(long double)>& f, long double a,
                             long double b, long double eps = 1e-15L) {
    const long double m = 0.5L * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(b), f(m), eps, 40);
}

// One-tailed Student-t p value P(T >= t) by direct integration of the
// density from 0 to |t| (plus symmetry), entirely independent of the
// incomplete-beta route.
inline long double student_t_upper_tail(long double t, long double df) {
    const long double norm_const =
        std::exp(std::lgamma(0.5L * (df + 1.0L)) - std::lgamma(0.5L * df)) /
        std::sqrt(df * 3.14159265358979323846264338327950288L);
    const auto pdf = [&](long double x) {
        return norm_const * std::pow(1.0L + x * x / df, -0.5L * (df + 1.0L));
    };
    const long double body = integrate(pdf, 0.0L, std::fabs(t));
    return t >= 0.0L ? 0.5L - body : 0.5L + body;
}

// Squared distance from a point to the plane through three points,
// computed the pedestrian way in long double.
inline long double point_plane_sq_distance(const vclod::Vec3& p, const vclod::Vec3& a,
                                           const vclod::Vec3& b, const vclod::Vec3& c) {
    const long double ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
    const long double vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
    const long double nx = uy * vz - uz * vy;
    const long double ny = uz * vx - ux * vz;
    const long double nz = ux * vy - uy * vx;
    const long double nn = nx * nx + ny * ny + nz * nz;
    const long double d = nx * (p.x - a.x) + ny * (p.y - a.y) + nz * (p.z - a.z);
    return (d * d) / nn;
}

// Dense grid search minimization of a 3D scalar field over a box,
// refined by shrinking around the best cell. Used to confirm the
// closed-form collapse position/cost.
template <typename F>
inline std::pair<vclod::Vec3, double> grid_minimize(const F& f, vclod::Vec3 lo, vclod::Vec3 hi,
                                                    int per_axis = 21, int rounds = 6) {
    vclod::Vec3 best_x = lo;
    double best_v = f(lo);
    for (int round = 0; round < rounds; ++round) {
        for (int i = 0; i < per_axis; ++i) {
            for (int j = 0; j < per_axis; ++j) {
                for (int k = 0; k < per_axis; ++k) {
                    const vclod::Vec3 x{lo.x + (hi.x - lo.x) * i / (per_axis - 1),
                                        lo.y + (hi.y - lo.y) * j / (per_axis - 1),
                                        lo.z + (hi.z - lo.z) * k / (per_axis - 1)};
                    const double v = f(x);
                    if (v < best_v) {
                        best_v = v;
                        best_x = x;
                    }
                }
            }
        }
        const vclod::Vec3 radius = (hi - lo) * (1.5 / (per_axis - 1));
        lo = best_x - radius;
        hi = best_x + radius;
    }
    return {best_x, best_v};
}

} // namespace oracle
