#pragma once

#include <cmath>
#include <functional>
#include <optional>

namespace cfsim {

// Root of f on [lo, hi] where f(lo) and f(hi) straddle zero: bisection with
// secant acceleration, derivative-free. Returns the abscissa once |f| falls
// below tol_f or the bracket collapses.
inline double solve_bracketed(const std::function<double(double)>& f,
                              double lo, double hi, double flo, double fhi,
                              double tol_f, int max_iter = 200) {
    double x = lo, fx = flo;
    for (int it = 0; it < max_iter; ++it) {
        // Secant proposal, clipped into the bracket interior; fall back to
        // the midpoint when degenerate.
        double xs = (fhi != flo) ? (lo * fhi - hi * flo) / (fhi - flo) : 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        if (!(xs > lo && xs < hi)) xs = mid;
        if (it % 2 == 1) xs = mid;  // guarantee bisection-rate bracket shrink
        x = xs;
        fx = f(x);
        if (std::abs(fx) < tol_f || hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) return x;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    return x;
}

// Scan (lo, hi] in `segments` steps for the first sign change of f and solve
// within it. Returns nullopt when no bracket exists in range.
inline std::optional<double> find_first_root(const std::function<double(double)>& f,
                                             double lo, double hi, int segments,
                                             double tol_f) {
    double x0 = lo, f0 = f(lo);
    if (std::abs(f0) < tol_f) return x0;
    for (int s = 1; s <= segments; ++s) {
        const double x1 = lo + (hi - lo) * s / segments;
        const double f1 = f(x1);
        if (std::abs(f1) < tol_f) return x1;
        if ((f0 > 0) != (f1 > 0))
            return solve_bracketed(f, x0, x1, f0, f1, tol_f);
        x0 = x1;
        f0 = f1;
    }
    return std::nullopt;
}

// Golden-section minimum of f on [lo, hi], absolute abscissa tolerance tol_x.
inline double minimize_golden(const std::function<double(double)>& f,
                              double lo, double hi, double tol_x) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol_x) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace cfsim
