#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "stimwave/errors.hpp"

namespace stimwave {

/// Golden-section minimization on [a, b] for a unimodal function.
template <class F>
inline std::pair<double, double> golden_section_min(const F& f, double a, double b,
                                                    double x_tol = 1e-10,
                                                    int max_iter = 400) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

/// Newton iteration for a root of g with analytic derivative dg.
template <class F, class DF>
inline double newton_root(const F& g, const DF& dg, double x0, double x_tol = 1e-14,
                          int max_iter = 64) {
    double x = x0;
    for (int i = 0; i < max_iter; ++i) {
        const double d = dg(x);
        if (d == 0.0) break;
        const double step = g(x) / d;
        x -= step;
        if (std::abs(step) <= x_tol * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

/// Bisection for g(x) = 0 with g(a), g(b) of opposite sign.
template <class F>
inline double bisect_root(const F& g, double a, double b, double x_tol = 1e-10,
                          int max_iter = 200) {
    double fa = g(a), fb = g(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw invalid_parameter_error("bisect_root: no sign change on the bracket");
    for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = g(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Least-squares slope of ln(y) versus x. Points with y <= floor are skipped.
inline double fit_log_slope(std::span<const double> x, std::span<const double> y,
                            double floor = 0.0) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(y[i] > floor)) continue;
        const double ly = std::log(y[i]);
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
        ++n;
    }
    if (n < 2) throw invalid_parameter_error("fit_log_slope: fewer than two usable points");
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

} // namespace stimwave
