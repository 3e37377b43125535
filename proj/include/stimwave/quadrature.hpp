#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace stimwave {

namespace detail {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr std::array<double, 8> gk_weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = gk_weights[7] * f(c);
    double resg = gauss_weights[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double x = h * gk_nodes[i];
        const double fsum = f(c - x) + f(c + x);
        resk += gk_weights[i] * fsum;
        if (i % 2 == 1) resg += gauss_weights[i / 2] * fsum;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of a smooth real integrand. Intervals
/// are bisected worst-first until the local error estimate meets the scaled
/// tolerance; a hard interval budget keeps noisy integrands (for instance
/// ones computed by an inner quadrature) from thrashing near their noise
/// floor.
template <class F>
inline double integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                        double rel_tol = 1e-12, int max_intervals = 3000) {
    if (a == b) return 0.0;
    struct Seg {
        double a, b, val, err;
    };
    std::vector<Seg> stack;
    double val0, err0;
    detail::gk15(f, a, b, val0, err0);
    stack.push_back({a, b, val0, err0});

    double done_val = 0.0;
    int used = 1;
    const double span = std::abs(b - a);
    while (!stack.empty()) {
        // take the segment with the largest error estimate
        std::size_t worst = 0;
        for (std::size_t i = 1; i < stack.size(); ++i)
            if (stack[i].err > stack[worst].err) worst = i;
        Seg s = stack[worst];
        stack[worst] = stack.back();
        stack.pop_back();

        const double tol = std::max(abs_tol * std::abs(s.b - s.a) / span,
                                    rel_tol * std::abs(s.val));
        if (s.err <= tol || used >= max_intervals ||
            std::abs(s.b - s.a) <= 16.0 * std::numeric_limits<double>::epsilon() *
                                       (std::abs(s.a) + std::abs(s.b))) {
            done_val += s.val;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        Seg l{s.a, m, 0, 0}, r{m, s.b, 0, 0};
        detail::gk15(f, l.a, l.b, l.val, l.err);
        detail::gk15(f, r.a, r.b, r.val, r.err);
        stack.push_back(l);
        stack.push_back(r);
        ++used;
    }
    return done_val;
}

/// Composite 16-point Gauss-Legendre on n panels (fixed cost, used where the
/// integrand is known to be smooth and the adaptive machinery is overkill).
template <class F>
inline double integrate_gl(const F& f, double a, double b, int panels = 8) {
    static constexpr std::array<double, 8> x = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
        0.9445750230732326, 0.9894009349916499};
    static constexpr std::array<double, 8> w = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
        0.0622535239386479, 0.0271524594117541};
    if (a == b) return 0.0;
    double total = 0.0;
    const double ph = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * ph;
        const double h = 0.5 * ph;
        double s = 0.0;
        for (int i = 0; i < 8; ++i)
            s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
        total += s * h;
    }
    return total;
}

} // namespace stimwave
