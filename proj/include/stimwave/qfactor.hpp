#pragma once

#include <cmath>
#include <complex>

#include "stimwave/errors.hpp"
#include "stimwave/params.hpp"
#include "stimwave/special.hpp"

namespace stimwave {

enum class QVariant { semi_infinite, two_channel };

/// Complex weight controlling the interference between the spontaneous and
/// the stimulated emission pathway. Semi-infinite guide:
///   Q = 2 gamma / (gamma - delta - 2i delta_L),
/// two-continuum systems (with gamma' = 2 gamma):
///   Q_f = gamma' / (gamma' - delta - 2i delta_L) = Q(gamma -> gamma') / 2.
struct QFactor {
    cplx value;
    QVariant variant = QVariant::semi_infinite;
};

namespace detail {

inline cplx q_value(double gamma_total, double feedback, double delta, double detuning) {
    // q = 2*feedback / (gamma_total - delta - 2i*detuning)
    return 2.0 * feedback / cplx(gamma_total - delta, -2.0 * detuning);
}

inline bool q_singular(double gamma_total, double delta, double detuning) {
    return std::abs(gamma_total - delta) < 1e-12 * gamma_total &&
           std::abs(detuning) < 1e-12 * gamma_total;
}

} // namespace detail

inline QFactor q_factor(const PhysParams& p) {
    p.validate();
    if (detail::q_singular(p.gamma, p.delta, p.detuning))
        throw singular_point_error(
            "Q is singular at delta == gamma, zero detuning; use the limit forms");
    return {detail::q_value(p.gamma, p.gamma, p.delta, p.detuning),
            QVariant::semi_infinite};
}

inline QFactor q_factor_two_channel(const PhysParams& p) {
    p.validate();
    const double gp = p.gamma_prime();
    if (detail::q_singular(gp, p.delta, p.detuning))
        throw singular_point_error(
            "Q_f is singular at delta == gamma', zero detuning; use the limit forms");
    return {detail::q_value(gp, 0.5 * gp, p.delta, p.detuning), QVariant::two_channel};
}

} // namespace stimwave
