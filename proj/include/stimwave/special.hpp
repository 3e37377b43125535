#pragma once

#include <cmath>
#include <complex>

namespace stimwave {

using cplx = std::complex<double>;

namespace detail {

/// phi1(z) = (e^z - 1)/z, entire; series near zero to avoid cancellation.
inline cplx phi1(cplx z) {
    if (std::abs(z) < 1e-3) {
        // 1 + z/2 + z^2/6 + z^3/24 + z^4/120
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
    }
    return (std::exp(z) - 1.0) / z;
}

/// zeta01(z) = int_0^1 x e^{zx} dx = (e^z (z-1) + 1)/z^2.
inline cplx zeta01(cplx z) {
    if (std::abs(z) < 1e-3) {
        // sum_k z^k (k+1)/(k+2)!
        return 0.5 + z * (1.0 / 3.0 + z * (1.0 / 8.0 + z * (1.0 / 30.0 + z / 144.0)));
    }
    return (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
}

/// eta01(z) = int_0^1 x^2 e^{zx} dx = (e^z (z^2 - 2z + 2) - 2)/z^3.
inline cplx eta01(cplx z) {
    if (std::abs(z) < 1e-3) {
        // sum_k z^k / (k! (k+3))
        return 1.0 / 3.0 + z * (0.25 + z * (0.1 + z * (1.0 / 36.0 + z / 168.0)));
    }
    return (std::exp(z) * (z * z - 2.0 * z + 2.0) - 2.0) / (z * z * z);
}

/// int_0^t e^{-a s} ds, stable for small a*t.
inline double exp_moment0(double a, double t) {
    return t * phi1(cplx(-a * t, 0.0)).real();
}

/// int_0^t s e^{-a s} ds.
inline double exp_moment1(double a, double t) {
    return t * t * zeta01(cplx(-a * t, 0.0)).real();
}

/// int_0^t s^2 e^{-a s} ds.
inline double exp_moment2(double a, double t) {
    return t * t * t * eta01(cplx(-a * t, 0.0)).real();
}

} // namespace detail

} // namespace stimwave
