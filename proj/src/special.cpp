#include "nestres/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nestres::special {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_order(int n) {
    if (n < 0 || n > kMaxOrder) {
        throw std::invalid_argument("spherical function order " + std::to_string(n) + " outside [0, " +
                                    std::to_string(kMaxOrder) + "]");
    }
}

// sin z / z, Taylor series through z^8 below the threshold.
cplx j0_value(cplx z) {
    if (std::abs(z) < kSmallArgument) {
        const cplx z2 = z * z;
        return 1.0 + z2 * (-1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 * (-1.0 / 5040.0 + z2 / 362880.0)));
    }
    return std::sin(z) / z;
}

// -cos z / z, with the matching series below the threshold.
cplx y0_value(cplx z) {
    if (std::abs(z) < kSmallArgument) {
        const cplx z2 = z * z;
        return -(1.0 + z2 * (-0.5 + z2 * (1.0 / 24.0 + z2 * (-1.0 / 720.0 + z2 / 40320.0)))) / z;
    }
    return -std::cos(z) / z;
}

// Ascending power series of j_n, used for |z| < 1 where Miller's start-up
// would have to climb through huge intermediate values.
cplx jn_series(int n, cplx z) {
    cplx lead = 1.0;
    double dfact = 1.0;
    for (int m = 1; m <= n; ++m) {
        lead *= z;
        dfact *= 2.0 * m + 1.0;
    }
    lead /= dfact;
    const cplx w = -0.5 * z * z;
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= w / (static_cast<double>(k) * (2.0 * n + 2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return lead * sum;
}

// Values j_0..j_{top}.
std::vector<cplx> bessel_values(int top, cplx z) {
    std::vector<cplx> j(static_cast<std::size_t>(top) + 1);
    j[0] = j0_value(z);
    if (top == 0) return j;
    if (z == cplx{}) {
        for (int n = 1; n <= top; ++n) j[n] = 0.0;
        return j;
    }
    const double az = std::abs(z);
    if (az < 1.0) {
        for (int n = 1; n <= top; ++n) j[n] = jn_series(n, z);
        return j;
    }

    if (az > 2.0 * top + 20.0) {
        // Far beyond the turning point j_n and y_n have comparable size, so
        // upward recurrence is stable and avoids a start order growing with |z|.
        j[1] = (j[0] - std::cos(z)) / z;
        for (int n = 1; n < top; ++n) j[n + 1] = (2.0 * n + 1.0) / z * j[n] - j[n - 1];
        return j;
    }

    // Miller: downward recurrence from a start far above the highest order,
    // then normalization against the closed form of j_0 or j_1.
    const int start = top + 15 + static_cast<int>(std::ceil(az));
    cplx above = 0.0;
    cplx cur = 1e-30;
    for (int m = start; m >= 1; --m) {
        const cplx below = (2.0 * m + 1.0) / z * cur - above;
        above = cur;
        cur = below;
        if (m - 1 <= top) j[m - 1] = cur;
        if (m <= top) j[m] = above;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            above *= 1e-250;
            for (int n = m - 1; n <= top; ++n) {
                if (n >= 0) j[n] *= 1e-250;
            }
        }
    }
    const cplx j0_true = std::sin(z) / z;
    const cplx j1_true = (std::sin(z) / z - std::cos(z)) / z;
    const cplx scale = std::abs(j0_true) >= std::abs(j1_true) ? j0_true / j[0] : j1_true / j[1];
    for (auto& v : j) v *= scale;
    j[0] = j0_true;
    return j;
}

// Values h_0..h_{top} by upward recurrence.
std::vector<cplx> hankel_values(int top, cplx z) {
    std::vector<cplx> h(static_cast<std::size_t>(top) + 1);
    h[0] = std::abs(z) < kSmallArgument ? j0_value(z) + kI * y0_value(z) : -kI * std::exp(kI * z) / z;
    if (top == 0) return h;
    h[1] = -std::exp(kI * z) * (z + kI) / (z * z);
    for (int n = 1; n < top; ++n) h[n + 1] = (2.0 * n + 1.0) / z * h[n] - h[n - 1];
    return h;
}

}  // namespace

std::vector<SphericalPair> sph_bessel_j_all(int n_max, cplx z) {
    check_order(n_max);
    const std::vector<cplx> j = bessel_values(n_max + 1, z);
    std::vector<SphericalPair> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = {j[0], -j[1]};
    const bool small = std::abs(z) < 1.0;
    for (int n = 1; n <= n_max; ++n) {
        cplx d;
        if (z == cplx{}) {
            d = n == 1 ? 1.0 / 3.0 : 0.0;
        } else if (small) {
            d = static_cast<double>(n) / z * j[n] - j[n + 1];
        } else {
            d = j[n - 1] - (n + 1.0) / z * j[n];
        }
        out[n] = {j[n], d};
    }
    return out;
}

std::vector<SphericalPair> sph_hankel1_all(int n_max, cplx z) {
    check_order(n_max);
    if (z == cplx{}) throw std::domain_error("sph_hankel1: argument must be nonzero");
    const std::vector<cplx> h = hankel_values(n_max + 1, z);
    std::vector<SphericalPair> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = {h[0], -h[1]};
    for (int n = 1; n <= n_max; ++n) out[n] = {h[n], h[n - 1] - (n + 1.0) / z * h[n]};
    return out;
}

SphericalPair sph_bessel_j(int n, cplx z) {
    check_order(n);
    return sph_bessel_j_all(n, z)[static_cast<std::size_t>(n)];
}

SphericalPair sph_hankel1(int n, cplx z) {
    check_order(n);
    return sph_hankel1_all(n, z)[static_cast<std::size_t>(n)];
}

}  // namespace nestres::special
