#pragma once

// Closed-form references for the capacitance matrix and the DtN map, built
// region by region from elementary solutions of the host problem.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nestres/model.hpp"

namespace oracle {

// C_ij from the flux of the harmonic potential equal to 1 on D_j and 0 on the
// other shells: each host region carries A/r + B, and the outward flux of
// A/r + B through a sphere is -4 pi A.
inline double flux_entry(const nestres::model::NestedGeometry& g, std::size_t i, std::size_t j) {
    const std::size_t n = g.layers();
    auto v = [&](std::size_t s) { return s == j ? 1.0 : 0.0; };
    // A of the host region directly outside shell s, and directly inside it.
    auto a_outside = [&](std::size_t s) {
        if (s == 1) return v(1) * g.outer_radius(1);
        const double a = g.inner_radius(s - 1), b = g.outer_radius(s);
        return (v(s - 1) - v(s)) / (1.0 / a - 1.0 / b);
    };
    auto a_inside = [&](std::size_t s) {
        if (s == n) return 0.0;
        const double a = g.inner_radius(s), b = g.outer_radius(s + 1);
        return (v(s) - v(s + 1)) / (1.0 / a - 1.0 / b);
    };
    // -(flux out through Gamma_i^+) + (flux along +r through Gamma_i^-)
    return 4.0 * std::numbers::pi * (a_outside(i) - a_inside(i));
}

// d/dr at every interface of the host solution with Dirichlet data f, built
// region by region from sin/exp forms and differentiated by hand.
inline std::vector<std::complex<double>> exterior_oracle(std::complex<double> k, const nestres::model::NestedGeometry& g,
                                                        const std::vector<std::complex<double>>& f) {
    using cplx = std::complex<double>;
    const cplx kI{0.0, 1.0};
    const std::size_t n = g.layers();
    std::vector<cplx> out(2 * n);
    const double r1 = g.outer_radius(1);
    out[0] = f[0] * r1 * (kI * k / r1 - 1.0 / (r1 * r1));
    for (std::size_t j = 1; j < n; ++j) {
        const double a = g.inner_radius(j), b = g.outer_radius(j + 1);
        const cplx s = std::sin(k * (a - b));
        const cplx alpha = f[2 * j - 1] * a / s;  // multiplies sin(k(r - b)) / r
        const cplx beta = f[2 * j] * b / s;       // multiplies sin(k(a - r)) / r
        auto du = [&](double r) {
            return alpha * (k * std::cos(k * (r - b)) / r - std::sin(k * (r - b)) / (r * r)) +
                   beta * (-k * std::cos(k * (a - r)) / r - std::sin(k * (a - r)) / (r * r));
        };
        out[2 * j - 1] = du(a);
        out[2 * j] = du(b);
    }
    const double c = g.inner_radius(n);
    const cplx gamma = f[2 * n - 1] * c / std::sin(k * c);  // multiplies sin(kr) / r
    out[2 * n - 1] = gamma * (k * std::cos(k * c) / c - std::sin(k * c) / (c * c));
    return out;
}

}  // namespace oracle
