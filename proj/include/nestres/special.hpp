#pragma once

#include <vector>

#include "nestres/numerics.hpp"

namespace nestres::special {

/// Highest supported order.
inline constexpr int kMaxOrder = 16;

/// Below this |z|, j_0 and h_0^{(1)} switch to their truncated Taylor series.
inline constexpr double kSmallArgument = 1e-3;

/// A radial function value and its derivative with respect to the argument.
struct SphericalPair {
    cplx value;
    cplx derivative;
};

/// j_n(z) and j_n'(z), 0 <= n <= kMaxOrder.
SphericalPair sph_bessel_j(int n, cplx z);

/// h_n^{(1)}(z) and its derivative, 0 <= n <= kMaxOrder, z != 0.
SphericalPair sph_hankel1(int n, cplx z);

/// Orders 0..n_max in one pass; entry n of the result is order n.
std::vector<SphericalPair> sph_bessel_j_all(int n_max, cplx z);
std::vector<SphericalPair> sph_hankel1_all(int n_max, cplx z);

}  // namespace nestres::special
