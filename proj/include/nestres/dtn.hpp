#pragma once

// Radial Dirichlet-to-Neumann map of the host medium on the 2N interfaces and
// the 2N x 2N matrix whose determinant vanishes at the resonances.
//
// Interfaces are ordered Gamma_1^+, Gamma_1^-, Gamma_2^+, ..., Gamma_N^-. The
// map returns d/dr of the host solution at each interface for radially
// symmetric Dirichlet data.

#include <span>
#include <stdexcept>
#include <vector>

#include "nestres/model.hpp"
#include "nestres/numerics.hpp"

namespace nestres::dtn {

/// k hits a Dirichlet eigenvalue of a gap or of the innermost ball.
class SingularDtnError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Relative band around k * width in pi Z \ {0} that is rejected.
inline constexpr double kExcludedTolerance = 1e-10;

/// Below this |k * gap| the gap blocks use their Taylor expansion about k = 0.
inline constexpr double kSeriesThreshold = 1e-3;

struct DtnMatrix {
    cplx k;
    numerics::ComplexMatrix matrix;  // 2N x 2N, nonzero only on the documented blocks
};

DtnMatrix dtn_matrix(cplx k, const model::NestedGeometry& g);

/// Order 0 returns T_0 (the k = 0 map), order 1 returns T_1 = diag(i, 0, ..., 0).
DtnMatrix dtn_series_term(int order, const model::NestedGeometry& g);

/// -k_r diag(A'_j) - delta T^k diag(A_j), unknowns ordered (a_1, b_1, ..., a_N, b_N)
/// for u = a_j j_0(k_r r) + b_j h_0(k_r r) in shell j.
numerics::ComplexMatrix assemble_A_dtn(cplx omega, const model::MaterialParams& m, const model::NestedGeometry& g);

numerics::LogDet logdet_A_dtn(cplx omega, const model::MaterialParams& m, const model::NestedGeometry& g);

/// Muller roots of det of the DtN matrix, one run per seed, in seed order.
std::vector<numerics::SeededRoot> find_resonances_dtn(const model::MaterialParams& m, const model::NestedGeometry& g,
                                                      std::span<const cplx> seeds,
                                                      const numerics::RootSearchOptions& opts = {});

}  // namespace nestres::dtn
