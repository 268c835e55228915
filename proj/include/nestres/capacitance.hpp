#pragma once

#include <stdexcept>
#include <vector>

#include "nestres/model.hpp"
#include "nestres/numerics.hpp"

namespace nestres::capacitance {

class CapacitanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coupling r_j^- r_{j+1}^+ / (r_j^- - r_{j+1}^+) across the gap inside shell j, 1 <= j < N.
double gap_coupling(const model::NestedGeometry& g, std::size_t j);

/// Tridiagonal capacitance matrix. Row 1 carries the exterior term 4 pi r_1^+,
/// row N has no coupling to an inner shell.
numerics::SymTridiag build_capacitance(const model::NestedGeometry& g);

/// Diagonal of the volume matrix, |D_1| ... |D_N|.
std::vector<double> build_volume(const model::NestedGeometry& g);

struct GeneralizedEigen {
    std::vector<double> lambdas;               // strictly ascending, positive
    std::vector<std::vector<double>> vectors;  // V-orthonormal: a_i^T V a_j = delta_ij
    double min_gap = 0.0;                      // min_i lambda_{i+1} - lambda_i (0 for N = 1)
};

/// Solves C a = lambda V a through S = V^{-1/2} C V^{-1/2}.
/// Throws CapacitanceError if C is not positive definite or two eigenvalues
/// are closer than 1e-12 ||S||.
GeneralizedEigen generalized_eigs(const numerics::SymTridiag& c, const std::vector<double>& volumes);

struct CapacitanceSystem {
    numerics::SymTridiag capacitance;
    std::vector<double> volumes;
    std::vector<double> lambdas;
    std::vector<std::vector<double>> vectors;
    double min_gap = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return lambdas.size(); }
};

CapacitanceSystem build_system(const model::NestedGeometry& g);

/// omega_i^+ = sqrt(delta lambda_i) v_r - 2 pi i (r_1^+)^2 delta v_r^2 / v (a_i^{(1)})^2,
/// ascending in i. The mirrored frequencies are -conj(omega_i^+).
std::vector<cplx> asymptotic_frequencies(const CapacitanceSystem& cs, const model::MaterialParams& m,
                                         const model::NestedGeometry& g);

inline cplx mirrored(cplx omega) { return -std::conj(omega); }

}  // namespace nestres::capacitance
