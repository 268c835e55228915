#pragma once

// Plane-wave scattering by the nested shells: per-harmonic solves, field
// evaluation, the L2 norm over the shells, the modal prediction and the
// monopole far field.
//
// The incident wave is e^{i k x.d} = sum_n i^n (2n+1) j_n(k r) P_n(cos theta),
// with theta the angle between x and d.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "nestres/capacitance.hpp"
#include "nestres/model.hpp"
#include "nestres/numerics.hpp"

namespace nestres::scattering {

using Vec3 = std::array<double, 3>;

struct ScatteringSolution {
    double omega_in = 0.0;
    Vec3 direction{0.0, 0.0, 1.0};
    int n_max = 0;
    model::MaterialParams materials;
    model::NestedGeometry geometry;
    model::DerivedParams params;
    /// coefficients[n] holds (a_1^+, b_1^+, a_1^-, b_1^-, ..., b_N^-) for harmonic n.
    std::vector<std::vector<cplx>> coefficients;
    /// ||A x - rhs||_inf / ||rhs||_inf per harmonic.
    std::vector<double> relative_residual;

    /// a_{1,n}^+, the outgoing coefficient outside the outer shell.
    [[nodiscard]] cplx exterior_coefficient(int n) const { return coefficients.at(n).at(0); }
};

/// i^n (2n+1).
cplx plane_wave_coefficient(int n);

/// Throws std::invalid_argument for omega_in == 0, |d| != 1 or n_max outside
/// [0, special::kMaxOrder], and numerics::SingularMatrixError if a harmonic
/// system is singular.
ScatteringSolution solve_scattering(double omega_in, const Vec3& d, int n_max, const model::MaterialParams& m,
                                    const model::NestedGeometry& g);

/// Which region owns a point lying exactly on an interface.
enum class Side { inner, outer };

struct RadialSample {
    cplx value;
    cplx derivative;  // d/dr
};

/// Radial factor of harmonic n at radius r (r > 0 unless in the innermost ball).
RadialSample radial_function(const ScatteringSolution& sol, int n, double r, Side side = Side::inner);

/// Total field. Outside the outer shell the incident wave is used in closed form.
cplx eval_field(const ScatteringSolution& sol, const Vec3& x);
std::vector<cplx> eval_field(const ScatteringSolution& sol, std::span<const Vec3> points);

/// ||u||_{L2(D)} over the union of the shells, Gauss-Legendre in r with
/// `nodes` points per shell and exact angular integration.
double field_l2_norm(const ScatteringSolution& sol, std::size_t nodes = 32);

struct ModeTerm {
    double omega_M = 0.0;        // sqrt(delta lambda_i) v_r
    double gamma = 0.0;          // 4 pi r_1^2 omega (a_i^{(1)})^2 / (lambda_i v)
    std::vector<double> shape;   // a_i^{(j)}, j = 1..N
    cplx weight;                 // -4 pi r_1 a_i^{(1)} / (lambda_i (omega^2/omega_M^2 - 1 + i gamma))
};

struct ModalPrediction {
    double omega = 0.0;
    std::vector<ModeTerm> modes;
    std::vector<cplx> shell_values;  // sum_i weight_i a_i^{(j)} on shell j
    std::vector<std::string> warnings;
};

/// Leading-order field on each shell for a plane wave with u^in(0) = 1.
ModalPrediction modal_prediction(double omega, const model::MaterialParams& m, const model::NestedGeometry& g,
                                 const capacitance::CapacitanceSystem& cs);

struct FarField {
    cplx amplitude;                  // mean of u^s / G_k over the sample directions
    double direction_variation = 0;  // max |ratio - amplitude| / |amplitude|
    double radius = 0.0;
};

/// G_k(x) = -e^{ik|x|} / (4 pi |x|).
cplx fundamental_solution(cplx k, double r);

/// Scattered field over the 26 directions of the unit cube's neighbours at
/// radius radius_factor * r_1^+ (radius_factor >= 50).
FarField far_field_monopole(const ScatteringSolution& sol, double radius_factor = 100.0);

/// 16 pi^2 (r_1^+)^2 sum_i (a_i^{(1)})^2 / (lambda_i (omega^2/omega_M^2 - 1 + i gamma_i)).
cplx monopole_closed_form(double omega, const model::MaterialParams& m, const model::NestedGeometry& g,
                          const capacitance::CapacitanceSystem& cs);

struct SweepPoint {
    double omega = 0.0;
    double l2_norm = 0.0;
    double monopole_abs = 0.0;  // |a_{1,0}^+|
};

/// Uniform grid of `steps` points on [omega_min, omega_max], in grid order.
std::vector<double> uniform_grid(double omega_min, double omega_max, std::size_t steps);

std::vector<SweepPoint> sweep(std::span<const double> omegas, const Vec3& d, int n_max,
                              const model::MaterialParams& m, const model::NestedGeometry& g, unsigned threads = 1);

/// Interior indices i with v[i-1] < v[i] > v[i+1].
std::vector<std::size_t> local_maxima(std::span<const double> values);

struct ShellStats {
    cplx mean;              // complex mean of u
    double mean_re = 0.0;   // mean of Re u
    double std_re = 0.0;
    double mean_abs = 0.0;
    double cv_abs = 0.0;    // std / mean of |u|
    double aligned = 0.0;   // Re(mean e^{-i phi}), phi the phase of the largest |mean|
};

/// Samples `samples` radial midpoints per shell along the incidence axis.
std::vector<ShellStats> shell_statistics(const ScatteringSolution& sol, std::size_t samples = 64);

/// Number of sign changes of `aligned` between consecutive shells.
int sign_changes(std::span<const ShellStats> stats);

}  // namespace nestres::scattering
