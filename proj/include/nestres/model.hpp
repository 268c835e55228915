#pragma once

// Geometry and material description of N concentric resonator shells.
//
// Shell j (1-based) occupies outer_radius(j) >= |x| > inner_radius(j). The
// host medium fills the unbounded exterior, the gaps between consecutive
// shells and the innermost ball. Lengths are in the geometry's own unit and
// frequencies in (host speed)/(unit length) once materials are nondimensional.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "nestres/numerics.hpp"

namespace nestres::model {

/// Raised for invalid geometries or material parameters.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NestedGeometry {
public:
    /// radii = (r_1^+, r_1^-, r_2^+, r_2^-, ..., r_N^+, r_N^-), strictly decreasing and positive.
    explicit NestedGeometry(std::vector<double> radii);

    /// r_i^+ = N - i + 1, r_i^- = N - i + 0.5.
    static NestedGeometry equidistant(std::size_t layers);

    [[nodiscard]] std::size_t layers() const noexcept { return radii_.size() / 2; }
    [[nodiscard]] std::span<const double> radii() const noexcept { return radii_; }

    // 1-based shell index, as in the usual r_j^+ / r_j^- labelling.
    [[nodiscard]] double outer_radius(std::size_t j) const { return radii_.at(2 * (j - 1)); }
    [[nodiscard]] double inner_radius(std::size_t j) const { return radii_.at(2 * (j - 1) + 1); }

    /// Width r_j^- - r_{j+1}^+ of the host gap inside shell j, 1 <= j < N.
    [[nodiscard]] double gap(std::size_t j) const { return inner_radius(j) - outer_radius(j + 1); }

    /// Largest gap width, 0 for a single shell.
    [[nodiscard]] double max_gap() const noexcept;

    /// The same geometry with every radius multiplied by s > 0.
    [[nodiscard]] NestedGeometry scaled(double s) const;

    friend bool operator==(const NestedGeometry&, const NestedGeometry&) = default;

private:
    std::vector<double> radii_;
};

/// Volume 4pi/3 ((r_j^+)^3 - (r_j^-)^3) of shell j (1-based).
double shell_volume(const NestedGeometry& g, std::size_t j);

/// Densities and bulk moduli of the resonators (rho_r, kappa_r) and host (rho, kappa).
struct MaterialParams {
    double rho_r = 1.0;
    double kappa_r = 1.0;
    double rho = 1.0;
    double kappa = 1.0;

    /// rho_r = kappa_r = 1 and rho = kappa = 1/delta, so v = v_r = 1 and tau = 1.
    static MaterialParams from_contrast(double delta);

    void validate() const;

    friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

struct DerivedParams {
    double v = 0.0;      // host speed
    double v_r = 0.0;    // resonator speed
    double delta = 0.0;  // rho_r / rho
    double tau = 0.0;    // v / v_r
    cplx k;              // host wavenumber omega / v
    cplx k_r;            // resonator wavenumber omega / v_r
};

DerivedParams derived(const MaterialParams& m, cplx omega);

/// True when delta < 1, the regime the asymptotic formulas describe.
bool high_contrast(const MaterialParams& m);

}  // namespace nestres::model
