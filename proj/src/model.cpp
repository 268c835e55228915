#include "nestres/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nestres::model {

NestedGeometry::NestedGeometry(std::vector<double> radii) : radii_(std::move(radii)) {
    if (radii_.empty()) throw ModelError("geometry needs at least one shell");
    if (radii_.size() % 2 != 0) throw ModelError("geometry radii must come in (outer, inner) pairs");
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        if (!std::isfinite(radii_[i]) || radii_[i] <= 0.0) {
            throw ModelError("geometry radius " + std::to_string(i) + " must be finite and positive");
        }
        if (i > 0 && !(radii_[i] < radii_[i - 1])) {
            throw ModelError("geometry radii must be strictly decreasing (entry " + std::to_string(i) + ")");
        }
    }
}

NestedGeometry NestedGeometry::equidistant(std::size_t layers) {
    if (layers == 0) throw ModelError("equidistant geometry needs N >= 1");
    std::vector<double> r;
    r.reserve(2 * layers);
    for (std::size_t i = 1; i <= layers; ++i) {
        const double outer = static_cast<double>(layers - i + 1);
        r.push_back(outer);
        r.push_back(outer - 0.5);
    }
    return NestedGeometry(std::move(r));
}

double NestedGeometry::max_gap() const noexcept {
    double g = 0.0;
    for (std::size_t j = 1; j < layers(); ++j) g = std::max(g, gap(j));
    return g;
}

NestedGeometry NestedGeometry::scaled(double s) const {
    if (!(s > 0.0)) throw ModelError("scale factor must be positive");
    std::vector<double> r = radii_;
    for (auto& x : r) x *= s;
    return NestedGeometry(std::move(r));
}

double shell_volume(const NestedGeometry& g, std::size_t j) {
    if (j < 1 || j > g.layers()) throw std::out_of_range("shell index out of range");
    const double a = g.outer_radius(j);
    const double b = g.inner_radius(j);
    return 4.0 * std::numbers::pi / 3.0 * (a * a * a - b * b * b);
}

MaterialParams MaterialParams::from_contrast(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ModelError("contrast delta must be positive");
    return {1.0, 1.0, 1.0 / delta, 1.0 / delta};
}

void MaterialParams::validate() const {
    for (double x : {rho_r, kappa_r, rho, kappa}) {
        if (!(x > 0.0) || !std::isfinite(x)) throw ModelError("material constants must be finite and positive");
    }
}

DerivedParams derived(const MaterialParams& m, cplx omega) {
    m.validate();
    DerivedParams d;
    d.v = std::sqrt(m.kappa / m.rho);
    d.v_r = std::sqrt(m.kappa_r / m.rho_r);
    d.delta = m.rho_r / m.rho;
    d.tau = d.v / d.v_r;
    d.k = omega / d.v;
    d.k_r = omega / d.v_r;
    return d;
}

bool high_contrast(const MaterialParams& m) { return m.rho_r / m.rho < 1.0; }

}  // namespace nestres::model
