#include "nestres/capacitance.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nestres::capacitance {

using model::NestedGeometry;

double gap_coupling(const NestedGeometry& g, std::size_t j) {
    if (j < 1 || j >= g.layers()) throw std::out_of_range("gap index out of range");
    const double inner = g.inner_radius(j);
    const double outer_next = g.outer_radius(j + 1);
    return inner * outer_next / (inner - outer_next);
}

numerics::SymTridiag build_capacitance(const NestedGeometry& g) {
    constexpr double four_pi = 4.0 * std::numbers::pi;
    const std::size_t n = g.layers();
    numerics::SymTridiag c;
    c.diag.assign(n, 0.0);
    c.offdiag.assign(n - 1, 0.0);
    c.diag[0] = four_pi * g.outer_radius(1);
    for (std::size_t j = 1; j < n; ++j) {
        const double gj = four_pi * gap_coupling(g, j);
        c.diag[j - 1] += gj;
        c.diag[j] += gj;
        c.offdiag[j - 1] = -gj;
    }
    return c;
}

std::vector<double> build_volume(const NestedGeometry& g) {
    std::vector<double> v(g.layers());
    for (std::size_t j = 1; j <= g.layers(); ++j) v[j - 1] = model::shell_volume(g, j);
    return v;
}

GeneralizedEigen generalized_eigs(const numerics::SymTridiag& c, const std::vector<double>& volumes) {
    const std::size_t n = c.size();
    if (volumes.size() != n) throw std::invalid_argument("generalized_eigs: size mismatch");

    std::vector<double> inv_sqrt(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(volumes[i] > 0.0)) throw std::invalid_argument("generalized_eigs: volumes must be positive");
        inv_sqrt[i] = 1.0 / std::sqrt(volumes[i]);
    }
    numerics::SymTridiag s;
    s.diag.resize(n);
    s.offdiag.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) s.diag[i] = c.diag[i] * inv_sqrt[i] * inv_sqrt[i];
    for (std::size_t i = 0; i + 1 < n; ++i) s.offdiag[i] = c.offdiag[i] * inv_sqrt[i] * inv_sqrt[i + 1];

    numerics::TridiagEigen eig = numerics::sym_tridiag_eigen(s);
    // Relative floor so a rounding-level eigenvalue of a singular C is not taken as positive.
    if (!(eig.values.front() > 1e-14 * s.norm_inf())) {
        throw CapacitanceError("capacitance matrix is not positive definite; check the geometry");
    }
    GeneralizedEigen out;
    out.min_gap = 0.0;
    const double tol = 1e-12 * s.norm_inf();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double gap = eig.values[i + 1] - eig.values[i];
        if (i == 0 || gap < out.min_gap) out.min_gap = gap;
        if (gap <= tol) {
            std::ostringstream msg;
            msg << "capacitance eigenvalues " << i + 1 << " and " << i + 2 << " collide (gap " << gap << ")";
            throw CapacitanceError(msg.str());
        }
    }
    out.lambdas = std::move(eig.values);
    out.vectors = std::move(eig.vectors);
    for (auto& a : out.vectors) {
        for (std::size_t k = 0; k < n; ++k) a[k] *= inv_sqrt[k];
    }
    return out;
}

CapacitanceSystem build_system(const NestedGeometry& g) {
    CapacitanceSystem cs;
    cs.capacitance = build_capacitance(g);
    cs.volumes = build_volume(g);
    GeneralizedEigen eig = generalized_eigs(cs.capacitance, cs.volumes);
    cs.lambdas = std::move(eig.lambdas);
    cs.vectors = std::move(eig.vectors);
    cs.min_gap = eig.min_gap;
    return cs;
}

std::vector<cplx> asymptotic_frequencies(const CapacitanceSystem& cs, const model::MaterialParams& m,
                                         const NestedGeometry& g) {
    const model::DerivedParams p = model::derived(m, 0.0);
    const double r1 = g.outer_radius(1);
    std::vector<cplx> out(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const double a1 = cs.vectors[i][0];
        const double re = std::sqrt(p.delta * cs.lambdas[i]) * p.v_r;
        const double im = -2.0 * std::numbers::pi * r1 * r1 * p.delta * p.v_r * p.v_r / p.v * a1 * a1;
        out[i] = {re, im};
    }
    return out;
}

}  // namespace nestres::capacitance
