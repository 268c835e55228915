#include "nestres/dtn.hpp"

#include <cmath>
#include <sstream>

#include "nestres/special.hpp"

namespace nestres::dtn {

using model::NestedGeometry;
using numerics::ComplexMatrix;

namespace {

const cplx kI{0.0, 1.0};

bool excluded(cplx x) {
    return std::abs(std::sin(x)) < kExcludedTolerance * std::abs(x);
}

[[noreturn]] void reject(const char* where, cplx k) {
    std::ostringstream msg;
    msg << "wavenumber " << k.real() << (k.imag() < 0 ? "" : "+") << k.imag() << "i is a Dirichlet eigenvalue of the "
        << where;
    throw SingularDtnError(msg.str());
}

// k cot(k g) and k / sin(k g), regular at k = 0.
cplx k_cot(cplx k, double g) {
    const cplx x = k * g;
    if (std::abs(x) < kSeriesThreshold) {
        const cplx x2 = x * x;
        return (1.0 - x2 / 3.0 - x2 * x2 / 45.0 - 2.0 * x2 * x2 * x2 / 945.0) / g;
    }
    return k * std::cos(x) / std::sin(x);
}

cplx k_csc(cplx k, double g) {
    const cplx x = k * g;
    if (std::abs(x) < kSeriesThreshold) {
        const cplx x2 = x * x;
        return (1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0 + 31.0 * x2 * x2 * x2 / 15120.0) / g;
    }
    return k / std::sin(x);
}

}  // namespace

DtnMatrix dtn_matrix(cplx k, const NestedGeometry& g) {
    const std::size_t n = g.layers();
    DtnMatrix t{k, ComplexMatrix(2 * n, 2 * n)};
    auto& a = t.matrix;
    a(0, 0) = -1.0 / g.outer_radius(1) + kI * k;
    for (std::size_t j = 1; j < n; ++j) {
        const double inner = g.inner_radius(j);
        const double outer = g.outer_radius(j + 1);
        const double gap = g.gap(j);
        if (excluded(k * gap)) reject("gap", k);
        const cplx c = k_cot(k, gap);
        const cplx s = k_csc(k, gap);
        const std::size_t p = 2 * j - 1;  // Gamma_j^-
        const std::size_t q = 2 * j;      // Gamma_{j+1}^+
        a(p, p) = c - 1.0 / inner;
        a(p, q) = -(outer / inner) * s;
        a(q, p) = (inner / outer) * s;
        a(q, q) = -c - 1.0 / outer;
    }
    const double core = g.inner_radius(n);
    if (k != cplx{}) {
        if (excluded(k * core)) reject("innermost ball", k);
        const auto j = special::sph_bessel_j_all(1, k * core);
        a(2 * n - 1, 2 * n - 1) = -k * j[1].value / j[0].value;
    }
    return t;
}

DtnMatrix dtn_series_term(int order, const NestedGeometry& g) {
    if (order != 0 && order != 1) throw std::invalid_argument("dtn_series_term: order must be 0 or 1");
    const std::size_t n = g.layers();
    DtnMatrix t{0.0, ComplexMatrix(2 * n, 2 * n)};
    auto& a = t.matrix;
    if (order == 1) {
        a(0, 0) = kI;
        return t;
    }
    a(0, 0) = -1.0 / g.outer_radius(1);
    for (std::size_t j = 1; j < n; ++j) {
        const double inner = g.inner_radius(j);
        const double outer = g.outer_radius(j + 1);
        const double gap = g.gap(j);
        const std::size_t p = 2 * j - 1;
        const std::size_t q = 2 * j;
        a(p, p) = outer / (inner * gap);
        a(p, q) = -outer / (inner * gap);
        a(q, p) = inner / (outer * gap);
        a(q, q) = -inner / (outer * gap);
    }
    return t;
}

ComplexMatrix assemble_A_dtn(cplx omega, const model::MaterialParams& m, const NestedGeometry& g) {
    const model::DerivedParams p = model::derived(m, omega);
    const std::size_t n = g.layers();
    const ComplexMatrix t = dtn_matrix(p.k, g).matrix;

    // Block-diagonal trace matrices: row 2(j-1) is Gamma_j^+, row 2(j-1)+1 is Gamma_j^-.
    ComplexMatrix traces(2 * n, 2 * n);
    ComplexMatrix a(2 * n, 2 * n);
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t b = 2 * (j - 1);
        const double radius[2] = {g.outer_radius(j), g.inner_radius(j)};
        for (std::size_t s = 0; s < 2; ++s) {
            const auto jv = special::sph_bessel_j_all(1, p.k_r * radius[s]);
            const auto hv = special::sph_hankel1_all(1, p.k_r * radius[s]);
            traces(b + s, b) = jv[0].value;
            traces(b + s, b + 1) = hv[0].value;
            a(b + s, b) = -p.k_r * jv[1].value;
            a(b + s, b + 1) = -p.k_r * hv[1].value;
        }
    }
    for (std::size_t r = 0; r < 2 * n; ++r) {
        for (std::size_t s = 0; s < 2 * n; ++s) {
            const cplx trs = t(r, s);
            if (trs == cplx{}) continue;
            // traces has nonzeros only in columns of the 2x2 block containing row s.
            const std::size_t b = s - s % 2;
            a(r, b) -= p.delta * trs * traces(s, b);
            a(r, b + 1) -= p.delta * trs * traces(s, b + 1);
        }
    }
    return a;
}

numerics::LogDet logdet_A_dtn(cplx omega, const model::MaterialParams& m, const NestedGeometry& g) {
    return numerics::lu_logdet(assemble_A_dtn(omega, m, g));
}

std::vector<numerics::SeededRoot> find_resonances_dtn(const model::MaterialParams& m, const NestedGeometry& g,
                                                      std::span<const cplx> seeds,
                                                      const numerics::RootSearchOptions& opts) {
    m.validate();
    auto logdet = [&](cplx w) { return logdet_A_dtn(w, m, g); };
    return numerics::find_roots_seeded(logdet, seeds, opts);
}

}  // namespace nestres::dtn
