#include "nestres/swe.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "nestres/special.hpp"

namespace nestres::swe {

using model::NestedGeometry;

SweMatrix assemble_A_swe(int n, cplx omega, const model::MaterialParams& m, const NestedGeometry& g) {
    const model::DerivedParams p = model::derived(m, omega);
    const std::size_t layers = g.layers();
    SweMatrix out{n, omega, p.delta, numerics::ComplexMatrix(4 * layers, 4 * layers)};
    auto& a = out.matrix;
    const double d = p.delta;
    const double tau = p.tau;

    for (std::size_t i = 1; i <= layers; ++i) {
        const std::size_t r = 4 * (i - 1);
        const double rp = g.outer_radius(i);
        const double rm = g.inner_radius(i);

        // Gamma_i^+
        const auto h_out = special::sph_hankel1(n, p.k * rp);
        const auto j_in = special::sph_bessel_j(n, p.k_r * rp);
        const auto h_in = special::sph_hankel1(n, p.k_r * rp);
        a(r, col_a_plus(i)) = -h_out.value;
        a(r, col_b_plus(i)) = j_in.value;
        a(r, col_a_minus(i)) = h_in.value;
        a(r + 1, col_a_plus(i)) = -d * h_out.derivative;
        a(r + 1, col_b_plus(i)) = tau * j_in.derivative;
        a(r + 1, col_a_minus(i)) = tau * h_in.derivative;
        if (i > 1) {
            const auto j_out = special::sph_bessel_j(n, p.k * rp);
            a(r, col_b_minus(i - 1)) = -j_out.value;
            a(r + 1, col_b_minus(i - 1)) = -d * j_out.derivative;
        }

        // Gamma_i^-
        const auto j_in_m = special::sph_bessel_j(n, p.k_r * rm);
        const auto h_in_m = special::sph_hankel1(n, p.k_r * rm);
        const auto j_gap = special::sph_bessel_j(n, p.k * rm);
        a(r + 2, col_b_plus(i)) = -j_in_m.value;
        a(r + 2, col_a_minus(i)) = -h_in_m.value;
        a(r + 2, col_b_minus(i)) = j_gap.value;
        a(r + 3, col_b_plus(i)) = -tau * j_in_m.derivative;
        a(r + 3, col_a_minus(i)) = -tau * h_in_m.derivative;
        a(r + 3, col_b_minus(i)) = d * j_gap.derivative;
        if (i < layers) {
            const auto h_gap = special::sph_hankel1(n, p.k * rm);
            a(r + 2, col_a_plus(i + 1)) = h_gap.value;
            a(r + 3, col_a_plus(i + 1)) = d * h_gap.derivative;
        }
    }
    return out;
}

numerics::LogDet logdet_A_swe(cplx omega, const model::MaterialParams& m, const NestedGeometry& g) {
    return numerics::lu_logdet(assemble_A_swe(0, omega, m, g).matrix);
}

cplx scaled_det(cplx omega, const numerics::LogDet& ref, const model::MaterialParams& m, const NestedGeometry& g) {
    return numerics::ratio(logdet_A_swe(omega, m, g), ref);
}

bool ResonanceSpectrum::all_converged() const {
    return std::all_of(modes.begin(), modes.end(), [](const ModeRecord& r) { return r.converged; });
}

double ResonanceSpectrum::speedup() const {
    if (seconds_capacitance_path <= 0.0) return std::numeric_limits<double>::infinity();
    return seconds_root_path / seconds_capacitance_path;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

ResonanceSpectrum find_resonances_swe(const model::MaterialParams& m, const NestedGeometry& g,
                                      std::span<const cplx> seeds, const numerics::RootSearchOptions& opts) {
    m.validate();
    ResonanceSpectrum spec;
    const model::DerivedParams p = model::derived(m, 0.0);
    if (p.delta >= 0.1) {
        spec.warnings.push_back("contrast delta >= 0.1: capacitance seeds may lie outside the subwavelength regime");
    }

    const auto t0 = Clock::now();
    auto logdet = [&](cplx w) { return logdet_A_swe(w, m, g); };
    const auto roots = numerics::find_roots_seeded(logdet, seeds, opts);
    spec.seconds_root_path = seconds_since(t0);

    spec.modes.reserve(roots.size());
    for (const auto& r : roots) {
        ModeRecord rec;
        rec.asymptotic = r.seed;
        rec.exact = r.root;
        rec.abs_diff = r.converged ? std::abs(r.root - r.seed) : std::numeric_limits<double>::quiet_NaN();
        rec.iterations = r.iterations;
        rec.residual = r.residual;
        rec.converged = r.converged;
        rec.deflated = r.deflated;
        rec.error = r.error;
        if (r.converged && !(r.root.real() > 0.0)) {
            rec.converged = false;
            rec.error = "root has non-positive real part";
        }
        spec.modes.push_back(std::move(rec));
    }
    if (spec.all_converged()) {
        std::stable_sort(spec.modes.begin(), spec.modes.end(),
                         [](const ModeRecord& x, const ModeRecord& y) { return x.exact.real() < y.exact.real(); });
    }
    for (std::size_t i = 1; i < spec.modes.size(); ++i) {
        if (std::abs(spec.modes[i].exact) < std::abs(spec.modes[spec.smallest].exact)) spec.smallest = i;
    }
    return spec;
}

ResonanceSpectrum find_resonances_swe(const model::MaterialParams& m, const NestedGeometry& g,
                                      const numerics::RootSearchOptions& opts) {
    const auto t0 = Clock::now();
    const capacitance::CapacitanceSystem cs = capacitance::build_system(g);
    const std::vector<cplx> seeds = capacitance::asymptotic_frequencies(cs, m, g);
    const double cap_seconds = seconds_since(t0);

    ResonanceSpectrum spec = find_resonances_swe(m, g, seeds, opts);
    spec.seconds_capacitance_path = cap_seconds;
    return spec;
}

}  // namespace nestres::swe
