#include <doctest.h>

#include <cmath>

#include "nestres/capacitance.hpp"
#include "nestres/dtn.hpp"
#include "nestres/special.hpp"
#include "nestres/swe.hpp"
#include "oracles.hpp"

using namespace nestres;
using namespace nestres::swe;
using model::MaterialParams;
using model::NestedGeometry;

namespace {

double max_abs(const numerics::ComplexMatrix& m) {
    double best = 0.0;
    for (const cplx& v : m.data()) best = std::max(best, std::abs(v));
    return best;
}

}  // namespace

TEST_CASE("leading entries carry the Hankel trace and the contrast factor") {
    const NestedGeometry g({1.0, 0.5});
    const auto m = MaterialParams::from_contrast(1e-3);
    const cplx w{0.04, -0.001};
    const auto a = assemble_A_swe(0, w, m, g);
    const auto h = special::sph_hankel1(0, w);
    CHECK(a.matrix(0, 0) == -h.value);
    CHECK(std::abs(a.matrix(1, 0) + 1e-3 * h.derivative) < 1e-15 * std::abs(h.derivative));
    CHECK(a.order == 0);
    CHECK(a.delta == doctest::Approx(1e-3));
    CHECK(a.omega == w);
}

TEST_CASE("block tridiagonal sparsity") {
    const auto g = NestedGeometry::equidistant(4);
    const auto m = MaterialParams::from_contrast(1e-3);
    for (int n : {0, 3}) {
        const auto a = assemble_A_swe(n, cplx{0.02, -0.001}, m, g).matrix;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const std::size_t shell = r / 4;
            const bool plus_rows = (r % 4) < 2;
            for (std::size_t c = 0; c < a.cols(); ++c) {
                bool allowed;
                if (plus_rows) {
                    // a_i^+, b_i^+, a_i^- of this shell, b_{i-1}^- of the one outside
                    allowed = (c >= 4 * shell && c <= 4 * shell + 2) || (shell > 0 && c == 4 * shell - 1);
                } else {
                    // b_i^+, a_i^-, b_i^- of this shell, a_{i+1}^+ of the one inside
                    allowed = (c >= 4 * shell + 1 && c <= 4 * shell + 4);
                }
                if (!allowed) CHECK(a(r, c) == cplx{});
                if (allowed && c < a.cols()) CHECK(a(r, c) != cplx{});
            }
        }
    }
}

TEST_CASE("reflection across the imaginary axis") {
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t layers = 1 + static_cast<std::size_t>(oracle::uniform(0.0, 3.999));
        const NestedGeometry g(oracle::random_radii(layers));
        const auto m = MaterialParams::from_contrast(std::pow(10.0, oracle::uniform(-4.0, -2.0)));
        const cplx w{oracle::uniform(0.001, 0.2), oracle::uniform(-0.01, 0.01)};
        const auto a = assemble_A_swe(0, w, m, g).matrix;
        const auto b = assemble_A_swe(0, -std::conj(w), m, g).matrix;
        const double scale = max_abs(a);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            // flux rows are divided by k, which flips sign under the reflection
            const double sign = (r % 2 == 0) ? 1.0 : -1.0;
            for (std::size_t c = 0; c < a.cols(); ++c) {
                CHECK(std::abs(b(r, c) - sign * std::conj(a(r, c))) <= 1e-13 * scale);
            }
        }
        const auto la = logdet_A_swe(w, m, g);
        const auto lb = logdet_A_swe(-std::conj(w), m, g);
        CHECK(std::abs(la.log_magnitude - lb.log_magnitude) <= 1e-10 * std::max(1.0, std::abs(la.log_magnitude)));
        CHECK(std::abs(numerics::wrap_phase(la.phase + lb.phase)) <= 1e-10);
    }
}

TEST_CASE("single-shell determinant against cofactor expansion") {
    const NestedGeometry g({1.0, 0.5});
    const auto m = MaterialParams::from_contrast(1.0 / 6000.0);
    for (cplx w : {cplx{0.0239, -2.9e-4}, cplx{0.5, 0.1}, cplx{0.01, 0.0}}) {
        const auto a = assemble_A_swe(0, w, m, g).matrix;
        oracle::Dense d(4, std::vector<cplx>(4));
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) d[i][j] = a(i, j);
        }
        const cplx expect = oracle::cofactor_det(d);
        CHECK(std::abs(numerics::lu_logdet(a).value() - expect) <= 1e-12 * std::abs(expect));
    }
}

TEST_CASE("single-shell resonance") {
    const NestedGeometry g({1.0, 0.5});
    const auto m = MaterialParams::from_contrast(1.0 / 6000.0);
    const auto spec = find_resonances_swe(m, g);
    REQUIRE(spec.modes.size() == 1);
    const ModeRecord& r = spec.modes[0];
    REQUIRE(r.converged);
    CHECK(r.exact.real() == doctest::Approx(0.02390).epsilon(1e-3));
    CHECK(r.exact.imag() == doctest::Approx(-2.86e-4).epsilon(1e-2));
    CHECK(r.abs_diff == doctest::Approx(2.3e-6).epsilon(0.1));
    CHECK(r.residual <= 1e-10);
    CHECK(spec.smallest == 0);

    // brute-force scan of |det| on a fine grid around the root
    const auto ref = logdet_A_swe(r.asymptotic, m, g);
    const double span = 2e-7;
    const int steps = 40;
    cplx best = r.asymptotic;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = -steps; i <= steps; ++i) {
        for (int j = -steps; j <= steps; ++j) {
            const cplx w = r.exact + cplx{span * i / steps, span * j / steps};
            const double v = std::abs(scaled_det(w, ref, m, g));
            if (v < best_val) {
                best_val = v;
                best = w;
            }
        }
    }
    CHECK(std::abs(best - r.exact) <= 1.5 * span / steps);

    // the mirrored root is a root as well
    const auto mirror_ref = logdet_A_swe(-std::conj(r.asymptotic), m, g);
    CHECK(std::abs(scaled_det(r.mirrored(), mirror_ref, m, g)) <= 1e-8);
}

TEST_CASE("root location does not depend on the reference determinant") {
    const auto g = NestedGeometry::equidistant(2);
    const auto m = MaterialParams::from_contrast(1e-3);
    const auto spec = find_resonances_swe(m, g);
    REQUIRE(spec.all_converged());
    const cplx root = spec.modes[1].exact;
    const auto ref = logdet_A_swe(spec.modes[1].asymptotic, m, g);
    numerics::LogDet shifted = ref;
    shifted.log_magnitude += 50.0;
    shifted.phase = numerics::wrap_phase(shifted.phase + 1.0);
    auto f1 = [&](cplx w) { return scaled_det(w, ref, m, g); };
    auto f2 = [&](cplx w) { return scaled_det(w, shifted, m, g); };
    numerics::MullerOptions opts;
    const auto r1 = numerics::muller_find_root(f1, spec.modes[1].asymptotic, opts);
    const auto r2 = numerics::muller_find_root(f2, spec.modes[1].asymptotic, opts);
    CHECK(std::abs(r1.root - root) <= 1e-12);
    CHECK(std::abs(r2.root - r1.root) <= 1e-13);
}

TEST_CASE("iteration counts and SWE/DtN agreement for small stacks") {
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        for (std::size_t layers = 1; layers <= 3; ++layers) {
            const auto g = NestedGeometry::equidistant(layers);
            const auto m = MaterialParams::from_contrast(delta);
            const auto spec = find_resonances_swe(m, g);
            REQUIRE(spec.all_converged());
            std::vector<cplx> seeds;
            for (const auto& r : spec.modes) {
                CHECK(r.iterations <= 20);
                CHECK(r.exact.real() > 0.0);
                seeds.push_back(r.asymptotic);
            }
            const auto dtn_roots = dtn::find_resonances_dtn(m, g, seeds);
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                CHECK(dtn_roots[i].converged);
                CHECK(std::abs(dtn_roots[i].root - spec.modes[i].exact) <= 1e-8);
            }
            for (std::size_t i = 1; i < spec.modes.size(); ++i) {
                CHECK(spec.modes[i].exact.real() > spec.modes[i - 1].exact.real());
            }
        }
    }
}

TEST_CASE("thread count does not change results") {
    const auto g = NestedGeometry::equidistant(6);
    const auto m = MaterialParams::from_contrast(1.0 / 6000.0);
    numerics::RootSearchOptions opts;
    const auto a = find_resonances_swe(m, g, opts);
    opts.threads = 4;
    const auto b = find_resonances_swe(m, g, opts);
    for (std::size_t i = 0; i < a.modes.size(); ++i) CHECK(a.modes[i].exact == b.modes[i].exact);
}

TEST_CASE("moderate contrast is flagged") {
    const NestedGeometry g({1.0, 0.5});
    const auto spec = find_resonances_swe(MaterialParams::from_contrast(0.2), g);
    CHECK_FALSE(spec.warnings.empty());
    CHECK(find_resonances_swe(MaterialParams::from_contrast(1e-3), g).warnings.empty());
}
