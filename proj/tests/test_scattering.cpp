#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nestres/capacitance.hpp"
#include "nestres/scattering.hpp"
#include "oracles.hpp"

using namespace nestres;
using namespace nestres::scattering;
using model::MaterialParams;
using model::NestedGeometry;

namespace {

const cplx kI{0.0, 1.0};
const Vec3 kZ{0.0, 0.0, 1.0};

const MaterialParams kHomogeneous{1.0, 1.0, 1.0, 1.0};
const MaterialParams kContrast = MaterialParams::from_contrast(1.0 / 6000.0);

double first_mode(const NestedGeometry& g) {
    const auto cs = capacitance::build_system(g);
    return capacitance::asymptotic_frequencies(cs, kContrast, g)[0].real();
}

}  // namespace

TEST_CASE("plane-wave coefficients") {
    CHECK(plane_wave_coefficient(0) == cplx{1.0, 0.0});
    CHECK(plane_wave_coefficient(1) == cplx{0.0, 3.0});
    CHECK(plane_wave_coefficient(2) == cplx{-5.0, 0.0});
    CHECK(plane_wave_coefficient(7) == cplx{0.0, -15.0});
}

TEST_CASE("input validation") {
    const auto g = NestedGeometry::equidistant(2);
    CHECK_THROWS_AS(solve_scattering(0.0, kZ, 0, kContrast, g), std::invalid_argument);
    CHECK_THROWS_AS(solve_scattering(0.1, Vec3{0.0, 0.0, 2.0}, 0, kContrast, g), std::invalid_argument);
    CHECK_THROWS_AS(solve_scattering(0.1, kZ, 17, kContrast, g), std::invalid_argument);
    CHECK_THROWS_AS(solve_scattering(0.1, kZ, -1, kContrast, g), std::invalid_argument);
}

TEST_CASE("no contrast, no scattering") {
    const auto g = NestedGeometry::equidistant(3);
    const Vec3 d{0.6, 0.0, 0.8};
    const auto sol = solve_scattering(0.3, d, 12, kHomogeneous, g);
    for (int n = 0; n <= 12; ++n) CHECK(std::abs(sol.exterior_coefficient(n)) <= 1e-10);
    for (const Vec3& x : {Vec3{-30.0, 1.0, -40.0}, Vec3{0.1, 0.2, 0.3}, Vec3{2.2, -1.0, 0.4}, Vec3{0.0, 0.0, 0.0}}) {
        const cplx expect = std::exp(kI * 0.3 * (x[0] * d[0] + x[1] * d[1] + x[2] * d[2]));
        CHECK(std::abs(eval_field(sol, x) - expect) <= 1e-9);
    }
    const auto ff = far_field_monopole(sol);
    CHECK(std::abs(ff.amplitude) <= 1e-8);

    // |u| = 1 everywhere, so the norm is the square root of the total shell volume
    double volume = 0.0;
    for (std::size_t j = 1; j <= g.layers(); ++j) volume += model::shell_volume(g, j);
    CHECK(field_l2_norm(sol) == doctest::Approx(std::sqrt(volume)).epsilon(1e-8));
}

TEST_CASE("monopole coefficients do not depend on the incidence direction") {
    const auto g = NestedGeometry::equidistant(2);
    const auto a = solve_scattering(0.02, kZ, 2, kContrast, g);
    const auto b = solve_scattering(0.02, Vec3{1.0, 0.0, 0.0}, 2, kContrast, g);
    for (std::size_t i = 0; i < a.coefficients[0].size(); ++i) CHECK(a.coefficients[0][i] == b.coefficients[0][i]);
}

TEST_CASE("transmission conditions hold across every interface") {
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t layers = 1 + static_cast<std::size_t>(oracle::uniform(0.0, 4.999));
        const NestedGeometry g(oracle::random_radii(layers));
        const double omega = oracle::uniform(0.005, 0.3);
        const auto sol = solve_scattering(omega, kZ, 4, kContrast, g);
        const double delta = sol.params.delta;
        for (int n = 0; n <= 4; ++n) {
            for (std::size_t j = 1; j <= layers; ++j) {
                // Gamma_j^+: host outside, resonator inside
                const double rp = g.outer_radius(j);
                const auto host = radial_function(sol, n, rp, Side::outer);
                const auto res = radial_function(sol, n, rp, Side::inner);
                CHECK(std::abs(host.value - res.value) <= 1e-9 * std::abs(host.value) + 1e-300);
                CHECK(std::abs(delta * host.derivative - res.derivative) <= 1e-9 * std::abs(res.derivative) + 1e-300);
                // Gamma_j^-: resonator outside, host inside
                const double rm = g.inner_radius(j);
                const auto res2 = radial_function(sol, n, rm, Side::outer);
                const auto host2 = radial_function(sol, n, rm, Side::inner);
                CHECK(std::abs(host2.value - res2.value) <= 1e-9 * std::abs(host2.value) + 1e-300);
                CHECK(std::abs(delta * host2.derivative - res2.derivative) <=
                      1e-9 * std::abs(res2.derivative) + 1e-300);
            }
        }
    }
}

TEST_CASE("field is continuous across interfaces") {
    const auto g = NestedGeometry::equidistant(4);
    const auto sol = solve_scattering(first_mode(g), Vec3{0.0, 0.6, 0.8}, 4, kContrast, g);
    const Vec3 dir{0.48, 0.6, 0.64};
    for (double r : g.radii()) {
        const double lo = r * (1.0 - 1e-13), hi = r * (1.0 + 1e-13);
        const cplx a = eval_field(sol, Vec3{lo * dir[0], lo * dir[1], lo * dir[2]});
        const cplx b = eval_field(sol, Vec3{hi * dir[0], hi * dir[1], hi * dir[2]});
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    }
}

TEST_CASE("L2 norm converges in quadrature and in harmonics") {
    const auto g = NestedGeometry::equidistant(4);
    const double w = first_mode(g) * 1.02;
    const auto sol = solve_scattering(w, kZ, 8, kContrast, g);
    CHECK(field_l2_norm(sol, 64) == doctest::Approx(field_l2_norm(sol, 32)).epsilon(1e-10));

    const double n0 = field_l2_norm(solve_scattering(w, kZ, 0, kContrast, g));
    const double n4 = field_l2_norm(solve_scattering(w, kZ, 4, kContrast, g));
    const double n8 = field_l2_norm(sol);
    CHECK(std::abs(n8 - n4) < std::abs(n4 - n0));
}

TEST_CASE("mirror frequency gives the conjugate field") {
    const auto g = NestedGeometry::equidistant(3);
    const auto a = solve_scattering(0.013, kZ, 3, kContrast, g);
    const auto b = solve_scattering(-0.013, kZ, 3, kContrast, g);
    for (const Vec3& x : {Vec3{0.1, 0.2, 2.7}, Vec3{-1.0, 0.5, 0.3}, Vec3{5.0, 0.0, -1.0}, Vec3{0.2, 0.1, 0.1}}) {
        const cplx u = eval_field(a, x);
        CHECK(std::abs(eval_field(b, x) - std::conj(u)) <= 1e-10 * std::abs(u));
    }
}

TEST_CASE("modal prediction") {
    const auto g = NestedGeometry::equidistant(4);
    const auto cs = capacitance::build_system(g);
    const auto asym = capacitance::asymptotic_frequencies(cs, kContrast, g);
    const double w1 = asym[0].real();

    const auto pred = modal_prediction(w1, kContrast, g, cs);
    REQUIRE(pred.modes.size() == 4);
    CHECK(pred.warnings.empty());
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(pred.modes[i].omega_M == doctest::Approx(std::sqrt(cs.lambdas[i] / 6000.0)));
        CHECK(pred.modes[i].gamma > 0.0);
    }

    // at omega = omega_M the denominator reduces to i gamma
    const auto at_resonance = modal_prediction(pred.modes[0].omega_M, kContrast, g, cs);
    const ModeTerm& t = at_resonance.modes[0];
    const double a1 = cs.vectors[0][0];
    CHECK(std::abs(t.weight - (-4.0 * std::numbers::pi * g.outer_radius(1) * a1 / (cs.lambdas[0] * kI * t.gamma))) <= 1e-12 * std::abs(t.weight));

    const auto sol = solve_scattering(w1, kZ, 0, kContrast, g);
    const auto stats = shell_statistics(sol);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(std::abs(pred.shell_values[j] - stats[j].mean) <= 0.15 * std::abs(stats[j].mean));
    }

    // mode 2 changes sign once, between the first and the second shell
    const auto p2 = modal_prediction(asym[1].real(), kContrast, g, cs);
    std::size_t ref = 0;
    for (std::size_t j = 1; j < 4; ++j) {
        if (std::abs(p2.shell_values[j]) > std::abs(p2.shell_values[ref])) ref = j;
    }
    const cplx unit = std::conj(p2.shell_values[ref]) / std::abs(p2.shell_values[ref]);
    std::vector<double> proj;
    for (const cplx& v : p2.shell_values) proj.push_back((v * unit).real());
    CHECK((proj[0] > 0) != (proj[1] > 0));
    CHECK((proj[1] > 0) == (proj[2] > 0));
    CHECK((proj[2] > 0) == (proj[3] > 0));

    CHECK_FALSE(modal_prediction(10.0 * asym[3].real(), kContrast, g, cs).warnings.empty());
}

TEST_CASE("far field") {
    const auto g = NestedGeometry::equidistant(4);
    const auto cs = capacitance::build_system(g);
    const double w = first_mode(g);
    const auto mono = far_field_monopole(solve_scattering(w, kZ, 0, kContrast, g));
    CHECK(mono.direction_variation <= 1e-12);
    CHECK(mono.radius == doctest::Approx(400.0));

    const auto sol = solve_scattering(w, kZ, 4, kContrast, g);
    const auto ff = far_field_monopole(sol);
    CHECK(ff.direction_variation <= 0.05);
    const cplx closed = monopole_closed_form(w, kContrast, g, cs);
    CHECK(std::abs(ff.amplitude - closed) <= 0.2 * std::abs(closed));
    // u^s / G_k of a pure monopole is 4 pi i a_{1,0}^+ / k
    CHECK(std::abs(mono.amplitude - 4.0 * std::numbers::pi * kI * sol.exterior_coefficient(0) / sol.params.k) <=
          1e-10 * std::abs(mono.amplitude));

    CHECK_THROWS_AS(far_field_monopole(sol, 10.0), std::invalid_argument);
    CHECK(std::abs(fundamental_solution(1.0, 2.0) + std::exp(kI * 2.0) / (8.0 * std::numbers::pi)) < 1e-16);
}

TEST_CASE("sweep utilities") {
    const auto grid = uniform_grid(1.0, 2.0, 5);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 1.0);
    CHECK(grid.back() == 2.0);
    CHECK(grid[2] == 1.5);
    CHECK_THROWS_AS(uniform_grid(2.0, 1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(uniform_grid(1.0, 2.0, 1), std::invalid_argument);

    const std::vector<double> v{0.0, 2.0, 1.0, 1.0, 3.0, 0.5, 4.0};
    const auto peaks = local_maxima(v);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0] == 1);
    CHECK(peaks[1] == 4);
}

TEST_CASE("monopole strength peaks near each resonance") {
    const auto g = NestedGeometry::equidistant(2);
    const auto cs = capacitance::build_system(g);
    const auto asym = capacitance::asymptotic_frequencies(cs, kContrast, g);
    for (const cplx& w : asym) {
        const auto grid = uniform_grid(0.97 * w.real(), 1.03 * w.real(), 121);
        const auto pts = sweep(grid, kZ, 0, kContrast, g, 2);
        std::vector<double> mono;
        for (const auto& p : pts) mono.push_back(p.monopole_abs);
        const auto peaks = local_maxima(mono);
        REQUIRE(peaks.size() == 1);
        CHECK(std::abs(grid[peaks[0]] - w.real()) <= 0.02 * w.real());
    }
}

TEST_CASE("sweep results do not depend on the worker count") {
    const auto g = NestedGeometry::equidistant(3);
    const auto grid = uniform_grid(0.005, 0.05, 23);
    const auto a = sweep(grid, kZ, 1, kContrast, g, 1);
    const auto b = sweep(grid, kZ, 1, kContrast, g, 3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a[i].l2_norm == b[i].l2_norm);
        CHECK(a[i].monopole_abs == b[i].monopole_abs);
    }
}
