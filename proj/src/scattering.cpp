#include "nestres/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nestres/special.hpp"
#include "nestres/swe.hpp"

namespace nestres::scattering {

using model::NestedGeometry;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double legendre(int n, double x) {
    return std::legendre(static_cast<unsigned>(n), std::clamp(x, -1.0, 1.0));
}

// 0: exterior, 2j-1: shell j, 2j: host region inside shell j (the core for j = N).
std::size_t region_of(const NestedGeometry& g, double r, Side side) {
    std::size_t idx = 0;
    for (double b : g.radii()) {
        if (r < b || (r == b && side == Side::inner)) ++idx;
    }
    return idx;
}

RadialSample combine(cplx alpha, int n, bool hankel_too, cplx beta, cplx k, double r) {
    const auto j = special::sph_bessel_j(n, k * r);
    RadialSample s{alpha * j.value, alpha * k * j.derivative};
    if (hankel_too) {
        const auto h = special::sph_hankel1(n, k * r);
        s.value += beta * h.value;
        s.derivative += beta * k * h.derivative;
    }
    return s;
}

}  // namespace

cplx plane_wave_coefficient(int n) {
    static const cplx powers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return powers[n % 4] * static_cast<double>(2 * n + 1);
}

ScatteringSolution solve_scattering(double omega_in, const Vec3& d, int n_max, const model::MaterialParams& m,
                                    const NestedGeometry& g) {
    if (omega_in == 0.0 || !std::isfinite(omega_in)) throw std::invalid_argument("solve_scattering: omega must be nonzero");
    if (std::abs(std::sqrt(dot(d, d)) - 1.0) > 1e-9) throw std::invalid_argument("solve_scattering: |d| must be 1");
    if (n_max < 0 || n_max > special::kMaxOrder) throw std::invalid_argument("solve_scattering: n_max out of range");

    ScatteringSolution sol{omega_in, d, n_max, m, g, model::derived(m, omega_in), {}, {}};
    const std::size_t size = 4 * g.layers();
    const double r1 = g.outer_radius(1);
    for (int n = 0; n <= n_max; ++n) {
        const numerics::ComplexMatrix a = swe::assemble_A_swe(n, omega_in, m, g).matrix;
        const cplx c = plane_wave_coefficient(n);
        const auto jn = special::sph_bessel_j(n, sol.params.k * r1);
        std::vector<cplx> rhs(size);
        rhs[0] = c * jn.value;
        rhs[1] = sol.params.delta * c * jn.derivative;
        std::vector<cplx> x = numerics::lu_solve(a, rhs);

        const std::vector<cplx> ax = a.apply(x);
        double res = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            res = std::max(res, std::abs(ax[i] - rhs[i]));
            scale = std::max(scale, std::abs(rhs[i]));
        }
        sol.relative_residual.push_back(scale > 0.0 ? res / scale : res);
        sol.coefficients.push_back(std::move(x));
    }
    return sol;
}

RadialSample radial_function(const ScatteringSolution& sol, int n, double r, Side side) {
    const NestedGeometry& g = sol.geometry;
    const std::size_t layers = g.layers();
    const auto& x = sol.coefficients.at(n);
    const cplx k = sol.params.k;
    const cplx k_r = sol.params.k_r;
    const std::size_t idx = region_of(g, r, side);
    if (idx == 0) return combine(plane_wave_coefficient(n), n, true, x[swe::col_a_plus(1)], k, r);
    if (idx % 2 == 1) {
        const std::size_t j = (idx + 1) / 2;
        return combine(x[swe::col_b_plus(j)], n, true, x[swe::col_a_minus(j)], k_r, r);
    }
    const std::size_t j = idx / 2;
    if (j == layers) {
        if (r == 0.0) {
            const cplx v = (n == 0) ? x[swe::col_b_minus(j)] : cplx{};
            return {v, 0.0};
        }
        return combine(x[swe::col_b_minus(j)], n, false, 0.0, k, r);
    }
    return combine(x[swe::col_b_minus(j)], n, true, x[swe::col_a_plus(j + 1)], k, r);
}

cplx eval_field(const ScatteringSolution& sol, const Vec3& x) {
    const double r = std::sqrt(dot(x, x));
    const double cos_theta = r > 0.0 ? dot(x, sol.direction) / r : 1.0;
    const bool exterior = region_of(sol.geometry, r, Side::inner) == 0;
    cplx u = exterior ? std::exp(kI * sol.params.k * dot(x, sol.direction)) : cplx{};
    for (int n = 0; n <= sol.n_max; ++n) {
        cplx radial;
        if (exterior) {
            radial = sol.exterior_coefficient(n) * special::sph_hankel1(n, sol.params.k * r).value;
        } else {
            radial = radial_function(sol, n, r).value;
        }
        u += radial * legendre(n, cos_theta);
    }
    return u;
}

std::vector<cplx> eval_field(const ScatteringSolution& sol, std::span<const Vec3> points) {
    std::vector<cplx> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(eval_field(sol, p));
    return out;
}

double field_l2_norm(const ScatteringSolution& sol, std::size_t nodes) {
    const numerics::QuadratureRule rule = numerics::gauss_legendre(nodes);
    const NestedGeometry& g = sol.geometry;
    double total = 0.0;
    for (int n = 0; n <= sol.n_max; ++n) {
        double harmonic = 0.0;
        for (std::size_t j = 1; j <= g.layers(); ++j) {
            const double lo = g.inner_radius(j);
            const double hi = g.outer_radius(j);
            const double half = 0.5 * (hi - lo);
            const double mid = 0.5 * (hi + lo);
            for (std::size_t q = 0; q < nodes; ++q) {
                const double r = mid + half * rule.nodes[q];
                harmonic += half * rule.weights[q] * std::norm(radial_function(sol, n, r).value) * r * r;
            }
        }
        total += 4.0 * kPi / (2.0 * n + 1.0) * harmonic;
    }
    return std::sqrt(total);
}

ModalPrediction modal_prediction(double omega, const model::MaterialParams& m, const NestedGeometry& g,
                                 const capacitance::CapacitanceSystem& cs) {
    const model::DerivedParams p = model::derived(m, omega);
    const double r1 = g.outer_radius(1);
    ModalPrediction out;
    out.omega = omega;
    out.shell_values.assign(g.layers(), 0.0);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const double lambda = cs.lambdas[i];
        const double a1 = cs.vectors[i][0];
        ModeTerm t;
        t.omega_M = std::sqrt(p.delta * lambda) * p.v_r;
        t.gamma = 4.0 * kPi * r1 * r1 * omega * a1 * a1 / (lambda * p.v);
        t.shape = cs.vectors[i];
        const double ratio = omega / t.omega_M;
        t.weight = -4.0 * kPi * r1 * a1 / (lambda * (ratio * ratio - 1.0 + kI * t.gamma));
        for (std::size_t j = 0; j < g.layers(); ++j) out.shell_values[j] += t.weight * t.shape[j];
        out.modes.push_back(std::move(t));
    }
    if (!out.modes.empty()) {
        const double top = out.modes.back().omega_M;
        if (std::abs(omega) > 2.0 * top || p.delta >= 0.1) {
            out.warnings.push_back("frequency or contrast outside the regime where the modal prediction applies");
        }
    }
    return out;
}

cplx fundamental_solution(cplx k, double r) { return -std::exp(kI * k * r) / (4.0 * kPi * r); }

FarField far_field_monopole(const ScatteringSolution& sol, double radius_factor) {
    if (radius_factor < 50.0) throw std::invalid_argument("far_field_monopole: radius must be at least 50 r_1^+");
    const double radius = radius_factor * sol.geometry.outer_radius(1);
    const cplx k = sol.params.k;
    std::vector<cplx> hankel(sol.n_max + 1);
    for (int n = 0; n <= sol.n_max; ++n) hankel[n] = special::sph_hankel1(n, k * radius).value;
    const cplx green = fundamental_solution(k, radius);

    std::vector<cplx> ratios;
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            for (int c = -1; c <= 1; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                const double len = std::sqrt(static_cast<double>(a * a + b * b + c * c));
                const Vec3 dir{a / len, b / len, c / len};
                const double cos_theta = dot(dir, sol.direction);
                cplx us{};
                for (int n = 0; n <= sol.n_max; ++n) us += sol.exterior_coefficient(n) * hankel[n] * legendre(n, cos_theta);
                ratios.push_back(us / green);
            }
        }
    }
    FarField ff;
    ff.radius = radius;
    for (const cplx& r : ratios) ff.amplitude += r;
    ff.amplitude /= static_cast<double>(ratios.size());
    const double mag = std::abs(ff.amplitude);
    for (const cplx& r : ratios) {
        const double dev = std::abs(r - ff.amplitude);
        ff.direction_variation = std::max(ff.direction_variation, mag > 0.0 ? dev / mag : dev);
    }
    return ff;
}

cplx monopole_closed_form(double omega, const model::MaterialParams& m, const NestedGeometry& g,
                          const capacitance::CapacitanceSystem& cs) {
    const ModalPrediction pred = modal_prediction(omega, m, g, cs);
    const double r1 = g.outer_radius(1);
    cplx sum{};
    for (std::size_t i = 0; i < pred.modes.size(); ++i) {
        const ModeTerm& t = pred.modes[i];
        const double a1 = t.shape[0];
        const double ratio = omega / t.omega_M;
        sum += a1 * a1 / (cs.lambdas[i] * (ratio * ratio - 1.0 + kI * t.gamma));
    }
    return 16.0 * kPi * kPi * r1 * r1 * sum;
}

std::vector<double> uniform_grid(double omega_min, double omega_max, std::size_t steps) {
    if (!(omega_min < omega_max) || !std::isfinite(omega_min) || !std::isfinite(omega_max)) {
        throw std::invalid_argument("sweep range must satisfy omega_min < omega_max");
    }
    if (steps < 2) throw std::invalid_argument("sweep needs at least two steps");
    std::vector<double> grid(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        grid[i] = omega_min + t * (omega_max - omega_min);
    }
    return grid;
}

std::vector<SweepPoint> sweep(std::span<const double> omegas, const Vec3& d, int n_max,
                              const model::MaterialParams& m, const NestedGeometry& g, unsigned threads) {
    std::vector<SweepPoint> out(omegas.size());
    numerics::parallel_for(omegas.size(), threads, [&](std::size_t i) {
        const ScatteringSolution sol = solve_scattering(omegas[i], d, n_max, m, g);
        out[i] = {omegas[i], field_l2_norm(sol), std::abs(sol.exterior_coefficient(0))};
    });
    return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> values) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        if (values[i] > values[i - 1] && values[i] > values[i + 1]) peaks.push_back(i);
    }
    return peaks;
}

std::vector<ShellStats> shell_statistics(const ScatteringSolution& sol, std::size_t samples) {
    if (samples == 0) throw std::invalid_argument("shell_statistics: need at least one sample");
    const NestedGeometry& g = sol.geometry;
    std::vector<ShellStats> stats(g.layers());
    for (std::size_t j = 1; j <= g.layers(); ++j) {
        const double lo = g.inner_radius(j);
        const double width = g.outer_radius(j) - lo;
        std::vector<cplx> u(samples);
        for (std::size_t s = 0; s < samples; ++s) {
            const double r = lo + width * (static_cast<double>(s) + 0.5) / static_cast<double>(samples);
            u[s] = eval_field(sol, Vec3{r * sol.direction[0], r * sol.direction[1], r * sol.direction[2]});
        }
        ShellStats& st = stats[j - 1];
        const double count = static_cast<double>(samples);
        for (const cplx& v : u) {
            st.mean += v;
            st.mean_re += v.real();
            st.mean_abs += std::abs(v);
        }
        st.mean /= count;
        st.mean_re /= count;
        st.mean_abs /= count;
        double var_re = 0.0;
        double var_abs = 0.0;
        for (const cplx& v : u) {
            var_re += (v.real() - st.mean_re) * (v.real() - st.mean_re);
            var_abs += (std::abs(v) - st.mean_abs) * (std::abs(v) - st.mean_abs);
        }
        st.std_re = std::sqrt(var_re / count);
        st.cv_abs = st.mean_abs > 0.0 ? std::sqrt(var_abs / count) / st.mean_abs : 0.0;
    }
    std::size_t ref = 0;
    for (std::size_t j = 1; j < stats.size(); ++j) {
        if (std::abs(stats[j].mean) > std::abs(stats[ref].mean)) ref = j;
    }
    const cplx unit = std::abs(stats[ref].mean) > 0.0 ? std::conj(stats[ref].mean) / std::abs(stats[ref].mean) : 1.0;
    for (auto& st : stats) st.aligned = (st.mean * unit).real();
    return stats;
}

int sign_changes(std::span<const ShellStats> stats) {
    int changes = 0;
    for (std::size_t j = 1; j < stats.size(); ++j) {
        if ((stats[j].aligned > 0.0) != (stats[j - 1].aligned > 0.0)) ++changes;
    }
    return changes;
}

}  // namespace nestres::scattering
