#include "nestres/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

namespace nestres::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Equilibrated working copy: every row divided by its largest modulus.
// Returns false if some row is identically zero.
bool equilibrate(ComplexMatrix& a, std::vector<double>& scale) {
    scale.assign(a.rows(), 1.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double rmax = 0.0;
        for (const auto& v : a.row(i)) rmax = std::max(rmax, std::abs(v));
        if (rmax == 0.0) return false;
        scale[i] = rmax;
        for (auto& v : a.row(i)) v /= rmax;
    }
    return true;
}

// In-place LU with partial pivoting. perm[i] is the original row now at i.
// Returns the number of row swaps, or -1 if an exactly zero pivot column is met.
int factorize(ComplexMatrix& a, std::vector<std::size_t>& perm) {
    const std::size_t n = a.rows();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    int swaps = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) return -1;
        if (p != k) {
            std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(p).begin());
            std::swap(perm[k], perm[p]);
            ++swaps;
        }
        const cplx pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx factor = a(i, k) / pivot;
            a(i, k) = factor;
            if (factor == cplx{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
        }
    }
    return swaps;
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> x) const {
    if (x.size() != cols_) throw std::invalid_argument("ComplexMatrix::apply: size mismatch");
    std::vector<cplx> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx acc{};
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

cplx LogDet::value() const {
    if (singular()) return {};
    return std::polar(std::exp(log_magnitude), phase);
}

double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(angle, two_pi);
    if (w <= -std::numbers::pi) w += two_pi;
    return w;
}

cplx ratio(const LogDet& a, const LogDet& b) {
    if (a.singular()) return {};
    return std::polar(std::exp(a.log_magnitude - b.log_magnitude), wrap_phase(a.phase - b.phase));
}

LogDet lu_logdet(const ComplexMatrix& m) {
    if (!m.square()) throw std::invalid_argument("lu_logdet: matrix is not square");
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    ComplexMatrix a = m;
    std::vector<double> scale;
    if (!equilibrate(a, scale)) return {neg_inf, 0.0};
    std::vector<std::size_t> perm;
    const int swaps = factorize(a, perm);
    if (swaps < 0) return {neg_inf, 0.0};

    double log_mag = 0.0;
    double phase = (swaps % 2 == 1) ? std::numbers::pi : 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        log_mag += std::log(scale[i]) + std::log(std::abs(a(i, i)));
        phase = wrap_phase(phase + std::arg(a(i, i)));
    }
    return {log_mag, phase};
}

std::vector<cplx> lu_solve(const ComplexMatrix& m, std::span<const cplx> rhs) {
    if (!m.square()) throw std::invalid_argument("lu_solve: matrix is not square");
    if (rhs.size() != m.rows()) throw std::invalid_argument("lu_solve: rhs size mismatch");
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    std::vector<double> scale;
    if (!equilibrate(a, scale)) throw SingularMatrixError("lu_solve: zero row");
    // Column scaling leaves the pivot order unchanged and only matters for the
    // singularity test, which would otherwise fire on columns of tiny magnitude.
    std::vector<double> col_scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) col_scale[j] = std::max(col_scale[j], std::abs(a(i, j)));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (col_scale[j] == 0.0) throw SingularMatrixError("lu_solve: zero column");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= col_scale[j];
    }
    std::vector<std::size_t> perm;
    if (factorize(a, perm) < 0) throw SingularMatrixError("lu_solve: zero pivot");
    const double tiny = static_cast<double>(n) * kEps;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(a(i, i)) <= tiny) throw SingularMatrixError("lu_solve: matrix is singular to working precision");
    }

    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm[i]] / scale[perm[i]];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= a(i, j) * x[j];
        x[i] /= a(i, i);
    }
    for (std::size_t j = 0; j < n; ++j) x[j] /= col_scale[j];
    return x;
}

double SymTridiag::norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        double s = std::abs(diag[i]);
        if (i > 0) s += std::abs(offdiag[i - 1]);
        if (i + 1 < diag.size()) s += std::abs(offdiag[i]);
        best = std::max(best, s);
    }
    return best;
}

// EISPACK tql2 (Bowdler, Martin, Reinsch, Wilkinson) specialised to a
// tridiagonal input, so the accumulated transform starts from the identity.
TridiagEigen sym_tridiag_eigen(const SymTridiag& t) {
    const std::size_t n = t.size();
    if (n == 0) return {};
    if (t.offdiag.size() + 1 != n) throw std::invalid_argument("sym_tridiag_eigen: offdiag must have size n-1");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(t.diag.begin(), t.diag.end(), finite) ||
        !std::all_of(t.offdiag.begin(), t.offdiag.end(), finite)) {
        throw std::invalid_argument("sym_tridiag_eigen: non-finite entry");
    }

    std::vector<double> d = t.diag;
    std::vector<double> e(n, 0.0);
    std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
    // z[k][j]: component k of eigenvector j
    std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) z[i][i] = 1.0;

    double f = 0.0;
    double tst1 = 0.0;
    const std::size_t max_sweeps = 30 * n + 30;
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > kEps * tst1) ++m;

        if (m > l) {
            std::size_t iter = 0;
            do {
                if (++iter > max_sweeps) throw ConvergenceError("sym_tridiag_eigen: QL iteration did not converge");
                // Shift from the leading 2x2 block.
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (std::size_t k = 0; k < n; ++k) {
                        h = z[k][i + 1];
                        z[k][i + 1] = s * z[k][i] + c * h;
                        z[k][i] = c * z[k][i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > kEps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    TridiagEigen out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t j : order) {
        std::vector<double> v(n);
        double norm = 0.0;
        std::size_t lead = 0;
        for (std::size_t k = 0; k < n; ++k) {
            v[k] = z[k][j];
            norm += v[k] * v[k];
            if (std::abs(v[k]) > std::abs(v[lead])) lead = k;
        }
        norm = std::sqrt(norm);
        const double sign = v[lead] < 0 ? -1.0 : 1.0;
        for (auto& x : v) x *= sign / norm;
        out.values.push_back(d[j]);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

MullerResult muller_find_root(const ComplexFunction& f, cplx seed, const MullerOptions& opts) {
    auto eval = [&](cplx z) {
        const cplx v = f(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw ConvergenceError("muller_find_root: non-finite function value");
        }
        return v;
    };

    cplx x0 = seed * (1.0 - opts.rel_step);
    cplx x1 = seed * (1.0 + opts.rel_step);
    cplx x2 = seed;
    cplx f0 = eval(x0), f1 = eval(x1), f2 = eval(x2);
    const double f_seed = std::abs(f2);
    if (f_seed == 0.0) return {x2, 0, 0.0};
    const double f_stop = opts.tol_f * f_seed;

    for (int it = 1; it <= opts.max_iter; ++it) {
        const cplx h1 = x1 - x0;
        const cplx h2 = x2 - x1;
        if (h1 == cplx{} || h2 == cplx{} || h1 + h2 == cplx{}) {
            throw ConvergenceError("muller_find_root: coincident iterates");
        }
        const cplx d1 = (f1 - f0) / h1;
        const cplx d2 = (f2 - f1) / h2;
        const cplx a = (d2 - d1) / (h2 + h1);
        const cplx b = a * h2 + d2;
        const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
        // Larger denominator picks the parabola root nearer x2.
        const cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
        if (den == cplx{}) throw ConvergenceError("muller_find_root: degenerate parabola");
        const cplx dx = -2.0 * f2 / den;
        const cplx x3 = x2 + dx;
        const cplx f3 = eval(x3);

        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f3;

        if (std::abs(dx) <= opts.tol_z * std::max(1.0, std::abs(x3)) || std::abs(f3) <= f_stop) {
            return {x3, it, std::abs(f3)};
        }
    }
    throw ConvergenceError("muller_find_root: maximum iterations exceeded");
}

}  // namespace nestres::numerics

namespace nestres::numerics {

namespace {

SeededRoot solve_one(const LogDetFunction& logdet, cplx seed, std::span<const cplx> deflate,
                     const MullerOptions& opts) {
    SeededRoot out;
    out.seed = seed;
    out.deflated = !deflate.empty();
    try {
        const LogDet ref = logdet(seed);
        if (ref.singular()) {
            out.root = seed;
            out.converged = true;
            return out;
        }
        auto g = [&](cplx w) {
            cplx v = ratio(logdet(w), ref);
            for (const cplx& r : deflate) v /= (w - r) / (seed - r);
            return v;
        };
        const MullerResult res = muller_find_root(g, seed, opts);
        out.root = res.root;
        out.iterations = res.iterations;
        out.residual = std::abs(ratio(logdet(res.root), ref));
        out.converged = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<SeededRoot> find_roots_seeded(const LogDetFunction& logdet, std::span<const cplx> seeds,
                                          const RootSearchOptions& opts) {
    std::vector<SeededRoot> roots(seeds.size());
    parallel_for(seeds.size(), opts.threads,
                 [&](std::size_t i) { roots[i] = solve_one(logdet, seeds[i], {}, opts.muller); });

    std::vector<cplx> accepted;
    for (auto& r : roots) {
        if (!r.converged) continue;
        auto collides = [&](cplx z) {
            return std::any_of(accepted.begin(), accepted.end(),
                               [&](cplx a) { return std::abs(a - z) < opts.collision_tol; });
        };
        if (collides(r.root)) {
            r = solve_one(logdet, r.seed, accepted, opts.muller);
            if (r.converged && collides(r.root)) {
                r.converged = false;
                r.error = "root collides with another mode after deflation";
            }
        }
        if (r.converged) accepted.push_back(r.root);
    }
    return roots;
}

QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
    SymTridiag jacobi;
    jacobi.diag.assign(n, 0.0);
    jacobi.offdiag.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        jacobi.offdiag[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    const TridiagEigen eig = sym_tridiag_eigen(jacobi);
    QuadratureRule rule;
    rule.nodes = eig.values;
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) rule.weights[i] = 2.0 * eig.vectors[i][0] * eig.vectors[i][0];
    return rule;
}

}  // namespace nestres::numerics
