#pragma once

// Dense complex linear algebra, a symmetric tridiagonal eigensolver and
// Muller's method. Everything here is a pure function of its arguments.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nestres {

using cplx = std::complex<double>;

namespace numerics {

/// Raised when a factorization meets a pivot that is zero to working precision.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an iterative method stops without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    static ComplexMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const cplx> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const cplx> data() const noexcept { return data_; }

    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> x) const;
    [[nodiscard]] bool all_finite() const noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Determinant in logarithmic form: det = exp(log_magnitude) * exp(i * phase).
struct LogDet {
    double log_magnitude = 0.0;
    double phase = 0.0;  // wrapped to (-pi, pi]

    [[nodiscard]] bool singular() const noexcept {
        return log_magnitude == -std::numeric_limits<double>::infinity();
    }
    /// exp(log_magnitude) * e^{i phase}; overflows to inf for huge determinants.
    [[nodiscard]] cplx value() const;
};

/// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

/// exp(a - b) for two log-determinants, with the phase difference carried exactly.
cplx ratio(const LogDet& a, const LogDet& b);

/// LU with partial pivoting after implicit row-max equilibration.
/// An exactly singular input yields log_magnitude = -inf.
LogDet lu_logdet(const ComplexMatrix& m);

/// Solves m x = rhs by row-equilibrated LU with partial pivoting.
/// Throws SingularMatrixError when a pivot vanishes to working precision.
std::vector<cplx> lu_solve(const ComplexMatrix& m, std::span<const cplx> rhs);

struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag;  // size diag.size() - 1

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
    /// Max absolute row sum.
    [[nodiscard]] double norm_inf() const noexcept;
};

struct TridiagEigen {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // vectors[i] pairs with values[i]
};

/// Implicit QL with Wilkinson shift. Each eigenvector is normalized and its
/// largest-magnitude component (first one on ties) is made positive.
TridiagEigen sym_tridiag_eigen(const SymTridiag& t);

struct MullerOptions {
    double rel_step = 1e-3;
    double tol_z = 1e-12;
    double tol_f = 1e-14;  // relative to |f(seed)|, which keeps the iteration scale invariant
    int max_iter = 100;
};

struct MullerResult {
    cplx root;
    int iterations = 0;
    double residual = 0.0;  // |f(root)|
};

using ComplexFunction = std::function<cplx(cplx)>;

/// Muller's method started from seed*(1-h), seed*(1+h), seed with h = rel_step.
/// Throws ConvergenceError on max_iter or on a degenerate parabola.
MullerResult muller_find_root(const ComplexFunction& f, cplx seed, const MullerOptions& opts = {});

/// Calls fn(i) for i in [0, count) on up to `threads` workers. fn must only
/// write to per-index state.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

using LogDetFunction = std::function<LogDet(cplx)>;

struct SeededRoot {
    cplx seed;
    cplx root;
    int iterations = 0;
    double residual = 0.0;  // |det(root)| / |det(seed)|
    bool converged = false;
    bool deflated = false;  // re-solved with previously accepted roots divided out
    std::string error;      // empty when converged
};

struct RootSearchOptions {
    MullerOptions muller;
    double collision_tol = 1e-8;  // roots closer than this are treated as the same root
    unsigned threads = 1;
};

/// One Muller run per seed on g(w) = det(w) / det(seed), evaluated in log form.
/// A root landing within collision_tol of an earlier seed's root is recomputed
/// with g(w) / prod (w - r_m) over the accepted roots r_m; if it still
/// collides the entry is reported as not converged. Results follow seed order
/// and do not depend on the thread count.
std::vector<SeededRoot> find_roots_seeded(const LogDetFunction& logdet, std::span<const cplx> seeds,
                                          const RootSearchOptions& opts = {});

struct QuadratureRule {
    std::vector<double> nodes;    // ascending in (-1, 1)
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_legendre(std::size_t n);

}  // namespace numerics
}  // namespace nestres
