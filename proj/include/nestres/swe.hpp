#pragma once

// Spherical-wave characterization: the 4N x 4N transmission matrix for one
// harmonic order and the resonance search on its determinant.
//
// Unknowns per shell i, in column order: a_i^+ (outgoing wave in the host just
// outside shell i), b_i^+ and a_i^- (regular and outgoing waves inside shell i),
// b_i^- (regular wave in the host just inside shell i). Rows come in pairs, one
// for Gamma_i^+ and one for Gamma_i^-, each pair holding the trace condition
// and the flux condition divided by k.

#include <string>
#include <vector>

#include "nestres/capacitance.hpp"
#include "nestres/model.hpp"
#include "nestres/numerics.hpp"

namespace nestres::swe {

struct SweMatrix {
    int order = 0;
    cplx omega;
    double delta = 0.0;
    numerics::ComplexMatrix matrix;
};

/// Column of each unknown, shell index 1-based.
inline std::size_t col_a_plus(std::size_t i) { return 4 * (i - 1); }
inline std::size_t col_b_plus(std::size_t i) { return 4 * (i - 1) + 1; }
inline std::size_t col_a_minus(std::size_t i) { return 4 * (i - 1) + 2; }
inline std::size_t col_b_minus(std::size_t i) { return 4 * (i - 1) + 3; }

SweMatrix assemble_A_swe(int n, cplx omega, const model::MaterialParams& m, const model::NestedGeometry& g);

numerics::LogDet logdet_A_swe(cplx omega, const model::MaterialParams& m, const model::NestedGeometry& g);

/// exp(logdet A_(0)(omega) - ref); zero when the factorization is exactly singular.
cplx scaled_det(cplx omega, const numerics::LogDet& ref, const model::MaterialParams& m,
                const model::NestedGeometry& g);

struct ModeRecord {
    cplx asymptotic;       // capacitance seed
    cplx exact;            // Muller root
    double abs_diff = 0.0; // |exact - asymptotic|
    int iterations = 0;
    double residual = 0.0; // |scaled det| at the root
    bool converged = false;
    bool deflated = false;
    std::string error;

    [[nodiscard]] cplx mirrored() const { return -std::conj(exact); }
};

struct ResonanceSpectrum {
    std::vector<ModeRecord> modes;  // ascending in Re exact (seed order when unconverged)
    std::size_t smallest = 0;       // index of the smallest-magnitude root
    double seconds_root_path = 0.0;
    double seconds_capacitance_path = 0.0;
    std::vector<std::string> warnings;

    [[nodiscard]] bool all_converged() const;
    /// seconds_root_path / seconds_capacitance_path.
    [[nodiscard]] double speedup() const;
};

/// One Muller run per capacitance seed on the n = 0 determinant.
ResonanceSpectrum find_resonances_swe(const model::MaterialParams& m, const model::NestedGeometry& g,
                                      const numerics::RootSearchOptions& opts = {});

/// Same search from caller-supplied seeds, skipping the capacitance path.
ResonanceSpectrum find_resonances_swe(const model::MaterialParams& m, const model::NestedGeometry& g,
                                      std::span<const cplx> seeds, const numerics::RootSearchOptions& opts = {});

}  // namespace nestres::swe
