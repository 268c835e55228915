#pragma once

// Run configuration and the four command workflows behind the nestres tool.
//
// Config files are JSON objects:
//   geometry   {"equidistant": N} or {"radii": [r_1^+, r_1^-, ...]}
//   materials  {"delta": x} or {"rho_r", "kappa_r", "rho", "kappa"}
//   sweep      {"omega_min", "omega_max", "steps"}
//   direction  [d1, d2, d3]
//   n_max, threads
//   output     {"path", "summary"}
//   seeds      [[re, im], ...]
//   field      {"omega" | "mode", "grid": "plane" | "line", "extent", "points"}
//   compare    {"deltas": [...], "tolerance", "asymptotic_tolerance"}
// Unknown keys are rejected.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nestres/model.hpp"
#include "nestres/scattering.hpp"
#include "nestres/swe.hpp"

namespace nestres::cli {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kUsageError = 2 };

/// Unset bounds default to 0.5 min Re and 1.5 max Re of the capacitance asymptotics.
struct SweepRange {
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::size_t steps = 400;

    friend bool operator==(const SweepRange&, const SweepRange&) = default;
};

struct FieldSettings {
    std::optional<double> omega;  // takes precedence over mode
    std::size_t mode = 1;         // omega = Re of this capacitance asymptotic
    std::string grid = "plane";   // "plane": (x1, x2, 0); "line": (x1, 0, 0)
    std::optional<double> extent; // half-width, default 1.2 r_1^+
    std::size_t points = 101;     // per axis

    friend bool operator==(const FieldSettings&, const FieldSettings&) = default;
};

struct CompareSettings {
    std::vector<double> deltas{1e-2, 1e-3, 1e-4};
    double tolerance = 1e-8;             // SWE vs DtN, absolute
    double asymptotic_tolerance = 5e-2;  // exact vs asymptotic, relative to |exact|

    friend bool operator==(const CompareSettings&, const CompareSettings&) = default;
};

struct RunConfig {
    std::optional<model::NestedGeometry> geometry;
    model::MaterialParams materials = model::MaterialParams::from_contrast(1.0 / 6000.0);
    std::optional<SweepRange> sweep;
    scattering::Vec3 direction{0.0, 0.0, 1.0};
    std::optional<int> n_max;
    unsigned threads = 0;  // 0: all available cores
    std::optional<std::string> output;
    std::optional<std::string> summary;
    std::vector<cplx> seeds;
    FieldSettings field;
    CompareSettings compare;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    /// Throws ConfigError unless the config can drive a computation.
    void validate() const;
    [[nodiscard]] const model::NestedGeometry& geom() const;
    [[nodiscard]] unsigned worker_count() const;
};

/// Parses a JSON document. Throws ConfigError on syntax errors, unknown keys
/// or values violating the model invariants.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Fully resolved JSON form (explicit radii and materials); parse_config
/// of the result yields an equal RunConfig.
std::string resolved_config(const RunConfig& cfg);

/// "%.17g".
std::string format_double(double x);

std::string spectrum_csv(const swe::ResonanceSpectrum& spec);
std::string spectrum_summary(const RunConfig& cfg, const swe::ResonanceSpectrum& spec);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_field(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nestres::cli
