#include "nestres/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nestres/capacitance.hpp"
#include "nestres/dtn.hpp"
#include "nestres/special.hpp"

namespace nestres::cli {

using json = nlohmann::json;
using model::MaterialParams;
using model::NestedGeometry;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

const json& require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    return j;
}

template <typename T>
T get_as(const json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("wrong type for " + where);
    }
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + " must be a number");
    return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(where + " must be a non-negative integer");
    return j.get<std::size_t>();
}

NestedGeometry parse_geometry(const json& j) {
    require_object(j, "geometry");
    reject_unknown(j, {"equidistant", "radii"}, "geometry");
    if (j.contains("equidistant") == j.contains("radii")) {
        throw ConfigError("geometry needs exactly one of 'equidistant' or 'radii'");
    }
    try {
        if (j.contains("equidistant")) return NestedGeometry::equidistant(get_count(j["equidistant"], "geometry.equidistant"));
        return NestedGeometry(get_as<std::vector<double>>(j["radii"], "geometry.radii"));
    } catch (const model::ModelError& e) {
        throw ConfigError(std::string("invalid geometry: ") + e.what());
    }
}

MaterialParams parse_materials(const json& j) {
    require_object(j, "materials");
    reject_unknown(j, {"delta", "rho_r", "kappa_r", "rho", "kappa"}, "materials");
    try {
        if (j.contains("delta")) {
            if (j.size() != 1) throw ConfigError("materials: 'delta' cannot be combined with explicit constants");
            return MaterialParams::from_contrast(get_number(j["delta"], "materials.delta"));
        }
        MaterialParams m;
        for (const char* key : {"rho_r", "kappa_r", "rho", "kappa"}) {
            if (!j.contains(key)) throw ConfigError(std::string("materials: missing '") + key + "'");
        }
        m.rho_r = get_number(j["rho_r"], "materials.rho_r");
        m.kappa_r = get_number(j["kappa_r"], "materials.kappa_r");
        m.rho = get_number(j["rho"], "materials.rho");
        m.kappa = get_number(j["kappa"], "materials.kappa");
        m.validate();
        return m;
    } catch (const model::ModelError& e) {
        throw ConfigError(std::string("invalid materials: ") + e.what());
    }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file " + path);
    return f;
}

// Writes `text` to the configured path, or to `fallback` without one.
void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& fallback) {
    if (path) {
        auto f = open_output(*path);
        f << text;
    } else {
        fallback << text;
    }
}

std::optional<std::string> sibling_path(const RunConfig& cfg, const std::string& suffix) {
    if (cfg.summary) return cfg.summary;
    if (!cfg.output) return std::nullopt;
    std::filesystem::path p(*cfg.output);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const model::ModelError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

numerics::RootSearchOptions root_options(const RunConfig& cfg) {
    numerics::RootSearchOptions opts;
    opts.threads = cfg.worker_count();
    return opts;
}

std::vector<cplx> seeds_for(const RunConfig& cfg, const MaterialParams& m) {
    if (!cfg.seeds.empty()) {
        if (cfg.seeds.size() != cfg.geom().layers()) throw ConfigError("seed override needs one seed per layer");
        return cfg.seeds;
    }
    const auto cs = capacitance::build_system(cfg.geom());
    return capacitance::asymptotic_frequencies(cs, m, cfg.geom());
}

// Host and resonator speeds are kept while the densities and moduli of the
// host are scaled to reach contrast delta.
MaterialParams with_contrast(const MaterialParams& m, double delta) {
    MaterialParams out = m;
    out.rho = m.rho_r / delta;
    out.kappa = out.rho * (m.kappa / m.rho);
    out.validate();
    return out;
}

}  // namespace

void RunConfig::validate() const {
    if (!geometry) throw ConfigError("config has no geometry");
    try {
        materials.validate();
    } catch (const model::ModelError& e) {
        throw ConfigError(e.what());
    }
    const double norm = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] + direction[2] * direction[2]);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ConfigError("direction must be a nonzero vector");
    if (std::abs(norm - 1.0) > 1e-9) throw ConfigError("direction must have unit length");
    if (n_max && (*n_max < 0 || *n_max > special::kMaxOrder)) throw ConfigError("n_max must lie in [0, 16]");
    if (sweep) {
        for (const auto& w : {sweep->omega_min, sweep->omega_max}) {
            if (w && (!(*w > 0.0) || !std::isfinite(*w))) throw ConfigError("sweep bounds must be positive");
        }
        if (sweep->omega_min && sweep->omega_max && !(*sweep->omega_min < *sweep->omega_max)) {
            throw ConfigError("sweep needs omega_min < omega_max");
        }
        if (sweep->steps < 3) throw ConfigError("sweep needs at least 3 steps");
    }
    if (field.grid != "plane" && field.grid != "line") throw ConfigError("field.grid must be 'plane' or 'line'");
    if (field.points < 2) throw ConfigError("field.points must be at least 2");
    if (field.mode < 1 || field.mode > geometry->layers()) throw ConfigError("field.mode out of range");
    if (field.omega && !(*field.omega > 0.0)) throw ConfigError("field.omega must be positive");
    if (field.extent && !(*field.extent > 0.0)) throw ConfigError("field.extent must be positive");
    if (compare.deltas.size() == 1) throw ConfigError("compare.deltas needs at least two values for a slope");
    for (double d : compare.deltas) {
        if (!(d > 0.0 && d < 1.0)) throw ConfigError("compare.deltas must lie in (0, 1)");
    }
    if (!(compare.tolerance > 0.0) || !(compare.asymptotic_tolerance > 0.0)) {
        throw ConfigError("compare tolerances must be positive");
    }
}

unsigned RunConfig::worker_count() const {
    return threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
}

const NestedGeometry& RunConfig::geom() const {
    if (!geometry) throw ConfigError("config has no geometry");
    return *geometry;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    require_object(j, "config");
    reject_unknown(j, {"geometry", "materials", "sweep", "direction", "n_max", "threads", "output", "seeds", "field",
                       "compare"},
                   "config");
    RunConfig cfg;
    if (j.contains("geometry")) cfg.geometry = parse_geometry(j["geometry"]);
    if (j.contains("materials")) cfg.materials = parse_materials(j["materials"]);
    if (j.contains("sweep")) {
        const json& s = require_object(j["sweep"], "sweep");
        reject_unknown(s, {"omega_min", "omega_max", "steps"}, "sweep");
        SweepRange r;
        if (s.contains("omega_min")) r.omega_min = get_number(s["omega_min"], "sweep.omega_min");
        if (s.contains("omega_max")) r.omega_max = get_number(s["omega_max"], "sweep.omega_max");
        if (s.contains("steps")) r.steps = get_count(s["steps"], "sweep.steps");
        cfg.sweep = r;
    }
    if (j.contains("direction")) {
        const auto d = get_as<std::vector<double>>(j["direction"], "direction");
        if (d.size() != 3) throw ConfigError("direction must have three components");
        cfg.direction = {d[0], d[1], d[2]};
    }
    if (j.contains("n_max")) cfg.n_max = static_cast<int>(get_count(j["n_max"], "n_max"));
    if (j.contains("threads")) cfg.threads = static_cast<unsigned>(get_count(j["threads"], "threads"));
    if (j.contains("output")) {
        const json& o = require_object(j["output"], "output");
        reject_unknown(o, {"path", "summary"}, "output");
        if (o.contains("path")) cfg.output = get_as<std::string>(o["path"], "output.path");
        if (o.contains("summary")) cfg.summary = get_as<std::string>(o["summary"], "output.summary");
    }
    if (j.contains("seeds")) {
        for (const auto& s : get_as<std::vector<std::vector<double>>>(j["seeds"], "seeds")) {
            if (s.size() != 2) throw ConfigError("each seed must be [re, im]");
            cfg.seeds.emplace_back(s[0], s[1]);
        }
    }
    if (j.contains("field")) {
        const json& f = require_object(j["field"], "field");
        reject_unknown(f, {"omega", "mode", "grid", "extent", "points"}, "field");
        if (f.contains("omega")) cfg.field.omega = get_number(f["omega"], "field.omega");
        if (f.contains("mode")) cfg.field.mode = get_count(f["mode"], "field.mode");
        if (f.contains("grid")) cfg.field.grid = get_as<std::string>(f["grid"], "field.grid");
        if (f.contains("extent")) cfg.field.extent = get_number(f["extent"], "field.extent");
        if (f.contains("points")) cfg.field.points = get_count(f["points"], "field.points");
    }
    if (j.contains("compare")) {
        const json& c = require_object(j["compare"], "compare");
        reject_unknown(c, {"deltas", "tolerance", "asymptotic_tolerance"}, "compare");
        if (c.contains("deltas")) cfg.compare.deltas = get_as<std::vector<double>>(c["deltas"], "compare.deltas");
        if (c.contains("tolerance")) cfg.compare.tolerance = get_number(c["tolerance"], "compare.tolerance");
        if (c.contains("asymptotic_tolerance")) {
            cfg.compare.asymptotic_tolerance = get_number(c["asymptotic_tolerance"], "compare.asymptotic_tolerance");
        }
    }
    if (cfg.geometry) cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::ostringstream text;
    text << f.rdbuf();
    return parse_config(text.str());
}

namespace {

json resolved_json(const RunConfig& cfg) {
    json j;
    if (cfg.geometry) {
        const auto r = cfg.geometry->radii();
        j["geometry"] = {{"radii", std::vector<double>(r.begin(), r.end())}};
    }
    const MaterialParams& m = cfg.materials;
    j["materials"] = {{"rho_r", m.rho_r}, {"kappa_r", m.kappa_r}, {"rho", m.rho}, {"kappa", m.kappa}};
    if (cfg.sweep) {
        json s = {{"steps", cfg.sweep->steps}};
        if (cfg.sweep->omega_min) s["omega_min"] = *cfg.sweep->omega_min;
        if (cfg.sweep->omega_max) s["omega_max"] = *cfg.sweep->omega_max;
        j["sweep"] = s;
    }
    j["direction"] = {cfg.direction[0], cfg.direction[1], cfg.direction[2]};
    if (cfg.n_max) j["n_max"] = *cfg.n_max;
    j["threads"] = cfg.threads;
    if (cfg.output || cfg.summary) {
        json o = json::object();
        if (cfg.output) o["path"] = *cfg.output;
        if (cfg.summary) o["summary"] = *cfg.summary;
        j["output"] = o;
    }
    if (!cfg.seeds.empty()) {
        json s = json::array();
        for (const cplx& z : cfg.seeds) s.push_back(complex_json(z));
        j["seeds"] = s;
    }
    json f = {{"mode", cfg.field.mode}, {"grid", cfg.field.grid}, {"points", cfg.field.points}};
    if (cfg.field.omega) f["omega"] = *cfg.field.omega;
    if (cfg.field.extent) f["extent"] = *cfg.field.extent;
    j["field"] = f;
    j["compare"] = {{"deltas", cfg.compare.deltas},
                    {"tolerance", cfg.compare.tolerance},
                    {"asymptotic_tolerance", cfg.compare.asymptotic_tolerance}};
    return j;
}

}  // namespace

std::string resolved_config(const RunConfig& cfg) { return resolved_json(cfg).dump(2) + "\n"; }

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string spectrum_csv(const swe::ResonanceSpectrum& spec) {
    std::ostringstream s;
    s << "mode,re_asym,im_asym,re_exact,im_exact,abs_diff,muller_iters,converged\n";
    for (std::size_t i = 0; i < spec.modes.size(); ++i) {
        const auto& r = spec.modes[i];
        s << i + 1 << ',' << format_double(r.asymptotic.real()) << ',' << format_double(r.asymptotic.imag()) << ','
          << format_double(r.exact.real()) << ',' << format_double(r.exact.imag()) << ',' << format_double(r.abs_diff)
          << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
    }
    return s.str();
}

std::string spectrum_summary(const RunConfig& cfg, const swe::ResonanceSpectrum& spec) {
    json j;
    j["layers"] = cfg.geom().layers();
    j["delta"] = model::derived(cfg.materials, 0.0).delta;
    j["modes"] = spec.modes.size();
    j["all_converged"] = spec.all_converged();
    j["smallest_mode"] = spec.smallest + 1;
    json failed = json::array();
    json mirrored = json::array();
    for (std::size_t i = 0; i < spec.modes.size(); ++i) {
        if (!spec.modes[i].converged) failed.push_back({{"mode", i + 1}, {"error", spec.modes[i].error}});
        mirrored.push_back(complex_json(spec.modes[i].mirrored()));
    }
    j["failed_modes"] = failed;
    j["mirrored_roots"] = mirrored;
    j["seconds_root_path"] = spec.seconds_root_path;
    j["seconds_capacitance_path"] = spec.seconds_capacitance_path;
    j["speedup"] = spec.speedup();
    j["warnings"] = spec.warnings;
    j["config"] = resolved_json(cfg);
    return j.dump(2) + "\n";
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return run_guarded(
        [&] {
            cfg.validate();
            swe::ResonanceSpectrum spec;
            if (cfg.seeds.empty()) {
                spec = swe::find_resonances_swe(cfg.materials, cfg.geom(), root_options(cfg));
            } else {
                spec = swe::find_resonances_swe(cfg.materials, cfg.geom(), seeds_for(cfg, cfg.materials),
                                                root_options(cfg));
            }
            for (const auto& w : spec.warnings) err << "warning: " << w << '\n';
            emit(cfg.output, spectrum_csv(spec), out);
            emit(sibling_path(cfg, ".json"), spectrum_summary(cfg, spec), cfg.output ? out : err);
            if (!spec.all_converged()) {
                err << "numerical failure: some modes did not converge\n";
                return static_cast<int>(kNumericalFailure);
            }
            return static_cast<int>(kSuccess);
        },
        err);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return run_guarded(
        [&] {
            cfg.validate();
            const NestedGeometry& g = cfg.geom();
            const auto cs = capacitance::build_system(g);
            const auto asym = capacitance::asymptotic_frequencies(cs, cfg.materials, g);
            const SweepRange range = cfg.sweep.value_or(SweepRange{});
            const double lo = range.omega_min.value_or(0.5 * asym.front().real());
            const double hi = range.omega_max.value_or(1.5 * asym.back().real());
            if (!(lo < hi)) throw ConfigError("sweep needs omega_min < omega_max");
            const int n_max = cfg.n_max.value_or(0);
            const auto grid = scattering::uniform_grid(lo, hi, range.steps);
            const auto points = scattering::sweep(grid, cfg.direction, n_max, cfg.materials, g, cfg.worker_count());
            std::vector<double> markers;
            for (const cplx& w : asym) markers.push_back(w.real());
            const auto marks = scattering::sweep(markers, cfg.direction, n_max, cfg.materials, g, cfg.worker_count());

            std::ostringstream s;
            s << "omega_in,l2_norm,monopole_coeff_abs,kind\n";
            for (const auto& p : points) {
                s << format_double(p.omega) << ',' << format_double(p.l2_norm) << ','
                  << format_double(p.monopole_abs) << ",sample\n";
            }
            for (std::size_t i = 0; i < marks.size(); ++i) {
                s << format_double(marks[i].omega) << ',' << format_double(marks[i].l2_norm) << ','
                  << format_double(marks[i].monopole_abs) << ",resonance_" << i + 1 << '\n';
            }
            emit(cfg.output, s.str(), out);

            std::vector<double> norms;
            for (const auto& p : points) norms.push_back(p.l2_norm);
            const auto peaks = scattering::local_maxima(norms);
            err << "detected " << peaks.size() << " local maxima for " << g.layers() << " layers\n";
            return static_cast<int>(kSuccess);
        },
        err);
}

int cmd_field(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return run_guarded(
        [&] {
            cfg.validate();
            const NestedGeometry& g = cfg.geom();
            double omega = 0.0;
            if (cfg.field.omega) {
                omega = *cfg.field.omega;
            } else {
                const auto cs = capacitance::build_system(g);
                omega = capacitance::asymptotic_frequencies(cs, cfg.materials, g).at(cfg.field.mode - 1).real();
            }
            const auto sol = scattering::solve_scattering(omega, cfg.direction, cfg.n_max.value_or(4), cfg.materials, g);
            const double extent = cfg.field.extent.value_or(1.2 * g.outer_radius(1));
            const std::size_t m = cfg.field.points;
            auto coord = [&](std::size_t i) {
                return -extent + 2.0 * extent * static_cast<double>(i) / static_cast<double>(m - 1);
            };
            std::vector<scattering::Vec3> pts;
            if (cfg.field.grid == "line") {
                for (std::size_t i = 0; i < m; ++i) pts.push_back({coord(i), 0.0, 0.0});
            } else {
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t k = 0; k < m; ++k) pts.push_back({coord(i), coord(k), 0.0});
                }
            }
            const auto values = scattering::eval_field(sol, pts);
            std::ostringstream s;
            s << "x1,x2,x3,re_u,im_u\n";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                s << format_double(pts[i][0]) << ',' << format_double(pts[i][1]) << ',' << format_double(pts[i][2])
                  << ',' << format_double(values[i].real()) << ',' << format_double(values[i].imag()) << '\n';
            }
            emit(cfg.output, s.str(), out);

            const auto stats = scattering::shell_statistics(sol);
            std::ostringstream t;
            t << "shell,r_outer,r_inner,mean_re_u,std_re_u,mean_abs_u,cv_abs_u,aligned_mean\n";
            for (std::size_t j = 0; j < stats.size(); ++j) {
                t << j + 1 << ',' << format_double(g.outer_radius(j + 1)) << ',' << format_double(g.inner_radius(j + 1))
                  << ',' << format_double(stats[j].mean_re) << ',' << format_double(stats[j].std_re) << ','
                  << format_double(stats[j].mean_abs) << ',' << format_double(stats[j].cv_abs) << ','
                  << format_double(stats[j].aligned) << '\n';
            }
            emit(sibling_path(cfg, "_shells.csv"), t.str(), cfg.output ? out : err);
            err << "omega_in " << format_double(omega) << ", sign changes across shells: "
                << scattering::sign_changes(stats) << '\n';
            return static_cast<int>(kSuccess);
        },
        err);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return run_guarded(
        [&] {
            cfg.validate();
            const NestedGeometry& g = cfg.geom();
            const auto opts = root_options(cfg);
            const auto seeds = seeds_for(cfg, cfg.materials);
            const auto swe_spec = swe::find_resonances_swe(cfg.materials, g, seeds, opts);
            const auto dtn_roots = dtn::find_resonances_dtn(cfg.materials, g, seeds, opts);

            bool failed = !swe_spec.all_converged();
            for (const auto& r : dtn_roots) failed = failed || !r.converged;

            json modes = json::array();
            int flags = 0;
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                // swe modes are sorted by real part; match by seed instead.
                const auto it = std::find_if(swe_spec.modes.begin(), swe_spec.modes.end(),
                                             [&](const swe::ModeRecord& r) { return r.asymptotic == seeds[i]; });
                const cplx sw = it->exact;
                const cplx dt = dtn_roots[i].root;
                const double swe_dtn = std::abs(sw - dt);
                const double swe_asym = std::abs(sw - seeds[i]);
                const double dtn_asym = std::abs(dt - seeds[i]);
                const bool flag = swe_dtn > cfg.compare.tolerance ||
                                  swe_asym > cfg.compare.asymptotic_tolerance * std::abs(sw) ||
                                  dtn_asym > cfg.compare.asymptotic_tolerance * std::abs(dt);
                flags += flag ? 1 : 0;
                modes.push_back({{"mode", i + 1},
                                 {"asymptotic", complex_json(seeds[i])},
                                 {"swe", complex_json(sw)},
                                 {"dtn", complex_json(dt)},
                                 {"swe_dtn", swe_dtn},
                                 {"swe_asymptotic", swe_asym},
                                 {"dtn_asymptotic", dtn_asym},
                                 {"swe_converged", it->converged},
                                 {"dtn_converged", dtn_roots[i].converged},
                                 {"flagged", flag}});
            }
            json j;
            j["layers"] = g.layers();
            j["delta"] = model::derived(cfg.materials, 0.0).delta;
            j["tolerance"] = cfg.compare.tolerance;
            j["asymptotic_tolerance"] = cfg.compare.asymptotic_tolerance;
            j["modes"] = modes;
            j["flagged_pairs"] = flags;

            if (!failed && !cfg.compare.deltas.empty()) {
                // The asymptotic-error study always starts from fresh capacitance seeds.
                const auto cs = capacitance::build_system(g);
                std::vector<std::vector<double>> errors(g.layers());
                for (double delta : cfg.compare.deltas) {
                    const MaterialParams m = with_contrast(cfg.materials, delta);
                    const auto spec = swe::find_resonances_swe(m, g, capacitance::asymptotic_frequencies(cs, m, g), opts);
                    if (!spec.all_converged()) {
                        failed = true;
                        break;
                    }
                    for (std::size_t i = 0; i < spec.modes.size(); ++i) errors[i].push_back(spec.modes[i].abs_diff);
                }
                if (!failed) {
                    json slopes = json::array();
                    for (const auto& e : errors) slopes.push_back(loglog_slope(cfg.compare.deltas, e));
                    j["convergence"] = {{"deltas", cfg.compare.deltas}, {"abs_diff", errors}, {"slopes", slopes}};
                }
            }
            j["all_converged"] = !failed;
            emit(cfg.output, j.dump(2) + "\n", out);
            if (failed) {
                err << "numerical failure: a characterization did not converge\n";
                return static_cast<int>(kNumericalFailure);
            }
            if (flags > 0) err << flags << " mode(s) exceed the comparison tolerance\n";
            return static_cast<int>(kSuccess);
        },
        err);
}

}  // namespace nestres::cli
