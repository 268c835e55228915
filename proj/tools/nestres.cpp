#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nestres/cli.hpp"

using namespace nestres;

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::size_t> equidistant;
    std::optional<double> delta;
    std::optional<int> n_max;
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::optional<std::size_t> steps;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    bool print_config = false;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON run configuration");
    sub->add_option("--geometry-equidistant", o.equidistant, "Equidistant geometry with N layers");
    sub->add_option("--delta", o.delta, "High-contrast parameter (resonator density / host density)");
    sub->add_option("--nmax", o.n_max, "Highest harmonic order");
    sub->add_option("--omega-min", o.omega_min, "Sweep start");
    sub->add_option("--omega-max", o.omega_max, "Sweep end");
    sub->add_option("--steps", o.steps, "Sweep grid size");
    sub->add_option("--out", o.out, "Primary output file (stdout if omitted)");
    sub->add_option("--threads", o.threads, "Worker threads");
    sub->add_flag("--print-config", o.print_config, "Print the resolved configuration and exit");
}

cli::RunConfig build_config(const Overrides& o) {
    cli::RunConfig cfg = o.config_path.empty() ? cli::RunConfig{} : cli::load_config(o.config_path);
    try {
        if (o.equidistant) cfg.geometry = model::NestedGeometry::equidistant(*o.equidistant);
        if (o.delta) cfg.materials = model::MaterialParams::from_contrast(*o.delta);
    } catch (const model::ModelError& e) {
        throw cli::ConfigError(e.what());
    }
    if (o.n_max) cfg.n_max = *o.n_max;
    if (o.omega_min || o.omega_max || o.steps) {
        cli::SweepRange r = cfg.sweep.value_or(cli::SweepRange{});
        if (o.omega_min) r.omega_min = *o.omega_min;
        if (o.omega_max) r.omega_max = *o.omega_max;
        if (o.steps) r.steps = *o.steps;
        cfg.sweep = r;
    }
    if (o.out) cfg.output = *o.out;
    if (o.threads) cfg.threads = *o.threads;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonances and scattering of nested spherical resonators"};
    app.require_subcommand(1);
    Overrides o;
    auto* spectrum = app.add_subcommand("spectrum", "Resonant frequencies: exact roots vs capacitance asymptotics");
    auto* sweep = app.add_subcommand("sweep", "Field norm over a frequency range");
    auto* field = app.add_subcommand("field", "Total field on a plane or line");
    auto* compare = app.add_subcommand("compare", "Agreement of the three characterizations");
    for (auto* sub : {spectrum, sweep, field, compare}) add_common(sub, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kUsageError;
    }

    cli::RunConfig cfg;
    try {
        cfg = build_config(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kUsageError;
    }
    if (o.print_config) {
        std::cout << cli::resolved_config(cfg);
        return cli::kSuccess;
    }
    if (spectrum->parsed()) return cli::cmd_spectrum(cfg, std::cout, std::cerr);
    if (sweep->parsed()) return cli::cmd_sweep(cfg, std::cout, std::cerr);
    if (field->parsed()) return cli::cmd_field(cfg, std::cout, std::cerr);
    return cli::cmd_compare(cfg, std::cout, std::cerr);
}
