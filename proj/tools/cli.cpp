#include "cli.hpp"

#include "qvlasov/config.hpp"
#include "qvlasov/csv.hpp"
#include "qvlasov/errors.hpp"
#include "qvlasov/fields.hpp"
#include "qvlasov/fingerprint.hpp"
#include "qvlasov/observables.hpp"
#include "qvlasov/oracle.hpp"
#include "qvlasov/scans.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qvlasov::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* format, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, x);
    return buf;
}

struct Options {
    std::string config;
    std::string tier = "full";
    std::string out = ".";
    std::optional<unsigned> workers;
    std::string checkpoint;
    std::string baseline;
};

// What a run was asked to do; its fingerprint heads every output file.
struct Manifest {
    std::string command;
    std::string tier;
    std::vector<std::pair<std::string, std::string>> inputs;
    unsigned workers = 0;
    std::string workers_source;
    std::vector<std::string> outputs;

    std::uint64_t fingerprint() const {
        std::string text = command + "|" + tier + "|" + std::string(version());
        for (const auto& [k, v] : inputs) text += "|" + k + "=" + v;
        return fnv1a64(text);
    }

    std::vector<std::pair<std::string, std::string>> csv_metadata() const {
        return {{"manifest", to_hex(fingerprint())},
                {"command", command},
                {"tier", tier},
                {"version", std::string(version())}};
    }

    void write(const fs::path& dir) const {
        std::string text;
        text += "command: " + command + "\n";
        text += "version: " + std::string(version()) + "\n";
        text += "tier: " + tier + "\n";
        for (const auto& [k, v] : inputs) text += k + ": " + v + "\n";
        text += "workers: " + std::to_string(workers) + " (" + workers_source + ")\n";
        for (const auto& o : outputs) text += "output: " + o + "\n";
        text += "determinism: no random numbers are drawn; outputs depend only on the inputs above "
                "(wall_time_s columns excepted)\n";
        text += "fingerprint: " + to_hex(fingerprint()) + "\n";
        const auto path = dir / "manifest.txt";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path, "cannot open for writing");
        out << text;
        if (!out) throw IoError(path, "write failed");
    }
};

double tier_scale(const std::string& tier) { return tier == "quick" ? 0.1 : 1.0; }

class Runner {
public:
    Runner(const Options& options, std::string command, std::ostream& out)
        : opt_(options), out_(out) {
        manifest_.command = std::move(command);
        manifest_.tier = opt_.tier;
        if (opt_.workers) {
            manifest_.workers = *opt_.workers;
            manifest_.workers_source = "--workers";
        } else if (const char* env = std::getenv("QVLASOV_WORKERS"); env && *env) {
            char* end = nullptr;
            const unsigned long n = std::strtoul(env, &end, 10);
            if (*end != '\0' || n > 4096)
                throw ConfigError("QVLASOV_WORKERS", "must be a worker count, got '" + std::string(env) + "'");
            manifest_.workers = static_cast<unsigned>(n);
            manifest_.workers_source = "QVLASOV_WORKERS=" + std::string(env);
        } else {
            manifest_.workers = 0;
            manifest_.workers_source = "default: all hardware threads";
        }
        dir_ = opt_.out;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError(dir_, "cannot create output directory: " + ec.message());
    }

    ConfigFile load(const std::string& path, const char* label = "config") {
        if (path.empty()) throw ConfigError("--config", "this subcommand needs --config <path>");
        auto cfg = parse_config(path);
        cfg.field = scale_durations(std::move(cfg.field), tier_scale(opt_.tier));
        if (cfg.scan) cfg.scan->duration_scale = tier_scale(opt_.tier);
        manifest_.inputs.emplace_back(std::string(label) + ".field", describe(cfg.field));
        if (cfg.grid) manifest_.inputs.emplace_back(std::string(label) + ".grid", describe(*cfg.grid));
        manifest_.inputs.emplace_back(std::string(label) + ".solver", describe(cfg.settings));
        return cfg;
    }

    void note(const std::string& key, const std::string& value) { manifest_.inputs.emplace_back(key, value); }

    void emit(csv::Table table, const std::string& name, std::vector<std::pair<std::string, std::string>> extra = {}) {
        auto meta = manifest_.csv_metadata();
        meta.insert(meta.end(), extra.begin(), extra.end());
        meta.insert(meta.end(), table.metadata.begin(), table.metadata.end());
        table.metadata = std::move(meta);
        csv::write_csv(table, dir_ / name);
        manifest_.outputs.push_back(name);
        out_ << "wrote " << (dir_ / name).string() << "\n";
    }

    void finish() { manifest_.write(dir_); }

    unsigned workers() const { return manifest_.workers; }
    const Options& options() const { return opt_; }
    std::ostream& out() { return out_; }

private:
    const Options& opt_;
    std::ostream& out_;
    Manifest manifest_;
    fs::path dir_;
};

int cmd_spectrum(Runner& r) {
    const auto cfg = r.load(r.options().config);
    const auto grid = cfg.grid.value_or(MomentumGrid::spectrum_default());
    r.note("grid", describe(grid));
    const Field field(cfg.field);
    const auto spectrum = momentum_spectrum(field, grid, cfg.settings, r.workers());

    csv::Table t;
    t.columns = {{"p_par", "m"}, {"f", ""}};
    for (std::size_t i = 0; i < grid.n_points; ++i) t.rows.push_back({grid.node(i), spectrum.values[i]});
    r.emit(std::move(t), "spectrum.csv", {{"spectrum", to_hex(spectrum.fingerprint)}});

    for (const auto& p : find_peaks(spectrum))
        r.out() << "peak p_par = " << fmt("%+.6f", p.momentum) << " m  f = " << fmt("%.6e", p.value) << "\n";
    r.out() << "density n = " << fmt("%.17g", number_density(spectrum)) << " m\n";
    r.finish();
    return success;
}

int cmd_density(Runner& r) {
    const auto cfg = r.load(r.options().config);
    const auto grid = cfg.grid.value_or(MomentumGrid::density_default());
    r.note("grid", describe(grid));
    const Field field(cfg.field);
    const auto spectrum = momentum_spectrum(field, grid, cfg.settings, r.workers());
    const double n = number_density(spectrum);

    csv::Table t;
    t.columns = {{"density", "m"}};
    t.rows.push_back({n});
    r.emit(std::move(t), "density.csv", {{"spectrum", to_hex(spectrum.fingerprint)}});
    r.out() << fmt("%.17g", n) << "\n";
    r.finish();
    return success;
}

ScanResult run_and_report(Runner& r, const ScanSpec& spec, const std::string& checkpoint,
                          const std::string& label) {
    ScanOptions so;
    so.workers = r.workers();
    if (!checkpoint.empty()) so.checkpoint = checkpoint;
    auto result = run_scan(spec, so);
    for (const auto& p : result.points) {
        r.out() << label << " " << parameter_name(spec.kind) << " = " << fmt("%.6g", p.parameter)
                << "  density = " << fmt("%.6e", p.density) << "  " << to_string(p.status);
        if (!p.message.empty()) r.out() << "  (" << p.message << ")";
        r.out() << "\n";
    }
    return result;
}

int cmd_scan(Runner& r, std::ostream& err) {
    const auto cfg = r.load(r.options().config);
    if (!cfg.scan) throw ConfigError("scan", "the config file has no [scan] section");
    r.note("scan", describe(*cfg.scan));
    const auto result = run_and_report(r, *cfg.scan, r.options().checkpoint, "scan");
    r.emit(to_table(result), "scan.csv");
    std::size_t failed = result.count(PointStatus::failed);

    if (!r.options().baseline.empty()) {
        const auto base_cfg = r.load(r.options().baseline, "baseline");
        if (!base_cfg.scan) throw ConfigError("scan", "the baseline config file has no [scan] section");
        r.note("baseline.scan", describe(*base_cfg.scan));
        const std::string checkpoint =
            r.options().checkpoint.empty() ? std::string() : r.options().checkpoint + ".baseline";
        const auto baseline = run_and_report(r, *base_cfg.scan, checkpoint, "baseline");
        r.emit(to_table(baseline), "baseline.csv");
        failed += baseline.count(PointStatus::failed);
        const auto ratio = enhancement_curve(result, baseline);
        r.emit(to_table(ratio), "enhancement.csv");
        std::vector<double> ratios;
        for (const auto& q : ratio.points) ratios.push_back(q.status == PointStatus::ok ? q.density : 0.0);
        for (const auto& p : find_peaks(0.0, 1.0, ratios, 0.05)) {
            const auto i = std::min(static_cast<std::size_t>(std::lround(p.momentum)), ratio.points.size() - 1);
            r.out() << "enhancement maximum near " << parameter_name(ratio.kind) << " = "
                    << fmt("%.6g", ratio.points[i].parameter) << "  ratio = " << fmt("%.6g", p.value) << "\n";
        }
    }
    r.finish();
    if (failed > 0) {
        err << "scan finished with " << failed << " failed point(s)\n";
        return failure;
    }
    return success;
}

int cmd_oracle(Runner& r) {
    r.note("oracle", "built-in weak-field cases");
    const auto rows = run_oracle_check();
    csv::Table t;
    t.columns = {{"case", ""}, {"P3", "m"}, {"f_ode", ""}, {"f_direct", ""}, {"relative_difference", ""}};
    double worst = 0.0;
    for (const auto& c : rows) {
        t.rows.push_back({c.name, c.P3, c.ode, c.direct, c.relative_difference});
        worst = std::max(worst, c.relative_difference);
        r.out() << c.name << "  P3 = " << fmt("%+.3f", c.P3) << "  ode = " << fmt("%.10e", c.ode)
                << "  direct = " << fmt("%.10e", c.direct) << "  rel = " << fmt("%.2e", c.relative_difference)
                << "\n";
    }
    r.emit(std::move(t), "oracle.csv");
    const bool pass = worst <= oracle_tolerance;
    r.out() << (pass ? "PASS" : "FAIL") << " worst relative difference " << fmt("%.2e", worst)
            << " (tolerance " << fmt("%.0e", oracle_tolerance) << ")\n";
    r.finish();
    return pass ? success : failure;
}

std::pair<double, double> carrier_and_modulation(const FieldConfig& config) {
    if (const auto* m = std::get_if<ModulatedFieldConfig>(&config.shape)) return {m->omega_c, m->omega_m};
    if (const auto* p = std::get_if<PulseTrainConfig>(&config.shape))
        return {p->omega_c, p->modulation_frequency()};
    throw ConfigError("type", "resonances need a modulated field or a pulse train");
}

int cmd_resonances(Runner& r) {
    const auto cfg = r.load(r.options().config);
    const auto [omega_c, omega_m] = carrier_and_modulation(cfg.field);
    const double m_star = cfg.resonances.m_star ? *cfg.resonances.m_star : effective_mass(cfg.field);
    r.note("m_star", fmt("%.17g", m_star));
    r.note("max_photons", std::to_string(cfg.resonances.max_photons));

    csv::Table t;
    t.columns = {{"k_c", ""}, {"k_plus", ""}, {"k_minus", ""}, {"photons", ""},
                 {"energy", "m"}, {"p_par", "m"}, {"status", ""}};
    r.out() << "omega_c = " << fmt("%.6g", omega_c) << " m  omega_m = " << fmt("%.6g", omega_m)
            << " m  m* = " << fmt("%.6f", m_star) << " m\n";
    for (const auto& c : enumerate_combos(cfg.resonances.max_photons)) {
        const auto p = resonance_momentum(c, omega_c, omega_m, m_star);
        const double energy = c.energy(omega_c, omega_m);
        t.rows.push_back({double(c.k_c), double(c.k_plus), double(c.k_minus), double(c.photons()), energy,
                          p ? *p : std::numeric_limits<double>::quiet_NaN(),
                          std::string(p ? "above" : "below")});
        r.out() << "(" << c.k_c << "," << c.k_plus << "," << c.k_minus << ")  energy = "
                << fmt("%.6f", energy) << " m  p_par = " << (p ? fmt("%.6f", *p) + " m" : "below threshold")
                << "\n";
    }
    r.emit(std::move(t), "resonances.csv");
    r.finish();
    return success;
}

int cmd_effective_mass(Runner& r) {
    const auto cfg = r.load(r.options().config);
    const Field field(cfg.field);
    const auto window = averaging_window(cfg.field);
    const double variance = mean_square_potential(field);
    const double m_star = std::sqrt(1.0 + variance);

    csv::Table t;
    t.columns = {{"window_begin", "tau0"}, {"window_end", "tau0"}, {"A_variance", "m^2"}, {"m_star", "m"}};
    t.rows.push_back({window.begin, window.end, variance, m_star});
    r.emit(std::move(t), "effective_mass.csv");
    r.out() << "m* = " << fmt("%.10f", m_star) << " m  (<A^2> - <A>^2 = " << fmt("%.6e", variance)
            << " over [" << fmt("%.6g", window.begin) << ", " << fmt("%.6g", window.end) << "] tau0)\n";
    r.finish();
    return success;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vacuum pair production in modulated and pulse-train electric fields"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config, "Experiment file ([field], [grid], [solver], [scan], [resonances])");
    app.add_option("--tier", opt.tier, "quick scales every flat-top duration by 0.1; full keeps it")
        ->check(CLI::IsMember({"quick", "full"}))
        ->capture_default_str();
    app.add_option("--out", opt.out, "Output directory")->capture_default_str();
    app.add_option("--workers", opt.workers, "Worker threads, 0 for all cores (default: $QVLASOV_WORKERS or all)");
    app.add_option("--checkpoint", opt.checkpoint, "Scan checkpoint file, resumed if present");

    auto* spectrum = app.add_subcommand("spectrum", "Momentum spectrum f(p_par) on the grid");
    auto* density = app.add_subcommand("density", "Reduced number density");
    auto* scan = app.add_subcommand("scan", "Density as a function of the [scan] parameter");
    scan->add_option("--baseline", opt.baseline, "Second config with the same axis; also writes n/n_baseline");
    auto* oracle = app.add_subcommand("oracle-check", "Adaptive solver against the direct memory-integral solver");
    auto* resonances = app.add_subcommand("resonances", "Multiphoton resonance momenta for photon combinations");
    auto* mass = app.add_subcommand("effective-mass", "Field-dressed mass m*");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? success : config_error;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        Runner r(opt, sub->get_name(), out);
        if (sub == spectrum) return cmd_spectrum(r);
        if (sub == density) return cmd_density(r);
        if (sub == scan) return cmd_scan(r, err);
        if (sub == oracle) return cmd_oracle(r);
        if (sub == resonances) return cmd_resonances(r);
        if (sub == mass) return cmd_effective_mass(r);
        return config_error;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return config_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << "\n";
        return failure;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace qvlasov::cli
