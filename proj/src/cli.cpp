#include "oval/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oval/analysis.hpp"
#include "oval/config.hpp"
#include "oval/io.hpp"

namespace fs = std::filesystem;

namespace oval {
namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ' ';
        out += p;
    }
    return out;
}

void validate_keys(const ExperimentConfig& cfg, const std::string& command,
                   std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : cfg.entries()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("setting '" + key + "' is not used by command '" + command +
                              "'");
    }
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

MapSystem build_system(const ExperimentConfig& cfg, bool need_curve, bool need_law) {
    MapSystem sys{make_table(cfg.require("table")), {}, {}};
    if (cfg.has("curve")) sys.curve = make_curve(*cfg.find("curve"), sys.table);
    if (cfg.has("law")) {
        if (!sys.curve) throw ConfigError("law: given without a curve to contract toward");
        sys.law = make_law(*cfg.find("law"));
    }
    if (need_curve && !sys.curve) throw ConfigError("missing required setting 'curve'");
    if (need_law && !sys.law) throw ConfigError("missing required setting 'law'");
    return sys;
}

PhaseState make_start(const ExperimentConfig& cfg) {
    const double phi0 = cfg.get_double("phi0", 0.0);
    const double alpha0 = parse_double_str(cfg.require("alpha0"), "alpha0");
    try {
        return PhaseState(phi0, alpha0);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("alpha0: ") + e.what());
    }
}

void echo_system(ExperimentConfig& echo, const MapSystem& sys) {
    echo.set("table", render_table(sys.table));
    if (sys.curve) echo.set("curve", render_curve(*sys.curve));
    if (sys.law) echo.set("law", render_law(*sys.law));
}

void carry_seed(ExperimentConfig& echo, const ExperimentConfig& cfg) {
    if (cfg.has("seed")) echo.set("seed", *cfg.find("seed"));
}

void write_artifacts(const fs::path& out, const std::string& command,
                     const std::vector<std::string>& files,
                     const ExperimentConfig& echo) {
    const std::string rendered = echo_config(echo);
    write_text_file(out / "config.echo", rendered);
    std::string manifest = "# command\n" + command + "\n# files\n";
    for (const auto& f : files) manifest += f + "\n";
    manifest += "config.echo\nmanifest.txt\n# config\n" + rendered;
    write_text_file(out / "manifest.txt", manifest);
}

long positive_long(const ExperimentConfig& cfg, const std::string& key, long fallback) {
    const long v = cfg.get_long(key, fallback);
    if (v < 1) throw ConfigError(key + ": must be >= 1");
    return v;
}

int cmd_orbit(const ExperimentConfig& cfg, const fs::path& out) {
    validate_keys(cfg, "orbit", {"table", "curve", "law", "phi0", "alpha0", "n", "seed"});
    const MapSystem sys = build_system(cfg, false, false);
    const PhaseState s0 = make_start(cfg);
    const long n = positive_long(cfg, "n", 1000);

    const OrbitRecord rec = iterate(sys, s0, n);
    fs::create_directories(out);
    write_orbit_csv(out / "orbit.csv", rec, sys.table);

    ExperimentConfig echo;
    echo_system(echo, sys);
    echo.set("phi0", format_double(s0.phi));
    echo.set("alpha0", format_double(s0.alpha));
    echo.set("n", std::to_string(n));
    carry_seed(echo, cfg);
    write_artifacts(out, "orbit", {"orbit.csv"}, echo);

    std::cout << "orbit: " << rec.states.size() << " states";
    if (rec.escaped) std::cout << " (escaped: " << rec.escape_reason << ")";
    std::cout << "\nwrote " << (out / "orbit.csv").string() << "\n";
    return 0;
}

int cmd_rotation(const ExperimentConfig& cfg, const fs::path& out) {
    validate_keys(cfg, "rotation",
                  {"table", "curve", "law", "phi0", "alpha0", "n", "seed"});
    const MapSystem sys = build_system(cfg, false, false);
    const PhaseState s0 = make_start(cfg);
    const long n = positive_long(cfg, "n", 100000);

    const OrbitRecord rec = iterate(sys, s0, n);
    const double rho = rotation_number(rec);

    fs::create_directories(out);
    ExperimentConfig echo;
    echo_system(echo, sys);
    echo.set("phi0", format_double(s0.phi));
    echo.set("alpha0", format_double(s0.alpha));
    echo.set("n", std::to_string(n));
    carry_seed(echo, cfg);
    write_text_file(out / "rotation.txt", "rotation_number = " + format_double(rho) + "\n");
    write_artifacts(out, "rotation", {"rotation.txt"}, echo);

    std::cout << "rotation_number = " << format_double(rho) << "\n";
    return 0;
}

ClassifyParams classify_params(const ExperimentConfig& cfg) {
    ClassifyParams p;
    p.max_iter = cfg.get_long("max_iter", p.max_iter);
    p.tol_curve = cfg.get_double("tol_curve", p.tol_curve);
    p.tol_period = cfg.get_double("tol_period", p.tol_period);
    p.window = static_cast<int>(cfg.get_long("window", p.window));
    if (p.max_iter < 1 || !(p.tol_curve > 0.0) || !(p.tol_period > 0.0) || p.window < 1)
        throw ConfigError("classifier parameters must be positive");
    return p;
}

int cmd_basin(const ExperimentConfig& cfg, const fs::path& out) {
    validate_keys(cfg, "basin",
                  {"table", "curve", "law", "region", "res", "max_iter", "tol_curve",
                   "tol_period", "window", "seed", "serial"});
    const MapSystem sys = build_system(cfg, true, false);
    Region region;
    if (cfg.has("region")) region = parse_region(*cfg.find("region"));
    GridSize res;
    if (cfg.has("res")) res = parse_resolution(*cfg.find("res"));
    const ClassifyParams params = classify_params(cfg);
    const ExecMode exec =
        cfg.get_bool("serial", false) ? ExecMode::Serial : ExecMode::Parallel;

    BasinGrid grid;
    try {
        grid = basin_grid(sys, region, res, params, exec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("basin: ") + e.what());
    }

    fs::create_directories(out);
    write_basin_csv(out / "basin.csv", grid);
    write_basin_pgm(out / "basin.pgm", grid);

    ExperimentConfig echo;
    echo_system(echo, sys);
    echo.set("region", render_region(region));
    echo.set("res", render_resolution(res));
    echo.set("max_iter", std::to_string(params.max_iter));
    echo.set("tol_curve", format_double(params.tol_curve));
    echo.set("tol_period", format_double(params.tol_period));
    echo.set("window", std::to_string(params.window));
    if (cfg.has("serial")) echo.set("serial", cfg.get_bool("serial", false) ? "true" : "false");
    carry_seed(echo, cfg);
    write_artifacts(out, "basin", {"basin.csv", "basin.pgm"}, echo);

    std::cout << "fraction_to_curve = " << format_double(grid.fraction_to_curve) << "\n";
    return 0;
}

int cmd_certify(const ExperimentConfig& cfg, const fs::path& out) {
    validate_keys(cfg, "certify",
                  {"table", "curve", "law", "max_halfwidth", "min_halfwidth",
                   "phi_samples", "offset_samples", "deltas", "force_search", "seed",
                   "serial"});
    const MapSystem sys = build_system(cfg, true, true);
    CertifyOptions opts;
    opts.max_halfwidth = cfg.get_double("max_halfwidth", opts.max_halfwidth);
    opts.min_halfwidth = cfg.get_double("min_halfwidth", opts.min_halfwidth);
    opts.phi_samples = static_cast<int>(cfg.get_long("phi_samples", opts.phi_samples));
    opts.offset_samples =
        static_cast<int>(cfg.get_long("offset_samples", opts.offset_samples));
    if (cfg.has("deltas")) opts.delta_candidates = parse_double_list(*cfg.find("deltas"));
    opts.force_search = cfg.get_bool("force_search", false);
    opts.exec = cfg.get_bool("serial", false) ? ExecMode::Serial : ExecMode::Parallel;

    SplittingCertificate cert;
    try {
        cert = certify_strip(sys.table, *sys.curve, *sys.law, opts);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("certify: ") + e.what());
    }

    fs::create_directories(out);
    write_text_file(out / "certificate.txt", certificate_report(cert));
    write_certificate_csv(out / "certificate.csv", cert);

    ExperimentConfig echo;
    echo_system(echo, sys);
    echo.set("max_halfwidth", format_double(opts.max_halfwidth));
    echo.set("min_halfwidth", format_double(opts.min_halfwidth));
    echo.set("phi_samples", std::to_string(opts.phi_samples));
    echo.set("offset_samples", std::to_string(opts.offset_samples));
    if (!opts.delta_candidates.empty()) {
        std::string list;
        for (double d : opts.delta_candidates) {
            if (!list.empty()) list += ',';
            list += format_double(d);
        }
        echo.set("deltas", list);
    }
    if (opts.force_search) echo.set("force_search", "true");
    if (cfg.has("serial")) echo.set("serial", cfg.get_bool("serial", false) ? "true" : "false");
    carry_seed(echo, cfg);
    write_artifacts(out, "certify", {"certificate.txt", "certificate.csv"}, echo);

    std::cout << "verdict = " << (cert.pass ? "pass" : "fail")
              << " delta = " << format_double(cert.delta)
              << " halfwidth = " << format_double(cert.halfwidth)
              << " min_entry = " << format_double(cert.min_entry) << "\n";
    return 0;
}

int cmd_threshold(const ExperimentConfig& cfg, const fs::path& out) {
    validate_keys(cfg, "threshold", {"table", "curve"});
    const MapSystem sys = build_system(cfg, true, false);
    double threshold;
    try {
        threshold = contraction_threshold(sys.table, *sys.curve);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("threshold: ") + e.what());
    }
    const double bound = 1.0 - threshold;

    fs::create_directories(out);
    ExperimentConfig echo;
    echo_system(echo, sys);
    write_text_file(out / "threshold.txt", "threshold = " + format_double(threshold) +
                                               "\nlower_bound_l = " + format_double(bound) +
                                               "\n");
    write_artifacts(out, "threshold", {"threshold.txt"}, echo);

    std::cout << "threshold = " << format_double(threshold) << "\n";
    return 0;
}

int cmd_phase(const ExperimentConfig& cfg, const fs::path& out) {
    validate_keys(cfg, "phase", {"table", "starts", "n", "region", "seed"});
    const OvalTable table = make_table(cfg.require("table"));
    const MapSystem sys{table, {}, {}};
    const long starts = positive_long(cfg, "starts", 40);
    const long n = positive_long(cfg, "n", 2000);
    Region region;
    if (cfg.has("region")) region = parse_region(*cfg.find("region"));

    fs::create_directories(out);
    std::ofstream csv(out / "phase.csv");
    if (!csv) throw std::runtime_error("cannot open phase.csv for writing");
    csv << "start,step,phi,alpha\n";
    for (long i = 0; i < starts; ++i) {
        const double alpha0 =
            region.alpha_min + (i + 0.5) * (region.alpha_max - region.alpha_min) / starts;
        const OrbitRecord rec = iterate(sys, PhaseState(region.phi_min, alpha0), n);
        const long rows = std::min<long>(n, static_cast<long>(rec.states.size()));
        for (long k = 0; k < rows; ++k)
            csv << i << ',' << k << ',' << format_double(rec.states[k].phi) << ','
                << format_double(rec.states[k].alpha) << '\n';
    }
    if (!csv) throw std::runtime_error("write failed: phase.csv");
    csv.close();
    write_outline_csv(out / "outline.csv", table);

    ExperimentConfig echo;
    echo.set("table", render_table(table));
    echo.set("starts", std::to_string(starts));
    echo.set("n", std::to_string(n));
    echo.set("region", render_region(region));
    carry_seed(echo, cfg);
    write_artifacts(out, "phase", {"phase.csv", "outline.csv"}, echo);

    std::cout << "phase: " << starts << " starts x " << n << " steps\n";
    return 0;
}

struct RawOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> table, curve, law;
    std::string phi0, alpha0, n, starts, seed;
    std::string region, res;
    std::string max_iter, tol_curve, tol_period, window;
    std::string max_halfwidth, min_halfwidth, phi_samples, offset_samples, deltas;
    bool force_search = false;
    bool serial = false;
};

void add_shared(CLI::App* sub, RawOpts& raw) {
    sub->add_option("--config", raw.config_path, "config file of key = value lines");
    sub->add_option("--out", raw.out_dir, "artifact directory (default: out)");
    sub->add_option("--table", raw.table, "table spec, e.g. circle radius=1")
        ->expected(-1);
    sub->add_option("--seed", raw.seed, "seed recorded with the artifacts");
}

void add_curve_law(CLI::App* sub, RawOpts& raw) {
    sub->add_option("--curve", raw.curve, "curve spec, e.g. line beta0=auto")
        ->expected(-1);
    sub->add_option("--law", raw.law, "contraction law spec, e.g. linear mu=0.5")
        ->expected(-1);
}

void add_start(CLI::App* sub, RawOpts& raw) {
    sub->add_option("--phi0", raw.phi0, "initial boundary parameter (default 0)");
    sub->add_option("--alpha0", raw.alpha0, "initial angle in (0, pi)");
    sub->add_option("--n", raw.n, "iteration count");
}

void overlay(ExperimentConfig& cfg, const CLI::App* sub, const RawOpts& raw) {
    // flags not registered on this subcommand simply read as absent
    const auto passed = [&](const char* flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    const auto set_if = [&](const char* flag, const std::string& key,
                            const std::string& value) {
        if (passed(flag)) cfg.set(key, value);
    };
    set_if("--table", "table", join(raw.table));
    set_if("--curve", "curve", join(raw.curve));
    set_if("--law", "law", join(raw.law));
    set_if("--phi0", "phi0", raw.phi0);
    set_if("--alpha0", "alpha0", raw.alpha0);
    set_if("--n", "n", raw.n);
    set_if("--starts", "starts", raw.starts);
    set_if("--seed", "seed", raw.seed);
    set_if("--region", "region", raw.region);
    set_if("--res", "res", raw.res);
    set_if("--max-iter", "max_iter", raw.max_iter);
    set_if("--tol-curve", "tol_curve", raw.tol_curve);
    set_if("--tol-period", "tol_period", raw.tol_period);
    set_if("--window", "window", raw.window);
    set_if("--max-halfwidth", "max_halfwidth", raw.max_halfwidth);
    set_if("--min-halfwidth", "min_halfwidth", raw.min_halfwidth);
    set_if("--phi-samples", "phi_samples", raw.phi_samples);
    set_if("--offset-samples", "offset_samples", raw.offset_samples);
    set_if("--deltas", "deltas", raw.deltas);
    if (passed("--force-search")) cfg.set("force_search", "true");
    if (passed("--serial")) cfg.set("serial", "true");
}

void apply_thread_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("OVAL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) omp_set_num_threads(static_cast<int>(v));
    }
#endif
}

int run_impl(int argc, char** argv) {
    CLI::App app{"convex billiard maps with dissipative reflection laws"};
    app.require_subcommand(1);
    RawOpts raw;

    CLI::App* orbit = app.add_subcommand("orbit", "iterate one orbit, write CSV");
    add_shared(orbit, raw);
    add_curve_law(orbit, raw);
    add_start(orbit, raw);

    CLI::App* rotation = app.add_subcommand("rotation", "Birkhoff rotation number");
    add_shared(rotation, raw);
    add_curve_law(rotation, raw);
    add_start(rotation, raw);

    CLI::App* basin = app.add_subcommand("basin", "fate grid over a phase region");
    add_shared(basin, raw);
    add_curve_law(basin, raw);
    basin->add_option("--region", raw.region, "phimin:phimax,alphamin:alphamax");
    basin->add_option("--res", raw.res, "grid resolution, e.g. 256x256");
    basin->add_option("--max-iter", raw.max_iter, "classifier iteration budget");
    basin->add_option("--tol-curve", raw.tol_curve, "curve-capture tolerance");
    basin->add_option("--tol-period", raw.tol_period, "recurrence tolerance");
    basin->add_option("--window", raw.window, "confirmation window");
    basin->add_flag("--serial", raw.serial, "single-worker reference path");

    CLI::App* certify = app.add_subcommand("certify", "cone positivity strip search");
    add_shared(certify, raw);
    add_curve_law(certify, raw);
    certify->add_option("--max-halfwidth", raw.max_halfwidth, "strip cap, radians");
    certify->add_option("--min-halfwidth", raw.min_halfwidth, "first width tried");
    certify->add_option("--phi-samples", raw.phi_samples, "boundary sample count");
    certify->add_option("--offset-samples", raw.offset_samples, "fiber sample count");
    certify->add_option("--deltas", raw.deltas, "comma-separated cone half-widths");
    certify->add_flag("--force-search", raw.force_search,
                      "search even below the sufficient threshold");
    certify->add_flag("--serial", raw.serial, "single-worker reference path");

    CLI::App* threshold = app.add_subcommand("threshold", "print 1 - lower_bound_l");
    add_shared(threshold, raw);
    threshold->add_option("--curve", raw.curve, "curve spec")->expected(-1);

    CLI::App* phase = app.add_subcommand("phase", "classical phase portrait cloud");
    add_shared(phase, raw);
    phase->add_option("--starts", raw.starts, "number of initial conditions");
    phase->add_option("--n", raw.n, "iterations per start");
    phase->add_option("--region", raw.region, "start line and clip range");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    apply_thread_env();

    CLI::App* sub = app.get_subcommands().at(0);
    ExperimentConfig cfg;
    if (sub->count("--config")) cfg = load_config_file(raw.config_path);
    overlay(cfg, sub, raw);
    const fs::path out = raw.out_dir;

    if (sub == orbit) return cmd_orbit(cfg, out);
    if (sub == rotation) return cmd_rotation(cfg, out);
    if (sub == basin) return cmd_basin(cfg, out);
    if (sub == certify) return cmd_certify(cfg, out);
    if (sub == threshold) return cmd_threshold(cfg, out);
    return cmd_phase(cfg, out);
}

}  // namespace

int run_cli(int argc, char** argv) {
    try {
        return run_impl(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const StripEscapeError& e) {
        std::cerr << "numerical failure: " << e.what() << " [phi=" << format_double(e.phi)
                  << " alpha=" << format_double(e.alpha)
                  << " offset=" << format_double(e.offset) << "]\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace oval
