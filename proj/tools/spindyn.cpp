// spindyn: entanglement dynamics for two coupled spins in a constant field.
// Subcommands cover the three regimes plus the classical companions
// (Poincare sections, Lyapunov exponents) and preset listing.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spindyn/io.hpp"
#include "spindyn/scenarios.hpp"
#include "spindyn/version.hpp"

namespace {

using namespace spindyn;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

// Flags shared by every run subcommand. Optionals record whether the flag was
// given, so file/preset values survive unless explicitly overridden.
struct CommonFlags {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    bool plots = false;
    unsigned jobs = 0;
    std::optional<double> alpha;
    std::optional<double> eps1_b0;
    std::optional<double> eps2_b0;
    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<long> n_points;
    std::optional<std::string> z1;
    std::optional<std::string> z2;
};

// Extra knobs for the classical companions; inert in the other regimes.
struct ClassicalFlags {
    std::string point;
    std::optional<long> section_crossings;
    std::string direction = "positive";
    bool lyapunov = false;
    double horizon = 2000.0;
    double renorm = 1.0;
    double step = 1e-3;
    bool no_trajectory = false;
};

unsigned default_jobs() {
    if (const char* env = std::getenv("SPINDYN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("-c,--config", flags.config_path, "INI config file");
    cmd->add_option("-p,--preset", flags.preset, "named preset, or 'all'");
    cmd->add_option("-o,--out,--out-dir", flags.out_dir, "output directory")
        ->capture_default_str();
    cmd->add_flag("--plots", flags.plots, "emit gnuplot scripts next to the CSV files");
    cmd->add_option("-j,--jobs", flags.jobs, "worker threads for --preset all");
    cmd->add_option("--alpha", flags.alpha, "coupling strength");
    cmd->add_option("--eps1-b0", flags.eps1_b0, "field term for spin 1");
    cmd->add_option("--eps2-b0", flags.eps2_b0, "field term for spin 2");
    cmd->add_option("--t-start", flags.t_start, "grid start time");
    cmd->add_option("--t-end", flags.t_end, "grid end time");
    cmd->add_option("--n-points", flags.n_points, "grid point count");
    cmd->add_option("--z1", flags.z1, "coherent label for spin 1 ('re,im' or 'inf')");
    cmd->add_option("--z2", flags.z2, "coherent label for spin 2 ('re,im' or 'inf')");
}

double parse_double_flag(const std::string& text, const char* flag) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError(std::string(flag) + ": expected a number, got '" + text + "'");
    }
}

CoherentLabel parse_label_flag(const std::string& text, const char* flag) {
    if (text == "inf") return CoherentLabel::infinity();
    const auto comma = text.find(',');
    if (comma == std::string::npos) return CoherentLabel{{parse_double_flag(text, flag), 0.0}};
    return CoherentLabel{{parse_double_flag(text.substr(0, comma), flag),
                          parse_double_flag(text.substr(comma + 1), flag)}};
}

ClassicalState parse_point_flag(const std::string& text) {
    std::vector<double> parts;
    std::size_t begin = 0;
    while (true) {
        const auto comma = text.find(',', begin);
        parts.push_back(parse_double_flag(
            text.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin),
            "--point"));
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    if (parts.size() != 4) throw ConfigError("--point: expected 'q1,p1,q2,p2', got '" + text + "'");
    return ClassicalState{parts[0], parts[1], parts[2], parts[3]};
}

CrossingDirection parse_direction(const std::string& text) {
    if (text == "positive") return CrossingDirection::positive;
    if (text == "negative") return CrossingDirection::negative;
    if (text == "both") return CrossingDirection::both;
    throw ConfigError("--direction: expected positive|negative|both, got '" + text + "'");
}

// Layering: config file beats preset beats regime default; explicit flags
// beat all three.
ScenarioConfig resolve_config(Regime regime, const CommonFlags& flags) {
    ScenarioConfig cfg;
    if (!flags.config_path.empty())
        cfg = io::load_config(flags.config_path, regime);
    else if (!flags.preset.empty())
        cfg = preset_config(regime, flags.preset);
    else
        cfg = default_config(regime);

    if (flags.alpha) cfg.model.alpha = *flags.alpha;
    if (flags.eps1_b0) cfg.model.eps1_b0 = *flags.eps1_b0;
    if (flags.eps2_b0) cfg.model.eps2_b0 = *flags.eps2_b0;
    if (flags.t_start) cfg.grid.t_start = *flags.t_start;
    if (flags.t_end) cfg.grid.t_end = *flags.t_end;
    if (flags.n_points) cfg.grid.n_points = static_cast<Index>(*flags.n_points);
    if (flags.z1) cfg.initial1 = InitialSpec::coherent(parse_label_flag(*flags.z1, "--z1"));
    if (flags.z2) cfg.initial2 = InitialSpec::coherent(parse_label_flag(*flags.z2, "--z2"));
    return cfg;
}

std::filesystem::path prepare_dir(const std::string& out_dir) {
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError(out_dir + ": cannot create output directory");
    return dir;
}

struct RunOutput {
    io::RunManifest manifest;
    EntropySeries series;
};

// One full entropy run: series CSV, regime-specific companions, optional plot
// scripts, manifest snapshot.
RunOutput execute_entropy_run(const ScenarioConfig& cfg, const CommonFlags& flags,
                              const ClassicalFlags& classical) {
    validate(cfg);
    const auto dir = prepare_dir(flags.out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    RunOutput out;
    out.manifest.version = kVersion;
    out.manifest.config = cfg;
    const auto add_output = [&](const std::string& name) {
        out.manifest.outputs.push_back(name);
    };

    if (cfg.regime == Regime::semiclassical) {
        SemiclassicalOptions options;
        options.with_trajectory = !classical.no_trajectory;
        options.classical_step = classical.step;
        if (classical.section_crossings)
            options.section_crossings = static_cast<Index>(*classical.section_crossings);
        options.section_direction = parse_direction(classical.direction);
        options.with_lyapunov = classical.lyapunov;
        options.lyapunov_horizon = classical.horizon;
        options.lyapunov_renorm = classical.renorm;

        const SemiclassicalResult result = run_semiclassical_scenario(cfg, options);
        out.series = result.series;
        if (result.trajectory) {
            io::write_trajectory_csv(*result.trajectory, (dir / "trajectory.csv").string());
            add_output("trajectory.csv");
        }
        if (result.section) {
            io::write_section_csv(result.section->points, (dir / "section.csv").string());
            add_output("section.csv");
            if (flags.plots) {
                io::write_section_plot_script("section.csv", (dir / "plot_section.gp").string());
                add_output("plot_section.gp");
            }
        }
        if (result.lyapunov) {
            io::write_text_file((dir / "lyapunov.txt").string(),
                                io::format_double(*result.lyapunov) + "\n");
            add_output("lyapunov.txt");
        }
    } else {
        out.series = run_scenario(cfg);
    }

    io::write_entropy_csv(out.series, (dir / "entropy.csv").string());
    add_output("entropy.csv");
    if (flags.plots) {
        io::write_entropy_plot_script("entropy.csv", (dir / "plot_entropy.gp").string());
        io::write_polarization_plot_script("entropy.csv", (dir / "plot_polarization.gp").string());
        add_output("plot_entropy.gp");
        add_output("plot_polarization.gp");
    }

    out.manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::write_manifest(out.manifest, dir.string());
    return out;
}

void print_summary(const ScenarioConfig& cfg, const RunOutput& out) {
    double max_delta = 0.0;
    for (double v : out.series.delta) max_delta = std::max(max_delta, v);
    std::printf("%s: %zu points, max delta %.6f, %.2fs\n", regime_name(cfg.regime).c_str(),
                static_cast<std::size_t>(out.series.size()), max_delta,
                out.manifest.duration_seconds);
}

// Runs every preset of the regime, each into its own subdirectory, across a
// small worker pool. Failures are reported per preset; the worst code wins.
int run_all_presets(Regime regime, const CommonFlags& flags, const ClassicalFlags& classical) {
    const std::vector<Preset> all = presets(regime);
    const unsigned jobs = std::max(1u, flags.jobs ? flags.jobs : default_jobs());
    std::vector<std::string> errors(all.size());
    std::vector<int> codes(all.size(), kExitOk);
    std::atomic<std::size_t> next{0};

    const auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < all.size(); i = next.fetch_add(1)) {
            CommonFlags local = flags;
            local.preset = all[i].name;
            local.out_dir = (std::filesystem::path(flags.out_dir) / all[i].name).string();
            try {
                execute_entropy_run(resolve_config(regime, local), local, classical);
            } catch (const ConfigError& e) {
                errors[i] = e.what();
                codes[i] = kExitConfig;
            } catch (const std::exception& e) {
                errors[i] = e.what();
                codes[i] = kExitNumeric;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs && j < all.size(); ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    int exit_code = kExitOk;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (codes[i] == kExitOk) {
            std::printf("%s: ok\n", all[i].name.c_str());
        } else {
            std::fprintf(stderr, "%s: %s\n", all[i].name.c_str(), errors[i].c_str());
            exit_code = std::max(exit_code, codes[i]);
        }
    }
    return exit_code;
}

int run_and_summarize(const ScenarioConfig& cfg, const CommonFlags& flags,
                      const ClassicalFlags& classical) {
    const RunOutput out = execute_entropy_run(cfg, flags, classical);
    print_summary(cfg, out);
    return kExitOk;
}

// --point replaces the quantum initial labels by the matching canonical pairs,
// keeping validate() and classical_start_of() as the single source of truth.
void apply_point(ScenarioConfig& cfg, const std::string& point) {
    const ClassicalState x = parse_point_flag(point);
    cfg.initial1 = InitialSpec::canonical(CanonicalPair{x.q1, x.p1});
    cfg.initial2 = InitialSpec::canonical(CanonicalPair{x.q2, x.p2});
}

int run_poincare_command(const CommonFlags& flags, const ClassicalFlags& classical,
                         long crossings, double max_time) {
    ScenarioConfig cfg = resolve_config(Regime::semiclassical, flags);
    if (!classical.point.empty()) apply_point(cfg, classical.point);
    validate(cfg);

    const auto dir = prepare_dir(flags.out_dir);
    const SectionResult section =
        poincare_section(classical_start_of(cfg), cfg.model, static_cast<Index>(crossings),
                         parse_direction(classical.direction), classical.step, max_time);
    io::write_section_csv(section.points, (dir / "section.csv").string());
    if (flags.plots)
        io::write_section_plot_script("section.csv", (dir / "plot_section.gp").string());
    std::printf("section: %zu crossings%s%s\n", section.points.size(),
                section.complete ? "" : " (incomplete)",
                section.hit_boundary ? " (hit sphere boundary)" : "");
    return section.complete ? kExitOk : kExitNumeric;
}

int run_lyapunov_command(const CommonFlags& flags, const ClassicalFlags& classical) {
    ScenarioConfig cfg = resolve_config(Regime::semiclassical, flags);
    if (!classical.point.empty()) apply_point(cfg, classical.point);
    validate(cfg);

    const auto dir = prepare_dir(flags.out_dir);
    const double lambda = lyapunov_exponent(classical_start_of(cfg), cfg.model,
                                            classical.horizon, classical.renorm, classical.step);
    io::write_text_file((dir / "lyapunov.txt").string(), io::format_double(lambda) + "\n");
    std::printf("lyapunov: %.6e\n", lambda);
    return kExitOk;
}

void list_presets_command() {
    for (const Regime regime : {Regime::two_qubits, Regime::environment, Regime::semiclassical}) {
        std::printf("[%s]\n", regime_name(regime).c_str());
        for (const Preset& p : presets(regime))
            std::printf("  %-14s %s\n", p.name.c_str(), p.summary.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement dynamics for two coupled spins in a constant field"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonFlags tq_flags, env_flags, sc_flags, pc_flags, ly_flags;
    ClassicalFlags sc_extra, pc_extra, ly_extra;
    const ClassicalFlags no_extra;

    auto* tq = app.add_subcommand("two-qubits", "entropy series for two coupled qubits");
    add_common_flags(tq, tq_flags);

    auto* env = app.add_subcommand("environment", "qubit coupled to a large-spin environment");
    add_common_flags(env, env_flags);
    std::string env_initial;
    double env_temperature = 0.0;
    std::optional<double> env_s1;
    env->add_option("--initial", env_initial, "spin-1 ensemble: coherent|uniform|thermal");
    env->add_option("--temperature", env_temperature, "thermal ensemble temperature");
    env->add_option("--s1", env_s1, "environment spin magnitude");

    auto* sc = app.add_subcommand("semiclassical", "large equal spins with classical companions");
    add_common_flags(sc, sc_flags);
    std::optional<double> sc_s;
    sc->add_option("--s", sc_s, "spin magnitude for both spins");
    sc->add_option("--point", sc_extra.point, "classical start 'q1,p1,q2,p2'");
    sc->add_option("--section", sc_extra.section_crossings, "collect N section crossings");
    sc->add_option("--direction", sc_extra.direction, "section crossing direction")
        ->capture_default_str();
    sc->add_flag("--lyapunov", sc_extra.lyapunov, "estimate the largest Lyapunov exponent");
    sc->add_option("--horizon", sc_extra.horizon, "Lyapunov integration time")
        ->capture_default_str();
    sc->add_option("--renorm", sc_extra.renorm, "Lyapunov renormalization interval")
        ->capture_default_str();
    sc->add_option("--step", sc_extra.step, "classical integrator step")->capture_default_str();
    sc->add_flag("--no-trajectory", sc_extra.no_trajectory, "skip the classical trajectory CSV");

    auto* pc = app.add_subcommand("poincare", "Poincare section of the classical flow");
    add_common_flags(pc, pc_flags);
    long pc_crossings = 500;
    double pc_max_time = 1e4;
    pc->add_option("--point", pc_extra.point, "classical start 'q1,p1,q2,p2'");
    pc->add_option("--crossings", pc_crossings, "number of crossings to collect")
        ->capture_default_str();
    pc->add_option("--direction", pc_extra.direction, "section crossing direction")
        ->capture_default_str();
    pc->add_option("--step", pc_extra.step, "classical integrator step")->capture_default_str();
    pc->add_option("--max-time", pc_max_time, "integration time budget")->capture_default_str();

    auto* ly = app.add_subcommand("lyapunov", "largest Lyapunov exponent of the classical flow");
    add_common_flags(ly, ly_flags);
    ly->add_option("--point", ly_extra.point, "classical start 'q1,p1,q2,p2'");
    ly->add_option("--horizon", ly_extra.horizon, "integration time")->capture_default_str();
    ly->add_option("--renorm", ly_extra.renorm, "renormalization interval")->capture_default_str();
    ly->add_option("--step", ly_extra.step, "integrator step")->capture_default_str();

    auto* lp = app.add_subcommand("list-presets", "print every named preset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (lp->parsed()) {
            list_presets_command();
            return kExitOk;
        }
        if (tq->parsed()) {
            if (tq_flags.preset == "all")
                return run_all_presets(Regime::two_qubits, tq_flags, no_extra);
            return run_and_summarize(resolve_config(Regime::two_qubits, tq_flags), tq_flags,
                                     no_extra);
        }
        if (env->parsed()) {
            if (env_flags.preset == "all")
                return run_all_presets(Regime::environment, env_flags, no_extra);
            ScenarioConfig cfg = resolve_config(Regime::environment, env_flags);
            if (env_s1) cfg.model.s1 = SpinMagnitude::from_value(*env_s1);
            if (env_initial == "coherent") {
                if (cfg.initial1.kind != InitialSpec::Kind::coherent)
                    cfg.initial1 = InitialSpec::coherent(CoherentLabel{{0.0, 0.0}});
            } else if (env_initial == "uniform") {
                cfg.initial1 = InitialSpec::uniform();
            } else if (env_initial == "thermal") {
                cfg.initial1 = InitialSpec::thermal(
                    env_temperature > 0.0 ? env_temperature : cfg.model.s1.value() / 10.0);
            } else if (!env_initial.empty()) {
                throw ConfigError("--initial: expected coherent|uniform|thermal, got '" +
                                  env_initial + "'");
            } else if (env_temperature > 0.0) {
                cfg.initial1 = InitialSpec::thermal(env_temperature);
            }
            return run_and_summarize(cfg, env_flags, no_extra);
        }
        if (sc->parsed()) {
            if (sc_flags.preset == "all")
                return run_all_presets(Regime::semiclassical, sc_flags, sc_extra);
            ScenarioConfig cfg = resolve_config(Regime::semiclassical, sc_flags);
            if (sc_s) cfg.model.s1 = cfg.model.s2 = SpinMagnitude::from_value(*sc_s);
            if (!sc_extra.point.empty()) apply_point(cfg, sc_extra.point);
            return run_and_summarize(cfg, sc_flags, sc_extra);
        }
        if (pc->parsed())
            return run_poincare_command(pc_flags, pc_extra, pc_crossings, pc_max_time);
        if (ly->parsed()) return run_lyapunov_command(ly_flags, ly_extra);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}
