// Command-line entry point: one verb per experiment (calibration run, FD
// campaign, bottleneck campaign, parameter sweep) plus `analyze`, which
// replays any written manifest. All outputs are plain files (CSV, binary P5
// PGM, config-grammar manifests); identical inputs produce identical bytes.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "groupflow/groupflow.hpp"

namespace {

using namespace groupflow;

// Spec'd exit codes: 0 success, 2 config/user errors, 3 engine faults.
int exit_code_for(const Error& e) {
    static const char* user_errors[] = {
        "config-parse",   "config-io",       "config-value",       "config-missing",
        "invalid-weights", "invalid-geometry", "spawn-overflow",     "over-capacity",
        "would-overwrite", "io-failure",      "histogram-mismatch", "incomplete-stats",
        "no-dyads",       "empty-sources",   "empty-window",       "not-grouped",
    };
    for (const char* id : user_errors)
        if (e.id() == id) return 2;
    return 3;
}

struct Invocation {
    std::string verb;
    ScenarioConfig scenario;
    SweepSpec sweep_spec;
    int replicas = 1;
    double dyad_fraction = 0.0;
    std::vector<double> densities;
    std::vector<double> widths;
};

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += ',';
        out += format_double(v);
    }
    return out;
}

std::vector<double> split_doubles(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find(',', begin);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(begin, end - begin);
        if (!item.empty()) {
            try {
                std::size_t used = 0;
                const double v = std::stod(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                out.push_back(v);
            } catch (const std::exception&) {
                throw Error("config-value", "key '" + key + "': '" + item + "' is not a number");
            }
        }
        begin = end + 1;
    }
    return out;
}

std::string manifest_text(const Invocation& inv) {
    ConfigWriter w;
    w.section("meta");
    w.set("version", std::string(kVersion));
    w.set("verb", inv.verb);
    w.set("replicas", long(inv.replicas));
    w.set("dyad_fraction", inv.dyad_fraction);
    if (!inv.densities.empty()) w.set("densities", join_doubles(inv.densities));
    if (!inv.widths.empty()) w.set("widths", join_doubles(inv.widths));
    std::string text = w.text() + "\n";
    text += inv.scenario.to_config_text();
    if (inv.verb == "sweep") {
        ConfigWriter s;
        inv.sweep_spec.write_to(s);
        text += "\n" + s.text();
    }
    return text;
}

std::string out_path(const std::string& dir, const std::string& name) {
    return dir + "/" + name;
}

void write_summary_and_manifest(const std::string& dir, const Invocation& inv,
                                const std::string& summary, bool force) {
    write_file(out_path(dir, "summary.txt"), summary, force);
    write_file(out_path(dir, "manifest.cfg"), manifest_text(inv), force);
}

std::string speed_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

// --- verb: run (calibration corridor) --------------------------------------

void exec_run(const Invocation& inv, const std::string& dir, bool force) {
    const CalibrationBatch batch = run_calibration_batch(inv.scenario, inv.replicas);

    CsvBuilder speeds({"scope", "singles_mps", "dyads_mps", "population_mps"});
    for (int r = 0; r < inv.replicas; ++r) {
        const ClassSpeeds& s = batch.per_replica[std::size_t(r)];
        speeds.cell("replica-" + std::to_string(r))
            .cell(speed_cell(s.singles))
            .cell(speed_cell(s.dyads))
            .cell(speed_cell(s.population));
        speeds.end_row();
    }
    speeds.cell("pooled")
        .cell(speed_cell(batch.stats.speeds.singles))
        .cell(speed_cell(batch.stats.speeds.dyads))
        .cell(speed_cell(batch.stats.speeds.population));
    speeds.end_row();
    write_file(out_path(dir, "speeds.csv"), speeds.text(), force);

    const Histogram2D& h = batch.stats.rel_positions;
    CsvBuilder hist({"dx_m", "dy_m", "mass"});
    for (int iy = 0; iy < h.bins; ++iy)
        for (int ix = 0; ix < h.bins; ++ix) {
            const Vec2d c = h.center(ix, iy);
            hist.cell(c.x).cell(c.y).cell(h.at(ix, iy));
            hist.end_row();
        }
    write_file(out_path(dir, "histogram.csv"), hist.text(), force);

    // Density map of the first replica, for a quick visual sanity check.
    ScenarioConfig first = inv.scenario;
    first.seed = replica_seed(inv.scenario.seed, 0, 0);
    const RunRecord rec = simulate(first);
    write_file(out_path(dir, "density.pgm"),
               render_pgm(rec.env.width, rec.env.height, cumulative_mean_density(rec)), force);

    const auto [mx, my] = h.mode();
    const Vec2d mode_m = h.center(mx, my);
    std::string summary;
    summary += "calibration corridor, " + std::to_string(inv.replicas) + " replicas, seed " +
               std::to_string(inv.scenario.seed) + "\n";
    summary += "speed singles    = " + speed_cell(batch.stats.speeds.singles) + " m/s\n";
    summary += "speed dyads      = " + speed_cell(batch.stats.speeds.dyads) + " m/s\n";
    summary += "speed population = " + speed_cell(batch.stats.speeds.population) + " m/s\n";
    summary += "histogram samples = " + std::to_string(batch.hist_samples) + "\n";
    summary += "histogram mode offset = (" + format_double(mode_m.x) + ", " +
               format_double(mode_m.y) + ") m\n";
    write_summary_and_manifest(dir, inv, summary, force);
    std::cout << summary;
}

// --- verb: fd (periodic corridor campaign) ---------------------------------

void exec_fd(const Invocation& inv, const std::string& dir, bool force) {
    std::vector<FdCell> cells;
    std::uint64_t salt = 0;
    for (double d : inv.densities)
        cells.push_back(run_fd_cell(inv.scenario, d, inv.dyad_fraction, inv.replicas, salt++));

    CsvBuilder windows({"target_density", "dyad_fraction", "replica", "window_start", "density",
                        "speed_mps", "flow_pms"});
    CsvBuilder summary_csv(
        {"target_density", "dyad_fraction", "replicas", "mean_density", "mean_speed_mps",
         "mean_flow_pms"});
    for (const FdCell& cell : cells) {
        const std::size_t per_replica =
            cell.replicas > 0 ? cell.windows.size() / std::size_t(cell.replicas) : 0;
        for (std::size_t i = 0; i < cell.windows.size(); ++i) {
            const FdPoint& p = cell.windows[i];
            windows.cell(cell.target_density)
                .cell(cell.dyad_fraction)
                .cell(long(per_replica > 0 ? i / per_replica : 0))
                .cell(p.window_start)
                .cell(p.density)
                .cell(p.speed)
                .cell(p.flow);
            windows.end_row();
        }
        summary_csv.cell(cell.target_density)
            .cell(cell.dyad_fraction)
            .cell(cell.replicas)
            .cell(cell.mean_density)
            .cell(cell.mean_speed)
            .cell(cell.mean_flow);
        summary_csv.end_row();
    }
    write_file(out_path(dir, "fd_windows.csv"), windows.text(), force);
    write_file(out_path(dir, "fd_cells.csv"), summary_csv.text(), force);

    std::string summary = "fundamental diagram, dyad fraction " +
                          format_double(inv.dyad_fraction) + ", " +
                          std::to_string(inv.replicas) + " replicas\n";
    for (const FdCell& cell : cells)
        summary += "density " + format_double(cell.target_density) + ": speed " +
                   format_double(cell.mean_speed) + " m/s, flow " + format_double(cell.mean_flow) +
                   " p/(m s)\n";
    write_summary_and_manifest(dir, inv, summary, force);
    std::cout << summary;
}

// --- verb: bottleneck (room egress campaign) -------------------------------

void exec_bottleneck(const Invocation& inv, const std::string& dir, bool force) {
    // Fig. 7 layout: a singles-only panel next to a dyad panel, so the
    // campaign always includes the 0.0 baseline.
    std::vector<double> fractions{0.0};
    if (inv.dyad_fraction > 0.0) fractions.push_back(inv.dyad_fraction);

    CsvBuilder flow({"width_m", "width_discrete_m", "dyad_fraction", "replica", "crossings",
                     "J_ps", "specific_pms"});
    std::string summary = "bottleneck room, " + std::to_string(inv.replicas) + " replicas\n";
    std::uint64_t salt = 0;
    for (double f : fractions) {
        for (double wm : inv.widths) {
            const BottleneckCell cell = run_bottleneck_cell(inv.scenario, wm, f, inv.replicas, salt++);
            for (int r = 0; r < cell.replicas; ++r) {
                const FlowStats& fs = cell.per_replica[std::size_t(r)];
                flow.cell(cell.width_m)
                    .cell(cell.width_discrete_m)
                    .cell(cell.dyad_fraction)
                    .cell("replica-" + std::to_string(r))
                    .cell(fs.crossings)
                    .cell(fs.J)
                    .cell(fs.specific);
                flow.end_row();
            }
            flow.cell(cell.width_m)
                .cell(cell.width_discrete_m)
                .cell(cell.dyad_fraction)
                .cell("mean")
                .cell(cell.mean.crossings)
                .cell(cell.mean.J)
                .cell(cell.mean.specific);
            flow.end_row();

            const std::string panel = f > 0.0 ? "dyads" : "singles";
            write_file(out_path(dir, "density_w" + format_double(wm) + "_" + panel + ".pgm"),
                       render_pgm(cell.map_width, cell.map_height, cell.density_map), force);
            summary += "width " + format_double(wm) + " m, " + panel + ": specific flow " +
                       format_double(cell.mean.specific) + " p/(m s)\n";
        }
    }
    write_file(out_path(dir, "flow.csv"), flow.text(), force);
    write_summary_and_manifest(dir, inv, summary, force);
    std::cout << summary;
}

// --- verb: sweep (delta x kappa_c calibration grid) ------------------------

void exec_sweep(const Invocation& inv, const std::string& dir, bool force) {
    const SweepResult result = sweep(inv.sweep_spec, inv.scenario);

    CsvBuilder grid({"delta_lattice", "delta_m", "kappa_c", "singles_mps", "dyads_mps",
                     "population_mps", "hist_l1", "objective", "failed"});
    for (const SweepPoint& p : result.points) {
        grid.cell(p.delta_lattice)
            .cell(p.delta_lattice * kDeltaUnitM)
            .cell(p.kappa_c)
            .cell(speed_cell(p.speeds.singles))
            .cell(speed_cell(p.speeds.dyads))
            .cell(speed_cell(p.speeds.population))
            .cell(p.hist_distance)
            .cell(p.objective)
            .cell(p.failed ? "true" : "false");
        grid.end_row();
    }
    write_file(out_path(dir, "sweep.csv"), grid.text(), force);

    CsvBuilder ranking({"rank", "delta_lattice", "kappa_c", "objective"});
    for (std::size_t i = 0; i < result.ranking.size(); ++i) {
        const SweepPoint& p = result.points[std::size_t(result.ranking[i])];
        ranking.cell(long(i)).cell(p.delta_lattice).cell(p.kappa_c).cell(p.objective);
        ranking.end_row();
    }
    write_file(out_path(dir, "ranking.csv"), ranking.text(), force);

    const SweepPoint& best = result.points[std::size_t(result.ranking.front())];
    std::string summary = "sweep " + std::to_string(inv.sweep_spec.delta_count()) + "x" +
                          std::to_string(inv.sweep_spec.kappa_count()) + ", " +
                          std::to_string(inv.sweep_spec.replicas) + " replicas per point\n";
    summary += "best point: delta = " + format_double(best.delta_lattice * kDeltaUnitM) +
               " m (lattice " + std::to_string(best.delta_lattice) + "), kappa_c = " +
               std::to_string(best.kappa_c) + ", objective = " + format_double(best.objective) +
               "\n";
    write_summary_and_manifest(dir, inv, summary, force);
    std::cout << summary;
}

void execute(const Invocation& inv, const std::string& dir, bool force) {
    ensure_dir(dir);
    if (inv.verb == "run")
        exec_run(inv, dir, force);
    else if (inv.verb == "fd")
        exec_fd(inv, dir, force);
    else if (inv.verb == "bottleneck")
        exec_bottleneck(inv, dir, force);
    else if (inv.verb == "sweep")
        exec_sweep(inv, dir, force);
    else
        throw Error("config-value", "unknown manifest verb '" + inv.verb + "'");
}

ScenarioConfig default_scenario(const std::string& verb) {
    ScenarioConfig cfg;
    if (verb == "run" || verb == "sweep") {
        cfg.kind = ScenarioKind::CalibrationCorridor;
        cfg.population = 54;
        cfg.dyad_fraction = 24.0 / 54.0;
        cfg.steps = 2000;
        cfg.warmup_steps = 0;
    } else if (verb == "fd") {
        cfg.kind = ScenarioKind::PeriodicCorridor;
        cfg.steps = 5000;
        cfg.warmup_steps = 2000;
    } else {
        cfg.kind = ScenarioKind::BottleneckRoom;
        cfg.population = 400;
        cfg.steps = 5000;
        cfg.warmup_steps = 2000;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"groupflow: floor-field pedestrian simulation with dyad cohesion"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int replicas = 0;
    double dyads = -1.0;
    std::vector<double> densities;
    std::vector<double> widths;
    bool force = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config or manifest file");
        cmd->add_option("--out", out_dir, "output directory (created if absent)");
        cmd->add_option("--seed", seed, "base seed override");
        cmd->add_option("--replicas", replicas, "replica count override");
        cmd->add_flag("--force", force, "overwrite existing output files");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "calibration-corridor batch");
    add_common(cmd_run);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "(delta, kappa_c) calibration grid");
    add_common(cmd_sweep);

    CLI::App* cmd_fd = app.add_subcommand("fd", "fundamental-diagram campaign");
    add_common(cmd_fd);
    cmd_fd->add_option("--density", densities, "target density p/m^2 (repeatable)");
    cmd_fd->add_option("--dyads", dyads, "dyad fraction of the population");

    CLI::App* cmd_bneck = app.add_subcommand("bottleneck", "bottleneck-room campaign");
    add_common(cmd_bneck);
    cmd_bneck->add_option("--width", widths, "opening width in meters (repeatable)");
    cmd_bneck->add_option("--dyads", dyads, "dyad fraction of the population");

    CLI::App* cmd_analyze = app.add_subcommand("analyze", "replay a written manifest");
    add_common(cmd_analyze);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad command line is a user error, same as a bad config
    }

    CLI::App* active = app.get_subcommands().front();
    const bool seed_set = active->count("--seed") > 0;
    const bool replicas_set = active->count("--replicas") > 0;
    const bool dyads_set =
        (active == cmd_fd || active == cmd_bneck) && active->count("--dyads") > 0;

    try {
        Invocation inv;
        Config file_cfg;
        const bool have_config = !config_path.empty();
        if (have_config) file_cfg = Config::load(config_path);

        if (app.got_subcommand(cmd_analyze)) {
            if (!have_config) throw Error("config-missing", "analyze needs --config <manifest>");
            inv.verb = file_cfg.get_string("meta.verb");
            inv.scenario = ScenarioConfig::from_config(file_cfg);
            inv.replicas = int(file_cfg.get_int("meta.replicas", 1));
            inv.dyad_fraction = file_cfg.get_double("meta.dyad_fraction", 0.0);
            inv.densities = split_doubles(file_cfg.get_string("meta.densities", ""), "meta.densities");
            inv.widths = split_doubles(file_cfg.get_string("meta.widths", ""), "meta.widths");
            if (inv.verb == "sweep") inv.sweep_spec = SweepSpec::from_config(file_cfg);
        } else {
            if (app.got_subcommand(cmd_run)) inv.verb = "run";
            if (app.got_subcommand(cmd_sweep)) inv.verb = "sweep";
            if (app.got_subcommand(cmd_fd)) inv.verb = "fd";
            if (app.got_subcommand(cmd_bneck)) inv.verb = "bottleneck";

            if (have_config && file_cfg.has("scenario.kind")) {
                inv.scenario = ScenarioConfig::from_config(file_cfg);
            } else {
                inv.scenario = default_scenario(inv.verb);
            }
            if (inv.verb == "sweep") inv.sweep_spec = SweepSpec::from_config(have_config ? file_cfg : Config());

            const long cfg_replicas =
                have_config ? file_cfg.get_int("run.replicas", 0) : 0;
            if (cfg_replicas > 0) inv.replicas = int(cfg_replicas);
            else if (inv.verb == "run") inv.replicas = 10;
            else if (inv.verb == "sweep") inv.replicas = inv.sweep_spec.replicas;
            else inv.replicas = 1;

            inv.dyad_fraction =
                have_config ? file_cfg.get_double("run.dyad_fraction", 0.0) : 0.0;
            if (dyads_set) inv.dyad_fraction = dyads;

            if (have_config && file_cfg.has("run.densities"))
                inv.densities = split_doubles(file_cfg.get_string("run.densities"), "run.densities");
            if (!densities.empty()) inv.densities = densities;
            if (inv.verb == "fd" && inv.densities.empty())
                inv.densities = {0.5, 1.0, 1.5, 2.0, 3.0};

            if (have_config && file_cfg.has("run.widths"))
                inv.widths = split_doubles(file_cfg.get_string("run.widths"), "run.widths");
            if (!widths.empty()) inv.widths = widths;
            if (inv.verb == "bottleneck" && inv.widths.empty()) inv.widths = {2.0, 3.0, 4.0};
        }

        if (replicas_set) {
            if (replicas < 1) throw Error("config-value", "--replicas must be >= 1");
            inv.replicas = replicas;
        }
        if (seed_set) inv.scenario.seed = seed;
        if (inv.verb == "sweep") {
            inv.sweep_spec.replicas = inv.replicas;
            if (seed_set) inv.sweep_spec.seed_base = seed;
        }

        if (inv.verb == "run" && inv.scenario.kind != ScenarioKind::CalibrationCorridor)
            throw Error("config-value", "verb 'run' expects a calibration-corridor scenario");

        execute(inv, out_dir, force);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 3;
    }
}
