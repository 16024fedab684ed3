// vclod: velocity-contingent LOD toolkit.
//
// Subcommands cover the whole desk-scale pipeline: LOD chain
// generation from an OBJ mesh, motion trace synthesis, velocity
// thresholded LOD scheduling, the simulated 2-IFC experiment,
// psychometric fitting, cohort statistics, and SVG reports.
//
// Exit codes: 0 success, 2 validation/config error, 3 runtime error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vclod/artifacts.hpp"
#include "vclod/pipeline.hpp"
#include "vclod/procedural.hpp"

namespace fs = std::filesystem;
using namespace vclod;

namespace {

void require_input_file(const std::string& path) {
    if (!fs::exists(path)) throw ValidationError("input file not found: " + path);
}

std::vector<double> parse_level_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw ValidationError("bad aggressiveness value '" + token + "'");
        }
    }
    if (out.empty()) throw ValidationError("empty aggressiveness list");
    return out;
}

struct GlobalOptions {
    std::uint64_t seed = 42;
    std::string config;
    std::string outdir = ".";
    bool verbose = false;
};

void log_verbose(const GlobalOptions& g, const std::string& msg) {
    if (g.verbose) std::cerr << "[vclod] " << msg << "\n";
}

// ---- lod gen ----

void cmd_lod_gen(const GlobalOptions& g, const std::string& input, const std::string& levels_csv,
                 std::size_t samples) {
    require_input_file(input);
    const std::vector<double> levels =
        levels_csv.empty() ? default_aggressiveness_ladder() : parse_level_list(levels_csv);
    TriangleMesh mesh = load_obj(input);
    validate(mesh);
    log_verbose(g, "loaded " + input + " (" + std::to_string(mesh.triangle_count()) + " triangles)");
    const LodChain chain = generate_lod_chain(mesh, levels);
    fs::create_directories(g.outdir);
    const ChainArtifacts arts = write_chain_artifacts(chain, g.outdir, g.seed, samples);
    std::cout << "wrote " << arts.obj_paths.size() << " LOD meshes and "
              << arts.manifest_path.string() << "\n";
}

// ---- sim trace ----

void cmd_sim_trace(const GlobalOptions& g, const std::string& condition, const std::string& out,
                   double peak, double start, int direction, double duration, double rate,
                   double range, bool head, double lag, double jitter) {
    MotionProfile profile = MotionProfile::for_condition(condition_from_string(condition));
    if (peak > 0.0) profile.peak_speed_deg_s = peak;
    profile.sweep_half_range_deg = range;
    profile.interval_duration_s = duration;
    profile.sample_rate_hz = rate;
    profile.start_azimuth_deg = std::isnan(start) ? -range : start;
    profile.direction = direction;

    KinematicTrace trace = fixation_trajectory(profile);
    if (head) trace = simulate_head_trace(trace, lag, jitter, g.seed);
    write_trace_csv(trace, out, g.seed);
    std::cout << "wrote " << out << " (" << trace.size() << " samples)\n";
}

// ---- sim schedule ----

void cmd_sim_schedule(const GlobalOptions& g, const std::string& trace_path,
                      const std::string& mode, double threshold_fraction, double peak,
                      int level_index, int level_count, const std::string& out) {
    require_input_file(trace_path);
    const KinematicTrace trace = read_trace_csv(trace_path);
    SchedulerConfig cfg;
    cfg.mode = scheduler_mode_from_string(mode);
    cfg.threshold_fraction = threshold_fraction;
    cfg.reference_peak_speed_deg_s = peak;
    cfg.degraded_level_index = level_index;
    cfg.chain_level_count = level_count;
    const LodSchedule sched = schedule(trace, cfg);
    write_schedule_csv(sched, out, g.seed);
    std::cout << "wrote " << out << " (degraded fraction "
              << detail::format_double(degraded_fraction(sched)) << ", " << sched.switch_count
              << " switches)\n";
}

// ---- sim run ----

void cmd_sim_run(const GlobalOptions& g, const std::string& design_path, int cohort,
                 const std::string& out, const std::string& stimulus_out) {
    DesignDocument doc;
    if (!design_path.empty()) {
        require_input_file(design_path);
        doc = design_from_json(read_json_file(design_path));
    }
    ExperimentDesign design = doc.design;

    const CohortResult result =
        run_cohort(cohort, design, doc.population, g.seed, &doc.stimulus);
    write_trials_csv(result.records, out, g.seed);
    std::cout << "wrote " << out << " (" << result.records.size() << " trials, " << cohort
              << " participants)\n";
    if (!stimulus_out.empty()) {
        write_stimulus_csv(result.stimulus_log, stimulus_out, g.seed);
        std::cout << "wrote " << stimulus_out << "\n";
    }
}

// ---- fit / analyze / report ----

void cmd_fit(const GlobalOptions& g, const std::string& trials_path, const std::string& out) {
    require_input_file(trials_path);
    const std::vector<TrialRecord> records = read_trials_csv(trials_path);
    const std::vector<ParticipantFitRecord> fits = fit_all(records);
    write_json_file(out, fits_to_json(fits, g.seed));
    int converged = 0, total = 0;
    for (const auto& rec : fits)
        for (const auto& slot : rec.by_condition) {
            ++total;
            if (slot.fit.converged) ++converged;
        }
    std::cout << "wrote " << out << " (" << converged << "/" << total << " fits converged)\n";
}

void cmd_analyze(const GlobalOptions& g, const std::string& fits_path, const std::string& out) {
    require_input_file(fits_path);
    const std::vector<ParticipantFitRecord> fits = fits_from_json(read_json_file(fits_path));
    const CohortStats stats = analyze_fits(fits);
    write_json_file(out, stats_to_json(stats, g.seed));
    std::cout << "wrote " << out << " (n=" << stats.n_included
              << ", t=" << detail::format_double(stats.t_statistic)
              << ", p=" << detail::format_double(stats.p_value) << ")\n";
}

void cmd_report(const GlobalOptions& g, const std::string& fits_path, const std::string& out,
                int participant) {
    require_input_file(fits_path);
    const std::vector<ParticipantFitRecord> fits = fits_from_json(read_json_file(fits_path));
    int chosen = participant;
    if (chosen < 0) {
        for (const auto& rec : fits)
            if (rec.by_condition[0].fit.converged && rec.by_condition[1].fit.converged) {
                chosen = rec.participant_id;
                break;
            }
        if (chosen < 0) throw ValidationError("no participant with converged fits to report");
    }
    write_report_svg(fits, chosen, out, g.seed);
    std::cout << "wrote " << out << " (participant " << chosen << ")\n";
}

// ---- pipeline ----

void cmd_pipeline(const GlobalOptions& g, bool seed_overridden) {
    if (g.config.empty()) throw ValidationError("pipeline requires --config <file.json>");
    require_input_file(g.config);
    PipelineConfig cfg = load_pipeline_config(g.config);
    if (seed_overridden) cfg.seed = g.seed;
    const PipelineManifest manifest = run_pipeline(cfg, g.outdir, g.verbose);
    std::cout << "pipeline complete: " << manifest.artifacts.size() << " artifacts, manifest at "
              << manifest.manifest_path.string() << "\n";
}

// ---- mesh make (corpus stand-ins) ----

void cmd_mesh_make(const GlobalOptions& g, const std::string& shape, const std::string& out,
                   int a, int b) {
    TriangleMesh mesh;
    if (shape == "column")
        mesh = procedural::bumpy_column(a > 0 ? a : 61, b > 0 ? b : 98);
    else if (shape == "grid")
        mesh = procedural::planar_grid(a > 0 ? a : 10, b > 0 ? b : 10);
    else if (shape == "sphere")
        mesh = procedural::uv_sphere(a > 0 ? a : 24, b > 0 ? b : 16);
    else if (shape == "cube")
        mesh = procedural::unit_cube();
    else if (shape == "strip")
        mesh = procedural::open_strip(a > 0 ? a : 12);
    else
        throw ValidationError("unknown shape '" + shape + "' (column|grid|sphere|cube|strip)");
    save_obj(mesh, out, {"seed=" + std::to_string(g.seed)});
    std::cout << "wrote " << out << " (" << mesh.triangle_count() << " triangles)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"velocity-contingent LOD toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOptions g;
    auto* seed_opt = app.add_option("--seed", g.seed, "master random seed")->capture_default_str();
    app.add_option("--config", g.config, "pipeline configuration JSON");
    app.add_option("--outdir", g.outdir, "output directory")->capture_default_str();
    app.add_flag("--verbose", g.verbose, "log progress to stderr");

    // lod gen
    auto* lod = app.add_subcommand("lod", "LOD chain operations");
    auto* lod_gen = lod->add_subcommand("gen", "generate an LOD chain from an OBJ mesh");
    std::string gen_input, gen_levels;
    std::size_t gen_samples = 2000;
    lod_gen->add_option("--input", gen_input, "reference OBJ mesh")->required();
    lod_gen->add_option("--levels", gen_levels, "comma-separated aggressiveness fractions");
    lod_gen->add_option("--samples", gen_samples, "deviation sample count")->capture_default_str();

    // sim
    auto* sim = app.add_subcommand("sim", "motion, scheduling and experiment simulation");
    auto* sim_trace = sim->add_subcommand("trace", "write a fixation or head motion trace CSV");
    std::string trace_condition = "fast", trace_out = "trace.csv";
    double trace_peak = -1.0, trace_start = std::numeric_limits<double>::quiet_NaN(),
           trace_duration = 2.5, trace_rate = 90.0,
           trace_range = 50.0, trace_lag = 0.1, trace_jitter = 0.5;
    int trace_direction = 1;
    bool trace_head = false;
    sim_trace->add_option("--condition", trace_condition, "slow|fast")->capture_default_str();
    sim_trace->add_option("--out", trace_out, "output CSV")->capture_default_str();
    sim_trace->add_option("--peak", trace_peak, "peak speed deg/s (default by condition)");
    sim_trace->add_option("--start", trace_start, "start azimuth deg (default -range)");
    sim_trace->add_option("--direction", trace_direction, "+1 or -1")->capture_default_str();
    sim_trace->add_option("--duration", trace_duration, "interval seconds")->capture_default_str();
    sim_trace->add_option("--rate", trace_rate, "sample rate Hz")->capture_default_str();
    sim_trace->add_option("--range", trace_range, "sweep half-range deg")->capture_default_str();
    sim_trace->add_flag("--head", trace_head, "apply the lag+jitter head tracking model");
    sim_trace->add_option("--lag", trace_lag, "head lag time constant s")->capture_default_str();
    sim_trace->add_option("--jitter", trace_jitter, "head jitter sd deg")->capture_default_str();

    auto* sim_schedule = sim->add_subcommand("schedule", "map a trace to per-frame LOD indices");
    std::string sched_trace, sched_mode = "binary", sched_out = "schedule.csv";
    double sched_threshold = 0.5, sched_peak = 157.0;
    int sched_level_index = 1, sched_level_count = 8;
    sim_schedule->add_option("--trace", sched_trace, "input trace CSV")->required();
    sim_schedule->add_option("--mode", sched_mode, "binary|graded")->capture_default_str();
    sim_schedule->add_option("--threshold", sched_threshold, "threshold fraction of peak")
        ->capture_default_str();
    sim_schedule->add_option("--peak", sched_peak, "reference peak speed deg/s")
        ->capture_default_str();
    sim_schedule->add_option("--level-index", sched_level_index, "binary: degraded chain index")
        ->capture_default_str();
    sim_schedule->add_option("--levels", sched_level_count, "graded: chain level count")
        ->capture_default_str();
    sim_schedule->add_option("--out", sched_out, "output CSV")->capture_default_str();

    auto* sim_run = sim->add_subcommand("run", "simulate a 2-IFC cohort");
    std::string run_design, run_out = "trials.csv", run_stim_out;
    int run_cohort_n = 15;
    sim_run->add_option("--design", run_design, "design JSON (defaults when omitted)");
    sim_run->add_option("--cohort", run_cohort_n, "number of participants")->capture_default_str();
    sim_run->add_option("--out", run_out, "trials CSV")->capture_default_str();
    sim_run->add_option("--stimulus-out", run_stim_out, "per-trial stimulus log CSV");

    // fit / analyze / report
    auto* fit_cmd = app.add_subcommand("fit", "maximum-likelihood psychometric fits");
    std::string fit_trials, fit_out = "fits.json";
    fit_cmd->add_option("--trials", fit_trials, "trials CSV")->required();
    fit_cmd->add_option("--out", fit_out, "fits JSON")->capture_default_str();

    auto* analyze_cmd = app.add_subcommand("analyze", "thresholds, exclusion and paired t-test");
    std::string analyze_fits_path, analyze_out = "stats.json";
    analyze_cmd->add_option("--fits", analyze_fits_path, "fits JSON")->required();
    analyze_cmd->add_option("--out", analyze_out, "stats JSON")->capture_default_str();

    auto* report_cmd = app.add_subcommand("report", "psychometric function SVG plot");
    std::string report_fits_path, report_out = "pf.svg";
    int report_participant = -1;
    report_cmd->add_option("--fits", report_fits_path, "fits JSON")->required();
    report_cmd->add_option("--out", report_out, "output SVG")->capture_default_str();
    report_cmd->add_option("--participant", report_participant,
                           "participant id (default: first fittable)");

    // pipeline
    auto* pipeline_cmd = app.add_subcommand("pipeline", "run every stage end to end");

    // mesh make
    auto* mesh_cmd = app.add_subcommand("mesh", "procedural corpus meshes");
    auto* mesh_make = mesh_cmd->add_subcommand("make", "write a procedural mesh OBJ");
    std::string mesh_shape = "column", mesh_out = "mesh.obj";
    int mesh_a = 0, mesh_b = 0;
    mesh_make->add_option("--shape", mesh_shape, "column|grid|sphere|cube|strip")
        ->capture_default_str();
    mesh_make->add_option("--out", mesh_out, "output OBJ")->capture_default_str();
    mesh_make->add_option("--a", mesh_a, "first shape parameter");
    mesh_make->add_option("--b", mesh_b, "second shape parameter");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lod_gen->parsed())
            cmd_lod_gen(g, gen_input, gen_levels, gen_samples);
        else if (sim_trace->parsed())
            cmd_sim_trace(g, trace_condition, trace_out, trace_peak, trace_start, trace_direction,
                          trace_duration, trace_rate, trace_range, trace_head, trace_lag,
                          trace_jitter);
        else if (sim_schedule->parsed())
            cmd_sim_schedule(g, sched_trace, sched_mode, sched_threshold, sched_peak,
                             sched_level_index, sched_level_count, sched_out);
        else if (sim_run->parsed())
            cmd_sim_run(g, run_design, run_cohort_n, run_out, run_stim_out);
        else if (fit_cmd->parsed())
            cmd_fit(g, fit_trials, fit_out);
        else if (analyze_cmd->parsed())
            cmd_analyze(g, analyze_fits_path, analyze_out);
        else if (report_cmd->parsed())
            cmd_report(g, report_fits_path, report_out, report_participant);
        else if (pipeline_cmd->parsed())
            cmd_pipeline(g, seed_opt->count() > 0);
        else if (mesh_make->parsed())
            cmd_mesh_make(g, mesh_shape, mesh_out, mesh_a, mesh_b);
        else {
            std::cerr << app.help();
            return 2;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.from_validation ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
