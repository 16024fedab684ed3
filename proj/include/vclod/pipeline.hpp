#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "vclod/artifacts.hpp"

namespace vclod {

// FNV-1a (64-bit) over file bytes; the manifest records it so a
// re-run can be diffed without opening every artifact.
inline std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buffer[8192];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buffer[i]);
            h *= 0x100000001b3ull;
        }
        if (got < static_cast<std::streamsize>(sizeof(buffer))) break;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::filesystem::path& path) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(path)));
    return buf;
}

struct PipelineConfig {
    std::uint64_t seed = 42;
    std::filesystem::path mesh_path;
    std::vector<double> aggressiveness_levels = default_aggressiveness_ladder();
    std::size_t deviation_samples = 2000;

    MotionProfile slow_profile = MotionProfile::slow();
    MotionProfile fast_profile = MotionProfile::fast();
    HeadModel head;
    double threshold_fraction = 0.5;

    int repetitions_per_level = 20;
    bool interleaved = true;

    int participants = 15;
    PopulationParams population;

    int report_participant = -1; // -1: first participant surviving exclusion
};

namespace detail {

inline void apply_profile_json(MotionProfile& profile, const ordered_json& j) {
    if (j.contains("peak_speed_deg_s")) profile.peak_speed_deg_s = j.at("peak_speed_deg_s");
    if (j.contains("sweep_half_range_deg")) {
        profile.sweep_half_range_deg = j.at("sweep_half_range_deg");
        profile.start_azimuth_deg = -profile.sweep_half_range_deg;
    }
    if (j.contains("interval_duration_s")) profile.interval_duration_s = j.at("interval_duration_s");
    if (j.contains("sample_rate_hz")) profile.sample_rate_hz = j.at("sample_rate_hz");
    if (j.contains("start_azimuth_deg")) profile.start_azimuth_deg = j.at("start_azimuth_deg");
    if (j.contains("direction")) profile.direction = j.at("direction");
}

inline ordered_json profile_json(const MotionProfile& p) {
    return ordered_json{{"peak_speed_deg_s", p.peak_speed_deg_s},
                        {"sweep_half_range_deg", p.sweep_half_range_deg},
                        {"interval_duration_s", p.interval_duration_s},
                        {"sample_rate_hz", p.sample_rate_hz},
                        {"start_azimuth_deg", p.start_azimuth_deg},
                        {"direction", p.direction}};
}

inline void apply_population_json(PopulationParams& pop, const ordered_json& j) {
    if (j.contains("mu_mean_pct")) {
        pop.mu_mean_pct[0] = j.at("mu_mean_pct").at(0);
        pop.mu_mean_pct[1] = j.at("mu_mean_pct").at(1);
    }
    if (j.contains("mu_sd_pct")) {
        pop.mu_sd_pct[0] = j.at("mu_sd_pct").at(0);
        pop.mu_sd_pct[1] = j.at("mu_sd_pct").at(1);
    }
    if (j.contains("sigma_mean_pct")) pop.sigma_mean_pct = j.at("sigma_mean_pct");
    if (j.contains("sigma_sd_pct")) pop.sigma_sd_pct = j.at("sigma_sd_pct");
    if (j.contains("sigma_floor_pct")) pop.sigma_floor_pct = j.at("sigma_floor_pct");
    if (j.contains("inter_condition_correlation"))
        pop.inter_condition_correlation = j.at("inter_condition_correlation");
    if (j.contains("lapse_rate")) pop.lapse_rate = j.at("lapse_rate");
}

inline ordered_json population_json(const PopulationParams& p) {
    return ordered_json{{"mu_mean_pct", p.mu_mean_pct},
                        {"mu_sd_pct", p.mu_sd_pct},
                        {"sigma_mean_pct", p.sigma_mean_pct},
                        {"sigma_sd_pct", p.sigma_sd_pct},
                        {"sigma_floor_pct", p.sigma_floor_pct},
                        {"inter_condition_correlation", p.inter_condition_correlation},
                        {"lapse_rate", p.lapse_rate}};
}

} // namespace detail

inline PipelineConfig pipeline_config_from_json(const ordered_json& j,
                                                const std::filesystem::path& base_dir = {}) {
    PipelineConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mesh")) {
        std::filesystem::path p = j.at("mesh").get<std::string>();
        cfg.mesh_path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    }
    if (j.contains("aggressiveness_levels"))
        cfg.aggressiveness_levels = j.at("aggressiveness_levels").get<std::vector<double>>();
    if (j.contains("deviation_samples")) cfg.deviation_samples = j.at("deviation_samples");
    if (j.contains("motion")) {
        const auto& m = j.at("motion");
        // shared keys first, then per-condition overrides
        detail::apply_profile_json(cfg.slow_profile, m);
        detail::apply_profile_json(cfg.fast_profile, m);
        if (m.contains("slow")) detail::apply_profile_json(cfg.slow_profile, m.at("slow"));
        if (m.contains("fast")) detail::apply_profile_json(cfg.fast_profile, m.at("fast"));
    }
    if (j.contains("head_model")) {
        if (j.at("head_model").contains("lag_tau_s")) cfg.head.lag_tau_s = j.at("head_model").at("lag_tau_s");
        if (j.at("head_model").contains("jitter_sd_deg"))
            cfg.head.jitter_sd_deg = j.at("head_model").at("jitter_sd_deg");
    }
    if (j.contains("scheduler") && j.at("scheduler").contains("threshold_fraction"))
        cfg.threshold_fraction = j.at("scheduler").at("threshold_fraction");
    if (j.contains("design")) {
        if (j.at("design").contains("repetitions_per_level"))
            cfg.repetitions_per_level = j.at("design").at("repetitions_per_level");
        if (j.at("design").contains("interleaved")) cfg.interleaved = j.at("design").at("interleaved");
    }
    if (j.contains("cohort")) {
        if (j.at("cohort").contains("participants")) cfg.participants = j.at("cohort").at("participants");
        if (j.at("cohort").contains("population"))
            detail::apply_population_json(cfg.population, j.at("cohort").at("population"));
    }
    if (j.contains("report_participant")) cfg.report_participant = j.at("report_participant");
    return cfg;
}

inline PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return pipeline_config_from_json(read_json_file(path), path.parent_path());
}

inline ordered_json pipeline_config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.seed;
    j["mesh"] = cfg.mesh_path.string();
    j["aggressiveness_levels"] = cfg.aggressiveness_levels;
    j["deviation_samples"] = cfg.deviation_samples;
    j["motion"] = ordered_json{{"slow", detail::profile_json(cfg.slow_profile)},
                               {"fast", detail::profile_json(cfg.fast_profile)}};
    j["head_model"] =
        ordered_json{{"lag_tau_s", cfg.head.lag_tau_s}, {"jitter_sd_deg", cfg.head.jitter_sd_deg}};
    j["scheduler"] = ordered_json{{"threshold_fraction", cfg.threshold_fraction}};
    j["design"] = ordered_json{{"repetitions_per_level", cfg.repetitions_per_level},
                               {"interleaved", cfg.interleaved}};
    j["cohort"] = ordered_json{{"participants", cfg.participants},
                               {"population", detail::population_json(cfg.population)}};
    j["report_participant"] = cfg.report_participant;
    return j;
}

// Standalone experiment description consumed by `sim run`; the
// pipeline writes it as an artifact so the run stage is reproducible
// outside the pipeline.
inline ordered_json design_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["meta"] = meta_json(cfg.seed);
    j["aggressiveness_levels"] = cfg.aggressiveness_levels;
    j["repetitions_per_level"] = cfg.repetitions_per_level;
    j["conditions"] = ordered_json::array({"slow", "fast"});
    j["interleaved"] = cfg.interleaved;
    j["population"] = detail::population_json(cfg.population);
    j["motion"] = ordered_json{{"slow", detail::profile_json(cfg.slow_profile)},
                               {"fast", detail::profile_json(cfg.fast_profile)}};
    j["head_model"] =
        ordered_json{{"lag_tau_s", cfg.head.lag_tau_s}, {"jitter_sd_deg", cfg.head.jitter_sd_deg}};
    j["scheduler"] = ordered_json{{"threshold_fraction", cfg.threshold_fraction}};
    return j;
}

struct DesignDocument {
    ExperimentDesign design;
    PopulationParams population;
    StimulusConfig stimulus;
};

inline DesignDocument design_from_json(const ordered_json& j) {
    DesignDocument doc;
    if (j.contains("aggressiveness_levels"))
        doc.design.aggressiveness_levels = j.at("aggressiveness_levels").get<std::vector<double>>();
    if (j.contains("repetitions_per_level"))
        doc.design.repetitions_per_level = j.at("repetitions_per_level");
    if (j.contains("conditions")) {
        doc.design.conditions.clear();
        for (const auto& c : j.at("conditions"))
            doc.design.conditions.push_back(condition_from_string(c.get<std::string>()));
    }
    if (j.contains("interleaved")) doc.design.interleaved = j.at("interleaved");
    if (j.contains("population")) detail::apply_population_json(doc.population, j.at("population"));
    if (j.contains("motion")) {
        const auto& m = j.at("motion");
        detail::apply_profile_json(doc.stimulus.slow_profile, m);
        detail::apply_profile_json(doc.stimulus.fast_profile, m);
        if (m.contains("slow")) detail::apply_profile_json(doc.stimulus.slow_profile, m.at("slow"));
        if (m.contains("fast")) detail::apply_profile_json(doc.stimulus.fast_profile, m.at("fast"));
    }
    doc.stimulus.fast_profile.condition = Condition::Fast;
    if (j.contains("head_model")) {
        if (j.at("head_model").contains("lag_tau_s"))
            doc.stimulus.head.lag_tau_s = j.at("head_model").at("lag_tau_s");
        if (j.at("head_model").contains("jitter_sd_deg"))
            doc.stimulus.head.jitter_sd_deg = j.at("head_model").at("jitter_sd_deg");
    }
    if (j.contains("scheduler") && j.at("scheduler").contains("threshold_fraction"))
        doc.stimulus.threshold_fraction = j.at("scheduler").at("threshold_fraction");
    return doc;
}

struct PipelineManifest {
    std::vector<std::filesystem::path> artifacts;
    std::filesystem::path manifest_path;
};

// gen -> trace -> schedule -> run -> fit -> analyze -> report, all
// on disk, every stage talking to the next through the declared file
// formats. A failing stage aborts with its name attached.
inline PipelineManifest run_pipeline(const PipelineConfig& cfg,
                                     const std::filesystem::path& outdir, bool verbose = false) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    PipelineManifest manifest;
    const auto note = [&](const fs::path& p) { manifest.artifacts.push_back(p); };
    const auto log = [&](const std::string& msg) {
        if (verbose) std::cerr << "[pipeline] " << msg << "\n";
    };

    const auto stage = [&](const char* name, auto&& body) {
        try {
            log(name);
            body();
        } catch (const StageError&) {
            throw;
        } catch (const ValidationError& e) {
            throw StageError(name, e.what(), true);
        } catch (const std::exception& e) {
            throw StageError(name, e.what());
        }
    };

    // gen
    LodChain chain;
    stage("gen", [&] {
        if (cfg.mesh_path.empty()) throw ValidationError("no mesh path configured");
        if (!fs::exists(cfg.mesh_path))
            throw ValidationError("mesh file not found: " + cfg.mesh_path.string());
        TriangleMesh reference = load_obj(cfg.mesh_path);
        validate(reference);
        chain = generate_lod_chain(reference, cfg.aggressiveness_levels);
        const ChainArtifacts arts =
            write_chain_artifacts(chain, outdir, cfg.seed, cfg.deviation_samples);
        for (const auto& p : arts.obj_paths) note(p);
        note(arts.manifest_path);
    });

    // trace
    KinematicTrace head_traces[2];
    stage("trace", [&] {
        for (Condition cond : {Condition::Slow, Condition::Fast}) {
            const auto ci = static_cast<std::size_t>(cond);
            const MotionProfile& profile =
                cond == Condition::Fast ? cfg.fast_profile : cfg.slow_profile;
            const KinematicTrace target = fixation_trajectory(profile);
            head_traces[ci] = simulate_head_trace(target, cfg.head.lag_tau_s,
                                                  cfg.head.jitter_sd_deg, cfg.seed + ci);
            const fs::path target_path = outdir / ("trace_" + std::string(to_string(cond)) + ".csv");
            const fs::path head_path =
                outdir / ("head_trace_" + std::string(to_string(cond)) + ".csv");
            write_trace_csv(target, target_path, cfg.seed);
            write_trace_csv(head_traces[ci], head_path, cfg.seed);
            note(target_path);
            note(head_path);
        }
    });

    // schedule
    stage("schedule", [&] {
        for (Condition cond : {Condition::Slow, Condition::Fast}) {
            const auto ci = static_cast<std::size_t>(cond);
            SchedulerConfig sc;
            sc.mode = SchedulerMode::Binary;
            sc.threshold_fraction = cfg.threshold_fraction;
            sc.reference_peak_speed_deg_s = (cond == Condition::Fast ? cfg.fast_profile
                                                                     : cfg.slow_profile)
                                                .peak_speed_deg_s;
            sc.degraded_level_index = static_cast<int>(cfg.aggressiveness_levels.size());
            const LodSchedule sched = schedule(head_traces[ci], sc);
            const fs::path path = outdir / ("schedule_" + std::string(to_string(cond)) + ".csv");
            write_schedule_csv(sched, path, cfg.seed);
            note(path);
        }
    });

    // run
    std::vector<TrialRecord> records;
    stage("run", [&] {
        const fs::path design_path = outdir / "design.json";
        write_json_file(design_path, design_to_json(cfg));
        note(design_path);

        ExperimentDesign design;
        design.aggressiveness_levels = cfg.aggressiveness_levels;
        design.repetitions_per_level = cfg.repetitions_per_level;
        design.interleaved = cfg.interleaved;

        StimulusConfig stim;
        stim.slow_profile = cfg.slow_profile;
        stim.fast_profile = cfg.fast_profile;
        stim.head = cfg.head;
        stim.threshold_fraction = cfg.threshold_fraction;

        const CohortResult cohort =
            run_cohort(cfg.participants, design, cfg.population, cfg.seed, &stim);
        records = cohort.records;

        const fs::path trials_path = outdir / "trials.csv";
        write_trials_csv(records, trials_path, cfg.seed);
        note(trials_path);
        const fs::path stim_path = outdir / "stimulus_log.csv";
        write_stimulus_csv(cohort.stimulus_log, stim_path, cfg.seed);
        note(stim_path);
    });

    // fit
    std::vector<ParticipantFitRecord> fits;
    stage("fit", [&] {
        fits = fit_all(records);
        const fs::path path = outdir / "fits.json";
        write_json_file(path, fits_to_json(fits, cfg.seed));
        note(path);
    });

    // analyze
    CohortStats stats;
    stage("analyze", [&] {
        stats = analyze_fits(fits);
        const fs::path path = outdir / "stats.json";
        write_json_file(path, stats_to_json(stats, cfg.seed));
        note(path);
    });

    // report
    stage("report", [&] {
        int participant = cfg.report_participant;
        if (participant < 0) {
            for (const ParticipantFitRecord& rec : fits) {
                const bool excluded =
                    std::find(stats.excluded_ids.begin(), stats.excluded_ids.end(),
                              rec.participant_id) != stats.excluded_ids.end();
                if (!excluded) {
                    participant = rec.participant_id;
                    break;
                }
            }
        }
        if (participant < 0) throw NumericError("no fittable participant to report");
        const fs::path path = outdir / "pf.svg";
        write_report_svg(fits, participant, path, cfg.seed);
        note(path);
    });

    // manifest
    ordered_json items = ordered_json::array();
    for (const fs::path& p : manifest.artifacts)
        items.push_back(ordered_json{{"file", p.filename().string()},
                                     {"bytes", fs::file_size(p)},
                                     {"fnv1a64", fnv1a64_hex(p)}});
    ordered_json doc;
    doc["meta"] = meta_json(cfg.seed);
    doc["config"] = pipeline_config_to_json(cfg);
    doc["artifacts"] = items;
    manifest.manifest_path = outdir / "manifest.json";
    write_json_file(manifest.manifest_path, doc);
    log("done: " + std::to_string(manifest.artifacts.size()) + " artifacts");
    return manifest;
}

} // namespace vclod
