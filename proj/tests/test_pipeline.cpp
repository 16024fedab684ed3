#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "vclod/pipeline.hpp"
#include "vclod/procedural.hpp"

using namespace vclod;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "vclod_pipeline_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

PipelineConfig small_config(const fs::path& dir) {
    const fs::path mesh_path = dir / "ref.obj";
    save_obj(procedural::uv_sphere(16, 10), mesh_path);
    PipelineConfig cfg;
    cfg.seed = 7;
    cfg.mesh_path = mesh_path;
    cfg.aggressiveness_levels = {0.25, 0.5, 0.7, 0.9};
    cfg.deviation_samples = 200;
    cfg.repetitions_per_level = 10;
    cfg.participants = 6;
    // population tuned so the shortened ladder still straddles the thresholds
    cfg.population.mu_mean_pct = {55.0, 65.0};
    cfg.population.mu_sd_pct = {6.0, 5.0};
    cfg.population.sigma_mean_pct = 12.0;
    return cfg;
}

} // namespace

TEST_CASE("trace CSV round-trips") {
    const fs::path dir = fresh_dir("trace_csv");
    const KinematicTrace t = fixation_trajectory(MotionProfile::fast());
    const fs::path path = dir / "trace.csv";
    write_trace_csv(t, path, 42);
    const KinematicTrace back = read_trace_csv(path);
    REQUIRE(back.size() == t.size());
    CHECK(back.timestamps_s == t.timestamps_s);
    CHECK(back.azimuth_deg == t.azimuth_deg);
    CHECK(back.derived_speed_deg_s == t.derived_speed_deg_s);

    const std::string text = slurp(path);
    CHECK(text.rfind("# vclod", 0) == 0); // provenance header
    CHECK(text.find("seed=42") != std::string::npos);
    CHECK(text.find("t_s,azimuth_deg,speed_deg_per_s") != std::string::npos);
}

TEST_CASE("trials CSV round-trips") {
    const fs::path dir = fresh_dir("trials_csv");
    ExperimentDesign design;
    design.repetitions_per_level = 4;
    const CohortResult cohort = run_cohort(3, design, PopulationParams{}, 5);
    const fs::path path = dir / "trials.csv";
    write_trials_csv(cohort.records, path, 5);
    const auto back = read_trials_csv(path);
    REQUIRE(back.size() == cohort.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].participant_id == cohort.records[i].participant_id);
        CHECK(back[i].condition == cohort.records[i].condition);
        CHECK(back[i].trial_index == cohort.records[i].trial_index);
        CHECK(back[i].aggressiveness_pct == cohort.records[i].aggressiveness_pct);
        CHECK(back[i].reference_interval == cohort.records[i].reference_interval);
        CHECK(back[i].response_interval == cohort.records[i].response_interval);
        CHECK(back[i].correct == cohort.records[i].correct);
    }
}

TEST_CASE("fits JSON round-trips") {
    ExperimentDesign design;
    const CohortResult cohort = run_cohort(3, design, PopulationParams{}, 11);
    const auto fits = fit_all(cohort.records);
    const auto doc = fits_to_json(fits, 11);
    const auto back = fits_from_json(doc);
    REQUIRE(back.size() == fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) {
        CHECK(back[i].participant_id == fits[i].participant_id);
        for (int c = 0; c < 2; ++c) {
            const auto& a = fits[i].by_condition[static_cast<std::size_t>(c)];
            const auto& b = back[i].by_condition[static_cast<std::size_t>(c)];
            CHECK(b.fit.mu == a.fit.mu);
            CHECK(b.fit.sigma == a.fit.sigma);
            CHECK(b.fit.converged == a.fit.converged);
            REQUIRE(b.table.rows.size() == a.table.rows.size());
        }
    }
}

TEST_CASE("chain artifacts include per-level deviation metrics") {
    const fs::path dir = fresh_dir("chain");
    const TriangleMesh mesh = procedural::uv_sphere(14, 9);
    const LodChain chain = generate_lod_chain(mesh, std::vector<double>{0.4, 0.8});
    const ChainArtifacts arts = write_chain_artifacts(chain, dir, 3, 200);
    REQUIRE(arts.obj_paths.size() == 3);
    for (const auto& p : arts.obj_paths) CHECK(fs::exists(p));

    const ordered_json doc = read_json_file(arts.manifest_path);
    REQUIRE(doc.at("levels").size() == 3);
    CHECK(doc.at("levels").at(0).at("aggressiveness").get<double>() == 0.0);
    CHECK(doc.at("levels").at(0).at("mean_squared_deviation_m2").get<double>() == 0.0);
    CHECK(doc.at("levels").at(2).at("achieved_triangles").get<int>() <=
          static_cast<int>(mesh.triangle_count() * 0.2) + 2);
    CHECK(doc.at("meta").at("tool") == kToolName);
}

TEST_CASE("pipeline produces its full artifact set and is byte-deterministic") {
    const fs::path dir_cfg = fresh_dir("pipe_cfg");
    const PipelineConfig cfg = small_config(dir_cfg);

    const fs::path out1 = fresh_dir("pipe_run1");
    const fs::path out2 = fresh_dir("pipe_run2");
    const PipelineManifest m1 = run_pipeline(cfg, out1);
    const PipelineManifest m2 = run_pipeline(cfg, out2);

    CHECK(m1.artifacts.size() >= 8);
    REQUIRE(m1.artifacts.size() == m2.artifacts.size());
    for (std::size_t i = 0; i < m1.artifacts.size(); ++i) {
        CAPTURE(m1.artifacts[i].filename().string());
        CHECK(m1.artifacts[i].filename() == m2.artifacts[i].filename());
        CHECK(slurp(m1.artifacts[i]) == slurp(m2.artifacts[i]));
    }
    CHECK(slurp(m1.manifest_path) == slurp(m2.manifest_path));

    // expected artifact names all present
    std::vector<std::string> names;
    for (const auto& p : m1.artifacts) names.push_back(p.filename().string());
    for (const char* expected :
         {"lod_0.obj", "lod_4.obj", "chain.json", "trace_slow.csv", "trace_fast.csv",
          "head_trace_slow.csv", "head_trace_fast.csv", "schedule_slow.csv", "schedule_fast.csv",
          "design.json", "trials.csv", "stimulus_log.csv", "fits.json", "stats.json", "pf.svg"})
        CHECK(std::find(names.begin(), names.end(), expected) != names.end());
}

TEST_CASE("pipeline aborts with the stage name on a missing mesh") {
    PipelineConfig cfg;
    cfg.mesh_path = "/nonexistent/mesh.obj";
    const fs::path out = fresh_dir("pipe_missing");
    try {
        run_pipeline(cfg, out);
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(e.stage == "gen");
        CHECK(e.from_validation);
        CHECK(std::string(e.what()).find("gen") != std::string::npos);
    }
}

TEST_CASE("pipeline config JSON honors defaults and overrides") {
    const ordered_json j = {
        {"seed", 9},
        {"mesh", "ref.obj"},
        {"motion", {{"slow", {{"peak_speed_deg_s", 57.0}}}}},
        {"cohort", {{"participants", 8}, {"population", {{"mu_mean_pct", {70.0, 80.0}}}}}},
    };
    const PipelineConfig cfg = pipeline_config_from_json(j, "/base");
    CHECK(cfg.seed == 9);
    CHECK(cfg.mesh_path == fs::path("/base/ref.obj"));
    CHECK(cfg.slow_profile.peak_speed_deg_s == 57.0); // the alternative slow peak is configurable
    CHECK(cfg.fast_profile.peak_speed_deg_s == 157.0);
    CHECK(cfg.participants == 8);
    CHECK(cfg.population.mu_mean_pct[0] == 70.0);
    CHECK(cfg.population.mu_sd_pct[0] == 14.8); // untouched default
    CHECK(cfg.repetitions_per_level == 20);
}

TEST_CASE("design document round-trips through JSON") {
    PipelineConfig cfg;
    cfg.aggressiveness_levels = {0.4, 0.6, 0.8};
    cfg.repetitions_per_level = 6;
    cfg.population.mu_mean_pct = {60.0, 70.0};
    const ordered_json j = design_to_json(cfg);
    const DesignDocument doc = design_from_json(j);
    CHECK(doc.design.aggressiveness_levels == cfg.aggressiveness_levels);
    CHECK(doc.design.repetitions_per_level == 6);
    CHECK(doc.population.mu_mean_pct[0] == 60.0);
    CHECK(doc.stimulus.slow_profile.peak_speed_deg_s == 52.0);
    CHECK(doc.stimulus.fast_profile.peak_speed_deg_s == 157.0);
}

TEST_CASE("fnv1a64 hashes are stable and content-sensitive") {
    const fs::path dir = fresh_dir("hash");
    const fs::path a = dir / "a.txt";
    const fs::path b = dir / "b.txt";
    write_text_file(a, "hello");
    write_text_file(b, "hello");
    CHECK(fnv1a64_hex(a) == fnv1a64_hex(b));
    write_text_file(b, "hellp");
    CHECK(fnv1a64_hex(a) != fnv1a64_hex(b));
    // FNV-1a reference vector
    write_text_file(a, "");
    CHECK(fnv1a64_hex(a) == "cbf29ce484222325");
}
