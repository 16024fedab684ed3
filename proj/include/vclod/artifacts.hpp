#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vclod/csv.hpp"
#include "vclod/deviation.hpp"
#include "vclod/kinematics.hpp"
#include "vclod/lod_chain.hpp"
#include "vclod/obj_io.hpp"
#include "vclod/psychofit.hpp"
#include "vclod/scheduler.hpp"
#include "vclod/svg_report.hpp"

// Readers and writers for every on-disk artifact of the toolkit.
// JSON documents use insertion-ordered keys and CSVs fixed column
// sets, so re-running a stage under the same inputs reproduces the
// same bytes.

namespace vclod {

using ordered_json = nlohmann::ordered_json;

inline ordered_json meta_json(std::uint64_t seed) {
    return ordered_json{{"tool", kToolName}, {"version", kVersion}, {"seed", seed}};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const ordered_json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

inline ordered_json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

// ---- kinematic traces: t_s, azimuth_deg, speed_deg_per_s ----

inline void write_trace_csv(const KinematicTrace& trace, const std::filesystem::path& path,
                            std::uint64_t seed) {
    CsvWriter csv(path, {"t_s", "azimuth_deg", "speed_deg_per_s"}, seed);
    for (std::size_t i = 0; i < trace.size(); ++i)
        csv.row({CsvWriter::num(trace.timestamps_s[i]), CsvWriter::num(trace.azimuth_deg[i]),
                 CsvWriter::num(trace.derived_speed_deg_s[i])});
    csv.close();
}

inline KinematicTrace read_trace_csv(const std::filesystem::path& path,
                                     double sweep_half_range_deg = 50.0) {
    const CsvTable table = read_csv(path);
    const std::size_t ct = table.column_index("t_s");
    const std::size_t ca = table.column_index("azimuth_deg");
    const std::size_t cs = table.column_index("speed_deg_per_s");
    KinematicTrace trace;
    trace.sweep_half_range_deg = sweep_half_range_deg;
    for (const auto& row : table.rows) {
        trace.timestamps_s.push_back(detail::parse_double_or_throw(row[ct], path.string()));
        trace.azimuth_deg.push_back(detail::parse_double_or_throw(row[ca], path.string()));
        trace.derived_speed_deg_s.push_back(detail::parse_double_or_throw(row[cs], path.string()));
    }
    if (trace.size() == 0) throw ValidationError(path.string() + ": empty trace");
    return trace;
}

// ---- schedules: t_s, level_index ----

inline void write_schedule_csv(const LodSchedule& sched, const std::filesystem::path& path,
                               std::uint64_t seed) {
    CsvWriter csv(path, {"t_s", "level_index"}, seed);
    for (std::size_t i = 0; i < sched.level_index.size(); ++i)
        csv.row({CsvWriter::num(sched.timestamps_s[i]), CsvWriter::num(sched.level_index[i])});
    csv.close();
}

// ---- trials: participant, condition, trial, aggressiveness_pct, ref_interval, response, correct ----

inline void write_trials_csv(const std::vector<TrialRecord>& records,
                             const std::filesystem::path& path, std::uint64_t seed) {
    CsvWriter csv(path,
                  {"participant", "condition", "trial", "aggressiveness_pct", "ref_interval",
                   "response", "correct"},
                  seed);
    for (const TrialRecord& r : records)
        csv.row({CsvWriter::num(r.participant_id), to_string(r.condition),
                 CsvWriter::num(r.trial_index), CsvWriter::num(r.aggressiveness_pct),
                 CsvWriter::num(r.reference_interval), CsvWriter::num(r.response_interval),
                 CsvWriter::num(r.correct ? 1 : 0)});
    csv.close();
}

inline std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const std::size_t cp = table.column_index("participant");
    const std::size_t cc = table.column_index("condition");
    const std::size_t ct = table.column_index("trial");
    const std::size_t ca = table.column_index("aggressiveness_pct");
    const std::size_t cr = table.column_index("ref_interval");
    const std::size_t cresp = table.column_index("response");
    const std::size_t ccor = table.column_index("correct");

    std::vector<TrialRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        TrialRecord r;
        r.participant_id = static_cast<int>(detail::parse_long_or_throw(row[cp], path.string()));
        r.condition = condition_from_string(row[cc]);
        r.trial_index = static_cast<int>(detail::parse_long_or_throw(row[ct], path.string()));
        r.aggressiveness_pct = detail::parse_double_or_throw(row[ca], path.string());
        r.reference_interval = static_cast<int>(detail::parse_long_or_throw(row[cr], path.string()));
        r.response_interval =
            static_cast<int>(detail::parse_long_or_throw(row[cresp], path.string()));
        r.correct = detail::parse_long_or_throw(row[ccor], path.string()) != 0;
        records.push_back(r);
    }
    if (records.empty()) throw ValidationError(path.string() + ": no trial rows");
    return records;
}

inline void write_stimulus_csv(const std::vector<StimulusRecord>& log,
                               const std::filesystem::path& path, std::uint64_t seed) {
    CsvWriter csv(path,
                  {"participant", "trial", "condition", "aggressiveness_pct", "start_azimuth_deg",
                   "direction", "degraded_fraction", "switch_count", "threshold_crossed"},
                  seed);
    for (const StimulusRecord& r : log)
        csv.row({CsvWriter::num(r.participant_id), CsvWriter::num(r.trial_index),
                 to_string(r.condition), CsvWriter::num(r.aggressiveness_pct),
                 CsvWriter::num(r.start_azimuth_deg), CsvWriter::num(r.direction),
                 CsvWriter::num(r.degraded_fraction), CsvWriter::num(r.switch_count),
                 CsvWriter::num(r.threshold_crossed ? 1 : 0)});
    csv.close();
}

// ---- LOD chain: lod_<k>.obj files plus chain.json manifest ----

struct ChainArtifacts {
    std::vector<std::filesystem::path> obj_paths;
    std::filesystem::path manifest_path;
};

inline ChainArtifacts write_chain_artifacts(const LodChain& chain,
                                            const std::filesystem::path& outdir,
                                            std::uint64_t seed, std::size_t deviation_samples) {
    ChainArtifacts out;
    ordered_json levels = ordered_json::array();
    for (std::size_t k = 0; k < chain.levels.size(); ++k) {
        const LodLevel& level = chain.levels[k];
        const std::string filename = "lod_" + std::to_string(k) + ".obj";
        const std::filesystem::path obj_path = outdir / filename;
        save_obj(level.mesh, obj_path, {"seed=" + std::to_string(seed)});
        out.obj_paths.push_back(obj_path);

        const double msd =
            k == 0 ? 0.0
                   : mean_squared_deviation(level.mesh, chain.reference(), deviation_samples, seed);
        levels.push_back(ordered_json{{"file", filename},
                                      {"aggressiveness", level.aggressiveness},
                                      {"target_triangles", level.target_triangle_count},
                                      {"achieved_triangles", level.achieved_triangle_count},
                                      {"reached_target", level.reached_target},
                                      {"mean_squared_deviation_m2", msd}});
    }

    ordered_json doc;
    doc["meta"] = meta_json(seed);
    doc["reference"] = ordered_json{{"name", chain.reference().name},
                                    {"triangles", chain.reference().triangle_count()},
                                    {"vertices", chain.reference().vertex_count()},
                                    {"deviation_samples", deviation_samples}};
    doc["levels"] = levels;
    out.manifest_path = outdir / "chain.json";
    write_json_file(out.manifest_path, doc);
    return out;
}

// ---- fits.json ----

inline ordered_json fits_to_json(const std::vector<ParticipantFitRecord>& fits,
                                 std::uint64_t seed) {
    ordered_json participants = ordered_json::array();
    for (const ParticipantFitRecord& rec : fits) {
        ordered_json conditions;
        for (Condition cond : {Condition::Slow, Condition::Fast}) {
            const ConditionFitRecord& slot = rec.by_condition[static_cast<std::size_t>(cond)];
            ordered_json rows = ordered_json::array();
            for (const ResponseCell& cell : slot.table.rows)
                rows.push_back(ordered_json{{"aggressiveness_pct", cell.aggressiveness_pct},
                                            {"n_trials", cell.n_trials},
                                            {"n_correct", cell.n_correct}});
            ordered_json entry{{"mu", slot.fit.mu},
                               {"sigma", slot.fit.sigma},
                               {"log_likelihood", slot.fit.log_likelihood},
                               {"converged", slot.fit.converged},
                               {"n_points", slot.fit.n_points}};
            if (slot.fit.converged) entry["threshold_75"] = threshold(slot.fit, 0.75);
            entry["table"] = rows;
            conditions[to_string(cond)] = entry;
        }
        participants.push_back(
            ordered_json{{"participant", rec.participant_id}, {"conditions", conditions}});
    }
    ordered_json doc;
    doc["meta"] = meta_json(seed);
    doc["participants"] = participants;
    return doc;
}

inline std::vector<ParticipantFitRecord> fits_from_json(const ordered_json& doc) {
    std::vector<ParticipantFitRecord> fits;
    for (const auto& p : doc.at("participants")) {
        ParticipantFitRecord rec;
        rec.participant_id = p.at("participant").get<int>();
        for (Condition cond : {Condition::Slow, Condition::Fast}) {
            const auto& entry = p.at("conditions").at(to_string(cond));
            ConditionFitRecord& slot = rec.by_condition[static_cast<std::size_t>(cond)];
            slot.fit.mu = entry.at("mu").get<double>();
            slot.fit.sigma = entry.at("sigma").get<double>();
            slot.fit.log_likelihood = entry.at("log_likelihood").get<double>();
            slot.fit.converged = entry.at("converged").get<bool>();
            slot.fit.n_points = entry.at("n_points").get<int>();
            slot.table.participant_id = rec.participant_id;
            slot.table.condition = cond;
            for (const auto& row : entry.at("table"))
                slot.table.rows.push_back(ResponseCell{row.at("aggressiveness_pct").get<double>(),
                                                       row.at("n_trials").get<int>(),
                                                       row.at("n_correct").get<int>()});
        }
        fits.push_back(std::move(rec));
    }
    return fits;
}

// ---- stats.json ----

inline ordered_json stats_to_json(const CohortStats& stats, std::uint64_t seed) {
    const auto condition_block = [](const ConditionStats& c) {
        return ordered_json{{"thresholds", c.thresholds},
                            {"mean", c.mean_threshold},
                            {"sd", c.sd_threshold}};
    };
    ordered_json doc;
    doc["meta"] = meta_json(seed);
    doc["slow"] = condition_block(stats.slow);
    doc["fast"] = condition_block(stats.fast);
    doc["t_statistic"] = stats.t_statistic;
    doc["degrees_of_freedom"] = stats.degrees_of_freedom;
    doc["p_value"] = stats.p_value;
    doc["tail"] = "greater";
    doc["n_included"] = stats.n_included;
    doc["excluded_ids"] = stats.excluded_ids;
    return doc;
}

// ---- report: per-condition PF curves for one participant ----

inline void write_report_svg(const std::vector<ParticipantFitRecord>& fits, int participant_id,
                             const std::filesystem::path& path, std::uint64_t seed) {
    const ParticipantFitRecord* chosen = nullptr;
    for (const ParticipantFitRecord& rec : fits)
        if (rec.participant_id == participant_id) chosen = &rec;
    if (chosen == nullptr)
        throw ValidationError("report: participant " + std::to_string(participant_id) +
                              " not present in fits");

    std::vector<PfSeries> series;
    const char* colors[2] = {"#1f6fb4", "#d1403a"}; // slow blue, fast red
    for (Condition cond : {Condition::Slow, Condition::Fast}) {
        const ConditionFitRecord& slot = chosen->by_condition[static_cast<std::size_t>(cond)];
        PfSeries s;
        s.label = to_string(cond);
        s.color = colors[static_cast<std::size_t>(cond)];
        s.points = slot.table.rows;
        s.fit = slot.fit;
        series.push_back(std::move(s));
    }
    write_pf_svg(path, series,
                 "Psychometric fits, participant " + std::to_string(participant_id), seed);
}

} // namespace vclod
