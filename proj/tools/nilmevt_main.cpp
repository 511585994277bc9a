#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

#include "nilmevt/config_io.hpp"
#include "nilmevt/pipeline.hpp"
#include "nilmevt/synth.hpp"

namespace {

bool log_enabled() {
    const char* lvl = std::getenv("NILMEVT_LOG");
    return lvl && std::string(lvl) == "debug";
}

void log_debug(const std::string& msg) {
    if (log_enabled()) std::cerr << "[nilmevt] " << msg << "\n";
}

nlohmann::json report_json(const nilmevt::EvalScores& sc, const nilmevt::OvlMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.n_d; ++i) {
        for (int j = 0; j < m.n_t; ++j) {
            if (m.raw_at(i, j) == 0.0) continue;
            rows.push_back({{"detected", i}, {"truth", j}, {"raw", m.raw_at(i, j)},
                            {"modified", m.at(i, j)}});
        }
    }
    return {{"n_d", m.n_d},        {"n_t", m.n_t},      {"TP", sc.tp},
            {"Pr", sc.precision},  {"Re", sc.recall},   {"F1_mod", sc.f1_mod},
            {"matches", rows}};
}

int run_detect_cmd(const std::string& input, const std::string& config, const std::string& out,
                   const std::string& labels, bool no_postprocess, const std::string& dump_debug) {
    nilmevt::DetectionConfig cfg =
        config.empty() ? nilmevt::DetectionConfig{} : nilmevt::load_detection_config(config);
    nilmevt::CsvSchema schema;
    auto series_list = nilmevt::load_power_csv(input, schema);
    log_debug("loaded " + std::to_string(series_list.size()) + " contiguous series");

    std::vector<nilmevt::EventRecord> all_records;
    nilmevt::RunOptions opts;
    opts.postprocess = !no_postprocess;
    opts.debug_dump_path = dump_debug;
    for (const auto& s : series_list) {
        auto result = nilmevt::run_detect(s, cfg, opts);
        auto recs = result.to_records(s);
        all_records.insert(all_records.end(), recs.begin(), recs.end());
        log_debug("series at " + std::to_string(s.start_epoch) + ": " +
                  std::to_string(recs.size()) + " events");
    }
    nilmevt::write_events_jsonl(out, all_records);

    if (!labels.empty()) {
        auto gts = nilmevt::load_labels(labels);
        // Score against the longest contiguous series.
        const nilmevt::PowerSeries* best = &series_list.front();
        for (const auto& s : series_list)
            if (s.size() > best->size()) best = &s;
        nilmevt::OvlMatrix m;
        auto sc = nilmevt::evaluate_records(all_records, gts, *best, cfg, &m);
        std::cout << report_json(sc, m).dump(2) << "\n";
    }
    return 0;
}

int run_eval_cmd(const std::string& events, const std::string& labels, const std::string& series,
                 const std::string& config) {
    nilmevt::DetectionConfig cfg =
        config.empty() ? nilmevt::DetectionConfig{} : nilmevt::load_detection_config(config);
    auto dets = nilmevt::load_events_jsonl(events);
    auto gts = nilmevt::load_labels(labels);
    nilmevt::CsvSchema schema;
    auto series_list = nilmevt::load_power_csv(series, schema);
    const nilmevt::PowerSeries* best = &series_list.front();
    for (const auto& s : series_list)
        if (s.size() > best->size()) best = &s;

    nilmevt::OvlMatrix m;
    auto sc = nilmevt::evaluate_records(dets, gts, *best, cfg, &m);
    std::cout << report_json(sc, m).dump(2) << "\n";
    return 0;
}

int run_synth_cmd(const std::string& spec_path, const std::string& out_prefix) {
    auto spec = nilmevt::load_synth_spec(spec_path);
    auto [series, labels] = nilmevt::synth_generate(spec);
    nilmevt::write_power_csv(out_prefix + "_series.csv", series);
    nilmevt::write_labels_csv(out_prefix + "_labels.csv", labels);
    log_debug("wrote " + out_prefix + "_series.csv and _labels.csv");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-timescale load event detection"};
    app.require_subcommand(1);

    std::string input, config, out = "events.jsonl", labels, dump_debug;
    bool no_postprocess = false;
    auto* detect = app.add_subcommand("detect", "Detect load events in a power CSV");
    detect->add_option("--input", input, "power CSV")->required();
    detect->add_option("--config", config, "detection config TOML");
    detect->add_option("--out", out, "output events JSONL");
    detect->add_option("--labels", labels, "ground-truth labels CSV (also prints a report)");
    detect->add_flag("--no-postprocess", no_postprocess, "skip VAD post-processing");
    detect->add_option("--dump-debug", dump_debug, "write per-area motif-group JSON");

    std::string ev_events, ev_labels, ev_series, ev_config;
    auto* eval = app.add_subcommand("eval", "Score detected events against labels");
    eval->add_option("--events", ev_events, "events JSONL")->required();
    eval->add_option("--labels", ev_labels, "labels CSV")->required();
    eval->add_option("--series", ev_series, "power CSV")->required();
    eval->add_option("--config", ev_config, "detection config TOML");

    std::string sy_spec, sy_prefix;
    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
    synth->add_option("--spec", sy_spec, "synthesis spec TOML")->required();
    synth->add_option("--out-prefix", sy_prefix, "output file prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed())
            return run_detect_cmd(input, config, out, labels, no_postprocess, dump_debug);
        if (eval->parsed()) return run_eval_cmd(ev_events, ev_labels, ev_series, ev_config);
        if (synth->parsed()) return run_synth_cmd(sy_spec, sy_prefix);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
