#include "nilmevt/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "nilmevt/motif.hpp"
#include "nilmevt/postprocess.hpp"
#include "nilmevt/stage1.hpp"
#include "nilmevt/stage2.hpp"
#include "nilmevt/trend.hpp"

namespace nilmevt {

namespace {

constexpr double kSecondsPerDay = 86400.0;

long day_of(const PowerSeries& s, const Event& e) {
    return static_cast<long>(std::floor(s.epoch_at(e.start_idx) / kSecondsPerDay));
}

std::tuple<int, int, int, int> key_of(const Event& e) {
    return {e.start_idx, e.end_idx, e.window_len, static_cast<int>(e.stage)};
}

}  // namespace

std::vector<EventRecord> DetectResult::to_records(const PowerSeries& s) const {
    std::vector<EventRecord> out;
    out.reserve(events.size());
    for (const auto& de : events) {
        EventFeatures f = event_features(de.event, s);
        EventRecord r;
        r.start_epoch = s.epoch_at(de.event.start_idx);
        r.end_epoch = s.epoch_at(de.event.end_idx);
        r.delta_p = f.delta_p;
        r.delta_q = f.delta_q;
        r.range_p = f.range_p;
        r.window_len = de.event.window_len;
        r.stage = to_string(de.event.stage);
        out.push_back(std::move(r));
    }
    return out;
}

DetectResult run_detect(const PowerSeries& s, const DetectionConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    s.validate();

    ThresholdProfile th = adaptive_threshold(s, cfg);
    std::vector<Event> steps = detect_step_events(s, th);

    std::vector<Event> candidates;  // screened long transients, all windows
    for (int w : cfg.window_set) {
        auto raw = detect_long_transients(s, w, steps, th, cfg);
        auto [kept, removed] = screen_events(raw, s, cfg);
        (void)removed;
        candidates.insert(candidates.end(), kept.begin(), kept.end());
    }

    long day_min = static_cast<long>(std::floor(s.start_epoch / kSecondsPerDay));
    long day_max = static_cast<long>(std::floor(s.epoch_at(s.size() - 1) / kSecondsPerDay));

    nlohmann::json debug = nlohmann::json::array();

    DetectResult result;
    for (long d = day_min; d <= day_max; ++d) {
        long buf_lo = d - (cfg.n_days - 1);

        std::vector<Event> pool;
        for (const auto& e : candidates) {
            long ed = day_of(s, e);
            if (ed >= buf_lo && ed <= d) pool.push_back(e);
        }
        // Step events join the pool (window length one) only when they
        // compete with a long-transient candidate; the rest bypass mining.
        std::vector<Event> bypass;
        for (const auto& e : steps) {
            long ed = day_of(s, e);
            if (ed < buf_lo || ed > d) continue;
            bool competes = false;
            for (const auto& c : pool)
                if (c.stage == EventStage::long_transient && events_overlap(e, c)) {
                    competes = true;
                    break;
                }
            if (competes) pool.push_back(e);
            else if (ed == d) bypass.push_back(e);
        }

        for (const auto& e : bypass) {
            result.events.push_back({e, -1, static_cast<int>(d)});
        }
        if (pool.empty()) continue;

        std::vector<EventFeatures> feats;
        feats.reserve(pool.size());
        for (const auto& e : pool) feats.push_back(event_features(e, s));

        auto clusters_idx = cluster_events(feats, cfg.bandwidth);
        std::vector<std::vector<Event>> clusters;
        for (const auto& ci : clusters_idx) {
            std::vector<Event> c;
            for (int i : ci) c.push_back(pool[i]);
            clusters.push_back(dedupe_cluster(c));
        }

        std::vector<Event> pruned;  // the deduped pool
        for (const auto& c : clusters) pruned.insert(pruned.end(), c.begin(), c.end());

        auto motifs = form_motifs(clusters, cfg.n_th);
        auto [areas, free_events] = find_overlap_areas(pruned);
        auto groups = enumerate_motif_groups(areas, motifs);
        auto resolved = resolve_competitions(areas, groups, motifs, free_events);

        for (std::size_t i = 0; i < resolved.final_events.size(); ++i) {
            const Event& e = resolved.final_events[i];
            if (day_of(s, e) != d) continue;
            result.events.push_back({e, resolved.motif_id_per_event[i], static_cast<int>(d)});
        }

        if (!opts.debug_dump_path.empty()) {
            nlohmann::json jd;
            jd["day"] = d;
            jd["areas"] = nlohmann::json::array();
            for (const auto& area : areas) {
                nlohmann::json ja;
                ja["span"] = {area.span_start, area.span_end};
                ja["raw_len"] = area.raw_len();
                ja["groups"] = nlohmann::json::array();
                for (const auto& g : groups) {
                    if (std::find(g.area_ids.begin(), g.area_ids.end(), area.id) ==
                        g.area_ids.end())
                        continue;
                    nlohmann::json jg;
                    jg["motifs"] = g.motif_ids;
                    jg["occurrences"] = g.occurrences();
                    jg["dl_group"] = dl_group(g, motifs);
                    jg["dl_areas"] = dl_areas_given_group({area}, g, motifs);
                    ja["groups"].push_back(jg);
                }
                jd["areas"].push_back(ja);
            }
            debug.push_back(jd);
        }
    }

    std::sort(result.events.begin(), result.events.end(),
              [](const DetectedEvent& a, const DetectedEvent& b) {
                  return key_of(a.event) < key_of(b.event);
              });

    if (opts.postprocess && !result.events.empty()) {
        std::vector<Event> flat;
        for (const auto& de : result.events) flat.push_back(de.event);
        SteadyDiff sd = build_steady_diff(s, flat);
        VadResult vad = detect_fluctuation_segments(sd, s, cfg);
        auto [kept, removed] = remove_unreasonable(flat, vad, sd, th, s, cfg);

        std::map<std::tuple<int, int, int, int>, char> keep_keys;
        for (const auto& e : kept) keep_keys[key_of(e)] = 1;
        std::vector<DetectedEvent> filtered;
        for (const auto& de : result.events)
            if (keep_keys.count(key_of(de.event))) filtered.push_back(de);
        result.events = std::move(filtered);
        result.removed_by_postprocess = std::move(removed);
    }

    if (!opts.debug_dump_path.empty()) {
        std::ofstream f(opts.debug_dump_path);
        if (!f) throw std::runtime_error("cannot write " + opts.debug_dump_path);
        f << debug.dump(2) << "\n";
    }
    return result;
}

namespace {

Event record_to_event(double start_epoch, double end_epoch, const PowerSeries& s) {
    long a = std::lround(start_epoch - s.start_epoch);
    long b = std::lround(end_epoch - s.start_epoch);
    if (b < a || b < 0 || a > static_cast<long>(s.size()) - 1)
        throw std::invalid_argument("event/label time range does not match the series");
    Event e;
    e.start_idx = static_cast<int>(std::max(0L, a));
    e.end_idx = static_cast<int>(std::min<long>(static_cast<long>(s.size()) - 1, b));
    return e;
}

}  // namespace

EvalScores evaluate_records(const std::vector<EventRecord>& dets,
                            const std::vector<LabelRecord>& labels, const PowerSeries& s,
                            const DetectionConfig& cfg, OvlMatrix* matrix_out) {
    std::vector<Event> d, g;
    for (const auto& r : dets) d.push_back(record_to_event(r.start_epoch, r.end_epoch, s));
    for (const auto& r : labels) g.push_back(record_to_event(r.start_epoch, r.end_epoch, s));
    OvlMatrix m = build_match_matrix(d, g, s, cfg);
    EvalScores sc = prf_scores(m);
    if (matrix_out) *matrix_out = std::move(m);
    return sc;
}

}  // namespace nilmevt
