#pragma once

#include <string>
#include <vector>

#include "nilmevt/evaluate.hpp"
#include "nilmevt/ingestion.hpp"
#include "nilmevt/types.hpp"

namespace nilmevt {

struct RunOptions {
    bool postprocess = true;
    std::string debug_dump_path;  // per-area motif-group JSON when non-empty
};

struct DetectedEvent {
    Event event;
    int motif_id = -1;  // scoped to the day buffer that resolved the event
    int day = 0;
};

struct DetectResult {
    std::vector<DetectedEvent> events;
    std::vector<Event> removed_by_postprocess;

    std::vector<EventRecord> to_records(const PowerSeries& s) const;
};

/// Full pipeline: stage I steps, stage II long transients under every
/// window length, trend screening, per-day motif/MDL resolution over an
/// n_days buffer, then VAD post-processing.
DetectResult run_detect(const PowerSeries& s, const DetectionConfig& cfg,
                        const RunOptions& opts = {});

/// Score detected records against ground-truth labels on the given series.
EvalScores evaluate_records(const std::vector<EventRecord>& dets,
                            const std::vector<LabelRecord>& labels, const PowerSeries& s,
                            const DetectionConfig& cfg, OvlMatrix* matrix_out = nullptr);

}  // namespace nilmevt
