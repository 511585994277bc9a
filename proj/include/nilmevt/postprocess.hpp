#pragma once

#include <utility>
#include <vector>

#include "nilmevt/stage1.hpp"
#include "nilmevt/types.hpp"

namespace nilmevt {

/// First differences of the inter-event steady segments, concatenated.
/// Differencing never crosses an event boundary.
struct SteadyDiff {
    std::vector<double> values;      // dP over consecutive steady samples
    std::vector<int> orig_index;     // left sample of each difference
    std::vector<int> segment_id;     // steady segment each difference belongs to
    std::vector<std::pair<int, int>> segments;  // steady segment spans, inclusive
};

SteadyDiff build_steady_diff(const PowerSeries& s, const std::vector<Event>& final_events);

struct VadWindow {
    int index = 0;       // l
    int diff_begin = 0;  // first diff position, inclusive
    int diff_end = 0;    // last diff position, inclusive
    double energy = 0.0;  // E_l
    double range = 0.0;   // R_l
    bool flagged = false;
    int orig_start = 0;  // original-time span covered by the window's diffs
    int orig_end = 0;
};

struct FluctuationSegment {
    int first_window = 0;
    int last_window = 0;
    std::vector<std::pair<int, int>> orig_spans;
};

struct VadResult {
    std::vector<VadWindow> windows;
    std::vector<FluctuationSegment> segments;
};

/// Non-overlapping VAD scan of the steady-difference series: a window is
/// fluctuating iff its squared-difference energy exceeds lambda1 and the
/// largest intersecting steady-segment range exceeds lambda2.
VadResult detect_fluctuation_segments(const SteadyDiff& sd, const PowerSeries& s,
                                      const DetectionConfig& cfg);

/// Remove events below the adaptive threshold, and events inside a
/// fluctuation segment whose |dP| falls under mu + eta*sigma of the nearby
/// window ranges. Returns (kept, removed).
std::pair<std::vector<Event>, std::vector<Event>> remove_unreasonable(
    const std::vector<Event>& final_events, const VadResult& vad, const SteadyDiff& sd,
    const ThresholdProfile& th, const PowerSeries& s, const DetectionConfig& cfg);

}  // namespace nilmevt
