#pragma once

#include <vector>

#include "nilmevt/types.hpp"

namespace nilmevt {

/// Per-sample detection threshold D_th(t).
struct ThresholdProfile {
    std::vector<double> values;  // W, one per sample

    double at(int idx) const { return values[static_cast<std::size_t>(idx)]; }
    double min_over(int start_idx, int end_idx) const;
};

/// D_th(t) = max(d_min, mad_scale * 1.4826 * MAD(|dP| over the trailing
/// noise window)). Samples earlier than one full window reuse the first
/// full-window value.
ThresholdProfile adaptive_threshold(const PowerSeries& s, const DetectionConfig& cfg);

/// Stage-I step detection: per-sample changes above D_th(t), merged into
/// maximal same-sign runs. Each run becomes one Event spanning from the
/// sample before the run to the last sample of the run.
std::vector<Event> detect_step_events(const PowerSeries& s, const ThresholdProfile& th);

}  // namespace nilmevt
