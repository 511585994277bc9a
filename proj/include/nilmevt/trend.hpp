#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nilmevt/types.hpp"

namespace nilmevt {

enum class TrendLabel { increasing, decreasing, steady };

inline const char* to_string(TrendLabel l) {
    switch (l) {
        case TrendLabel::increasing: return "increasing";
        case TrendLabel::decreasing: return "decreasing";
        default: return "steady";
    }
}

struct TrendSegment {
    int start_idx = 0;  // relative to the segmented subsequence
    int end_idx = 0;
    double slope = 0.0;  // W/s, endpoint slope dp / (t_n - t_1)
    double dp = 0.0;     // W, P(t_n) - P(t_1)
    TrendLabel label = TrendLabel::steady;
};

/// Steady iff |slope| < k_th1, or |dp| < dp_th1, or both |slope| < k_th2
/// and |dp| < dp_th2; otherwise the sign of dp decides.
TrendLabel classify_trend(double slope, double dp, double duration_s, const DetectionConfig& cfg);

/// Top-down piecewise linear split: recurse at the sample of maximum
/// perpendicular distance from the chord while that distance exceeds the
/// tolerance. Consecutive segments share their breakpoint sample.
std::vector<TrendSegment> plr_segment(std::span<const double> values, const DetectionConfig& cfg);

/// Least-squares slope of a window, in W per sample period.
double fitted_slope(std::span<const double> values, double sample_period);

/// Remove events whose trend word matches one of the unreasonable-shape
/// rules. Returns (kept, removed).
std::pair<std::vector<Event>, std::vector<Event>> screen_events(const std::vector<Event>& events,
                                                                const PowerSeries& s,
                                                                const DetectionConfig& cfg);

}  // namespace nilmevt
