#pragma once

#include <utility>
#include <vector>

#include "nilmevt/stage1.hpp"
#include "nilmevt/types.hpp"

namespace nilmevt {

struct WindowStats {
    double mean_before = 0.0;
    double mean_after = 0.0;
    double std_before = 0.0;
    double std_after = 0.0;
};

/// Two-sided Student-t critical value for the given significance level and
/// degrees of freedom.
double t_critical(double alpha, int dof);

WindowStats window_stats(const PowerSeries& s, int t, int w);

/// Moving-average + moving t-test change criterion at sample t: the w
/// samples strictly before t against the w samples starting at t. Zero
/// pooled variance with a nonzero mean difference counts as an infinite
/// statistic.
bool ttest_change_at(const PowerSeries& s, int t, int w, double d_th, double alpha);

/// Locate event bounds around a trigger span: walk outward until a length-w
/// flanking window is steady, clamping at 4w from the trigger edge.
std::pair<int, int> localize_event_bounds(const PowerSeries& s, std::pair<int, int> trigger_span,
                                          int w, const DetectionConfig& cfg);

/// Long-transient detection for one window length. Samples inside exclusion
/// spans are skipped and localized events intersecting them are dropped.
std::vector<Event> detect_long_transients(const PowerSeries& s, int w,
                                          const std::vector<Event>& exclusions,
                                          const ThresholdProfile& th, const DetectionConfig& cfg);

}  // namespace nilmevt
