#include "nilmevt/types.hpp"

#include <algorithm>

namespace nilmevt {

EventFeatures event_features(const Event& e, const PowerSeries& s) {
    if (e.start_idx < 0 || e.end_idx < e.start_idx ||
        static_cast<std::size_t>(e.end_idx) >= s.size())
        throw std::out_of_range("event_features: event outside series");

    EventFeatures f;
    f.delta_p = s.active[e.end_idx] - s.active[e.start_idx];
    f.delta_q = s.has_reactive() ? s.reactive[e.end_idx] - s.reactive[e.start_idx] : 0.0;
    auto [lo, hi] = std::minmax_element(s.active.begin() + e.start_idx,
                                        s.active.begin() + e.end_idx + 1);
    f.range_p = *hi - *lo;
    return f;
}

}  // namespace nilmevt
