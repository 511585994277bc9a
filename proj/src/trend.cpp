#include "nilmevt/trend.hpp"

#include <cmath>

namespace nilmevt {

TrendLabel classify_trend(double slope, double dp, double duration_s, const DetectionConfig& cfg) {
    if (duration_s <= 0.0) throw std::invalid_argument("classify_trend: non-positive duration");
    bool steady = std::abs(slope) < cfg.k_th1 || std::abs(dp) < cfg.dp_th1 ||
                  (std::abs(slope) < cfg.k_th2 && std::abs(dp) < cfg.dp_th2);
    if (steady) return TrendLabel::steady;
    return dp > 0 ? TrendLabel::increasing : TrendLabel::decreasing;
}

double fitted_slope(std::span<const double> values, double sample_period) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    // Closed-form least squares with x = 0..n-1.
    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = static_cast<double>(i);
        sx += x;
        sy += values[i];
        sxy += x * values[i];
        sxx += x * x;
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (static_cast<double>(n) * sxy - sx * sy) / denom / sample_period;
}

namespace {

// Perpendicular distance of point (k, y_k) from the chord through the
// segment endpoints, with time in samples and power in watts.
double max_perp_split(std::span<const double> v, int a, int b, int& split) {
    double x1 = a, y1 = v[a], x2 = b, y2 = v[b];
    double dx = x2 - x1, dy = y2 - y1;
    double norm = std::sqrt(dx * dx + dy * dy);
    double best = -1.0;
    split = -1;
    for (int k = a + 1; k < b; ++k) {
        double d = std::abs(dy * (k - x1) - dx * (v[k] - y1)) / norm;
        if (d > best) {
            best = d;
            split = k;
        }
    }
    return best;
}

void split_recursive(std::span<const double> v, int a, int b, double tol, std::vector<int>& breaks) {
    if (b - a < 2) return;
    int k;
    double d = max_perp_split(v, a, b, k);
    if (d > tol) {
        split_recursive(v, a, k, tol, breaks);
        breaks.push_back(k);
        split_recursive(v, k, b, tol, breaks);
    }
}

}  // namespace

std::vector<TrendSegment> plr_segment(std::span<const double> values, const DetectionConfig& cfg) {
    if (values.size() < 2) throw std::invalid_argument("plr_segment: need at least 2 samples");
    const int last = static_cast<int>(values.size()) - 1;

    std::vector<int> breaks{0};
    split_recursive(values, 0, last, cfg.plr_tolerance, breaks);
    breaks.push_back(last);

    std::vector<TrendSegment> segs;
    segs.reserve(breaks.size() - 1);
    for (std::size_t q = 0; q + 1 < breaks.size(); ++q) {
        TrendSegment seg;
        seg.start_idx = breaks[q];
        seg.end_idx = breaks[q + 1];
        seg.dp = values[seg.end_idx] - values[seg.start_idx];
        double duration = static_cast<double>(seg.end_idx - seg.start_idx);
        seg.slope = seg.dp / duration;
        seg.label = classify_trend(seg.slope, seg.dp, duration, cfg);
        segs.push_back(seg);
    }
    return segs;
}

namespace {

bool is_unreasonable(const std::vector<TrendSegment>& word, double net_dp, double sample_period,
                     const DetectionConfig& cfg) {
    // R3: overlong steady segment, regardless of direction.
    for (const auto& seg : word) {
        if (seg.label == TrendLabel::steady &&
            static_cast<double>(seg.end_idx - seg.start_idx) * sample_period > cfg.dt_steady)
            return true;
    }
    if (net_dp == 0.0) return false;

    TrendLabel support = net_dp > 0 ? TrendLabel::increasing : TrendLabel::decreasing;
    TrendLabel contra = net_dp > 0 ? TrendLabel::decreasing : TrendLabel::increasing;

    // R1 / R4: first or last non-steady segment contradicts the net direction.
    const TrendSegment* first_ns = nullptr;
    const TrendSegment* last_ns = nullptr;
    double support_mass = 0.0, contra_mass = 0.0;
    for (const auto& seg : word) {
        if (seg.label == TrendLabel::steady) continue;
        if (!first_ns) first_ns = &seg;
        last_ns = &seg;
        if (seg.label == support) support_mass += std::abs(seg.dp);
        else contra_mass += std::abs(seg.dp);
    }
    if (first_ns && first_ns->label == contra) return true;
    if (last_ns && last_ns->label == contra) return true;

    // R2: opposite-direction mass dominates the supporting one.
    if (support_mass > 0.0 && contra_mass > support_mass) return true;
    return false;
}

}  // namespace

std::pair<std::vector<Event>, std::vector<Event>> screen_events(const std::vector<Event>& events,
                                                                const PowerSeries& s,
                                                                const DetectionConfig& cfg) {
    std::vector<Event> kept, removed;
    for (const auto& e : events) {
        if (e.start_idx < 0 || static_cast<std::size_t>(e.end_idx) >= s.size())
            throw std::out_of_range("screen_events: event outside series");
        if (e.length() < 2) {
            kept.push_back(e);
            continue;
        }
        std::span<const double> seg(s.active.data() + e.start_idx, static_cast<std::size_t>(e.length()));
        auto word = plr_segment(seg, cfg);
        double net = s.active[e.end_idx] - s.active[e.start_idx];
        if (is_unreasonable(word, net, s.sample_period, cfg))
            removed.push_back(e);
        else
            kept.push_back(e);
    }
    return {std::move(kept), std::move(removed)};
}

}  // namespace nilmevt
