#include "nilmevt/stage2.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

#include "nilmevt/trend.hpp"

namespace nilmevt {

double t_critical(double alpha, int dof) {
    if (dof < 1) throw std::invalid_argument("t_critical: dof must be >= 1");
    boost::math::students_t_distribution<double> dist(static_cast<double>(dof));
    return boost::math::quantile(dist, 1.0 - alpha / 2.0);
}

WindowStats window_stats(const PowerSeries& s, int t, int w) {
    if (w < 2) throw std::invalid_argument("window_stats: w must be >= 2");
    if (t - w < 0 || static_cast<std::size_t>(t + w - 1) >= s.size())
        throw std::out_of_range("window_stats: window out of bounds");

    auto mean_std = [&](int a, int b) {  // inclusive
        double sum = 0.0;
        for (int i = a; i <= b; ++i) sum += s.active[i];
        double mean = sum / static_cast<double>(b - a + 1);
        double ss = 0.0;
        for (int i = a; i <= b; ++i) {
            double d = s.active[i] - mean;
            ss += d * d;
        }
        double var = ss / static_cast<double>(b - a);  // sample variance
        return std::pair<double, double>{mean, std::sqrt(var)};
    };

    WindowStats ws;
    auto [mb, sb] = mean_std(t - w, t - 1);
    auto [ma, sa] = mean_std(t, t + w - 1);
    ws.mean_before = mb;
    ws.std_before = sb;
    ws.mean_after = ma;
    ws.std_after = sa;
    return ws;
}

bool ttest_change_at(const PowerSeries& s, int t, int w, double d_th, double alpha) {
    WindowStats ws = window_stats(s, t, w);
    double diff = std::abs(ws.mean_after - ws.mean_before);
    if (diff <= d_th) return false;
    double pooled = std::sqrt((ws.std_before * ws.std_before + ws.std_after * ws.std_after) /
                              static_cast<double>(w));
    if (pooled == 0.0) return true;  // nonzero mean difference, zero variance
    return diff / pooled > t_critical(alpha, 2 * w - 2);
}

namespace {

bool window_is_steady(const PowerSeries& s, int a, int b, const DetectionConfig& cfg) {
    std::span<const double> v(s.active.data() + a, static_cast<std::size_t>(b - a + 1));
    double slope = fitted_slope(v, s.sample_period);
    double dp = s.active[b] - s.active[a];
    double duration = static_cast<double>(b - a) * s.sample_period;
    return classify_trend(slope, dp, duration > 0 ? duration : s.sample_period, cfg) ==
           TrendLabel::steady;
}

}  // namespace

std::pair<int, int> localize_event_bounds(const PowerSeries& s, std::pair<int, int> trigger_span,
                                          int w, const DetectionConfig& cfg) {
    const int n = static_cast<int>(s.size());
    const int t0 = trigger_span.first;
    const int t1 = trigger_span.second;
    if (t0 > t1) throw std::invalid_argument("localize_event_bounds: empty trigger span");

    int start = std::max(0, t0 - 4 * w);
    for (int c = t0; c >= t0 - 4 * w; --c) {
        if (c - w + 1 < 0) {
            start = 0;
            break;
        }
        if (window_is_steady(s, c - w + 1, c, cfg)) {
            start = c;
            break;
        }
    }

    int end = std::min(n - 1, t1 + 4 * w);
    for (int c = t1; c <= t1 + 4 * w; ++c) {
        if (c + w - 1 > n - 1) {
            end = n - 1;
            break;
        }
        if (window_is_steady(s, c, c + w - 1, cfg)) {
            end = c;
            break;
        }
    }

    start = std::clamp(start, 0, n - 1);
    end = std::clamp(end, start, n - 1);
    return {start, end};
}

std::vector<Event> detect_long_transients(const PowerSeries& s, int w,
                                          const std::vector<Event>& exclusions,
                                          const ThresholdProfile& th, const DetectionConfig& cfg) {
    const int n = static_cast<int>(s.size());
    std::vector<Event> out;
    if (n < 2 * w) return out;

    std::vector<char> excluded(static_cast<std::size_t>(n), 0);
    for (const auto& e : exclusions)
        for (int i = std::max(0, e.start_idx); i <= std::min(n - 1, e.end_idx); ++i) excluded[i] = 1;

    // Contiguous trigger samples form one group.
    std::vector<std::pair<int, int>> groups;
    int run_start = -1;
    for (int t = w; t <= n - w; ++t) {
        bool trig = !excluded[t] && ttest_change_at(s, t, w, th.at(t), cfg.t_test_alpha);
        if (trig) {
            if (run_start < 0) run_start = t;
        } else if (run_start >= 0) {
            groups.emplace_back(run_start, t - 1);
            run_start = -1;
        }
    }
    if (run_start >= 0) groups.emplace_back(run_start, n - w);

    for (const auto& g : groups) {
        auto [a, b] = localize_event_bounds(s, g, w, cfg);
        if (!out.empty() && a <= out.back().end_idx) {
            out.back().end_idx = std::max(out.back().end_idx, b);  // merge localization overlap
            continue;
        }
        Event e;
        e.start_idx = a;
        e.end_idx = b;
        e.window_len = w;
        e.stage = EventStage::long_transient;
        out.push_back(e);
    }

    std::vector<Event> final_events;
    for (const auto& e : out) {
        bool hits_exclusion = false;
        for (const auto& x : exclusions)
            if (events_overlap(e, x)) {
                hits_exclusion = true;
                break;
            }
        if (hits_exclusion) continue;
        if (std::abs(s.active[e.end_idx] - s.active[e.start_idx]) <=
            th.min_over(e.start_idx, e.end_idx))
            continue;
        final_events.push_back(e);
    }
    return final_events;
}

}  // namespace nilmevt
