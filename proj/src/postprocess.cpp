#include "nilmevt/postprocess.hpp"

#include <algorithm>
#include <cmath>

namespace nilmevt {

SteadyDiff build_steady_diff(const PowerSeries& s, const std::vector<Event>& final_events) {
    std::vector<Event> sorted = final_events;
    std::sort(sorted.begin(), sorted.end(),
              [](const Event& a, const Event& b) { return a.start_idx < b.start_idx; });

    const int n = static_cast<int>(s.size());
    SteadyDiff sd;
    int cursor = 0;
    auto add_segment = [&](int a, int b) {
        if (a > b || a < 0 || b >= n) return;
        int seg_id = static_cast<int>(sd.segments.size());
        sd.segments.emplace_back(a, b);
        for (int i = a; i < b; ++i) {
            sd.values.push_back(s.active[i + 1] - s.active[i]);
            sd.orig_index.push_back(i);
            sd.segment_id.push_back(seg_id);
        }
    };

    for (const auto& e : sorted) {
        add_segment(cursor, e.start_idx - 1);
        cursor = std::max(cursor, e.end_idx + 1);
    }
    add_segment(cursor, n - 1);
    return sd;
}

VadResult detect_fluctuation_segments(const SteadyDiff& sd, const PowerSeries& s,
                                      const DetectionConfig& cfg) {
    VadResult res;
    const int nw = cfg.vad_window;
    const int nd = static_cast<int>(sd.values.size());

    // Range of each steady segment, computed once.
    std::vector<double> seg_range(sd.segments.size(), 0.0);
    for (std::size_t k = 0; k < sd.segments.size(); ++k) {
        auto [a, b] = sd.segments[k];
        auto [lo, hi] = std::minmax_element(s.active.begin() + a, s.active.begin() + b + 1);
        seg_range[k] = *hi - *lo;
    }

    for (int l = 0; (l + 1) * nw <= nd; ++l) {
        VadWindow w;
        w.index = l;
        w.diff_begin = l * nw;
        w.diff_end = (l + 1) * nw - 1;
        double e = 0.0, r = 0.0;
        for (int i = w.diff_begin; i <= w.diff_end; ++i) {
            e += sd.values[i] * sd.values[i];
            r = std::max(r, seg_range[sd.segment_id[i]]);
        }
        w.energy = e;
        w.range = r;
        w.flagged = e > cfg.lambda1 && r > cfg.lambda2;
        w.orig_start = sd.orig_index[w.diff_begin];
        w.orig_end = sd.orig_index[w.diff_end] + 1;
        res.windows.push_back(w);
    }

    for (std::size_t i = 0; i < res.windows.size(); ++i) {
        if (!res.windows[i].flagged) continue;
        std::size_t j = i;
        while (j + 1 < res.windows.size() && res.windows[j + 1].flagged) ++j;
        FluctuationSegment seg;
        seg.first_window = static_cast<int>(i);
        seg.last_window = static_cast<int>(j);
        for (std::size_t k = i; k <= j; ++k)
            seg.orig_spans.emplace_back(res.windows[k].orig_start, res.windows[k].orig_end);
        res.segments.push_back(std::move(seg));
        i = j;
    }
    return res;
}

namespace {

// Flag lookup per diff position.
std::vector<char> flagged_by_diff(const VadResult& vad, int ndiffs) {
    std::vector<char> f(ndiffs, 0);
    for (const auto& w : vad.windows)
        if (w.flagged)
            for (int i = w.diff_begin; i <= w.diff_end; ++i) f[i] = 1;
    return f;
}

// An event counts as inside a fluctuation segment when at least half of the
// neighboring steady differences (one VAD window on each side) lie in
// flagged windows.
bool in_fluctuation(const Event& e, const SteadyDiff& sd, const std::vector<char>& flagged,
                    int nw) {
    const int nd = static_cast<int>(sd.values.size());
    // First diff position at or after the event end, via binary search on
    // the monotone orig_index.
    int lo = 0, hi = nd;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (sd.orig_index[mid] < e.start_idx) lo = mid + 1;
        else hi = mid;
    }
    int total = 0, hits = 0;
    for (int i = lo - 1; i >= 0 && i >= lo - nw; --i) {
        ++total;
        if (flagged[i]) ++hits;
    }
    int first_after = lo;
    while (first_after < nd && sd.orig_index[first_after] <= e.end_idx) ++first_after;
    for (int i = first_after; i < nd && i < first_after + nw; ++i) {
        ++total;
        if (flagged[i]) ++hits;
    }
    return total > 0 && 2 * hits >= total;
}

}  // namespace

std::pair<std::vector<Event>, std::vector<Event>> remove_unreasonable(
    const std::vector<Event>& final_events, const VadResult& vad, const SteadyDiff& sd,
    const ThresholdProfile& th, const PowerSeries& s, const DetectionConfig& cfg) {
    std::vector<Event> kept, removed;
    auto flagged = flagged_by_diff(vad, static_cast<int>(sd.values.size()));

    for (const auto& e : final_events) {
        double dp = std::abs(s.active[e.end_idx] - s.active[e.start_idx]);
        if (dp < th.at(e.start_idx)) {
            removed.push_back(e);
            continue;
        }
        if (in_fluctuation(e, sd, flagged, cfg.vad_window)) {
            // R values of windows whose original-time span intersects the
            // W_post neighborhood of the event.
            int lo = e.start_idx - cfg.w_post;
            int hi = e.end_idx + cfg.w_post;
            double sum = 0.0, sum2 = 0.0;
            int cnt = 0;
            for (const auto& w : vad.windows) {
                if (w.orig_end >= lo && w.orig_start <= hi) {
                    sum += w.range;
                    sum2 += w.range * w.range;
                    ++cnt;
                }
            }
            if (cnt > 0) {
                double mu = sum / cnt;
                double var = std::max(0.0, sum2 / cnt - mu * mu);
                if (dp < mu + cfg.eta * std::sqrt(var)) {
                    removed.push_back(e);
                    continue;
                }
            }
        }
        kept.push_back(e);
    }
    return {std::move(kept), std::move(removed)};
}

}  // namespace nilmevt
