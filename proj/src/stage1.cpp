#include "nilmevt/stage1.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace nilmevt {

namespace {

constexpr double kMadToSigma = 1.4826;

// Median of a scratch buffer; the buffer is reordered in place.
double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    double hi = *mid;
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

double scaled_mad(const double* data, std::size_t n, std::vector<double>& scratch) {
    scratch.assign(data, data + n);
    double med = median_inplace(scratch);
    for (auto& x : scratch) x = std::abs(x - med);
    return kMadToSigma * median_inplace(scratch);
}

}  // namespace

double ThresholdProfile::min_over(int start_idx, int end_idx) const {
    double m = values[static_cast<std::size_t>(start_idx)];
    for (int i = start_idx + 1; i <= end_idx; ++i) m = std::min(m, values[static_cast<std::size_t>(i)]);
    return m;
}

ThresholdProfile adaptive_threshold(const PowerSeries& s, const DetectionConfig& cfg) {
    const std::size_t n = s.size();
    if (n < 2) throw std::invalid_argument("adaptive_threshold: need at least 2 samples");

    std::vector<double> absd(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) absd[i] = std::abs(s.active[i + 1] - s.active[i]);

    // Window of diffs strictly before sample t; shrinks to all diffs when
    // the series is shorter than one noise window.
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(cfg.noise_window), absd.size());

    ThresholdProfile th;
    th.values.resize(n);
    std::vector<double> scratch;
    scratch.reserve(w);

    double first_full = 0.0;
    for (std::size_t t = w; t < n; ++t) {
        double mad = scaled_mad(absd.data() + (t - w), w, scratch);
        double v = std::max(cfg.d_min, cfg.mad_scale * mad);
        th.values[t] = v;
        if (t == w) first_full = v;
    }
    if (w >= n) first_full = std::max(cfg.d_min, cfg.mad_scale * scaled_mad(absd.data(), absd.size(), scratch));
    for (std::size_t t = 0; t < std::min(w, n); ++t) th.values[t] = first_full;
    return th;
}

std::vector<Event> detect_step_events(const PowerSeries& s, const ThresholdProfile& th) {
    if (th.values.size() != s.size())
        throw std::invalid_argument("detect_step_events: threshold profile not aligned with series");

    std::vector<Event> out;
    const std::size_t n = s.size();
    if (n < 2) return out;

    std::size_t i = 0;
    const std::size_t nd = n - 1;
    while (i < nd) {
        double d = s.active[i + 1] - s.active[i];
        if (std::abs(d) <= th.values[i]) {
            ++i;
            continue;
        }
        // Extend the run while consecutive change samples keep the same sign.
        int sign = d > 0 ? 1 : -1;
        std::size_t j = i;
        while (j + 1 < nd) {
            double dn = s.active[j + 2] - s.active[j + 1];
            if (std::abs(dn) <= th.values[j + 1]) break;
            if ((dn > 0 ? 1 : -1) != sign) break;
            ++j;
        }
        Event e;
        e.start_idx = static_cast<int>(i);
        e.end_idx = static_cast<int>(j + 1);
        e.window_len = 1;
        e.stage = EventStage::step;
        // An opposite-sign run starting right after the previous one would
        // claim the shared peak sample; give that sample to the earlier
        // event so spans stay disjoint.
        if (!out.empty() && e.start_idx <= out.back().end_idx)
            e.start_idx = out.back().end_idx + 1;
        if (e.start_idx <= e.end_idx &&
            std::abs(s.active[e.end_idx] - s.active[e.start_idx]) > th.min_over(e.start_idx, e.end_idx))
            out.push_back(e);
        i = j + 1;
    }
    return out;
}

}  // namespace nilmevt
