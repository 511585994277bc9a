#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilmevt {

/// Uniformly sampled aggregate power signal at 1 Hz. Reactive power is
/// optional; when absent the vector is empty.
struct PowerSeries {
    double start_epoch = 0.0;
    double sample_period = 1.0;
    std::vector<double> active;
    std::vector<double> reactive;

    bool has_reactive() const { return !reactive.empty(); }
    std::size_t size() const { return active.size(); }
    double epoch_at(std::size_t idx) const { return start_epoch + static_cast<double>(idx) * sample_period; }

    void validate() const {
        if (active.empty()) throw std::invalid_argument("PowerSeries: active power is empty");
        if (!reactive.empty() && reactive.size() != active.size())
            throw std::invalid_argument("PowerSeries: reactive length differs from active");
        if (sample_period <= 0.0) throw std::invalid_argument("PowerSeries: non-positive sample period");
    }
};

enum class EventStage { step, long_transient };

inline const char* to_string(EventStage s) {
    return s == EventStage::step ? "step" : "long_transient";
}

struct EventFeatures {
    double delta_p = 0.0;  // W, end minus start
    double delta_q = 0.0;  // var, 0 when reactive absent
    double range_p = 0.0;  // W, max minus min over the segment
};

/// A detected transient segment, inclusive on both ends.
struct Event {
    int start_idx = 0;
    int end_idx = 0;
    int window_len = 1;  // the w that produced it; 1 for stage I
    EventStage stage = EventStage::step;
    std::optional<EventFeatures> features;

    int length() const { return end_idx - start_idx + 1; }
};

/// Inclusive-interval overlap; a single shared sample counts.
inline bool events_overlap(const Event& a, const Event& b) {
    return a.start_idx <= b.end_idx && b.start_idx <= a.end_idx;
}

EventFeatures event_features(const Event& e, const PowerSeries& s);

struct DetectionConfig {
    std::vector<int> window_set{5, 10, 15, 20, 25, 30, 60};

    // trend screening (Eq 2 thresholds)
    double k_th1 = 0.5;    // W/s
    double k_th2 = 1.0;    // W/s
    double dp_th1 = 10.0;  // W
    double dp_th2 = 40.0;  // W
    double dt_steady = 10.0;  // s

    // motif mining
    int n_days = 4;
    int n_th = 3;
    double bandwidth = 0.8;  // mean-shift, standardized units

    // post-processing (VAD)
    int vad_window = 10;     // N_w, samples
    double lambda1 = 50.0;   // W^2
    double lambda2 = 5.0;    // W
    int w_post = 300;        // samples
    double eta = 3.0;

    // stage II t-test
    double t_test_alpha = 0.05;

    // evaluation
    double rho = 0.8;
    double penalty = 0.1;

    // stage I adaptive threshold (reconstruction)
    int noise_window = 300;   // trailing samples
    double mad_scale = 5.0;   // multiplier on scaled MAD
    double d_min = 15.0;      // W floor

    // PLR split tolerance
    double plr_tolerance = 5.0;  // W

    void validate() const {
        if (window_set.empty()) throw std::invalid_argument("config: empty window set");
        int prev = 1;
        for (int w : window_set) {
            if (w < 2) throw std::invalid_argument("config: window lengths must be >= 2");
            if (w <= prev && prev != 1) throw std::invalid_argument("config: window set must be sorted ascending");
            prev = w;
        }
        if (!(k_th1 < k_th2)) throw std::invalid_argument("config: k_th1 must be < k_th2");
        if (!(dp_th1 < dp_th2)) throw std::invalid_argument("config: dp_th1 must be < dp_th2");
        if (k_th1 <= 0 || dp_th1 <= 0 || dt_steady <= 0 || lambda1 <= 0 || lambda2 <= 0 ||
            eta <= 0 || rho <= 0 || penalty <= 0 || d_min <= 0)
            throw std::invalid_argument("config: thresholds must be positive");
        if (n_days < 1 || n_th < 0 || vad_window < 1 || w_post < 0)
            throw std::invalid_argument("config: bad count parameter");
        if (t_test_alpha <= 0 || t_test_alpha >= 1)
            throw std::invalid_argument("config: alpha outside (0,1)");
    }
};

}  // namespace nilmevt
