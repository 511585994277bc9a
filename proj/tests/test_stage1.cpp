#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nilmevt/stage1.hpp"

using namespace nilmevt;
using testutil::make_series;
using testutil::noisy_flat;

namespace {

double sorted_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Independent threshold oracle built from a full sort-based median.
double oracle_threshold(const std::vector<double>& p, std::size_t t, const DetectionConfig& cfg) {
    std::vector<double> absd;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) absd.push_back(std::abs(p[i + 1] - p[i]));
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(cfg.noise_window), absd.size());
    std::size_t lo = t < w ? 0 : t - w;  // pre-window samples reuse the first full window
    if (t < w) t = w;
    std::vector<double> win(absd.begin() + lo, absd.begin() + t);
    double med = sorted_median(win);
    std::vector<double> dev;
    for (double x : win) dev.push_back(std::abs(x - med));
    double mad = 1.4826 * sorted_median(dev);
    return std::max(cfg.d_min, cfg.mad_scale * mad);
}

}  // namespace

TEST_CASE("constant series floors the threshold") {
    DetectionConfig cfg;
    auto s = make_series(std::vector<double>(500, 250.0));
    auto th = adaptive_threshold(s, cfg);
    for (double v : th.values) CHECK(v == doctest::Approx(15.0));
}

TEST_CASE("threshold matches a brute-force robust-scale oracle on noise") {
    DetectionConfig cfg;
    std::mt19937 seed_rng(31);
    for (int it = 0; it < 10; ++it) {
        auto s = noisy_flat(800, 300.0, 25.0, seed_rng());
        auto th = adaptive_threshold(s, cfg);
        for (std::size_t t : {0UL, 150UL, 300UL, 301UL, 500UL, 799UL}) {
            CHECK(th.values[t] ==
                  doctest::Approx(oracle_threshold(s.active, t, cfg)).epsilon(1e-12));
        }
    }
}

TEST_CASE("threshold is robust to a single large step") {
    DetectionConfig cfg;
    auto s = noisy_flat(1200, 100.0, 8.0, 99);
    for (std::size_t i = 600; i < s.size(); ++i) s.active[i] += 2000.0;
    auto th = adaptive_threshold(s, cfg);
    double before = th.values[599];
    double after = th.values[950];  // the step edge is one outlier in the window
    CHECK(std::abs(after - before) / before < 0.10);
}

TEST_CASE("short series shrink the noise window instead of failing") {
    DetectionConfig cfg;
    auto s = noisy_flat(50, 100.0, 5.0, 3);
    auto th = adaptive_threshold(s, cfg);
    CHECK(th.values.size() == 50);
    for (double v : th.values) CHECK(v >= cfg.d_min);
}

TEST_CASE("series shorter than 2 samples is an error") {
    DetectionConfig cfg;
    CHECK_THROWS(adaptive_threshold(make_series({5.0}), cfg));
}

TEST_CASE("clean step yields one two-sample event") {
    std::vector<double> p(400, 0.0);
    for (std::size_t i = 10; i < p.size(); ++i) p[i] = 500.0;
    auto s = make_series(p);
    ThresholdProfile th;
    th.values.assign(p.size(), 15.0);
    auto ev = detect_step_events(s, th);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].start_idx == 9);
    CHECK(ev[0].end_idx == 10);
    CHECK(ev[0].window_len == 1);
    CHECK(ev[0].stage == EventStage::step);
}

TEST_CASE("two separated steps give two events") {
    std::vector<double> p(400, 0.0);
    for (std::size_t i = 10; i < p.size(); ++i) p[i] += 500.0;
    for (std::size_t i = 13; i < p.size(); ++i) p[i] += 300.0;
    auto s = make_series(p);
    ThresholdProfile th;
    th.values.assign(p.size(), 15.0);
    auto ev = detect_step_events(s, th);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].start_idx == 9);
    CHECK(ev[0].end_idx == 10);
    CHECK(ev[1].start_idx == 12);
    CHECK(ev[1].end_idx == 13);
}

TEST_CASE("a monotone multi-sample edge is a single event") {
    std::vector<double> p(100, 0.0);
    p[10] = 200;
    for (std::size_t i = 11; i < p.size(); ++i) p[i] = 500;
    ThresholdProfile th;
    th.values.assign(p.size(), 15.0);
    auto ev = detect_step_events(make_series(p), th);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].start_idx == 9);
    CHECK(ev[0].end_idx == 11);
}

TEST_CASE("slow ramp below the threshold produces no step events") {
    std::vector<double> p;
    for (int i = 0; i < 100; ++i) p.push_back(0.0);
    for (int i = 1; i <= 60; ++i) p.push_back(5.0 * i);  // 5 W per sample
    for (int i = 0; i < 100; ++i) p.push_back(300.0);
    ThresholdProfile th;
    th.values.assign(p.size(), 15.0);
    CHECK(detect_step_events(make_series(p), th).empty());
}

TEST_CASE("step events never overlap and always clear the threshold") {
    DetectionConfig cfg;
    std::mt19937 rng(517);
    for (int it = 0; it < 120; ++it) {
        auto s = noisy_flat(700, 200.0, 4.0, rng());
        // Random steps, some adjacent with opposite signs.
        int n_steps = std::uniform_int_distribution<int>(0, 8)(rng);
        for (int k = 0; k < n_steps; ++k) {
            int at = std::uniform_int_distribution<int>(5, 690)(rng);
            double amp = std::uniform_real_distribution<double>(40.0, 900.0)(rng);
            if (std::bernoulli_distribution(0.5)(rng)) amp = -amp;
            for (std::size_t i = at; i < s.size(); ++i) s.active[i] += amp;
        }
        auto th = adaptive_threshold(s, cfg);
        auto ev = detect_step_events(s, th);
        for (std::size_t i = 0; i + 1 < ev.size(); ++i)
            CHECK_FALSE(events_overlap(ev[i], ev[i + 1]));
        for (const auto& e : ev) {
            CHECK(std::abs(s.active[e.end_idx] - s.active[e.start_idx]) >
                  th.min_over(e.start_idx, e.end_idx));
        }
    }
}

TEST_CASE("scaling the series scales thresholds and preserves detections") {
    DetectionConfig cfg;
    std::mt19937 rng(900);
    int checked = 0;
    for (int it = 0; it < 110; ++it) {
        auto s = noisy_flat(600, 150.0, 12.0, rng());
        int at = std::uniform_int_distribution<int>(320, 580)(rng);
        for (std::size_t i = at; i < s.size(); ++i) s.active[i] += 400.0;
        double alpha = std::uniform_real_distribution<double>(1.5, 6.0)(rng);
        PowerSeries s2 = s;
        for (auto& v : s2.active) v *= alpha;

        auto th1 = adaptive_threshold(s, cfg);
        auto th2 = adaptive_threshold(s2, cfg);
        for (std::size_t t = 0; t < s.size(); t += 37) {
            if (th1.values[t] > cfg.d_min + 1e-9) {
                CHECK(th2.values[t] == doctest::Approx(alpha * th1.values[t]).epsilon(1e-9));
                ++checked;
            }
        }
        // Same change samples: both series use their own scaled thresholds.
        auto e1 = detect_step_events(s, th1);
        auto e2 = detect_step_events(s2, th2);
        REQUIRE(e1.size() == e2.size());
        for (std::size_t i = 0; i < e1.size(); ++i) {
            CHECK(e1[i].start_idx == e2[i].start_idx);
            CHECK(e1[i].end_idx == e2[i].end_idx);
        }
    }
    CHECK(checked > 100);
}
