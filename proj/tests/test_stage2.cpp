#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nilmevt/stage2.hpp"

using namespace nilmevt;
using testutil::make_series;
using testutil::noisy_flat;

namespace {

// Independent two-sample decision: naive two-pass moments and a direct
// quantile call, no shared code with the library implementation.
bool oracle_decision(const std::vector<double>& p, int t, int w, double d_th, double alpha) {
    auto moments = [&](int a, int b) {
        double m = 0.0;
        for (int i = a; i <= b; ++i) m += p[i];
        m /= (b - a + 1);
        double v = 0.0;
        for (int i = a; i <= b; ++i) v += (p[i] - m) * (p[i] - m);
        v /= (b - a);
        return std::pair<double, double>{m, v};
    };
    auto [m1, v1] = moments(t - w, t - 1);
    auto [m2, v2] = moments(t, t + w - 1);
    double diff = std::abs(m2 - m1);
    if (diff <= d_th) return false;
    double denom = std::sqrt((v1 + v2) / w);
    if (denom == 0.0) return true;
    boost::math::students_t_distribution<double> dist(2.0 * w - 2.0);
    return diff / denom > boost::math::quantile(dist, 1.0 - alpha / 2.0);
}

PowerSeries ramp_series(int pre, int ramp_len, double rate, int post, double base = 100.0) {
    std::vector<double> p;
    for (int i = 0; i < pre; ++i) p.push_back(base);
    for (int i = 1; i <= ramp_len; ++i) p.push_back(base + rate * i);
    for (int i = 0; i < post; ++i) p.push_back(base + rate * ramp_len);
    return make_series(std::move(p));
}

}  // namespace

TEST_CASE("constant series triggers nothing") {
    auto s = make_series(std::vector<double>(200, 400.0));
    CHECK_FALSE(ttest_change_at(s, 100, 10, 15.0, 0.05));
}

TEST_CASE("noiseless step follows the zero-variance convention") {
    std::vector<double> p(200, 100.0);
    for (std::size_t i = 100; i < p.size(); ++i) p[i] = 200.0;
    auto s = make_series(p);
    CHECK(ttest_change_at(s, 100, 10, 15.0, 0.05));
    // Same geometry but a sub-threshold mean shift fails the first clause.
    for (std::size_t i = 100; i < p.size(); ++i) p[i] = 110.0;
    CHECK_FALSE(ttest_change_at(make_series(p), 100, 10, 15.0, 0.05));
}

TEST_CASE("window out of bounds throws") {
    auto s = make_series(std::vector<double>(30, 1.0));
    CHECK_THROWS(ttest_change_at(s, 2, 5, 15.0, 0.05));
    CHECK_THROWS(ttest_change_at(s, 28, 5, 15.0, 0.05));
}

TEST_CASE("decision matches a brute-force two-sample computation") {
    std::mt19937 rng(2024);
    int agreements = 0;
    for (int it = 0; it < 1000; ++it) {
        int w = std::uniform_int_distribution<int>(2, 40)(rng);
        int n = 2 * w + std::uniform_int_distribution<int>(0, 30)(rng);
        double mu1 = std::uniform_real_distribution<double>(0.0, 500.0)(rng);
        double mu2 = mu1 + std::uniform_real_distribution<double>(-60.0, 60.0)(rng);
        double sig = std::uniform_real_distribution<double>(0.1, 30.0)(rng);
        std::normal_distribution<double> g(0.0, sig);
        std::vector<double> p(n);
        int t = std::uniform_int_distribution<int>(w, n - w)(rng);
        for (int i = 0; i < n; ++i) p[i] = (i < t ? mu1 : mu2) + g(rng);
        double d_th = std::uniform_real_distribution<double>(5.0, 40.0)(rng);
        bool got = ttest_change_at(make_series(p), t, w, d_th, 0.05);
        bool want = oracle_decision(p, t, w, d_th, 0.05);
        CHECK(got == want);
        agreements += (got == want);
    }
    CHECK(agreements == 1000);
}

TEST_CASE("a slow ramp is detected and covers most of its rise") {
    DetectionConfig cfg;
    auto s = ramp_series(400, 60, 5.0, 400);
    ThresholdProfile th;
    th.values.assign(s.size(), 15.0);
    auto ev = detect_long_transients(s, 30, {}, th, cfg);
    REQUIRE(ev.size() == 1);
    // The event span must capture at least 90% of the 300 W rise.
    double captured = s.active[std::min<int>(ev[0].end_idx, 460)] -
                      s.active[std::max<int>(ev[0].start_idx, 400)];
    CHECK(captured >= 0.9 * 300.0);
}

TEST_CASE("two separated ramps give exactly two events") {
    DetectionConfig cfg;
    std::vector<double> p;
    auto push_ramp = [&](double from, double rate, int len) {
        for (int i = 1; i <= len; ++i) p.push_back(from + rate * i);
    };
    for (int i = 0; i < 300; ++i) p.push_back(100.0);
    push_ramp(100, 5, 30);
    for (int i = 0; i < 120; ++i) p.push_back(250.0);
    push_ramp(250, 5, 30);
    for (int i = 0; i < 300; ++i) p.push_back(400.0);
    auto s = make_series(p);
    ThresholdProfile th;
    th.values.assign(s.size(), 15.0);
    auto ev = detect_long_transients(s, 15, {}, th, cfg);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].end_idx < 390);  // neither event spans the steady gap
    CHECK(ev[1].start_idx > 360);
    CHECK_FALSE(events_overlap(ev[0], ev[1]));
}

TEST_CASE("localization lands within one sample of an ideal step edge") {
    DetectionConfig cfg;
    std::vector<double> p(200, 100.0);
    for (std::size_t i = 100; i < p.size(); ++i) p[i] = 400.0;
    auto s = make_series(p);
    auto [a, b] = localize_event_bounds(s, {100, 100}, 5, cfg);
    CHECK(std::abs(a - 99) <= 1);
    CHECK(std::abs(b - 100) <= 1);
}

TEST_CASE("localization brackets a ramp to within one window") {
    DetectionConfig cfg;
    auto s = ramp_series(200, 60, 5.0, 200);
    auto [a, b] = localize_event_bounds(s, {215, 245}, 15, cfg);
    CHECK(a >= 200 - 15);
    CHECK(a <= 200 + 15);
    CHECK(b >= 260 - 15);
    CHECK(b <= 260 + 15);
}

TEST_CASE("localization clamps at the series boundary") {
    DetectionConfig cfg;
    std::vector<double> p;
    for (int i = 0; i < 40; ++i) p.push_back(10.0 * i);  // drifting from sample 0
    auto s = make_series(p);
    auto [a, b] = localize_event_bounds(s, {5, 35}, 10, cfg);
    CHECK(a >= 0);
    CHECK(b <= 39);
}

TEST_CASE("events intersecting exclusion spans are dropped") {
    DetectionConfig cfg;
    std::vector<double> p(400, 100.0);
    for (std::size_t i = 200; i < p.size(); ++i) p[i] = 600.0;
    auto s = make_series(p);
    ThresholdProfile th;
    th.values.assign(s.size(), 15.0);
    Event step = testutil::make_event(199, 200);
    CHECK(detect_long_transients(s, 10, {step}, th, cfg).empty());
    CHECK_FALSE(detect_long_transients(s, 10, {}, th, cfg).empty());
}

TEST_CASE("long-transient invariants hold on random inputs") {
    DetectionConfig cfg;
    std::mt19937 rng(606);
    for (int it = 0; it < 110; ++it) {
        auto s = noisy_flat(500, 150.0, 3.0, rng());
        int n_ramps = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int k = 0; k < n_ramps; ++k) {
            int at = std::uniform_int_distribution<int>(50, 380)(rng);
            int len = std::uniform_int_distribution<int>(10, 60)(rng);
            double rate = std::uniform_real_distribution<double>(3.0, 12.0)(rng);
            for (std::size_t i = at; i < s.size(); ++i)
                s.active[i] += rate * std::min<int>(static_cast<int>(i) - at + 1, len);
        }
        int w = std::vector<int>{5, 10, 15, 20}[std::uniform_int_distribution<int>(0, 3)(rng)];
        auto th = adaptive_threshold(s, cfg);
        auto ev = detect_long_transients(s, w, {}, th, cfg);

        for (std::size_t i = 0; i + 1 < ev.size(); ++i)
            CHECK_FALSE(events_overlap(ev[i], ev[i + 1]));
        for (const auto& e : ev)
            CHECK(std::abs(s.active[e.end_idx] - s.active[e.start_idx]) >
                  th.min_over(e.start_idx, e.end_idx));

        // Determinism and offset invariance.
        auto ev2 = detect_long_transients(s, w, {}, th, cfg);
        REQUIRE(ev.size() == ev2.size());
        PowerSeries shifted = s;
        double off = std::uniform_real_distribution<double>(-300.0, 300.0)(rng);
        for (auto& v : shifted.active) v += off;
        auto th_shift = adaptive_threshold(shifted, cfg);
        auto ev3 = detect_long_transients(shifted, w, {}, th_shift, cfg);
        REQUIRE(ev.size() == ev3.size());
        for (std::size_t i = 0; i < ev.size(); ++i) {
            CHECK(ev[i].start_idx == ev2[i].start_idx);
            CHECK(ev[i].end_idx == ev2[i].end_idx);
            CHECK(ev[i].start_idx == ev3[i].start_idx);
            CHECK(ev[i].end_idx == ev3[i].end_idx);
        }
    }
}
