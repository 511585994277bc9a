#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nilmevt/postprocess.hpp"

using namespace nilmevt;
using testutil::make_event;
using testutil::make_series;

TEST_CASE("steady differences without events cover the whole series") {
    auto s = make_series({1, 3, 6, 10, 15});
    auto sd = build_steady_diff(s, {});
    REQUIRE(sd.values.size() == 4);
    CHECK(sd.values[0] == doctest::Approx(2));
    CHECK(sd.values[3] == doctest::Approx(5));
    CHECK(sd.segments.size() == 1);
}

TEST_CASE("differencing never crosses an event") {
    std::vector<double> p(20, 100.0);
    for (std::size_t i = 10; i < p.size(); ++i) p[i] = 900.0;  // huge edge inside the event
    auto sd = build_steady_diff(make_series(p), {make_event(9, 10)});
    REQUIRE(sd.segments.size() == 2);
    CHECK(sd.segments[0] == std::pair<int, int>{0, 8});
    CHECK(sd.segments[1] == std::pair<int, int>{11, 19});
    for (double v : sd.values) CHECK(std::abs(v) < 1e-12);  // the 800 W jump is excluded
}

TEST_CASE("constant steady segments difference to zero") {
    auto sd = build_steady_diff(make_series(std::vector<double>(50, 42.0)), {});
    for (double v : sd.values) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("quiet series produces no fluctuation windows") {
    DetectionConfig cfg;
    auto s = make_series(std::vector<double>(200, 100.0));
    auto sd = build_steady_diff(s, {});
    auto vad = detect_fluctuation_segments(sd, s, cfg);
    CHECK(vad.segments.empty());
    for (const auto& w : vad.windows) CHECK_FALSE(w.flagged);
}

TEST_CASE("energetic wobble with sufficient range is flagged") {
    DetectionConfig cfg;
    // Triangle wobble: per-sample change sqrt(6) W, so a ten-difference
    // window carries energy 60 > 50, and the excursion spans ~9.8 W > 5.
    const double d = std::sqrt(6.0);
    std::vector<double> p;
    double level = 100.0;
    int dir = 1;
    for (int i = 0; i < 60; ++i) {
        p.push_back(level);
        level += dir * d;
        if (level > 100 + 4 * d || level < 100 - 1e-9) dir = -dir;
    }
    auto s = make_series(p);
    auto sd = build_steady_diff(s, {});
    auto vad = detect_fluctuation_segments(sd, s, cfg);
    REQUIRE(!vad.windows.empty());
    CHECK(vad.windows[0].energy == doctest::Approx(60.0));
    CHECK(vad.windows[0].range > 5.0);
    CHECK(vad.windows[0].flagged);
    // Every window here wobbles, so all flagged windows merge into one.
    REQUIRE(vad.segments.size() == 1);
    CHECK(vad.segments[0].first_window == 0);
    CHECK(vad.segments[0].last_window == static_cast<int>(vad.windows.size()) - 1);
}

TEST_CASE("high energy with tiny range stays unflagged") {
    DetectionConfig cfg;
    // +/-3 W alternation: energy 90 per window but total excursion 3 W < 5.
    std::vector<double> p;
    for (int i = 0; i < 60; ++i) p.push_back(100.0 + (i % 2 ? 3.0 : 0.0));
    auto s = make_series(p);
    auto sd = build_steady_diff(s, {});
    auto vad = detect_fluctuation_segments(sd, s, cfg);
    for (const auto& w : vad.windows) {
        CHECK(w.energy > cfg.lambda1);
        CHECK_FALSE(w.flagged);
    }
}

namespace {

// Hand-built surroundings: two flagged windows with ranges 12 and 18 W
// right before an event edge, so the removal cutoff is 15 + 3*3 = 24 W.
struct RemovalFixture {
    PowerSeries s;
    Event e;
    SteadyDiff sd;
    VadResult vad;
    ThresholdProfile th;

    explicit RemovalFixture(double jump) {
        std::vector<double> p(100, 100.0);
        for (int i = 51; i < 100; ++i) p[i] = 100.0 + jump;
        s = testutil::make_series(p);
        e = make_event(50, 51);
        sd = build_steady_diff(s, {e});

        auto window = [&](int idx, int begin, double range) {
            VadWindow w;
            w.index = idx;
            w.diff_begin = begin;
            w.diff_end = begin + 9;
            w.range = range;
            w.energy = 60.0;
            w.flagged = true;
            w.orig_start = sd.orig_index[w.diff_begin];
            w.orig_end = sd.orig_index[w.diff_end] + 1;
            return w;
        };
        vad.windows = {window(0, 30, 12.0), window(1, 40, 18.0)};
        FluctuationSegment seg;
        seg.first_window = 0;
        seg.last_window = 1;
        vad.segments = {seg};
        th.values.assign(s.size(), 15.0);
    }
};

}  // namespace

TEST_CASE("in-fluctuation event below the range statistic is removed") {
    DetectionConfig cfg;
    RemovalFixture f(20.0);  // 20 < 24
    auto [kept, removed] = remove_unreasonable({f.e}, f.vad, f.sd, f.th, f.s, cfg);
    CHECK(kept.empty());
    CHECK(removed.size() == 1);
}

TEST_CASE("in-fluctuation event above the range statistic is kept") {
    DetectionConfig cfg;
    RemovalFixture f(30.0);  // 30 >= 24
    auto [kept, removed] = remove_unreasonable({f.e}, f.vad, f.sd, f.th, f.s, cfg);
    CHECK(kept.size() == 1);
    CHECK(removed.empty());
}

TEST_CASE("sub-threshold events are removed regardless of fluctuations") {
    DetectionConfig cfg;
    RemovalFixture f(10.0);  // below the 15 W profile
    auto [kept, removed] = remove_unreasonable({f.e}, f.vad, f.sd, f.th, f.s, cfg);
    CHECK(kept.empty());
    CHECK(removed.size() == 1);
}

TEST_CASE("clean events outside fluctuation segments survive") {
    DetectionConfig cfg;
    std::vector<double> p(400, 100.0);
    for (int i = 201; i < 400; ++i) p[i] = 600.0;
    auto s = make_series(p);
    Event e = make_event(200, 201);
    auto sd = build_steady_diff(s, {e});
    auto vad = detect_fluctuation_segments(sd, s, cfg);
    ThresholdProfile th;
    th.values.assign(s.size(), 15.0);
    auto [kept, removed] = remove_unreasonable({e}, vad, sd, th, s, cfg);
    CHECK(kept.size() == 1);
    CHECK(removed.empty());
}

namespace {

PowerSeries random_wobbly(std::mt19937& rng, int n) {
    std::normal_distribution<double> g(0.0, 4.0);
    std::vector<double> p(n, 200.0);
    double drift = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i % 50 == 0) drift = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
        p[i] += drift * ((i % 50) / 50.0) + g(rng);
    }
    return testutil::make_series(p);
}

}  // namespace

TEST_CASE("event spans never leak into the difference series") {
    std::mt19937 rng(246);
    for (int it = 0; it < 120; ++it) {
        auto s = random_wobbly(rng, 300);
        std::vector<Event> events;
        int cursor = 10;
        while (cursor < 280 && std::bernoulli_distribution(0.7)(rng)) {
            int len = std::uniform_int_distribution<int>(1, 20)(rng);
            events.push_back(make_event(cursor, std::min(cursor + len, 295)));
            cursor += len + std::uniform_int_distribution<int>(5, 40)(rng);
        }
        auto sd = build_steady_diff(s, events);
        for (std::size_t k = 0; k < sd.values.size(); ++k) {
            int i = sd.orig_index[k];
            for (const auto& e : events) {
                bool touches_event = i + 1 >= e.start_idx && i <= e.end_idx;
                CHECK_FALSE(touches_event);
            }
        }
    }
}

TEST_CASE("raising the energy or range threshold never adds segments") {
    std::mt19937 rng(135);
    for (int it = 0; it < 110; ++it) {
        auto s = random_wobbly(rng, 400);
        auto sd = build_steady_diff(s, {});
        DetectionConfig lo, hi;
        hi.lambda1 = lo.lambda1 * std::uniform_real_distribution<double>(1.0, 4.0)(rng);
        hi.lambda2 = lo.lambda2 * std::uniform_real_distribution<double>(1.0, 3.0)(rng);
        auto v_lo = detect_fluctuation_segments(sd, s, lo);
        auto v_hi = detect_fluctuation_segments(sd, s, hi);
        int lo_flags = 0, hi_flags = 0;
        for (const auto& w : v_lo.windows) lo_flags += w.flagged;
        for (const auto& w : v_hi.windows) hi_flags += w.flagged;
        CHECK(hi_flags <= lo_flags);
    }
}

TEST_CASE("a looser removal margin never removes more events") {
    std::mt19937 rng(975);
    for (int it = 0; it < 110; ++it) {
        auto s = random_wobbly(rng, 500);
        std::vector<Event> events;
        int cursor = 30;
        for (int k = 0; k < 4; ++k) {
            double amp = std::uniform_real_distribution<double>(5.0, 60.0)(rng);
            for (std::size_t i = cursor + 1; i < s.size(); ++i) s.active[i] += amp;
            events.push_back(make_event(cursor, cursor + 1));
            cursor += std::uniform_int_distribution<int>(60, 100)(rng);
        }
        auto sd = build_steady_diff(s, events);
        DetectionConfig base;
        auto vad = detect_fluctuation_segments(sd, s, base);
        ThresholdProfile th;
        th.values.assign(s.size(), 15.0);

        DetectionConfig tight = base, loose = base;
        loose.eta = base.eta * std::uniform_real_distribution<double>(1.0, 3.0)(rng);
        auto [k1, r1] = remove_unreasonable(events, vad, sd, th, s, tight);
        auto [k2, r2] = remove_unreasonable(events, vad, sd, th, s, loose);
        // A larger eta widens the removal cutoff, removing at least as many.
        CHECK(r2.size() >= r1.size());
    }
}
