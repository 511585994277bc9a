#pragma once

#include <random>
#include <vector>

#include "nilmevt/types.hpp"

namespace testutil {

inline nilmevt::PowerSeries make_series(std::vector<double> p, double start_epoch = 0.0) {
    nilmevt::PowerSeries s;
    s.start_epoch = start_epoch;
    s.active = std::move(p);
    return s;
}

inline nilmevt::Event make_event(int a, int b, int w = 1,
                                 nilmevt::EventStage st = nilmevt::EventStage::step) {
    nilmevt::Event e;
    e.start_idx = a;
    e.end_idx = b;
    e.window_len = w;
    e.stage = st;
    return e;
}

/// Flat load with Gaussian noise, long enough for the trailing noise window.
inline nilmevt::PowerSeries noisy_flat(int n, double level, double sigma, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> p(static_cast<std::size_t>(n), level);
    for (auto& v : p) v += g(rng);
    return make_series(std::move(p));
}

}  // namespace testutil
