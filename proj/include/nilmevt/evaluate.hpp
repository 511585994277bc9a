#pragma once

#include <vector>

#include "nilmevt/types.hpp"

namespace nilmevt {

struct OvlMatrix {
    int n_d = 0;
    int n_t = 0;
    std::vector<double> raw;       // row-major, n_d x n_t
    std::vector<double> modified;  // after match promotion and split penalty

    double raw_at(int i, int j) const { return raw[static_cast<std::size_t>(i) * n_t + j]; }
    double at(int i, int j) const { return modified[static_cast<std::size_t>(i) * n_t + j]; }
};

struct EvalScores {
    double tp = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1_mod = 0.0;
};

/// Overlap coefficient: shared total-variation mass over the larger of the
/// two segments' total variation. Zero for disjoint segments; for two
/// zero-variation segments, 1 iff the spans are identical.
double overlap_coefficient(const Event& det, const Event& gt, const PowerSeries& s);

OvlMatrix build_match_matrix(const std::vector<Event>& dets, const std::vector<Event>& gts,
                             const PowerSeries& s, const DetectionConfig& cfg);

EvalScores prf_scores(const OvlMatrix& m);

}  // namespace nilmevt
