#include "nilmevt/evaluate.hpp"

#include <algorithm>
#include <cmath>

namespace nilmevt {

namespace {

// Sum of |first differences| over an inclusive sample span.
double total_variation(const PowerSeries& s, int a, int b) {
    double tv = 0.0;
    for (int i = a; i < b; ++i) tv += std::abs(s.active[i + 1] - s.active[i]);
    return tv;
}

}  // namespace

double overlap_coefficient(const Event& det, const Event& gt, const PowerSeries& s) {
    int ia = std::max(det.start_idx, gt.start_idx);
    int ib = std::min(det.end_idx, gt.end_idx);
    if (ia > ib) return 0.0;

    double tv_det = total_variation(s, det.start_idx, det.end_idx);
    double tv_gt = total_variation(s, gt.start_idx, gt.end_idx);
    double den = std::max(tv_det, tv_gt);
    if (den == 0.0)
        return (det.start_idx == gt.start_idx && det.end_idx == gt.end_idx) ? 1.0 : 0.0;
    return total_variation(s, ia, ib) / den;
}

OvlMatrix build_match_matrix(const std::vector<Event>& dets, const std::vector<Event>& gts,
                             const PowerSeries& s, const DetectionConfig& cfg) {
    OvlMatrix m;
    m.n_d = static_cast<int>(dets.size());
    m.n_t = static_cast<int>(gts.size());
    m.raw.assign(static_cast<std::size_t>(m.n_d) * m.n_t, 0.0);

    for (int i = 0; i < m.n_d; ++i)
        for (int j = 0; j < m.n_t; ++j)
            m.raw[static_cast<std::size_t>(i) * m.n_t + j] = overlap_coefficient(dets[i], gts[j], s);

    std::vector<int> row_nz(m.n_d, 0), col_nz(m.n_t, 0);
    for (int i = 0; i < m.n_d; ++i)
        for (int j = 0; j < m.n_t; ++j)
            if (m.raw_at(i, j) != 0.0) {
                ++row_nz[i];
                ++col_nz[j];
            }

    // Match promotion then split penalty, both judged on the raw matrix.
    m.modified = m.raw;
    for (int i = 0; i < m.n_d; ++i)
        for (int j = 0; j < m.n_t; ++j) {
            double raw = m.raw_at(i, j);
            if (raw == 0.0) continue;
            double& v = m.modified[static_cast<std::size_t>(i) * m.n_t + j];
            if (raw > cfg.rho) v = 1.0;
            if (row_nz[i] + col_nz[j] > 2) v -= cfg.penalty;
            v = std::max(0.0, v);
        }
    return m;
}

EvalScores prf_scores(const OvlMatrix& m) {
    EvalScores sc;
    if (m.n_d == 0 || m.n_t == 0) return sc;
    for (double v : m.modified) sc.tp += v;
    sc.precision = sc.tp / m.n_d;
    sc.recall = sc.tp / m.n_t;
    double denom = sc.precision + sc.recall;
    sc.f1_mod = denom > 0.0 ? 2.0 * sc.precision * sc.recall / denom : 0.0;
    return sc;
}

}  // namespace nilmevt
