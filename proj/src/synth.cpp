#include "nilmevt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nilmevt {

ApplianceKind appliance_kind_from_string(const std::string& s) {
    if (s == "step") return ApplianceKind::step;
    if (s == "multi_step") return ApplianceKind::multi_step;
    if (s == "ramp") return ApplianceKind::ramp;
    if (s == "fluctuating") return ApplianceKind::fluctuating;
    throw std::invalid_argument("unknown appliance kind '" + s + "'");
}

namespace {

// Deterministic helpers on top of mt19937_64; avoids the
// implementation-defined std distributions.
double next_uniform(std::mt19937_64& rng) {  // [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double next_gaussian(std::mt19937_64& rng) {
    double u1 = next_uniform(rng);
    double u2 = next_uniform(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

std::pair<PowerSeries, std::vector<LabelRecord>> synth_generate(const SynthSpec& spec) {
    const int n = static_cast<int>(spec.duration_s);
    if (n < 2) throw std::invalid_argument("synth: duration too short");

    PowerSeries s;
    s.start_epoch = spec.start_epoch;
    s.active.assign(n, spec.base_load);
    std::vector<LabelRecord> labels;

    std::mt19937_64 rng(spec.seed);
    if (spec.noise_sigma > 0.0)
        for (auto& v : s.active) v += spec.noise_sigma * next_gaussian(rng);

    auto epoch = [&](int idx) { return s.epoch_at(idx); };

    for (const auto& app : spec.appliances) {
        for (double sched : app.schedule) {
            int on = static_cast<int>(sched);
            int hold = static_cast<int>(app.hold_s);
            int off = on + hold;
            if (on < 1 || off >= n)
                throw std::invalid_argument("synth: schedule for '" + app.name +
                                            "' exceeds series duration");

            switch (app.kind) {
                case ApplianceKind::step: {
                    for (int t = on; t < off; ++t) s.active[t] += app.power;
                    labels.push_back({epoch(on - 1), epoch(on), app.name, "on"});
                    labels.push_back({epoch(off - 1), epoch(off), app.name, "off"});
                    break;
                }
                case ApplianceKind::multi_step: {
                    if (app.levels.empty())
                        throw std::invalid_argument("synth: multi_step without levels");
                    int plateau = std::max(1, static_cast<int>(app.plateau_s));
                    double total = 0.0;
                    for (std::size_t j = 0; j < app.levels.size(); ++j) {
                        int stage_on = on + static_cast<int>(j) * plateau;
                        if (stage_on >= off)
                            throw std::invalid_argument("synth: multi_step stages exceed hold");
                        for (int t = stage_on; t < off; ++t) s.active[t] += app.levels[j];
                        total += app.levels[j];
                        labels.push_back({epoch(stage_on - 1), epoch(stage_on), app.name,
                                          j == 0 ? "on" : "transition"});
                    }
                    (void)total;
                    labels.push_back({epoch(off - 1), epoch(off), app.name, "off"});
                    break;
                }
                case ApplianceKind::ramp: {
                    int rise = std::max(1, static_cast<int>(app.transient_s));
                    for (int t = on; t < off; ++t) {
                        double frac = std::min(1.0, static_cast<double>(t - on) / rise);
                        s.active[t] += app.power * frac;
                    }
                    labels.push_back({epoch(on), epoch(std::min(off - 1, on + rise)), app.name, "on"});
                    labels.push_back({epoch(off - 1), epoch(off), app.name, "off"});
                    break;
                }
                case ApplianceKind::fluctuating: {
                    // Alternating quiet/loud wobble phases; no labels by design.
                    int quiet = std::max(1, static_cast<int>(app.quiet_phase_s));
                    int loud = std::max(1, static_cast<int>(app.loud_phase_s));
                    int t = on;
                    bool in_loud = true;
                    while (t < off) {
                        int phase = in_loud ? loud : quiet;
                        double amp = in_loud ? app.amplitude : app.amplitude / 10.0;
                        for (int k = 0; k < phase && t < off; ++k, ++t)
                            s.active[t] += amp * (2.0 * next_uniform(rng) - 1.0);
                        in_loud = !in_loud;
                    }
                    break;
                }
            }
        }
    }

    std::sort(labels.begin(), labels.end(), [](const LabelRecord& a, const LabelRecord& b) {
        return a.start_epoch < b.start_epoch;
    });
    return {std::move(s), std::move(labels)};
}

}  // namespace nilmevt
