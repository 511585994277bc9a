#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nilmevt/ingestion.hpp"
#include "nilmevt/types.hpp"

namespace nilmevt {

enum class ApplianceKind { step, multi_step, ramp, fluctuating };

ApplianceKind appliance_kind_from_string(const std::string& s);

struct ApplianceSpec {
    ApplianceKind kind = ApplianceKind::step;
    std::string name = "appliance";
    double power = 0.0;                 // W (step, ramp)
    std::vector<double> levels;         // W per stage (multi_step)
    double plateau_s = 5.0;             // between multi_step stages
    double transient_s = 0.0;           // ramp rise time
    double amplitude = 0.0;             // fluctuating wobble bound
    double quiet_phase_s = 60.0;        // fluctuating quiet/loud alternation
    double loud_phase_s = 60.0;
    std::vector<double> schedule;       // activation start offsets, seconds
    double hold_s = 600.0;              // on duration per activation
};

struct SynthSpec {
    double duration_s = 3600.0;
    std::uint64_t seed = 0;
    double start_epoch = 0.0;
    double base_load = 100.0;
    double noise_sigma = 0.0;
    std::vector<ApplianceSpec> appliances;
};

/// Superpose seeded appliance signals plus Gaussian noise and emit the
/// exact ground-truth event boundaries. Bit-reproducible for a fixed seed.
std::pair<PowerSeries, std::vector<LabelRecord>> synth_generate(const SynthSpec& spec);

}  // namespace nilmevt
