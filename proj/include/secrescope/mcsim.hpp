#pragma once

#include <cstdint>
#include <random>

#include "secrescope/metrics.hpp"
#include "secrescope/system.hpp"

namespace secrescope {

enum class SimMode { Independent, SharedSource };

const char* sim_mode_name(SimMode m);

struct SimPlan {
    long trials = 1000000;
    std::uint64_t seed = 1;
    SimMode mode = SimMode::Independent;
    int workers = 1;

    void validate() const;
};

struct TrialOutcome {
    double sigma_min;
    double sigma_max;
    double secrecy_rate;  // bits/s/Hz
};

using Rng = std::mt19937_64;

// Generator for one counter-indexed substream.
Rng substream(std::uint64_t seed, std::uint64_t index);

double sample_link_snr(const LinkSpec& spec, Rng& rng);

// Independent mode redraws the first hop for every receiver and eavesdropper;
// shared-source mode draws one first-hop vector for all of them.
TrialOutcome sample_system_trial(const SystemConfig& sys, Rng& rng, SimMode mode);

struct McEstimates {
    MetricEstimate sopm;
    MetricEstimate pnsmc;
    MetricEstimate esmc;
};

McEstimates estimate_metrics(const SystemConfig& sys, const SimPlan& plan);

}  // namespace secrescope
