#pragma once

#include <string>
#include <vector>

#include "secrescope/mcsim.hpp"
#include "secrescope/metrics.hpp"
#include "secrescope/system.hpp"
#include "secrescope/truncation.hpp"

namespace secrescope {

double db_to_linear(double db);
double linear_to_db(double lin);

// One curve of a sweep.
struct Variant {
    std::string label;
    SystemConfig sys;
};

// Swept parameter: phi_m_db (multicast hop), phi_t_db (eavesdropper hop) or
// phi_p_db (first hop).
struct SweepSpec {
    SystemConfig base;
    std::vector<Variant> variants;  // empty means a single curve on `base`
    std::string axis = "phi_m_db";
    // When sweeping phi_m_db, move the first hop's average SNR along with it.
    bool tie_first_hop = true;
    std::vector<double> values_db;
    std::vector<Metric> metrics;
    std::vector<Engine> engines;
    SimPlan plan;
    TruncationPolicy trunc;

    void validate() const;
    std::vector<Variant> curves() const;
};

// "0, 5, 10" or "start:step:stop".
std::vector<double> parse_grid(const std::string& text);

bool is_axis(const std::string& axis);
SystemConfig apply_axis(const SystemConfig& sys, const std::string& axis, double value_db, bool tie_first_hop);

// Flat INI: [system], [first_hop], [multicast_hop], [eaves_hop] required;
// [sweep] and [simulation] optional. Throws ConfigError with line numbers.
SweepSpec parse_config(const std::string& text);
SweepSpec load_config(const std::string& path);

// Label used in the CSV scenario column.
std::string default_label(const SystemConfig& sys);

}  // namespace secrescope
