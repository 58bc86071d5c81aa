#pragma once

#include <optional>
#include <string>

#include "secrescope/extremes.hpp"
#include "secrescope/system.hpp"
#include "secrescope/truncation.hpp"

namespace secrescope {

struct SimPlan;

enum class Engine { ClosedForm, Quadrature, MonteCarlo };
enum class Metric { Sopm, Pnsmc, Esmc };

std::string engine_name(Engine e);
std::string metric_name(Metric m);
// Throws ConfigError on unknown names.
Engine parse_engine(const std::string& s);
Metric parse_metric(const std::string& s);

struct Diagnostics {
    bool truncation_flag = false;
    double dropped_mass = 0.0;
    double norm_min = 1.0;   // integral of the sigma_min density
    double norm_max = 1.0;   // integral of the sigma_max density
    double certify_error = 0.0;
    double clamp_excursion = 0.0;  // distance clamped away to reach [0, 1]
    double noise_floor = 0.0;      // rounding noise of this value, absolute
    std::size_t terms = 0;
};

struct MetricEstimate {
    double value = 0.0;
    double std_error = 0.0;
    Engine engine = Engine::ClosedForm;
    long trials = 0;
    Diagnostics diag;
};

// Expanded densities of both order statistics; build once, evaluate all
// three metrics.
class ClosedFormModel {
public:
    static ClosedFormModel build(const SystemConfig& sys, const TruncationPolicy& trunc);

    MetricEstimate sopm(double target_rate) const;
    MetricEstimate pnsmc() const;
    MetricEstimate esmc() const;

    const OrderStatTerms& min_terms() const { return min_; }
    const OrderStatTerms& max_terms() const { return max_; }

private:
    MetricEstimate wrap(double v, bool probability, double noise) const;

    SystemConfig sys_;
    OrderStatTerms min_;
    OrderStatTerms max_;
    Diagnostics diag_;
    double scale_min_ = 1.0;
    double scale_max_ = 1.0;
    double noise_min_ = 0.0;
    double noise_max_ = 0.0;
};

// Pointwise order statistics over the unexpanded link densities.
class QuadratureModel {
public:
    QuadratureModel(const SystemConfig& sys, const TruncationPolicy& trunc);

    MetricEstimate sopm(double target_rate) const;
    MetricEstimate pnsmc() const;
    MetricEstimate esmc() const;

private:
    SystemConfig sys_;
    TruncationPolicy trunc_;
    double scale_min_ = 1.0;
    double scale_max_ = 1.0;
};

// Pr(secrecy rate < target_rate).
MetricEstimate sopm(const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc = {},
                    const SimPlan* plan = nullptr);
// Pr(secrecy rate > 0).
MetricEstimate pnsmc(const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc = {},
                     const SimPlan* plan = nullptr);
// E[log2(1 + sigma_min)] - E[log2(1 + sigma_max)].
MetricEstimate esmc(const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc = {},
                    const SimPlan* plan = nullptr);

MetricEstimate evaluate_metric(Metric m, const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc = {},
                               const SimPlan* plan = nullptr);

}  // namespace secrescope
