#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "secrescope/cascade.hpp"
#include "secrescope/errors.hpp"
#include "secrescope/mcsim.hpp"

using namespace secrescope;

namespace {

SystemConfig symmetric(int scenario) {
    SystemConfig s;
    s.scenario = scenario;
    if (scenario == 1) {
        s.first_hop = LinkSpec::eta_mu(1.0, 0.5, 2.0);
        s.multicast_hop = s.eaves_hop = LinkSpec::eta_mu_ig(1.0, 0.5, 5.0, 2.0);
    } else {
        s.first_hop = LinkSpec::kappa_mu(1.0, 0.5, 2.0);
        s.multicast_hop = s.eaves_hop = LinkSpec::kappa_mu_ig(1.0, 0.5, 5.0, 2.0);
    }
    return s;
}

SystemConfig fig6a(int K) {
    SystemConfig s;
    s.scenario = 1;
    double phi = std::pow(10.0, 0.5);
    s.first_hop = LinkSpec::eta_mu(2.0, 0.5, phi);
    s.multicast_hop = LinkSpec::eta_mu_ig(2.0, 0.5, 5.0, phi);
    s.eaves_hop = LinkSpec::eta_mu_ig(2.0, 0.5, 5.0, 1.0);
    s.K = K;
    s.M = 2;
    s.N = 2;
    return s;
}

double mean_of(const LinkSpec& spec, long n, double* se) {
    Rng g = substream(5, 0);
    double s = 0, s2 = 0;
    for (long i = 0; i < n; ++i) {
        double v = sample_link_snr(spec, g);
        s += v;
        s2 += v * v;
    }
    double m = s / n;
    *se = std::sqrt((s2 / n - m * m) / n);
    return m;
}

}  // namespace

TEST(Sampler, EtaMuMean) {
    double se;
    double m = mean_of(LinkSpec::eta_mu(2.0, 0.5, 3.0), 100000, &se);
    EXPECT_NEAR(m, 3.0, 3 * se);
}

TEST(Sampler, CompositeMean) {
    double se;
    double m = mean_of(LinkSpec::kappa_mu_ig(1.0, 1.0, 5.0, 4.0), 100000, &se);
    EXPECT_NEAR(m, 5.0, 3 * se);
}

TEST(Sampler, ExponentialKolmogorovSmirnov) {
    const long n = 100000;
    Rng g = substream(11, 0);
    std::vector<double> v(n);
    for (auto& x : v) x = sample_link_snr(LinkSpec::eta_mu(0.5, 0.0, 1.0), g);
    std::sort(v.begin(), v.end());
    double d = 0;
    for (long i = 0; i < n; ++i) {
        double F = 1.0 - std::exp(-v[i]);
        d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
    }
    EXPECT_LT(d, 1.628 / std::sqrt(static_cast<double>(n)));  // 1% critical value
}

TEST(Substream, IndependentOfOrder) {
    Rng a = substream(3, 17), b = substream(3, 17), c = substream(3, 18);
    EXPECT_EQ(a(), b());
    EXPECT_NE(substream(3, 17)(), c());
}

TEST(Trial, DegenerateSelection) {
    SystemConfig s = symmetric(1);
    Rng g = substream(1, 0), h = substream(1, 0);
    auto t = sample_system_trial(s, g, SimMode::Independent);
    double first = sample_link_snr(s.first_hop, h);
    double second = sample_link_snr(s.multicast_hop, h);
    EXPECT_DOUBLE_EQ(t.sigma_min, std::min(first, second));
}

TEST(Trial, SingleReceiverMatchesBestRelayCdf) {
    SystemConfig s = fig6a(2);
    s.M = 1;
    const long n = 100000;
    Rng g = substream(8, 0);
    std::vector<double> v(n);
    for (auto& x : v) x = sample_system_trial(s, g, SimMode::Independent).sigma_min;
    std::sort(v.begin(), v.end());
    double sup = 0;
    for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        double emp = static_cast<double>(std::upper_bound(v.begin(), v.end(), x) - v.begin()) / n;
        sup = std::max(sup, std::abs(emp - cdf_best_relay(s.main_pair(), 2, x)));
    }
    EXPECT_LT(sup, 0.01);
}

TEST(Estimates, SymmetryForBothScenarios) {
    for (int sc : {1, 2}) {
        SimPlan plan;
        plan.trials = 200000;
        auto e = estimate_metrics(symmetric(sc), plan);
        EXPECT_NEAR(e.pnsmc.value, 0.5, 3 * e.pnsmc.std_error) << sc;
        EXPECT_NEAR(e.esmc.value, 0.0, 3 * e.esmc.std_error) << sc;
        EXPECT_GT(e.pnsmc.std_error, 0.0);
    }
}

TEST(Estimates, ZeroRateComplement) {
    SimPlan plan;
    plan.trials = 50000;
    auto e = estimate_metrics(fig6a(2), plan);
    EXPECT_DOUBLE_EQ(e.sopm.value + e.pnsmc.value, 1.0);
    EXPECT_EQ(e.sopm.trials, 50000);
}

TEST(Estimates, BitIdenticalAcrossWorkerCounts) {
    SimPlan plan;
    plan.trials = 30000;
    plan.seed = 77;
    plan.workers = 1;
    auto a = estimate_metrics(fig6a(2), plan);
    plan.workers = 3;
    auto b = estimate_metrics(fig6a(2), plan);
    EXPECT_EQ(a.sopm.value, b.sopm.value);
    EXPECT_EQ(a.pnsmc.value, b.pnsmc.value);
    EXPECT_EQ(a.esmc.value, b.esmc.value);
    EXPECT_EQ(a.esmc.std_error, b.esmc.std_error);
}

TEST(Estimates, MoreRelaysRaisePositiveCapacity) {
    SimPlan plan;
    plan.trials = 400000;
    auto k2 = estimate_metrics(fig6a(2), plan).pnsmc;
    plan.seed = 2;
    auto k4 = estimate_metrics(fig6a(4), plan).pnsmc;
    EXPECT_GT(k4.value - k2.value, 3 * std::hypot(k2.std_error, k4.std_error));
}

TEST(Estimates, SharedSourceModeRuns) {
    SimPlan plan;
    plan.trials = 20000;
    plan.mode = SimMode::SharedSource;
    auto e = estimate_metrics(fig6a(2), plan);
    EXPECT_GT(e.pnsmc.value, 0.0);
    EXPECT_LT(e.pnsmc.value, 1.0);
}

TEST(SimPlanValidate, RejectsBadPlans) {
    SimPlan p;
    p.trials = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    p.trials = 1000;
    p.workers = 0;
    EXPECT_THROW(p.validate(), ConfigError);
}
