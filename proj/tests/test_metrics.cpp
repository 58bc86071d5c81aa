#include <cmath>

#include <gtest/gtest.h>

#include "secrescope/config.hpp"
#include "secrescope/errors.hpp"
#include "secrescope/mcsim.hpp"
#include "secrescope/metrics.hpp"

using namespace secrescope;

namespace {

// Fig. 2a curve: phi_m = 10 dB on both hops, phi_t = 5 dB, rate 0.5.
SystemConfig fig2a() {
    SystemConfig s;
    s.scenario = 1;
    s.first_hop = LinkSpec::eta_mu(0.5, 0.5, 10.0);
    s.multicast_hop = LinkSpec::eta_mu_ig(0.5, 0.5, 5.0, 10.0);
    s.eaves_hop = LinkSpec::eta_mu_ig(0.5, 0.5, 5.0, db_to_linear(5.0));
    s.K = 4;
    s.M = 2;
    s.N = 2;
    s.target_rate = 0.5;
    return s;
}

SystemConfig symmetric() {
    SystemConfig s;
    s.scenario = 1;
    s.first_hop = LinkSpec::eta_mu(1.0, 0.5, 3.0);
    s.multicast_hop = s.eaves_hop = LinkSpec::eta_mu_ig(1.0, 0.5, 5.0, 3.0);
    return s;
}

}  // namespace

TEST(Names, RoundTrip) {
    for (auto e : {Engine::ClosedForm, Engine::Quadrature, Engine::MonteCarlo})
        EXPECT_EQ(parse_engine(engine_name(e)), e);
    for (auto m : {Metric::Sopm, Metric::Pnsmc, Metric::Esmc}) EXPECT_EQ(parse_metric(metric_name(m)), m);
    EXPECT_THROW(parse_engine("abacus"), ConfigError);
}

TEST(ClosedForm, FrozenFig2aValues) {
    // Frozen after agreement between the expanded and the pointwise engines.
    const double sopm_v = 0.7338297429, pnsmc_v = 0.4629350518, esmc_v = -0.1083696807;
    auto sys = fig2a();
    auto cf = ClosedFormModel::build(sys, {});
    QuadratureModel q(sys, {});
    EXPECT_NEAR(cf.sopm(0.5).value, sopm_v, 1e-8);
    EXPECT_NEAR(cf.pnsmc().value, pnsmc_v, 1e-8);
    EXPECT_NEAR(cf.esmc().value, esmc_v, 1e-8);
    EXPECT_NEAR(q.sopm(0.5).value, sopm_v, 1e-6);
    EXPECT_NEAR(q.pnsmc().value, pnsmc_v, 1e-6);
    EXPECT_NEAR(q.esmc().value, esmc_v, 1e-6);
    EXPECT_FALSE(cf.sopm(0.5).diag.truncation_flag);
    EXPECT_EQ(cf.sopm(0.5).std_error, 0.0);
}

TEST(ClosedForm, AgreesWithSimulation) {
    auto sys = fig2a();
    SimPlan plan;
    plan.trials = 1000000;
    auto mc = estimate_metrics(sys, plan);
    auto cf = ClosedFormModel::build(sys, {});
    EXPECT_NEAR(cf.sopm(0.5).value, mc.sopm.value, std::max(3 * mc.sopm.std_error, 0.01));
    EXPECT_NEAR(cf.pnsmc().value, mc.pnsmc.value, std::max(3 * mc.pnsmc.std_error, 0.01));
    EXPECT_NEAR(cf.esmc().value, mc.esmc.value, std::max(3 * mc.esmc.std_error, 0.01));
}

TEST(ClosedForm, SymmetricConfiguration) {
    auto cf = ClosedFormModel::build(symmetric(), {});
    EXPECT_NEAR(cf.pnsmc().value, 0.5, 1e-6);
    EXPECT_NEAR(cf.esmc().value, 0.0, 1e-6);
}

TEST(ClosedForm, RateLimits) {
    auto sys = fig2a();
    auto cf = ClosedFormModel::build(sys, {});
    EXPECT_NEAR(cf.sopm(0.0).value, 1.0 - cf.pnsmc().value, 2e-3);
    EXPECT_GE(cf.sopm(20.0).value, 0.999);
    double prev = 0;
    for (double r : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        double v = cf.sopm(r).value;
        EXPECT_GE(v, prev - 1e-12);
        prev = v;
    }
}

TEST(ClosedForm, StrongMulticastChannel) {
    auto sys = fig2a();
    sys.multicast_hop = sys.multicast_hop.with_phi(1e4);
    sys.first_hop = sys.first_hop.with_phi(1e4);
    EXPECT_GT(pnsmc(sys, Engine::Quadrature).value, 0.99);
}

TEST(ClosedForm, VanishingEavesdropper) {
    auto sys = fig2a();
    sys.eaves_hop = sys.eaves_hop.with_phi(1e-8);
    auto cf = ClosedFormModel::build(sys, {});
    // E[log2(1 + sigma_min)] alone, by the pointwise engine.
    double alone = esmc(sys, Engine::Quadrature).value;
    EXPECT_NEAR(cf.esmc().value, alone, 1e-4);
    EXPECT_GT(alone, 0.0);
}

TEST(ClosedForm, NonIntegerShapesRejected) {
    auto sys = fig2a();
    sys.scenario = 2;
    sys.first_hop = LinkSpec::kappa_mu(0.5, 0.5, 10.0);
    sys.multicast_hop = LinkSpec::kappa_mu_ig(0.5, 0.5, 5.0, 10.0);
    sys.eaves_hop = LinkSpec::kappa_mu_ig(0.5, 0.5, 5.0, 3.0);
    EXPECT_THROW(ClosedFormModel::build(sys, {}), IntegralityError);
    EXPECT_NO_THROW(sopm(sys, Engine::Quadrature));
}

TEST(Quadrature, MatchesClosedFormScenarioTwo) {
    SystemConfig s;
    s.scenario = 2;
    s.first_hop = LinkSpec::kappa_mu(2.0, 0.5, 10.0);
    s.multicast_hop = LinkSpec::kappa_mu_ig(2.0, 0.5, 5.0, 10.0);
    s.eaves_hop = LinkSpec::kappa_mu_ig(2.0, 0.5, 5.0, 1.0);
    s.K = 2;
    s.M = 2;
    s.N = 2;
    s.target_rate = 0.5;
    auto cf = ClosedFormModel::build(s, {});
    QuadratureModel q(s, {});
    for (auto [a, b] : {std::pair{cf.sopm(0.5), q.sopm(0.5)}, {cf.pnsmc(), q.pnsmc()}, {cf.esmc(), q.esmc()}})
        EXPECT_NEAR(a.value, b.value, 1e-3 * std::max(std::abs(b.value), 1e-3));
}

TEST(Dispatch, EngineRequiresPlan) {
    SimPlan plan;
    plan.trials = 5000;
    auto e = evaluate_metric(Metric::Pnsmc, symmetric(), Engine::MonteCarlo, {}, &plan);
    EXPECT_EQ(e.engine, Engine::MonteCarlo);
    EXPECT_EQ(e.trials, 5000);
    EXPECT_GT(e.std_error, 0.0);
}
