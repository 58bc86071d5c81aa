#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "secrescope/cascade.hpp"
#include "secrescope/extremes.hpp"
#include "secrescope/mcsim.hpp"
#include "secrescope/quadrature.hpp"

using namespace secrescope;

namespace {

SystemConfig fig2a(int K, int M, int N) {
    SystemConfig s;
    s.scenario = 1;
    s.first_hop = LinkSpec::eta_mu(0.5, 0.5, 1.0);
    s.multicast_hop = LinkSpec::eta_mu_ig(0.5, 0.5, 5.0, 1.0);
    s.eaves_hop = LinkSpec::eta_mu_ig(0.5, 0.5, 5.0, 1.0);
    s.K = K;
    s.M = M;
    s.N = N;
    return s;
}

double tv_against(const std::vector<double>& v, double hi, const TermList& pdf) {
    const int bins = 30;
    double w = hi / bins, tv = 0, inside = 0;
    for (int b = 0; b < bins; ++b) {
        double lo = b * w, up = lo + w;
        double emp = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double s) { return s > lo && s <= up; })) /
                     v.size();
        double mass = integrate([&](double x) { return pdf.evaluate(x); }, lo, up).value;
        inside += mass;
        tv += std::abs(emp - mass);
    }
    double tail = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double s) { return s > hi; })) / v.size();
    return 0.5 * (tv + std::abs(tail - (1.0 - inside)));
}

}  // namespace

TEST(SigmaMin, SingleReceiverSingleRelayIsDualhop) {
    auto s = fig2a(1, 1, 1);
    TermList pdf = pdf_sigma_min(s);
    for (double x : {0.05, 0.5, 2.0, 6.0}) EXPECT_NEAR(pdf.evaluate(x), pdf_dualhop(s.main_pair(), x), 1e-6);
}

TEST(SigmaMin, SingleReceiverIsBestRelay) {
    auto s = fig2a(4, 1, 1);
    TermList pdf = pdf_sigma_min(s);
    for (double x : {0.05, 0.5, 2.0, 6.0})
        EXPECT_NEAR(pdf.evaluate(x), pdf_best_relay(s.main_pair(), 4, x), 1e-6);
}

TEST(SigmaMax, SingleEavesdropperMatchesCascade) {
    auto s1 = fig2a(1, 1, 1);
    auto s2 = fig2a(2, 1, 1);
    TermList p1 = pdf_sigma_max(s1), p2 = pdf_sigma_max(s2);
    for (double x : {0.05, 0.5, 2.0, 6.0}) {
        EXPECT_NEAR(p1.evaluate(x), pdf_dualhop(s1.eaves_pair(), x), 1e-6);
        EXPECT_NEAR(p2.evaluate(x), pdf_best_relay(s2.eaves_pair(), 2, x), 1e-6);
    }
}

TEST(OrderStats, ExpandedMatchesPointwise) {
    auto s = fig2a(4, 2, 2);
    TruncationPolicy t;
    auto mn = sigma_min_terms(s, t);
    auto mx = sigma_max_terms(s, t);
    for (double x : {0.1, 0.8, 3.0}) {
        EXPECT_NEAR(mn.pdf.evaluate(x), pdf_sigma_min_direct(s, x, t), 1e-6);
        EXPECT_NEAR(mn.tail.evaluate(x), ccdf_sigma_min_direct(s, x, t), 1e-6);
        EXPECT_NEAR(mx.pdf.evaluate(x), pdf_sigma_max_direct(s, x, t), 1e-6);
        EXPECT_NEAR(mx.tail.evaluate(x), cdf_sigma_max_direct(s, x, t), 1e-6);
    }
}

TEST(OrderStats, Normalized) {
    auto s = fig2a(4, 2, 2);
    EXPECT_NEAR(termlist_integrate(pdf_sigma_min(s)), 1.0, 1e-6);
    EXPECT_NEAR(termlist_integrate(pdf_sigma_max(s)), 1.0, 1e-6);
}

TEST(OrderStats, MinAndMaxMatchSimulation) {
    auto s = fig2a(4, 2, 2);
    const long n = 1000000;
    Rng g = substream(99, 0);
    std::vector<double> mins(n), maxs(n);
    for (long i = 0; i < n; ++i) {
        auto t = sample_system_trial(s, g, SimMode::Independent);
        mins[i] = t.sigma_min;
        maxs[i] = t.sigma_max;
    }
    EXPECT_LE(tv_against(mins, 3.0, pdf_sigma_min(s)), 0.05);
    EXPECT_LE(tv_against(maxs, 5.0, pdf_sigma_max(s)), 0.05);
}

TEST(OrderStats, MoreReceiversLowerTheMinimum) {
    TruncationPolicy t;
    for (double x : {0.3, 1.0, 2.0})
        EXPECT_LT(ccdf_sigma_min_direct(fig2a(4, 3, 1), x, t), ccdf_sigma_min_direct(fig2a(4, 1, 1), x, t));
}
