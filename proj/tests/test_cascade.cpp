#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "secrescope/cascade.hpp"
#include "secrescope/errors.hpp"
#include "secrescope/mcsim.hpp"
#include "secrescope/quadrature.hpp"

using namespace secrescope;

namespace {

HopPair fig2a_pair() {
    return {LinkSpec::eta_mu(0.5, 0.5, 1.0), LinkSpec::eta_mu_ig(0.5, 0.5, 5.0, 1.0), 1};
}
HopPair fig2b_pair() {
    return {LinkSpec::kappa_mu(0.5, 0.5, 1.0), LinkSpec::kappa_mu_ig(0.5, 0.5, 5.0, 1.0), 2};
}
HopPair fig3b_pair() {
    return {LinkSpec::kappa_mu(2.0, 0.5, 1.0), LinkSpec::kappa_mu_ig(2.0, 0.5, 5.0, 1.0), 2};
}

std::vector<double> draw_min_pairs(const HopPair& p, int k_relays, long n, std::uint64_t seed) {
    Rng g = substream(seed, 0);
    std::vector<double> v(n);
    for (auto& x : v) {
        double best = 0;
        for (int k = 0; k < k_relays; ++k)
            best = std::max(best, std::min(sample_link_snr(p.first, g), sample_link_snr(p.second, g)));
        x = best;
    }
    return v;
}

double empirical_cdf(const std::vector<double>& v, double x) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [x](double s) { return s <= x; })) / v.size();
}

// Total-variation distance between the density and a 30-bin histogram on [0, hi].
double histogram_tv(const std::vector<double>& v, double hi, const std::function<double(double)>& pdf) {
    const int bins = 30;
    double w = hi / bins, tv = 0;
    for (int b = 0; b < bins; ++b) {
        double lo = b * w, up = lo + w;
        double emp = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double s) { return s > lo && s <= up; })) /
                     v.size();
        double mass = integrate(pdf, lo, up).value;
        tv += std::abs(emp - mass);
    }
    double tail = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double s) { return s > hi; })) / v.size();
    double tail_mass = integrate_to_infinity(pdf, hi, hi).value;
    return 0.5 * (tv + std::abs(tail - tail_mass));
}

}  // namespace

TEST(CdfDualhop, Limits) {
    auto p = fig2a_pair();
    EXPECT_NEAR(cdf_dualhop(p, 1e-12), 0.0, 1e-4);
    EXPECT_GE(cdf_dualhop(p, 1e6), 1.0 - 1e-6);
}

TEST(CdfDualhop, FrozenValueAndMonteCarlo) {
    // Frozen from an independent high-precision evaluation of 1 - Q1 Q2 with
    // both link CCDFs obtained from the gamma-sum and shadow-mixture forms.
    const double frozen = 0.86827490996901007;
    auto p = fig2a_pair();
    EXPECT_NEAR(cdf_dualhop(p, 1.0), frozen, 1e-6);
    auto draws = draw_min_pairs(p, 1, 100000, 42);
    EXPECT_NEAR(empirical_cdf(draws, 1.0), frozen, 0.01);
}

TEST(PdfDualhop, DerivativeOfCdf) {
    auto p = fig2a_pair();
    const double h = 1e-4;
    double fd = (cdf_dualhop(p, 1.0 + h) - cdf_dualhop(p, 1.0 - h)) / (2 * h);
    EXPECT_NEAR(pdf_dualhop(p, 1.0) / fd, 1.0, 1e-4);
}

TEST(PdfDualhop, Normalized) {
    for (const auto& p : {fig2a_pair(), fig3b_pair()}) {
        double n = integrate_to_infinity([&](double x) { return pdf_dualhop_direct(p, x); }, 0.0, 1.0).value;
        EXPECT_NEAR(n, 1.0, 1e-3);
    }
}

TEST(PdfDualhop, SeriesMatchesDirect) {
    auto p = fig3b_pair();
    EXPECT_NEAR(pdf_dualhop(p, 2.0), 0.038516812904932985, 1e-7);
    EXPECT_NEAR(pdf_dualhop_direct(p, 2.0), 0.038516812904932985, 1e-7);
}

TEST(PdfDualhop, NonIntegerShapesHistogram) {
    auto p = fig2b_pair();
    auto draws = draw_min_pairs(p, 1, 100000, 7);
    double tv = histogram_tv(draws, 3.0, [&](double x) { return pdf_dualhop_direct(p, x); });
    EXPECT_LE(tv, 0.05);
    EXPECT_NEAR(pdf_dualhop(p, 0.5), pdf_dualhop_direct(p, 0.5), 1e-6);
}

TEST(BestRelay, SingleRelayIsDualhop) {
    auto p = fig2a_pair();
    for (double x : {0.1, 1.0, 4.0}) {
        EXPECT_DOUBLE_EQ(cdf_best_relay(p, 1, x), cdf_dualhop(p, x));
        EXPECT_NEAR(pdf_best_relay(p, 1, x), pdf_dualhop(p, x), 1e-14);
    }
}

TEST(BestRelay, PowerOfDualhopCdf) {
    auto p = fig2a_pair();
    for (double x : {0.2, 1.0, 3.0}) EXPECT_NEAR(cdf_best_relay(p, 3, x), std::pow(cdf_dualhop(p, x), 3), 1e-14);
}

TEST(BestRelay, FourRelaysFrozenAndMonteCarlo) {
    const double frozen = 0.56836719921467652;
    auto p = fig2a_pair();
    EXPECT_NEAR(cdf_best_relay(p, 4, 1.0), frozen, 1e-6);
    auto draws = draw_min_pairs(p, 4, 100000, 43);
    EXPECT_NEAR(empirical_cdf(draws, 1.0), frozen, 0.01);
}

TEST(BestRelay, Normalized) {
    auto p = fig2a_pair();
    double n = integrate_to_infinity([&](double x) { return pdf_best_relay(p, 4, x); }, 0.0, 1.0).value;
    EXPECT_NEAR(n, 1.0, 1e-3);
}

TEST(BestRelay, TwoRelaysScenarioTwo) {
    const double frozen = 0.075948101414610966;
    auto p = fig3b_pair();
    EXPECT_NEAR(pdf_best_relay(p, 2, 2.0), frozen, 1e-7);
    auto draws = draw_min_pairs(p, 2, 100000, 44);
    double tv = histogram_tv(draws, 6.0, [&](double x) { return pdf_best_relay(p, 2, x); });
    EXPECT_LE(tv, 0.05);
}

TEST(DualhopTerms, CertifiedAgainstProductForm) {
    TruncationPolicy t;
    auto cache = CoefficientCache::build(fig2a_pair(), t);
    auto terms = dualhop_terms(cache);
    auto cert = certify_series(cache, terms);
    EXPECT_TRUE(cert.passed) << cert.max_abs_error;
    for (double x : {0.3, 1.0, 5.0}) {
        EXPECT_NEAR(terms.ccdf.evaluate(x), ccdf_dualhop(fig2a_pair(), x), 1e-8);
        EXPECT_NEAR(terms.pdf.evaluate(x), pdf_dualhop(fig2a_pair(), x), 1e-8);
    }
}

TEST(DualhopTerms, NonIntegerShapesRejected) {
    auto cache = CoefficientCache::build(fig2b_pair(), TruncationPolicy{});
    EXPECT_THROW(cache.require_integer_shapes(), IntegralityError);
}

TEST(HopPairValidate, ScenarioFamilies) {
    HopPair bad{LinkSpec::kappa_mu(1, 1, 1), LinkSpec::eta_mu_ig(1, 0.5, 5, 1), 1};
    EXPECT_THROW(bad.validate(), ConfigError);
    EXPECT_NO_THROW(fig2a_pair().validate());
}
