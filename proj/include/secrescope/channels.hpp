#pragma once

#include <string>
#include <variant>
#include <vector>

#include "secrescope/truncation.hpp"

namespace secrescope {

enum class Family { EtaMu, EtaMuIG, KappaMu, KappaMuIG };

std::string family_name(Family f);

struct EtaMuParams {
    double mu;
    double eta;
    double phi;
};

struct EtaMuIGParams {
    double mu;
    double eta;
    double m;
    double phi;
};

struct KappaMuParams {
    double mu;
    double kappa;
    double phi;
};

struct KappaMuIGParams {
    double mu;
    double kappa;
    double m;
    double phi;
};

using LinkParams = std::variant<EtaMuParams, EtaMuIGParams, KappaMuParams, KappaMuIGParams>;

struct LinkSpec {
    LinkParams params;

    static LinkSpec eta_mu(double mu, double eta, double phi);
    static LinkSpec eta_mu_ig(double mu, double eta, double m, double phi);
    static LinkSpec kappa_mu(double mu, double kappa, double phi);
    static LinkSpec kappa_mu_ig(double mu, double kappa, double m, double phi);

    Family family() const { return static_cast<Family>(params.index()); }
    bool composite() const { return family() == Family::EtaMuIG || family() == Family::KappaMuIG; }
    double mu() const;
    double phi() const;
    // Shadowing shape; 0 for non-composite families.
    double m() const;
    LinkSpec with_phi(double phi) const;
    LinkSpec with_mu(double mu) const;
    LinkSpec with_m(double m) const;

    // Throws ConfigError naming the violated invariant.
    void validate() const;
};

// One term of the single-link series: coeff * x^power * e^{-rate x} for the
// plain families, coeff * x^power * (1 + rate x)^{-(m + power + 1)} for the
// composite ones. shape = power + 1.
struct SeriesTerm {
    double log_coeff;
    int sign;
    double shape;
};

struct LinkSeries {
    std::vector<SeriesTerm> terms;
    double rate;  // beta_s / delta_b1 (plain) or beta_m / delta_4 (composite)
    double m;     // 0 for plain families
    bool composite;
};

// Series coefficients as published for each family.
LinkSeries link_series(const LinkSpec& spec, int terms);

// Mixture weights: the probability mass carried by each series term.
std::vector<double> mixture_log_weights(const LinkSeries& s);

// True when every retained shape is a positive integer.
bool integer_shapes(const LinkSpec& spec, int terms);

// Smallest term count whose discarded mixture weight is below tail_tol.
int converged_series_terms(const LinkSpec& spec, double tail_tol = 1e-12, int cap = 1000);

struct DensityValue {
    double value;
    bool truncation_warning;
};

double pdf_link(const LinkSpec& spec, double snr, const TruncationPolicy& trunc = {});
DensityValue pdf_link_checked(const LinkSpec& spec, double snr, const TruncationPolicy& trunc = {});

// Unexpanded Bessel / 2F1 / 1F1 forms; reference route for the quadrature engine.
double pdf_link_direct(const LinkSpec& spec, double snr);

double ccdf_link(const LinkSpec& spec, double snr, const TruncationPolicy& trunc = {});

// Composite CCDF by the published double-series re-expansion in powers of
// 1/(rate * snr). Converges only for rate * snr > 1.
double ccdf_link_reexpanded(const LinkSpec& spec, double snr, int outer_terms, int inner_terms);

double mean_link_snr(const LinkSpec& spec);

}  // namespace secrescope
