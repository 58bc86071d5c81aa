#pragma once

#include <cstddef>
#include <vector>

#include "secrescope/channels.hpp"
#include "secrescope/system.hpp"
#include "secrescope/termlist.hpp"

namespace secrescope {

// Series constants of both hops, computed once per (pair, policy).
struct CoefficientCache {
    HopPair pair;
    TruncationPolicy trunc;
    LinkSeries first;
    LinkSeries second;
    std::vector<double> first_log_w;
    std::vector<double> second_log_w;

    static CoefficientCache build(const HopPair& pair, const TruncationPolicy& trunc);
    // Throws IntegralityError when a retained shape is not a positive integer
    // or the policy disables the finite expansion.
    void require_integer_shapes() const;
};

double ccdf_dualhop(const HopPair& pair, double snr, const TruncationPolicy& trunc = {});
double cdf_dualhop(const HopPair& pair, double snr, const TruncationPolicy& trunc = {});
// Series densities of both hops combined with their CCDFs.
double pdf_dualhop(const HopPair& pair, double snr, const TruncationPolicy& trunc = {});
// Same combination with the unexpanded link densities.
double pdf_dualhop_direct(const HopPair& pair, double snr, const TruncationPolicy& trunc = {});

double cdf_best_relay(const HopPair& pair, int k_relays, double snr, const TruncationPolicy& trunc = {});
double pdf_best_relay(const HopPair& pair, int k_relays, double snr, const TruncationPolicy& trunc = {});

// Number of negative series sums clamped to zero since start-up.
std::size_t clamp_events();

// Exponential-polynomial forms of one link.
TermList pdf_link_terms(const LinkSeries& s, const TruncationPolicy& trunc);
TermList ccdf_link_terms(const LinkSeries& s, const std::vector<double>& log_w, const TruncationPolicy& trunc);

struct DualHopTerms {
    TermList ccdf;  // Pr(min(first, second) > x)
    TermList pdf;
};

DualHopTerms dualhop_terms(const CoefficientCache& cache);

struct SeriesCertificate {
    double max_abs_error = 0.0;
    int points = 0;
    bool passed = false;
};

// Compares the expanded CCDF and PDF with the product form on a log grid
// spanning the bulk of the distribution.
SeriesCertificate certify_series(const CoefficientCache& cache, const DualHopTerms& terms, double tol = 1e-6);

}  // namespace secrescope
