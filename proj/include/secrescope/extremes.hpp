#pragma once

#include "secrescope/system.hpp"
#include "secrescope/termlist.hpp"

namespace secrescope {

struct OrderStatTerms {
    TermList pdf;
    // Pr(sigma_min > x) for the receiver side, Pr(sigma_max <= x) for the
    // eavesdropper side.
    TermList tail;
    double certify_error = 0.0;
};

// Worst legitimate receiver: minimum over M of the best-relay SNRs.
OrderStatTerms sigma_min_terms(const SystemConfig& sys, const TruncationPolicy& trunc);
// Strongest eavesdropper: maximum over N of the best-relay SNRs.
OrderStatTerms sigma_max_terms(const SystemConfig& sys, const TruncationPolicy& trunc);

TermList pdf_sigma_min(const SystemConfig& sys, const TruncationPolicy& trunc = {});
TermList pdf_sigma_max(const SystemConfig& sys, const TruncationPolicy& trunc = {});

// Pointwise order statistics over the unexpanded link densities.
double pdf_sigma_min_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc = {});
double ccdf_sigma_min_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc = {});
double pdf_sigma_max_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc = {});
double cdf_sigma_max_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc = {});

}  // namespace secrescope
