#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "secrescope/specfun.hpp"
#include "secrescope/truncation.hpp"

namespace secrescope {

// coeff * x^power * exp(-rate x) * (1 + beta x)^(-shadow), beta shared by the list.
struct ExpPolyTerm {
    SignedLog coeff;
    double power = 0.0;
    double rate = 0.0;
    double shadow = 0.0;
};

struct TermList {
    std::vector<ExpPolyTerm> terms;
    double beta = 0.0;
    double prune_eps = 1e-14;
    std::size_t max_terms = 20000;
    double dropped_mass = 0.0;

    static TermList empty_like(const TruncationPolicy& trunc, double beta = 0.0);
    static TermList constant(double c, const TruncationPolicy& trunc = {});

    std::size_t size() const { return terms.size(); }
    bool empty() const { return terms.empty(); }
    bool shadowed() const;

    double evaluate(double x) const;
    // Sum of term magnitudes; scales the rounding noise of evaluate().
    double evaluate_abs(double x) const;

    void push(SignedLog coeff, double power, double rate, double shadow = 0.0);
    // Merges duplicate (power, rate, shadow) keys, prunes small terms and
    // enforces max_terms. Leaves terms sorted by key.
    void compact();
};

// Log of the L1 bound of |x^power e^{-rate x} (1+beta x)^{-shadow}| over (0, inf);
// +inf when neither the exponential nor the shadow factor makes it integrable.
double log_term_mass(const ExpPolyTerm& t, double beta);

// Log of the summed L1 bounds of all terms.
double termlist_log_l1(const TermList& a);

TermList termlist_add(const TermList& a, const TermList& b);
TermList termlist_scale(const TermList& a, double c);
TermList termlist_multiply(const TermList& a, const TermList& b);
TermList termlist_power(const TermList& a, int n);
// 1 - a
TermList termlist_one_minus(const TermList& a);
// y -> a(p + q y); requires nonnegative integer powers.
TermList termlist_affine(const TermList& a, double p, double q);

// Sum of c * Gamma(power+1) / rate^(power+1). Shadow-free lists only.
double termlist_integrate_analytic(const TermList& a);
// Term-wise integral over (0, inf); shadowed terms use a per-term quadrature
// of the gamma-weighted shadow factor.
double termlist_integrate(const TermList& a);
// Sum over terms of the integral of ln(1+x) * term, via Ei. Shadow-free,
// integer powers.
double termlist_log_moment_analytic(const TermList& a);

// Rows "coeff_sign log_coeff power rate shadow", one per term.
void termlist_dump(const TermList& a, std::ostream& os);

}  // namespace secrescope
