#include "secrescope/specfun.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

namespace secrescope {

namespace {

constexpr double kTiny = 1e-300;

[[noreturn]] void domain(const std::string& what) { throw std::domain_error(what); }

// ln P(a,x) series; valid for x <= a + 1.
double log_lower_series(double a, double x, const Accuracy& acc) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < acc.max_iter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * acc.rel_tol)
            return std::log(sum) - x + a * std::log(x);
    }
    throw ConvergenceError("incomplete gamma series did not converge");
}

// ln Gamma(a,x) by the Legendre continued fraction (modified Lentz); x > a + 1.
double log_upper_cf(double a, double x, const Accuracy& acc) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < acc.max_iter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < acc.rel_tol)
            return std::log(h) - x + a * std::log(x);
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

double hyp2f1_series(double a, double b, double c, double z, const Accuracy& acc) {
    double term = 1.0;
    double sum = 1.0;
    int small_run = 0;
    for (int n = 0; n < acc.max_iter; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (term == 0.0) return sum;
        if (std::abs(term) <= acc.rel_tol * std::abs(sum)) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
    }
    throw ConvergenceError("2F1 series did not converge");
}

double hyp2f1_polynomial(double a, double b, double c, double z) {
    // a is a nonpositive integer: the series terminates after -a terms.
    int n_max = static_cast<int>(-a);
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < n_max; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
    }
    return sum;
}

double recip_gamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

// 0 <= z < 1.
double hyp2f1_unit(double a, double b, double c, double z, const Accuracy& acc) {
    if (is_nonpositive_integer(a)) return hyp2f1_polynomial(a, b, c, z);
    if (is_nonpositive_integer(b)) return hyp2f1_polynomial(b, a, c, z);
    if (z <= 0.9) return hyp2f1_series(a, b, c, z, acc);
    double s = c - a - b;
    if (!is_integer(s, 1e-9)) {
        // Connection formula around z = 1.
        double w = 1.0 - z;
        double t1 = std::tgamma(c) * std::tgamma(s) * recip_gamma(c - a) * recip_gamma(c - b);
        double t2 = std::tgamma(c) * std::tgamma(-s) * recip_gamma(a) * recip_gamma(b);
        double f1 = t1 == 0.0 ? 0.0 : t1 * hyp2f1_series(a, b, 1.0 - s, w, acc);
        double f2 = t2 == 0.0 ? 0.0 : t2 * std::pow(w, s) * hyp2f1_series(c - a, c - b, 1.0 + s, w, acc);
        double r = f1 + f2;
        if (std::isfinite(r)) return r;
    }
    Accuracy slow = acc;
    slow.max_iter = std::max(acc.max_iter, 2000000);
    return hyp2f1_series(a, b, c, z, slow);
}

double e1_positive(double x, const Accuracy& acc) {
    // E1(x) for x > 0.
    if (x <= 1.0) {
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k < acc.max_iter; ++k) {
            term *= -x / k;
            double add = -term / k;
            sum += add;
            if (std::abs(add) < acc.rel_tol * std::abs(sum)) break;
        }
        return -std::numbers::egamma - std::log(x) + sum;
    }
    // Continued fraction, modified Lentz.
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < acc.max_iter; ++i) {
        double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < acc.rel_tol) return h * std::exp(-x);
    }
    throw ConvergenceError("E1 continued fraction did not converge");
}

}  // namespace

void Accuracy::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) domain("rel_tol must lie in (0, 1e-3]");
    if (max_iter < 32) domain("max_iter must be at least 32");
}

double ln_gamma(double x) {
    if (!(x > 0.0)) domain("ln_gamma requires x > 0");
    return std::lgamma(x);
}

double ln_beta(double a, double b) { return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b); }

double log_upper_inc_gamma(double a, double x, const Accuracy& acc) {
    if (!(a > 0.0)) domain("upper_inc_gamma requires a > 0");
    if (!(x >= 0.0)) domain("upper_inc_gamma requires x >= 0");
    double lg = ln_gamma(a);
    if (x == 0.0) return lg;
    if (x > a + 1.0) return log_upper_cf(a, x, acc);
    double lp = log_lower_series(a, x, acc) - lg;  // ln P(a,x)
    return lg + std::log1p(-std::exp(lp));
}

double upper_inc_gamma(double a, double x, const Accuracy& acc) {
    return std::exp(log_upper_inc_gamma(a, x, acc));
}

double upper_inc_gamma_q(double a, double x, const Accuracy& acc) {
    if (!(a > 0.0)) domain("upper_inc_gamma requires a > 0");
    if (!(x >= 0.0)) domain("upper_inc_gamma requires x >= 0");
    if (x == 0.0) return 1.0;
    if (x > a + 1.0) return std::exp(log_upper_cf(a, x, acc) - ln_gamma(a));
    double p = std::exp(log_lower_series(a, x, acc) - ln_gamma(a));
    return 1.0 - p;
}

double pochhammer(double x, int n) {
    if (n < 0) domain("pochhammer requires n >= 0");
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x + k;
    return r;
}

double gauss_2f1(double a, double b, double c, double z, const Accuracy& acc) {
    if (is_nonpositive_integer(c)) domain("2F1 requires c not a nonpositive integer");
    if (!(z < 1.0)) domain("2F1 requires z < 1");
    if (z == 0.0) return 1.0;
    if (z > 0.0) return hyp2f1_unit(a, b, c, z, acc);
    if (is_nonpositive_integer(a)) return hyp2f1_polynomial(a, b, c, z);
    if (is_nonpositive_integer(b)) return hyp2f1_polynomial(b, a, c, z);
    // Pfaff: 2F1(a,b;c;z) = (1-z)^{-b} 2F1(c-a, b; c; z/(z-1)). Prefer the
    // variant that terminates, otherwise the one with the larger c-a-b margin.
    double w = z / (z - 1.0);
    bool first = is_nonpositive_integer(c - a) || (!is_nonpositive_integer(c - b) && a >= b);
    if (first) return std::pow(1.0 - z, -b) * hyp2f1_unit(c - a, b, c, w, acc);
    return std::pow(1.0 - z, -a) * hyp2f1_unit(a, c - b, c, w, acc);
}

double confluent_1f1(double a, double b, double z, const Accuracy& acc) {
    if (is_nonpositive_integer(b)) domain("1F1 requires b not a nonpositive integer");
    if (z == 0.0) return 1.0;
    if (z < 0.0 && !is_nonpositive_integer(a)) {
        // Kummer transformation keeps the series positive.
        return std::exp(z) * confluent_1f1(b - a, b, -z, acc);
    }
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < acc.max_iter; ++n) {
        term *= (a + n) / ((b + n) * (n + 1.0)) * z;
        sum += term;
        if (term == 0.0) return sum;
        if (std::abs(term) <= acc.rel_tol * std::abs(sum) && n > z) return sum;
    }
    throw ConvergenceError("1F1 series did not converge");
}

double exp_integral_ei(double x, const Accuracy& acc) {
    if (x == 0.0) domain("Ei is undefined at 0");
    if (x < 0.0) return -e1_positive(-x, acc);
    if (x < 40.0) {
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k < acc.max_iter; ++k) {
            term *= x / k;
            double add = term / k;
            sum += add;
            if (add < acc.rel_tol * sum) break;
        }
        return std::numbers::egamma + std::log(x) + sum;
    }
    // Asymptotic expansion, truncated at its smallest term.
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        double next = term * k / x;
        if (next > term) break;
        term = next;
        sum += term;
        if (term < acc.rel_tol * sum) break;
    }
    return std::exp(x) / x * sum;
}

double bessel_i_scaled(double nu, double x) {
    if (x < 0.0) domain("bessel_i_scaled requires x >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : INFINITY);
    if (nu < 0.0) {
        // I_{-v} = I_v + (2/pi) sin(v pi) K_v with v = -nu.
        double v = -nu;
        double k = x < 700.0 ? std::cyl_bessel_k(v, x) * std::exp(-x) : 0.0;
        return bessel_i_scaled(v, x) + 2.0 / std::numbers::pi * std::sin(v * std::numbers::pi) * k;
    }
    if (x < 500.0) return std::cyl_bessel_i(nu, x) * std::exp(-x);
    // Hankel asymptotic expansion.
    double mu4 = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        double f = 2.0 * k - 1.0;
        term *= -(mu4 - f * f) / (k * 8.0 * x);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

SignedLog SignedLog::from(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
}

SignedLog SignedLog::operator*(const SignedLog& o) const {
    if (sign == 0 || o.sign == 0) return {};
    return {sign * o.sign, log_mag + o.log_mag};
}

SignedLog SignedLog::operator+(const SignedLog& o) const {
    if (sign == 0) return o;
    if (o.sign == 0) return *this;
    const SignedLog& big = log_mag >= o.log_mag ? *this : o;
    const SignedLog& small = log_mag >= o.log_mag ? o : *this;
    double r = std::exp(small.log_mag - big.log_mag);
    if (big.sign == small.sign) return {big.sign, big.log_mag + std::log1p(r)};
    if (r == 1.0) return {};
    return {big.sign, big.log_mag + std::log1p(-r)};
}

}  // namespace secrescope
