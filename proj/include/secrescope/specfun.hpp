#pragma once

#include <cmath>
#include <stdexcept>

namespace secrescope {

struct Accuracy {
    double rel_tol = 1e-14;
    int max_iter = 20000;

    void validate() const;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double ln_gamma(double x);

// Gamma(a, x) and the regularized Q(a, x) = Gamma(a, x) / Gamma(a).
double upper_inc_gamma(double a, double x, const Accuracy& acc = {});
double upper_inc_gamma_q(double a, double x, const Accuracy& acc = {});
// ln Gamma(a, x); stays finite where Gamma(a, x) itself would underflow.
double log_upper_inc_gamma(double a, double x, const Accuracy& acc = {});

double pochhammer(double x, int n);
double ln_beta(double a, double b);

double gauss_2f1(double a, double b, double c, double z, const Accuracy& acc = {});
double confluent_1f1(double a, double b, double z, const Accuracy& acc = {});
double exp_integral_ei(double x, const Accuracy& acc = {});

// exp(-x) * I_nu(x) for x >= 0, nu > -1.
double bessel_i_scaled(double nu, double x);

// Signed value carried as sign * exp(log_mag).
struct SignedLog {
    int sign = 0;  // -1, 0, +1
    double log_mag = -INFINITY;

    static SignedLog from(double v);
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }
    SignedLog operator*(const SignedLog& o) const;
    SignedLog operator+(const SignedLog& o) const;
    SignedLog negated() const { return {-sign, log_mag}; }
    bool is_zero() const { return sign == 0; }
};

inline bool is_nonpositive_integer(double x) {
    return x <= 0 && std::floor(x) == x;
}

inline bool is_integer(double x, double tol = 1e-12) {
    return std::abs(x - std::round(x)) <= tol * std::max(1.0, std::abs(x));
}

}  // namespace secrescope
