#include "secrescope/termlist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <boost/math/special_functions/digamma.hpp>

#include "secrescope/errors.hpp"
#include "secrescope/quadrature.hpp"

namespace secrescope {

namespace {

struct Key {
    std::int64_t p, r, s;
    bool operator==(const Key& o) const { return p == o.p && r == o.r && s == o.s; }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.p) * 0x9E3779B97F4A7C15ULL;
        h = (h ^ static_cast<std::uint64_t>(k.r)) * 0xC2B2AE3D27D4EB4FULL;
        h = (h ^ static_cast<std::uint64_t>(k.s)) * 0x165667B19E3779F9ULL;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

// Open-addressing map from Key to a dense slot number.
class FlatIndex {
public:
    explicit FlatIndex(std::size_t expected) { rehash(std::max<std::size_t>(64, 2 * expected)); }

    // Returns (slot, inserted).
    std::pair<std::size_t, bool> emplace(const Key& k, std::size_t next_slot) {
        if (2 * (count_ + 1) > table_.size()) rehash(2 * table_.size());
        std::size_t mask = table_.size() - 1;
        std::size_t h = KeyHash{}(k) & mask;
        while (true) {
            Entry& e = table_[h];
            if (e.slot == kEmpty) {
                e = {k, next_slot};
                ++count_;
                return {next_slot, true};
            }
            if (e.key == k) return {e.slot, false};
            h = (h + 1) & mask;
        }
    }

private:
    static constexpr std::size_t kEmpty = ~std::size_t{0};
    struct Entry {
        Key key{};
        std::size_t slot = kEmpty;
    };
    void rehash(std::size_t cap) {
        std::size_t n = 1;
        while (n < cap) n <<= 1;
        std::vector<Entry> old(n);
        old.swap(table_);
        std::size_t mask = n - 1;
        for (const Entry& e : old) {
            if (e.slot == kEmpty) continue;
            std::size_t h = KeyHash{}(e.key) & mask;
            while (table_[h].slot != kEmpty) h = (h + 1) & mask;
            table_[h] = e;
        }
    }
    std::vector<Entry> table_;
    std::size_t count_ = 0;
};

// Exponents closer than 1e-9 are treated as equal.
std::int64_t quantize(double v) { return static_cast<std::int64_t>(std::llround(v * 1e9)); }

Key key_of(const ExpPolyTerm& t) { return {quantize(t.power), quantize(t.rate), quantize(t.shadow)}; }

struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double merged_beta(const TermList& a, const TermList& b) {
    bool sa = a.shadowed(), sb = b.shadowed();
    if (sa && sb && std::abs(a.beta - b.beta) > 1e-12 * std::max(a.beta, b.beta))
        throw std::invalid_argument("term lists carry different shadow scales");
    return sa ? a.beta : (sb ? b.beta : std::max(a.beta, b.beta));
}

TermList like(const TermList& a) {
    TermList out;
    out.beta = a.beta;
    out.prune_eps = a.prune_eps;
    out.max_terms = a.max_terms;
    out.dropped_mass = a.dropped_mass;
    return out;
}

// log E[(1 + c T)^(-s)] for T ~ Gamma(k, 1). Integrated over u = ln t, where
// the mass per unit u, e^{h(u)}, has h concave; its peak sets the scale so
// results far below one keep their relative accuracy.
double gamma_shadow_log_mean(double k, double c, double s) {
    auto h = [&](double u) { return k * u - std::exp(u) - s * std::log1p(c * std::exp(u)); };
    // h' = k - e^u - s c e^u / (1 + c e^u) falls monotonically; bracket its root.
    auto slope = [&](double u) {
        double t = std::exp(u);
        return k - t - s * c * t / (1.0 + c * t);
    };
    double lo = std::log(k / (1.0 + s * c)) - 1.0, hi = std::log(k);
    for (int it = 0; it < 100 && hi - lo > 1e-6; ++it) {
        double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    const double u_peak = 0.5 * (lo + hi), peak = h(u_peak);
    // Concavity: once 40 below the peak, the bump stays below on that side.
    double u_lo = u_peak - 1.0, u_hi = u_peak + 1.0;
    while (h(u_lo) > peak - 40.0) u_lo -= 1.0 + 0.5 * (u_peak - u_lo);
    while (h(u_hi) > peak - 40.0) u_hi += 0.5;
    std::vector<double> br;
    for (double d : {-4.0, -1.0, 0.0, 1.0, 4.0})
        if (u_peak + d > u_lo && u_peak + d < u_hi) br.push_back(u_peak + d);
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-12;
    auto f = [&](double u) { return std::exp(h(u) - peak); };
    return std::log(integrate(f, u_lo, u_hi, opt, br).value) + peak - ln_gamma(k);
}

}  // namespace

TermList TermList::empty_like(const TruncationPolicy& trunc, double beta) {
    TermList t;
    t.beta = beta;
    t.prune_eps = trunc.prune_eps;
    t.max_terms = trunc.max_terms;
    return t;
}

TermList TermList::constant(double c, const TruncationPolicy& trunc) {
    TermList t = empty_like(trunc);
    if (c != 0.0) t.push(SignedLog::from(c), 0.0, 0.0, 0.0);
    return t;
}

bool TermList::shadowed() const {
    return std::any_of(terms.begin(), terms.end(), [](const ExpPolyTerm& t) { return t.shadow != 0.0; });
}

void TermList::push(SignedLog coeff, double power, double rate, double shadow) {
    if (coeff.is_zero()) return;
    terms.push_back({coeff, power, rate, shadow});
}

double TermList::evaluate(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        Neumaier acc;
        for (const auto& t : terms)
            if (t.power == 0.0) acc.add(t.coeff.value());
        return acc.value();
    }
    double lx = std::log(x);
    double l1 = beta > 0.0 ? std::log1p(beta * x) : 0.0;
    Neumaier acc;
    for (const auto& t : terms) {
        double l = t.coeff.log_mag + t.power * lx - t.rate * x - t.shadow * l1;
        acc.add(t.coeff.sign * std::exp(l));
    }
    return acc.value();
}

double TermList::evaluate_abs(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        double a = 0.0;
        for (const auto& t : terms)
            if (t.power == 0.0) a += std::exp(t.coeff.log_mag);
        return a;
    }
    double lx = std::log(x);
    double l1 = beta > 0.0 ? std::log1p(beta * x) : 0.0;
    double a = 0.0;
    for (const auto& t : terms) a += std::exp(t.coeff.log_mag + t.power * lx - t.rate * x - t.shadow * l1);
    return a;
}

namespace {

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

// log sup_t t^v (1 + t)^{-s}, 0 <= v <= s.
double log_sup_shadow(double v, double s) { return xlogx(v) + xlogx(s - v) - xlogx(s); }

}  // namespace

double log_term_mass(const ExpPolyTerm& t, double beta) {
    double a = t.power;
    if (!(a > -1.0)) return INFINITY;
    double best = INFINITY;
    if (t.rate > 0.0) {
        best = ln_gamma(a + 1.0) - (a + 1.0) * std::log(t.rate);
        if (beta > 0.0 && t.shadow > 0.0 && a > 0.0) {
            // x^a (1+beta x)^{-s} <= x^{a-v} beta^{-v} sup_t t^v (1+t)^{-s}; the
            // resulting gamma bound is convex in v, so bisect its derivative.
            const double s = t.shadow, lr = std::log(t.rate), lb = std::log(beta);
            auto bound = [&](double v) {
                return ln_gamma(a - v + 1.0) - (a - v + 1.0) * lr - v * lb + log_sup_shadow(v, s);
            };
            auto slope = [&](double v) {
                return -boost::math::digamma(a - v + 1.0) + lr - lb + std::log(v) - std::log(s - v);
            };
            double lo = 0.0, hi = std::min(s, a);
            if (hi > 0.0) {
                double v;
                if (slope(hi * (1.0 - 1e-12)) <= 0.0) {
                    v = hi;
                } else {
                    for (int it = 0; it < 60 && hi - lo > 1e-4 * (1.0 + hi); ++it) {
                        double mid = 0.5 * (lo + hi);
                        (slope(mid) > 0.0 ? hi : lo) = mid;
                    }
                    v = 0.5 * (lo + hi);
                }
                best = std::min(best, bound(v));
            }
        }
    }
    if (beta > 0.0 && t.shadow > a + 1.0)
        best = std::min(best, -(a + 1.0) * std::log(beta) + ln_beta(a + 1.0, t.shadow - a - 1.0));
    return t.coeff.log_mag + best;
}

double termlist_log_l1(const TermList& a) {
    double acc = -INFINITY;
    for (const auto& t : a.terms) {
        double m = log_term_mass(t, a.beta);
        if (std::isinf(m)) return INFINITY;
        double hi = std::max(acc, m);
        acc = hi + std::log1p(std::exp(std::min(acc, m) - hi));
    }
    return acc;
}

void TermList::compact() {
    FlatIndex index(terms.size());
    std::vector<ExpPolyTerm> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
        auto [slot, fresh] = index.emplace(key_of(t), merged.size());
        if (fresh)
            merged.push_back(t);
        else
            merged[slot].coeff = merged[slot].coeff + t.coeff;
    }
    std::erase_if(merged, [](const ExpPolyTerm& t) { return t.coeff.is_zero(); });

    if (prune_eps > 0.0 && !merged.empty()) {
        std::vector<double> lm(merged.size());
        double ref = -INFINITY;
        for (std::size_t i = 0; i < merged.size(); ++i) {
            lm[i] = log_term_mass(merged[i], beta);
            if (std::isfinite(lm[i])) ref = std::max(ref, lm[i]);
        }
        if (std::isfinite(ref)) {
            // Lists here represent densities, probabilities and tails of unit
            // scale; when terms cancel, the largest term mass overstates that
            // scale and must not raise the cut above prune_eps absolute.
            double cut = std::min(ref, 0.0) + std::log(prune_eps);
            std::vector<ExpPolyTerm> kept;
            kept.reserve(merged.size());
            for (std::size_t i = 0; i < merged.size(); ++i) {
                if (std::isfinite(lm[i]) && lm[i] < cut)
                    dropped_mass += std::exp(lm[i]);
                else
                    kept.push_back(merged[i]);
            }
            merged.swap(kept);
        }
    }
    std::sort(merged.begin(), merged.end(), [](const ExpPolyTerm& x, const ExpPolyTerm& y) {
        if (x.power != y.power) return x.power < y.power;
        if (x.rate != y.rate) return x.rate < y.rate;
        return x.shadow < y.shadow;
    });
    terms.swap(merged);
    if (terms.size() > max_terms)
        throw CapacityError("term list holds " + std::to_string(terms.size()) + " terms, cap is " +
                            std::to_string(max_terms));
}

TermList termlist_add(const TermList& a, const TermList& b) {
    TermList out = like(a);
    out.beta = merged_beta(a, b);
    out.dropped_mass = a.dropped_mass + b.dropped_mass;
    out.terms.reserve(a.size() + b.size());
    out.terms.insert(out.terms.end(), a.terms.begin(), a.terms.end());
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    out.compact();
    return out;
}

TermList termlist_scale(const TermList& a, double c) {
    TermList out = like(a);
    out.dropped_mass = a.dropped_mass * std::abs(c);
    if (c == 0.0) return out;
    SignedLog s = SignedLog::from(c);
    for (const auto& t : a.terms) out.push(t.coeff * s, t.power, t.rate, t.shadow);
    return out;
}

TermList termlist_multiply(const TermList& a, const TermList& b) {
    TermList out = like(a);
    out.beta = merged_beta(a, b);
    out.dropped_mass = a.dropped_mass + b.dropped_mass;
    if (a.empty() || b.empty()) return out;

    // Accumulate each key as ref + log|sum| with sum kept in linear scale
    // relative to the first contribution; cheaper than log-space addition.
    struct Acc {
        double ref;
        double sum;
    };
    std::vector<Key> ka(a.size()), kb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ka[i] = key_of(a.terms[i]);
    for (std::size_t j = 0; j < b.size(); ++j) kb[j] = key_of(b.terms[j]);

    FlatIndex index(4 * (a.size() + b.size()));
    std::vector<Acc> acc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.terms[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto& y = b.terms[j];
            double l = x.coeff.log_mag + y.coeff.log_mag;
            int sg = x.coeff.sign * y.coeff.sign;
            Key k{ka[i].p + kb[j].p, ka[i].r + kb[j].r, ka[i].s + kb[j].s};
            auto [slot, fresh] = index.emplace(k, acc.size());
            if (fresh) {
                out.terms.push_back({{sg, 0.0}, x.power + y.power, x.rate + y.rate, x.shadow + y.shadow});
                acc.push_back({l, static_cast<double>(sg)});
                continue;
            }
            Acc& c = acc[slot];
            double d = l - c.ref;
            if (d > 300.0) {
                c.sum = c.sum * std::exp(-d) + sg;
                c.ref = l;
            } else {
                c.sum += sg * std::exp(d);
            }
        }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
        double v = acc[i].sum;
        out.terms[i].coeff = v == 0.0 ? SignedLog{} : SignedLog{v > 0 ? 1 : -1, acc[i].ref + std::log(std::abs(v))};
    }
    out.compact();
    return out;
}

TermList termlist_power(const TermList& a, int n) {
    if (n < 0) throw std::invalid_argument("negative term list power");
    TermList result = like(a);
    result.dropped_mass = 0.0;
    result.push(SignedLog::from(1.0), 0.0, 0.0, 0.0);
    if (n == 0) return result;
    TermList base = a;
    bool first = true;
    while (n > 0) {
        if (n & 1) {
            result = first ? base : termlist_multiply(result, base);
            first = false;
        }
        n >>= 1;
        if (n > 0) base = termlist_multiply(base, base);
    }
    return result;
}

TermList termlist_one_minus(const TermList& a) {
    TermList out = like(a);
    out.push(SignedLog::from(1.0), 0.0, 0.0, 0.0);
    for (const auto& t : a.terms) out.push(t.coeff.negated(), t.power, t.rate, t.shadow);
    out.compact();
    return out;
}

TermList termlist_affine(const TermList& a, double p, double q) {
    if (!(p >= 0.0) || !(q > 0.0)) throw std::invalid_argument("affine map needs p >= 0, q > 0");
    TermList out = like(a);
    double lbp = a.beta > 0.0 ? std::log1p(a.beta * p) : 0.0;
    out.beta = a.beta * q / (1.0 + a.beta * p);
    double lq = std::log(q);
    double lp = p > 0.0 ? std::log(p) : -INFINITY;
    for (const auto& t : a.terms) {
        if (t.power < 0.0 || !is_integer(t.power))
            throw IntegralityError("affine substitution needs nonnegative integer powers");
        int n = static_cast<int>(std::lround(t.power));
        double base = t.coeff.log_mag - t.rate * p - t.shadow * lbp;
        for (int i = 0; i <= n; ++i) {
            if (p == 0.0 && i < n) continue;
            double lbin = ln_gamma(n + 1.0) - ln_gamma(i + 1.0) - ln_gamma(n - i + 1.0);
            double lpart = (n - i) > 0 ? (n - i) * lp : 0.0;
            out.push({t.coeff.sign, base + lbin + lpart + i * lq}, i, t.rate * q, t.shadow);
        }
    }
    out.compact();
    return out;
}

double termlist_integrate_analytic(const TermList& a) {
    Neumaier acc;
    for (const auto& t : a.terms) {
        if (t.shadow != 0.0) throw std::invalid_argument("analytic integral needs a shadow-free list");
        if (!(t.rate > 0.0) || !(t.power > -1.0)) throw std::domain_error("term is not integrable on (0, inf)");
        double l = t.coeff.log_mag + ln_gamma(t.power + 1.0) - (t.power + 1.0) * std::log(t.rate);
        acc.add(t.coeff.sign * std::exp(l));
    }
    return acc.value();
}

double termlist_integrate(const TermList& a) {
    Neumaier acc;
    for (const auto& t : a.terms) {
        double k = t.power + 1.0;
        if (!(k > 0.0)) throw std::domain_error("term is not integrable at 0");
        double l;
        if (t.shadow == 0.0 || a.beta == 0.0) {
            if (!(t.rate > 0.0)) throw std::domain_error("term is not integrable on (0, inf)");
            l = ln_gamma(k) - k * std::log(t.rate);
        } else if (t.rate == 0.0) {
            if (!(t.shadow > k)) throw std::domain_error("term is not integrable on (0, inf)");
            l = -k * std::log(a.beta) + ln_beta(k, t.shadow - k);
        } else {
            // J = Gamma(k) rate^{-k} E[(1 + beta T / rate)^{-shadow}], T ~ Gamma(k, 1).
            l = ln_gamma(k) - k * std::log(t.rate) + gamma_shadow_log_mean(k, a.beta / t.rate, t.shadow);
        }
        acc.add(t.coeff.sign * std::exp(t.coeff.log_mag + l));
    }
    return acc.value();
}

double termlist_log_moment_analytic(const TermList& a) {
    Neumaier acc;
    for (const auto& t : a.terms) {
        if (t.shadow != 0.0) throw std::invalid_argument("analytic log moment needs a shadow-free list");
        if (!(t.rate > 0.0)) throw std::domain_error("term is not integrable on (0, inf)");
        if (t.power < 0.0 || !is_integer(t.power))
            throw IntegralityError("analytic log moment needs nonnegative integer powers");
        int n = static_cast<int>(std::lround(t.power));
        double b = t.rate;
        // T_j = int x^j e^{-bx} / (1+x) dx, T_0 = -e^b Ei(-b).
        double tj = -std::exp(b) * exp_integral_ei(-b);
        double inner = tj;  // j = 0 contribution, b^0/0! = 1
        for (int j = 1; j <= n; ++j) {
            tj = std::exp(ln_gamma(j) - j * std::log(b)) - tj;
            inner += std::exp(j * std::log(b) - ln_gamma(j + 1.0)) * tj;
        }
        double pre = t.coeff.log_mag + ln_gamma(n + 1.0) - (n + 1.0) * std::log(b);
        acc.add(t.coeff.sign * std::exp(pre) * inner);
    }
    return acc.value();
}

void termlist_dump(const TermList& a, std::ostream& os) {
    auto flags = os.flags();
    auto prec = os.precision();
    os << std::setprecision(17);
    for (const auto& t : a.terms)
        os << t.coeff.sign << ' ' << t.coeff.log_mag << ' ' << t.power << ' ' << t.rate << ' ' << t.shadow << '\n';
    os.flags(flags);
    os.precision(prec);
}

}  // namespace secrescope
