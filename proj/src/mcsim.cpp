#include "secrescope/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "secrescope/errors.hpp"

namespace secrescope {

namespace {

constexpr long kBlock = 8192;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Draws one link SNR. Gamma variates are taken at unit scale and rescaled, so
// each distribution object keeps its parameters and cached normal deviate
// across draws.
class LinkSampler {
public:
    explicit LinkSampler(const LinkSpec& spec) {
        std::visit(
            [this](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                mu_ = p.mu;
                phi_ = p.phi;
                if constexpr (std::is_same_v<T, EtaMuParams> || std::is_same_v<T, EtaMuIGParams>) {
                    double e = std::abs(p.eta), d = 1.0 - e * e;
                    double h = 1.0 / d, H = e / d;
                    // In-phase and quadrature powers: gamma(mu) with rates 2 mu (h -+ H) / mean.
                    scale_a_ = 1.0 / (2.0 * p.mu * (h - H));
                    scale_b_ = 1.0 / (2.0 * p.mu * (h + H));
                    unit_ = GammaDist(p.mu, 1.0);
                } else {
                    kappa_mu_ = true;
                    scale_a_ = 1.0 / (p.mu * (1.0 + p.kappa));
                    clusters_ = std::poisson_distribution<long>(p.mu * p.kappa);
                }
                if constexpr (std::is_same_v<T, EtaMuIGParams> || std::is_same_v<T, KappaMuIGParams>) {
                    // Mean power drawn as 1 / Gamma(m, rate m phi).
                    shadowed_ = true;
                    m_ = p.m;
                    shadow_ = GammaDist(p.m, 1.0);
                }
            },
            spec.params);
    }

    double operator()(Rng& rng) {
        double mean = shadowed_ ? m_ * phi_ / shadow_(rng) : phi_;
        if (kappa_mu_) {
            long n = clusters_(rng);
            return mean * scale_a_ * unit_(rng, GammaDist::param_type(mu_ + static_cast<double>(n), 1.0));
        }
        double a = unit_(rng), b = unit_(rng);
        return mean * (a * scale_a_ + b * scale_b_);
    }

private:
    using GammaDist = std::gamma_distribution<double>;
    bool kappa_mu_ = false, shadowed_ = false;
    double mu_ = 1.0, phi_ = 1.0, m_ = 1.0, scale_a_ = 1.0, scale_b_ = 1.0;
    GammaDist unit_, shadow_;
    std::poisson_distribution<long> clusters_;
};

class SystemSampler {
public:
    explicit SystemSampler(const SystemConfig& sys)
        : sys_(sys), first_(sys.first_hop), multicast_(sys.multicast_hop), eaves_(sys.eaves_hop), relay_(sys.K) {}

    TrialOutcome operator()(Rng& rng, SimMode mode) {
        const int K = sys_.K;
        auto draw_first = [&] {
            for (int k = 0; k < K; ++k) relay_[k] = first_(rng);
        };
        auto best_relay = [&](LinkSampler& second) {
            double best = 0.0;
            for (int k = 0; k < K; ++k) best = std::max(best, std::min(relay_[k], second(rng)));
            return best;
        };
        if (mode == SimMode::SharedSource) draw_first();
        double smin = INFINITY;
        for (int m = 0; m < sys_.M; ++m) {
            if (mode == SimMode::Independent) draw_first();
            smin = std::min(smin, best_relay(multicast_));
        }
        double smax = 0.0;
        for (int n = 0; n < sys_.N; ++n) {
            if (mode == SimMode::Independent) draw_first();
            smax = std::max(smax, best_relay(eaves_));
        }
        return {smin, smax, std::log2((1.0 + smin) / (1.0 + smax))};
    }

private:
    const SystemConfig& sys_;
    LinkSampler first_, multicast_, eaves_;
    std::vector<double> relay_;
};

struct BlockSums {
    long n = 0;
    long below = 0;
    long positive = 0;
    double d = 0.0;
    double d2 = 0.0;
};

}  // namespace

const char* sim_mode_name(SimMode m) { return m == SimMode::Independent ? "independent" : "shared_source"; }

void SimPlan::validate() const {
    if (trials < 1000) throw ConfigError("trials must be at least 1000");
    if (workers < 1) throw ConfigError("workers must be at least 1");
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1)));
}

double sample_link_snr(const LinkSpec& spec, Rng& rng) { return LinkSampler(spec)(rng); }

TrialOutcome sample_system_trial(const SystemConfig& sys, Rng& rng, SimMode mode) {
    return SystemSampler(sys)(rng, mode);
}

McEstimates estimate_metrics(const SystemConfig& sys, const SimPlan& plan) {
    sys.validate();
    plan.validate();
    const long blocks = (plan.trials + kBlock - 1) / kBlock;
    std::vector<BlockSums> sums(static_cast<std::size_t>(blocks));
    std::atomic<long> next{0};

    auto work = [&] {
        for (long b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
            Rng rng = substream(plan.seed, static_cast<std::uint64_t>(b));
            SystemSampler sample(sys);
            BlockSums s;
            long end = std::min(plan.trials, (b + 1) * kBlock);
            for (long i = b * kBlock; i < end; ++i) {
                TrialOutcome t = sample(rng, plan.mode);
                ++s.n;
                if (t.secrecy_rate < sys.target_rate) ++s.below;
                if (t.secrecy_rate > 0.0) ++s.positive;
                double a = std::log2(1.0 + t.sigma_min), c = std::log2(1.0 + t.sigma_max);
                s.d += a - c;
                s.d2 += (a - c) * (a - c);
            }
            sums[static_cast<std::size_t>(b)] = s;
        }
    };
    int nw = static_cast<int>(std::min<long>(plan.workers, blocks));
    if (nw <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Reduce in block order so the result does not depend on scheduling.
    BlockSums tot;
    for (const auto& s : sums) {
        tot.n += s.n;
        tot.below += s.below;
        tot.positive += s.positive;
        tot.d += s.d;
        tot.d2 += s.d2;
    }
    double n = static_cast<double>(tot.n);
    auto proportion = [&](long count) {
        MetricEstimate e;
        e.engine = Engine::MonteCarlo;
        e.trials = tot.n;
        e.value = count / n;
        e.std_error = std::sqrt(e.value * (1.0 - e.value) / n);
        return e;
    };
    McEstimates out;
    out.sopm = proportion(tot.below);
    out.pnsmc = proportion(tot.positive);
    out.esmc.engine = Engine::MonteCarlo;
    out.esmc.trials = tot.n;
    out.esmc.value = tot.d / n;
    double var = std::max(0.0, (tot.d2 - tot.d * tot.d / n) / (n - 1.0));
    out.esmc.std_error = std::sqrt(var / n);
    return out;
}

}  // namespace secrescope
