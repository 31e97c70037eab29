#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hptml/kernels.hpp"

namespace hptml {

/// Master seed plus the normative replication-derivation rule: replication i
/// draws from an engine seeded with splitmix64(master_seed + i * golden),
/// which makes every result independent of worker count and scheduling.
struct SeedSpec {
    std::uint64_t master_seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// uniform on the open interval (0,1); never 0 or 1, safe under log()
inline double u01_open(std::mt19937_64& g) {
    return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

inline std::uint64_t poisson_knuth(std::mt19937_64& g, double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        p *= u01_open(g);
        ++k;
    } while (p > limit);
    return k - 1;
}

/// Poisson sampler valid for any mean: sums of chunked Knuth draws.
inline std::uint64_t poisson_draw(std::mt19937_64& g, double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("poisson_draw: mean must be >= 0");
    if (mean == 0.0) return 0;
    std::uint64_t total = 0;
    while (mean > 30.0) {
        total += poisson_knuth(g, 30.0);
        mean -= 30.0;
    }
    return total + poisson_knuth(g, mean);
}

}  // namespace detail

inline std::uint64_t replication_seed(const SeedSpec& seed, std::uint64_t replication) {
    return detail::splitmix64(seed.master_seed + replication * 0x9E3779B97F4A7C15ULL);
}

inline std::mt19937_64 replication_engine(const SeedSpec& seed, std::uint64_t replication) {
    return std::mt19937_64(replication_seed(seed, replication));
}

/// Worker count for embarrassingly parallel Monte-Carlo loops; the
/// HPTML_WORKERS environment variable overrides hardware concurrency.
/// Results are identical for every value by construction.
inline unsigned worker_count() {
    if (const char* env = std::getenv("HPTML_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

/// One simulated path: sorted event times in (0, horizon].
struct EventSequence {
    double horizon = 0.0;
    std::vector<double> times;
};

/// Estimated counting distribution at a fixed time from n_runs replications.
struct CountHistogram {
    double t = 0.0;
    std::uint64_t n_runs = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
    double mean = 0.0;
    double std_error_of_mean = 0.0;

    double probability(std::uint64_t n) const {
        const auto it = counts.find(n);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n_runs);
    }
};

/// Total variation distance (1/2) sum_n |p1(n) - p2(n)| between the
/// normalized histograms; both must refer to the same observation time.
inline double tv_distance(const CountHistogram& h1, const CountHistogram& h2) {
    if (h1.t != h2.t) throw std::invalid_argument("tv_distance: histograms at different times");
    if (h1.n_runs == 0 || h2.n_runs == 0) throw std::invalid_argument("tv_distance: empty histogram");
    double acc = 0.0;
    auto i1 = h1.counts.begin();
    auto i2 = h2.counts.begin();
    while (i1 != h1.counts.end() || i2 != h2.counts.end()) {
        double p1 = 0.0, p2 = 0.0;
        if (i2 == h2.counts.end() || (i1 != h1.counts.end() && i1->first < i2->first)) {
            p1 = static_cast<double>(i1->second) / static_cast<double>(h1.n_runs);
            ++i1;
        } else if (i1 == h1.counts.end() || i2->first < i1->first) {
            p2 = static_cast<double>(i2->second) / static_cast<double>(h2.n_runs);
            ++i2;
        } else {
            p1 = static_cast<double>(i1->second) / static_cast<double>(h1.n_runs);
            p2 = static_cast<double>(i2->second) / static_cast<double>(h2.n_runs);
            ++i1;
            ++i2;
        }
        acc += std::abs(p1 - p2);
    }
    return 0.5 * acc;
}

/// Inverse-transform sampler for kernel delays. Exponential kernels use the
/// closed form -ln(U)/gamma. TML and ML kernels precompute a table of
/// (t, F(t)) at 512 log-spaced nodes covering F in [1e-6, 1-1e-6] and refine
/// each draw by monotone bracketed root-finding against kernel_cdf (Newton
/// steps safeguarded by bisection, bracket width 1e-10 in t). Beyond the
/// table, nu > 0 tails use the asymptotic exponential rate
/// nu - (nu^beta - gamma)_+^{1/beta}; the nu = 0 heavy tail falls back to
/// expanding-bracket CDF root-finding.
class KernelSampler {
public:
    explicit KernelSampler(const KernelSpec& spec, double cdf_tol = 1e-8)
        : spec_(spec), cdf_tol_(cdf_tol) {
        spec_.validate();
        if (!spec_.has_density())
            throw std::domain_error("KernelSampler: 'none' kernel cannot be sampled");
        if (spec_.kind == KernelKind::exponential || spec_.beta == 1.0) {
            // beta = 1 collapses to Exponential(gamma) for every nu
            exponential_rate_ = spec_.gamma;
            return;
        }
        build_table();
    }

    const KernelSpec& spec() const { return spec_; }

    /// One delay draw.
    double draw(std::mt19937_64& rng) const {
        const double u = detail::u01_open(rng);
        if (exponential_rate_ > 0.0) return -std::log(u) / exponential_rate_;
        return quantile(1.0 - u);
    }

    /// Solve F(q) = p for p in (0, 1); exposed for distribution-level tests.
    double quantile(double p) const {
        if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("KernelSampler::quantile: p outside [0,1)");
        if (exponential_rate_ > 0.0) return -std::log1p(-p) / exponential_rate_;
        if (p == 0.0) return 0.0;
        if (p <= fs_.front()) return refine(0.0, ts_.front(), p);
        if (p >= fs_.back()) return tail_quantile(p);
        const auto it = std::lower_bound(fs_.begin(), fs_.end(), p);
        const std::size_t hi = static_cast<std::size_t>(it - fs_.begin());
        return refine(ts_[hi - 1], ts_[hi], p);
    }

private:
    void build_table() {
        // bracket the quantile range [1e-6, 1 - 1e-6]
        double t_lo = 1.0;
        for (int i = 0; i < 1100 && kernel_cdf(spec_, t_lo) > 1e-6; ++i) t_lo *= 0.5;
        double t_hi = std::max(1.0, 2.0 * t_lo);
        for (int i = 0; i < 1100 && kernel_cdf(spec_, t_hi) < 1.0 - 1e-6; ++i) t_hi *= 2.0;

        constexpr std::size_t kNodes = 512;
        ts_.resize(kNodes);
        fs_.resize(kNodes);
        const double lr = std::log(t_hi / t_lo) / static_cast<double>(kNodes - 1);
        for (std::size_t i = 0; i < kNodes; ++i) {
            ts_[i] = t_lo * std::exp(lr * static_cast<double>(i));
            fs_[i] = kernel_cdf(spec_, ts_[i]);
            if (i > 0 && fs_[i] < fs_[i - 1]) fs_[i] = fs_[i - 1];  // guard tol-level wiggle
        }
        tail_rate_ = detail::kernel_tail_rate(spec_);
    }

    double tail_quantile(double p) const {
        const double surv_edge = 1.0 - fs_.back();
        if (tail_rate_ > 0.0 && surv_edge > 0.0)
            return ts_.back() + std::log(surv_edge / (1.0 - p)) / tail_rate_;
        // nu = 0: heavy tail, no exponential envelope; expand the bracket
        double lo = ts_.back();
        double hi = 2.0 * lo;
        for (int i = 0; i < 1100 && kernel_cdf(spec_, hi) < p; ++i) {
            lo = hi;
            hi *= 2.0;
        }
        return refine(lo, hi, p);
    }

    double refine(double lo, double hi, double p) const {
        double x = 0.5 * (lo + hi);
        for (int iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
            const double fx = kernel_cdf(spec_, x) - p;
            if (std::abs(fx) <= 1e-12) break;
            if (fx > 0.0)
                hi = x;
            else
                lo = x;
            double next = 0.5 * (lo + hi);
            if (x > 0.0) {
                const double dens = kernel_density(spec_, x);
                if (dens > 0.0 && std::isfinite(dens)) {
                    const double newton = x - fx / dens;
                    if (newton > lo && newton < hi) next = newton;
                }
            }
            x = next;
        }
        return x;
    }

    KernelSpec spec_;
    double cdf_tol_ = 1e-8;
    double exponential_rate_ = 0.0;
    std::vector<double> ts_, fs_;
    double tail_rate_ = 0.0;
};

/// One delay draw from the kernel distribution.
inline double sample_kernel_delay(const KernelSampler& sampler, std::mt19937_64& rng) {
    return sampler.draw(rng);
}

enum class SimAlgorithm { cluster, thinning };

struct SimOptions {
    SimAlgorithm algorithm = SimAlgorithm::cluster;
    bool allow_supercritical = false;
    std::uint64_t event_cap = 10'000'000;
};

namespace detail {

inline void check_subcritical(const HawkesParams& p, const KernelSpec& spec, const SimOptions& opt) {
    const double branching = spec.has_density() ? p.alpha : 0.0;
    if (branching >= 1.0 && !opt.allow_supercritical)
        throw std::invalid_argument(
            "simulate: alpha >= 1 is supercritical; set allow_supercritical to override");
}

}  // namespace detail

/// Exact cluster (branching) simulation: immigrants arrive as a Poisson
/// process of rate lambda0 on (0, T]; every event spawns Poisson(alpha)
/// children with i.i.d. kernel-distributed delays. Children past T are
/// discarded before recursing, which is valid because offspring delays are
/// independent of any further branching.
inline EventSequence simulate_cluster(const HawkesParams& params, const KernelSpec& spec,
                                      const KernelSampler* sampler, double horizon,
                                      std::mt19937_64& rng, const SimOptions& opt = {}) {
    params.validate();
    spec.validate();
    if (!(horizon > 0.0)) throw std::domain_error("simulate_cluster: requires T > 0");
    detail::check_subcritical(params, spec, opt);
    const double branching = spec.has_density() ? params.alpha : 0.0;
    if (branching > 0.0 && sampler == nullptr)
        throw std::invalid_argument("simulate_cluster: sampler required for alpha > 0");

    std::vector<double> events;
    const std::uint64_t n_immigrants =
        detail::poisson_draw(rng, params.lambda0 * horizon);
    if (n_immigrants > opt.event_cap)
        throw std::runtime_error("simulate_cluster: event cap exceeded (immigrant wave)");
    events.reserve(n_immigrants + 16);
    for (std::uint64_t i = 0; i < n_immigrants; ++i)
        events.push_back(horizon * detail::u01_open(rng));

    for (std::size_t i = 0; i < events.size(); ++i) {
        if (branching == 0.0) break;
        const std::uint64_t n_children = detail::poisson_draw(rng, branching);
        for (std::uint64_t c = 0; c < n_children; ++c) {
            const double child = events[i] + sampler->draw(rng);
            if (child <= horizon) {
                events.push_back(child);
                if (events.size() > opt.event_cap)
                    throw std::runtime_error(
                        "simulate_cluster: event cap exceeded (near-critical explosion)");
            }
        }
    }
    std::sort(events.begin(), events.end());
    return EventSequence{horizon, std::move(events)};
}

inline EventSequence simulate_cluster(const HawkesParams& params, const KernelSpec& spec,
                                      double horizon, const SeedSpec& seed,
                                      std::uint64_t replication, const SimOptions& opt = {}) {
    std::mt19937_64 rng = replication_engine(seed, replication);
    if (spec.has_density() && params.alpha > 0.0) {
        const KernelSampler sampler(spec);
        return simulate_cluster(params, spec, &sampler, horizon, rng, opt);
    }
    return simulate_cluster(params, spec, nullptr, horizon, rng, opt);
}

/// Ogata thinning with a piecewise-constant dominating rate, restricted to
/// kernels whose density is bounded and non-increasing (Exponential or None);
/// the TML density is unbounded at 0+ for beta < 1 and is rejected here.
/// Serves as the distributional cross-check for simulate_cluster.
inline EventSequence simulate_thinning(const HawkesParams& params, const KernelSpec& spec,
                                       double horizon, const SeedSpec& seed,
                                       std::uint64_t replication, const SimOptions& opt = {}) {
    params.validate();
    spec.validate();
    if (!(horizon > 0.0)) throw std::domain_error("simulate_thinning: requires T > 0");
    if (spec.kind != KernelKind::exponential && spec.kind != KernelKind::none)
        throw std::invalid_argument(
            "simulate_thinning: kernel density must be bounded (Exponential or None)");
    detail::check_subcritical(params, spec, opt);

    std::mt19937_64 rng = replication_engine(seed, replication);
    const bool excites = spec.kind == KernelKind::exponential && params.alpha > 0.0;
    const double jump = params.alpha * spec.gamma;  // alpha * f(0+) with f(0+) = gamma

    std::vector<double> times;
    double t = 0.0;
    double excitation = 0.0;            // sum of alpha*gamma*exp(-gamma (t - t_i))
    double bound = params.lambda0;      // dominating rate, valid until next candidate
    while (true) {
        const double wait = -std::log(detail::u01_open(rng)) / bound;
        const double cand = t + wait;
        if (cand > horizon) break;
        if (excites) excitation *= std::exp(-spec.gamma * (cand - t));
        t = cand;
        const double rate = params.lambda0 + excitation;
        if (detail::u01_open(rng) * bound <= rate) {
            times.push_back(t);
            if (times.size() > opt.event_cap)
                throw std::runtime_error("simulate_thinning: event cap exceeded");
            if (excites) excitation += jump;
            bound = params.lambda0 + excitation;
        } else {
            bound = rate;
        }
    }
    return EventSequence{horizon, std::move(times)};
}

/// Monte-Carlo estimate of the counting distribution P(N(t) = n): n_runs
/// independent replications on derived streams, merged into an exact integer
/// histogram (order-independent, hence identical for any worker count).
inline CountHistogram count_distribution(const HawkesParams& params, const KernelSpec& spec,
                                         double t, std::uint64_t n_runs, const SeedSpec& seed,
                                         const SimOptions& opt = {}) {
    params.validate();
    spec.validate();
    if (!(t > 0.0)) throw std::domain_error("count_distribution: requires t > 0");
    if (n_runs < 100) throw std::invalid_argument("count_distribution: requires n_runs >= 100");

    const bool need_sampler = opt.algorithm == SimAlgorithm::cluster && spec.has_density() &&
                              params.alpha > 0.0;
    const KernelSampler* sampler = nullptr;
    std::unique_ptr<KernelSampler> sampler_storage;
    if (need_sampler) {
        sampler_storage = std::make_unique<KernelSampler>(spec);
        sampler = sampler_storage.get();
    }

    const unsigned workers =
        std::max(1u, std::min<unsigned>(worker_count(), static_cast<unsigned>(n_runs)));
    std::vector<std::map<std::uint64_t, std::uint64_t>> local(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::uint64_t> error_rep(workers, 0);

    auto run_range = [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        try {
            for (std::uint64_t i = lo; i < hi; ++i) {
                error_rep[w] = i;
                EventSequence seq;
                if (opt.algorithm == SimAlgorithm::cluster) {
                    std::mt19937_64 rng = replication_engine(seed, i);
                    seq = simulate_cluster(params, spec, sampler, t, rng, opt);
                } else {
                    seq = simulate_thinning(params, spec, t, seed, i, opt);
                }
                ++local[w][seq.times.size()];
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    if (workers == 1) {
        run_range(0, 0, n_runs);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = n_runs / workers;
        const std::uint64_t rem = n_runs % workers;
        std::uint64_t start = 0;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t len = chunk + (w < rem ? 1 : 0);
            pool.emplace_back(run_range, w, start, start + len);
            start += len;
        }
        for (auto& th : pool) th.join();
    }
    for (unsigned w = 0; w < workers; ++w) {
        if (errors[w]) {
            try {
                std::rethrow_exception(errors[w]);
            } catch (const std::exception& e) {
                throw std::runtime_error("count_distribution: replication " +
                                         std::to_string(error_rep[w]) + " failed: " + e.what());
            }
        }
    }

    CountHistogram h;
    h.t = t;
    h.n_runs = n_runs;
    for (unsigned w = 0; w < workers; ++w)
        for (const auto& [n, c] : local[w]) h.counts[n] += c;

    double mean = 0.0;
    for (const auto& [n, c] : h.counts)
        mean += static_cast<double>(n) * static_cast<double>(c);
    mean /= static_cast<double>(n_runs);
    double var = 0.0;
    for (const auto& [n, c] : h.counts) {
        const double d = static_cast<double>(n) - mean;
        var += d * d * static_cast<double>(c);
    }
    var /= static_cast<double>(n_runs - 1);
    h.mean = mean;
    h.std_error_of_mean = std::sqrt(var / static_cast<double>(n_runs));
    return h;
}

}  // namespace hptml
