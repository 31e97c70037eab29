#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "hptml/special_functions.hpp"

namespace hptml {

/// Parameter tuple of the self-exciting process: baseline rate lambda0,
/// jump size alpha (the branching ratio, since the kernel is a probability
/// density), fractional index beta, tempering parameter nu, time-scale gamma.
struct HawkesParams {
    double lambda0 = 1.0;
    double alpha = 0.0;
    double beta = 1.0;
    double nu = 0.0;
    double gamma = 1.0;

    void validate() const {
        if (!(lambda0 > 0.0) || !std::isfinite(lambda0))
            throw std::invalid_argument("HawkesParams: lambda0 must be > 0");
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("HawkesParams: alpha must be >= 0");
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("HawkesParams: beta must lie in (0, 1]");
        if (!(nu >= 0.0) || !std::isfinite(nu))
            throw std::invalid_argument("HawkesParams: nu must be >= 0");
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("HawkesParams: gamma must be > 0");
    }

    /// Subcritical (stationary) iff the branching ratio alpha is below one.
    bool is_stationary() const { return alpha < 1.0; }
};

enum class KernelKind { tempered_ml, mittag_leffler, exponential, none };

/// Excitation-kernel family. MittagLeffler(beta, gamma) is TemperedML with
/// nu = 0 and Exponential(gamma) is TemperedML with beta = 1, nu = 0; every
/// operation honors those collapses numerically.
struct KernelSpec {
    KernelKind kind = KernelKind::none;
    double beta = 1.0;
    double nu = 0.0;
    double gamma = 1.0;

    static KernelSpec tempered_ml(double beta, double nu, double gamma) {
        return KernelSpec{KernelKind::tempered_ml, beta, nu, gamma};
    }
    static KernelSpec mittag_leffler(double beta, double gamma) {
        return KernelSpec{KernelKind::mittag_leffler, beta, 0.0, gamma};
    }
    static KernelSpec exponential(double gamma) {
        return KernelSpec{KernelKind::exponential, 1.0, 0.0, gamma};
    }
    static KernelSpec none() { return KernelSpec{KernelKind::none, 1.0, 0.0, 1.0}; }

    static KernelSpec from_params(const HawkesParams& p) {
        return tempered_ml(p.beta, p.nu, p.gamma);
    }

    void validate() const {
        if (kind == KernelKind::none) return;
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("KernelSpec: beta must lie in (0, 1]");
        if (!(nu >= 0.0) || !std::isfinite(nu))
            throw std::invalid_argument("KernelSpec: nu must be >= 0");
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("KernelSpec: gamma must be > 0");
    }

    bool has_density() const { return kind != KernelKind::none; }
};

inline const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::tempered_ml: return "tempered_ml";
        case KernelKind::mittag_leffler: return "mittag_leffler";
        case KernelKind::exponential: return "exponential";
        case KernelKind::none: return "none";
    }
    return "?";
}

/// Kernel density f(t) = gamma e^{-nu t} t^{beta-1} M_{beta,beta}(-(gamma - nu^beta) t^beta).
/// Its Laplace transform is gamma / (gamma - nu^beta + (nu+s)^beta); the time
/// domain form follows from L^{-1}[1/(s^beta + c)] = t^{beta-1} M_{beta,beta}(-c t^beta)
/// and the e^{-nu t} shift. gamma - nu^beta may have either sign; for
/// nu^beta > gamma the Mittag-Leffler argument is positive and the tempering
/// factor still makes f integrable.
inline double kernel_density(const KernelSpec& spec, double t) {
    spec.validate();
    if (!spec.has_density()) throw std::domain_error("kernel_density: 'none' kernel has no density");
    if (!(t > 0.0)) throw std::domain_error("kernel_density: requires t > 0");
    if (spec.kind == KernelKind::exponential) return spec.gamma * std::exp(-spec.gamma * t);

    const double c = spec.gamma - std::pow(spec.nu, spec.beta);
    const double x = -c * std::pow(t, spec.beta);
    if (x > 0.0 && std::pow(x, 1.0 / spec.beta) >= detail::kPosAsymX) {
        // compose in logs: the lone exponential term of the asymptotic is
        // accurate to ~e^{-x^{1/beta}} here and the product stays bounded
        const double lg = std::log(spec.gamma) - spec.nu * t + (spec.beta - 1.0) * std::log(t) +
                          detail::ml_pos_log(spec.beta, spec.beta, x);
        return std::exp(lg);
    }
    const double m = ml_two_param(spec.beta, spec.beta, x);
    return spec.gamma * std::exp(-spec.nu * t) * std::pow(t, spec.beta - 1.0) * m;
}

namespace detail {

template <typename C>
C kernel_lt_impl(const KernelSpec& spec, C s) {
    using Real = typename C::value_type;
    const Real g = static_cast<Real>(spec.gamma);
    switch (spec.kind) {
        case KernelKind::exponential:
            return g / (g + s);
        case KernelKind::mittag_leffler:
            return g / (g + std::pow(s, static_cast<Real>(spec.beta)));
        case KernelKind::tempered_ml: {
            const Real nu = static_cast<Real>(spec.nu);
            const Real b = static_cast<Real>(spec.beta);
            return g / (g - std::pow(nu, b) + std::pow(nu + s, b));
        }
        case KernelKind::none:
            break;
    }
    throw std::domain_error("kernel_lt: 'none' kernel has no transform");
}

}  // namespace detail

/// Laplace transform of the kernel density, principal branch of the complex
/// power; requires Re(s) > 0.
inline std::complex<double> kernel_lt(const KernelSpec& spec, std::complex<double> s) {
    spec.validate();
    if (!(s.real() > 0.0)) throw std::domain_error("kernel_lt: requires Re(s) > 0");
    return detail::kernel_lt_impl(spec, s);
}

namespace detail {

/// Asymptotic exponential decay rate of the tempered kernel's tail,
/// nu - (nu^beta - gamma)_+^{1/beta}; positive whenever nu > 0.
inline double kernel_tail_rate(const KernelSpec& spec) {
    const double excess = std::pow(spec.nu, spec.beta) - spec.gamma;
    const double r = excess > 0.0 ? std::pow(excess, 1.0 / spec.beta) : 0.0;
    return spec.nu - r;
}

}  // namespace detail

/// Kernel CDF through the term-by-term integral of the density,
///   F(t) = gamma e^{-nu t} sum_m nu^m t^{beta+m} M_{beta,beta+m+1}(-(gamma-nu^beta) t^beta),
/// truncated adaptively and clamped to [0, 1]. When nu*t is so large that the
/// series factors overflow double range, the complementary mass is integrated
/// instead (the tail decays exponentially for nu > 0).
inline double kernel_cdf(const KernelSpec& spec, double t, double tol = 1e-12) {
    spec.validate();
    if (!spec.has_density()) throw std::domain_error("kernel_cdf: 'none' kernel has no CDF");
    if (!(t >= 0.0)) throw std::domain_error("kernel_cdf: requires t >= 0");
    if (t == 0.0) return 0.0;
    if (spec.kind == KernelKind::exponential) return -std::expm1(-spec.gamma * t);

    const double beta = spec.beta;
    const double nu = spec.nu;
    const double x = -(spec.gamma - std::pow(nu, beta)) * std::pow(t, beta);
    const double nt = nu * t;
    const double ml_tol = std::max(1e-15, std::min(1e-6, 0.01 * tol));

    bool overflowed = false;
    double sum = 0.0;
    double q = 1.0;  // (nu t)^m
    for (int m = 0; m < detail::kSeriesBudget; ++m) {
        const double term = q * ml_two_param(beta, beta + m + 1.0, x, ml_tol);
        sum += term;
        if (m > nt && std::abs(term) <= tol * (std::abs(sum) + 1e-300)) break;
        q *= nt;
        if (!std::isfinite(q) || !std::isfinite(sum)) {
            overflowed = true;
            break;
        }
        if (m + 1 == detail::kSeriesBudget)
            throw convergence_error("kernel_cdf: series budget exhausted");
    }
    if (!overflowed) {
        const double f = spec.gamma * std::exp(-nt) * std::pow(t, beta) * sum;
        return std::min(1.0, std::max(0.0, f));
    }

    const double rate = detail::kernel_tail_rate(spec);
    if (!(rate > 0.0)) throw convergence_error("kernel_cdf: series overflow without exponential tail");
    const double t_end = t + 60.0 / rate;
    const double tail = integrate_adaptive([&](double u) { return kernel_density(spec, u); }, t,
                                           t_end, 1e-10, 1e-16);
    return std::min(1.0, std::max(0.0, 1.0 - tail));
}

}  // namespace hptml
