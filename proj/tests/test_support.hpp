// Shared test utilities: the extended-precision Mittag-Leffler series oracle
// (MPFR, >= 50 digits), exact Poisson pmf, Kolmogorov-Smirnov statistic, a
// positive-stable product sampler, and a numerical Laplace transform of the
// kernel density. Everything here is independent of the library's evaluation
// paths.
#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hptml/kernels.hpp"
#include "hptml/quadrature.hpp"

namespace testsupport {

/// M_{a,b}^c(z) summed term by term in MPFR with precision adapted to the
/// worst cancellation scale exp(|z|^{1/a}).
inline double ml_reference(double a, double b, double c, double z) {
    const double x = std::abs(z);
    const double big = x == 0.0 ? 0.0 : std::pow(x, 1.0 / a);
    if (big > 4000.0) throw std::invalid_argument("ml_reference: argument too deep for the oracle");
    const auto prec = static_cast<mpfr_prec_t>(384 + 1.7 * big);

    mpfr_t sum, term, poch, zn, fact, garg, g, zz, tmp;
    mpfr_inits2(prec, sum, term, poch, zn, fact, garg, g, zz, tmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(sum, 0.0, MPFR_RNDN);
    mpfr_set_d(poch, 1.0, MPFR_RNDN);
    mpfr_set_d(zn, 1.0, MPFR_RNDN);
    mpfr_set_d(fact, 1.0, MPFR_RNDN);
    mpfr_set_d(zz, z, MPFR_RNDN);

    const long max_terms = 500000;
    const long cutoff_exp = -static_cast<long>(prec) + 48;
    for (long n = 0; n < max_terms; ++n) {
        mpfr_set_d(garg, a, MPFR_RNDN);
        mpfr_mul_si(garg, garg, n, MPFR_RNDN);
        mpfr_add_d(garg, garg, b, MPFR_RNDN);
        mpfr_gamma(g, garg, MPFR_RNDN);
        mpfr_mul(term, poch, zn, MPFR_RNDN);
        mpfr_div(term, term, g, MPFR_RNDN);
        mpfr_div(term, term, fact, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        if (n > 8 && !mpfr_zero_p(term)) {
            const long te = mpfr_get_exp(term);
            const long se = mpfr_zero_p(sum) ? 0 : mpfr_get_exp(sum);
            if (te < std::max(se, 0L) + cutoff_exp) break;
        }
        if (mpfr_zero_p(term) && n > 8) break;
        mpfr_add_d(tmp, zz, 0.0, MPFR_RNDN);  // tmp = z
        mpfr_mul(zn, zn, tmp, MPFR_RNDN);
        mpfr_set_d(tmp, c + static_cast<double>(n), MPFR_RNDN);
        mpfr_mul(poch, poch, tmp, MPFR_RNDN);
        mpfr_mul_si(fact, fact, n + 1, MPFR_RNDN);
    }
    const double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, term, poch, zn, fact, garg, g, zz, tmp, static_cast<mpfr_ptr>(nullptr));
    mpfr_free_cache();
    return out;
}

inline double ml2_reference(double a, double b, double z) { return ml_reference(a, b, 1.0, z); }

inline double poisson_pmf(std::uint64_t n, double lambda) {
    return std::exp(-lambda + static_cast<double>(n) * std::log(lambda) -
                    std::lgamma(static_cast<double>(n) + 1.0));
}

/// KS statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs((i + 1.0) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

/// Kanter's positive stable sampler: S with E[e^{-sS}] = e^{-s^beta}.
inline double stable_positive_draw(double beta, std::mt19937_64& rng) {
    const double pi = 3.141592653589793238462643;
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double w = -std::log((static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53);
    const double num = std::sin((1.0 - beta) * pi * u) *
                       std::pow(std::sin(beta * pi * u), beta / (1.0 - beta));
    const double den = std::pow(std::sin(pi * u), 1.0 / (1.0 - beta));
    return std::pow(num / den / w, (1.0 - beta) / beta);
}

/// Mittag-Leffler delay by the product representation S_beta * E^{1/beta} / gamma^{1/beta};
/// Laplace transform gamma / (gamma + s^beta). Independent route for nu = 0 sampling.
inline double ml_delay_product_draw(double beta, double gamma_, std::mt19937_64& rng) {
    const double e = -std::log((static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53);
    return stable_positive_draw(beta, rng) * std::pow(e / gamma_, 1.0 / beta);
}

/// Numerical Laplace transform of the kernel density at real s > 0 by
/// adaptive quadrature; the t^{beta-1} singularity is handled with the
/// substitution u = t^beta on [0, 1].
inline double numeric_kernel_lt(const hptml::KernelSpec& spec, double s, double rel_tol = 1e-9) {
    const double beta = spec.kind == hptml::KernelKind::exponential ? 1.0 : spec.beta;
    auto near = [&](double u) {
        const double t = std::pow(u, 1.0 / beta);
        return std::exp(-s * t) * hptml::kernel_density(spec, t) * std::pow(u, 1.0 / beta - 1.0) /
               beta;
    };
    const double head = hptml::integrate_adaptive(near, 0.0, 1.0, rel_tol, 1e-14);
    // exponential tail bound: the mass beyond T is at most e^{-sT}
    const double t_end = std::max(2.0, 42.0 / s);
    auto far = [&](double t) { return std::exp(-s * t) * hptml::kernel_density(spec, t); };
    const double tail = hptml::integrate_adaptive(far, 1.0, t_end, rel_tol, 1e-14);
    return head + tail;
}

}  // namespace testsupport
