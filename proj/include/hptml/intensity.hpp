#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "hptml/kernels.hpp"
#include "hptml/laplace.hpp"
#include "hptml/quadrature.hpp"
#include "hptml/special_functions.hpp"

namespace hptml {

namespace detail {

template <typename C>
C intensity_lt_impl(const HawkesParams& p, C s) {
    using Real = typename C::value_type;
    const Real l0 = static_cast<Real>(p.lambda0);
    const Real g = static_cast<Real>(p.gamma);
    const Real a = static_cast<Real>(p.alpha);
    const Real b = static_cast<Real>(p.beta);
    const Real nu = static_cast<Real>(p.nu);
    const C shifted = std::pow(nu + s, b);
    const Real nub = std::pow(nu, b);
    const C num = g - nub + shifted;
    const C den = g * (Real(1) - a) - nub + shifted;
    if (std::abs(den) <= Real(1e-14))
        throw std::domain_error("intensity_lt: denominator pole on evaluation path");
    return (l0 / s) * num / den;
}

}  // namespace detail

/// Laplace transform of the expected intensity,
///   (Lambda0/s) (gamma - nu^beta + (nu+s)^beta) / (gamma (1-alpha) - nu^beta + (nu+s)^beta).
inline std::complex<double> intensity_lt(const HawkesParams& p, std::complex<double> s) {
    p.validate();
    if (!(s.real() > 0.0)) throw std::domain_error("intensity_lt: requires Re(s) > 0");
    return detail::intensity_lt_impl(p, s);
}

/// Denominator constant D = (alpha - 1) gamma + nu^beta of the analytic
/// inversion; the series route needs |D| bounded away from zero.
inline double intensity_series_denominator(const HawkesParams& p) {
    return (p.alpha - 1.0) * p.gamma + std::pow(p.nu, p.beta);
}

/// Expected intensity by the analytic series
///   lambda(t) = Lambda0 [ (nu^beta - gamma)/D
///             + (alpha gamma e^{-nu t}/D) sum_m nu^m t^m M_{beta,m+1}(D t^beta) ].
/// lambda(0) = Lambda0 exactly. Requires |D| > 1e-12; callers should fall back
/// to intensity_numeric on the degenerate manifold or when the series
/// overflows (nu*t beyond roughly 140).
inline double intensity_analytic(const HawkesParams& p, double t, double tol = 1e-10) {
    p.validate();
    if (!(t >= 0.0)) throw std::domain_error("intensity_analytic: requires t >= 0");
    const double d = intensity_series_denominator(p);
    if (std::abs(d) <= 1e-12)
        throw std::domain_error("intensity_analytic: degenerate denominator, use the numeric path");
    if (t == 0.0) return p.lambda0;

    const double nub = std::pow(p.nu, p.beta);
    const double x = d * std::pow(t, p.beta);
    const double nt = p.nu * t;
    const double ml_tol = std::max(1e-15, std::min(1e-6, 0.01 * tol));

    constexpr int kBudget = 20000;
    double sum = 0.0;
    double q = 1.0;  // (nu t)^m
    for (int m = 0; m < kBudget; ++m) {
        const double term = q * ml_two_param(p.beta, m + 1.0, x, ml_tol);
        sum += term;
        if (m > nt && std::abs(term) <= tol * (std::abs(sum) + 1e-300)) break;
        q *= nt;
        if (!std::isfinite(q) || !std::isfinite(sum))
            throw convergence_error("intensity_analytic: series overflow (nu*t too large)");
        if (m + 1 == kBudget) throw convergence_error("intensity_analytic: series budget exhausted");
    }
    return p.lambda0 * ((nub - p.gamma) / d + p.alpha * p.gamma * std::exp(-nt) / d * sum);
}

struct NumericIntensity {
    double value;
    double error_estimate;
};

/// Expected intensity by checked numerical inversion of intensity_lt.
/// For t below 1e-6 the contour methods degrade and the exact boundary value
/// Lambda0 is returned instead.
inline NumericIntensity intensity_numeric(const HawkesParams& p, double t, double tol = 1e-8) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("intensity_numeric: requires t > 0");
    if (t < 1e-6) return NumericIntensity{p.lambda0, 0.0};
    LTFunction f = [p](std::complex<long double> s) { return detail::intensity_lt_impl(p, s); };
    const InversionResult r = invert_checked(f, t, std::max(tol, 1e-8));
    return NumericIntensity{r.value, r.error_estimate};
}

/// Stationary limit of the expected intensity for alpha < 1. The final-value
/// limit of s * intensity_lt(s) as s -> 0+ is Lambda0 gamma / (gamma (1-alpha))
/// = Lambda0/(1-alpha) for every nu >= 0, since (nu+s)^beta -> nu^beta; the
/// limit is evaluated in that exact algebraic form.
inline double stationary_intensity(const HawkesParams& p) {
    p.validate();
    if (!(p.alpha < 1.0)) throw std::domain_error("stationary_intensity: requires alpha < 1");
    return p.lambda0 / (1.0 - p.alpha);
}

/// Diagnostic evaluation of the double geometric series form of the
/// stationary limit. The series converges only when both geometric ratios
/// have modulus below one; outside that region `converged` is false and the
/// value is NaN. The final-value result of stationary_intensity is the
/// authoritative limit; this routine exists to make the comparison a
/// first-class, reportable experiment.
struct StationarySeriesDiagnostic {
    bool converged;
    double value;
    double ratio1;  ///< nu^beta / D
    double ratio2;  ///< nu^beta / (D (gamma - nu^beta))
};

inline StationarySeriesDiagnostic stationary_intensity_series(const HawkesParams& p) {
    p.validate();
    if (!(p.alpha < 1.0))
        throw std::domain_error("stationary_intensity_series: requires alpha < 1");
    const double nub = std::pow(p.nu, p.beta);
    const double d = intensity_series_denominator(p);
    const double pre = p.lambda0 * (p.gamma - nub) / (p.gamma * (1.0 - p.alpha) - nub);
    const double r1 = nub / d;
    const double r2 = nub / (d * (p.gamma - nub));
    StationarySeriesDiagnostic out{false, std::numeric_limits<double>::quiet_NaN(), r1, r2};
    if (std::isfinite(r1) && std::isfinite(r2) && std::abs(r1) < 1.0 && std::abs(r2) < 1.0) {
        out.converged = true;
        out.value = pre * (1.0 / (1.0 - r1) + nub / (1.0 - r2));
    }
    return out;
}

/// Expected number of events by the diagonally regrouped double series
///   E[N(t)] = Lambda0 [ ((nu^beta - gamma)/D) t
///           + (alpha gamma e^{-nu t}/D) sum_k (k+1) nu^k t^{k+1} M_{beta,k+2}(D t^beta) ].
inline double expected_count(const HawkesParams& p, double t, double tol = 1e-10) {
    p.validate();
    if (!(t >= 0.0)) throw std::domain_error("expected_count: requires t >= 0");
    if (t == 0.0) return 0.0;
    const double d = intensity_series_denominator(p);
    if (std::abs(d) <= 1e-12)
        throw std::domain_error("expected_count: degenerate denominator");

    const double nub = std::pow(p.nu, p.beta);
    const double x = d * std::pow(t, p.beta);
    const double nt = p.nu * t;
    const double ml_tol = std::max(1e-15, std::min(1e-6, 0.01 * tol));

    constexpr int kBudget = 20000;
    double sum = 0.0;
    double q = t;  // nu^k t^{k+1}
    for (int k = 0; k < kBudget; ++k) {
        const double term = (k + 1.0) * q * ml_two_param(p.beta, k + 2.0, x, ml_tol);
        sum += term;
        if (k > nt && std::abs(term) <= tol * (std::abs(sum) + 1e-300)) break;
        q *= nt;
        if (!std::isfinite(q) || !std::isfinite(sum))
            throw convergence_error("expected_count: series overflow (nu*t too large)");
        if (k + 1 == kBudget) throw convergence_error("expected_count: series budget exhausted");
    }
    return p.lambda0 * ((nub - p.gamma) / d * t + p.alpha * p.gamma * std::exp(-nt) / d * sum);
}

/// Cross-check route for expected_count: adaptive quadrature of the analytic
/// intensity over [0, t].
inline double expected_count_quadrature(const HawkesParams& p, double t, double rel_tol = 1e-7) {
    p.validate();
    if (!(t >= 0.0)) throw std::domain_error("expected_count_quadrature: requires t >= 0");
    if (t == 0.0) return 0.0;
    return integrate_adaptive([&](double u) { return u == 0.0 ? p.lambda0 : intensity_analytic(p, u); },
                              0.0, t, rel_tol, 0.0);
}

enum class IntensityMethod { analytic, numeric };

struct IntensityPoint {
    double t;
    double value;
    IntensityMethod method;
    double error_estimate;
};

/// Sampled expected-intensity curve; grid strictly increasing in t.
struct IntensityCurve {
    HawkesParams params;
    std::vector<IntensityPoint> grid;
};

inline IntensityCurve intensity_curve(const HawkesParams& p, const std::vector<double>& ts,
                                      IntensityMethod method, double tol = 1e-10) {
    p.validate();
    IntensityCurve curve{p, {}};
    curve.grid.reserve(ts.size());
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : ts) {
        if (!(t >= 0.0) || t <= prev)
            throw std::invalid_argument("intensity_curve: grid must be increasing and nonnegative");
        prev = t;
        if (method == IntensityMethod::analytic) {
            curve.grid.push_back({t, intensity_analytic(p, t, tol), method, 0.0});
        } else {
            const NumericIntensity v = t == 0.0 ? NumericIntensity{p.lambda0, 0.0}
                                                : intensity_numeric(p, t, std::max(tol, 1e-8));
            curve.grid.push_back({t, v.value, method, v.error_estimate});
        }
    }
    return curve;
}

}  // namespace hptml
