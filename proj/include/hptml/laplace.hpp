#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hptml {

/// Laplace transform of a real-valued original: maps s with Re(s) > 0 to a
/// complex value, conjugate-symmetric in s. Inversion is carried out in long
/// double so the e^{rt}-scale terms of the contour sums do not wash out the
/// answer at double precision.
using LTFunction = std::function<std::complex<long double>(std::complex<long double>)>;

class inversion_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-Talbot inversion (Abate-Valko): contour s(theta) = r theta (cot theta + i)
/// with r = 2M/(5t), trapezoidal sum over M points.
inline double invert_talbot(const LTFunction& f, double t, int contour_points = 48) {
    if (!(t > 0.0)) throw std::domain_error("invert_talbot: requires t > 0");
    if (contour_points < 16 || contour_points > 128)
        throw std::domain_error("invert_talbot: contour_points outside [16, 128]");
    using C = std::complex<long double>;
    const long double pi = 3.14159265358979323846L;
    const int m = contour_points;
    const long double tt = static_cast<long double>(t);
    const long double r = 2.0L * m / (5.0L * tt);

    long double acc = 0.5L * std::exp(r * tt) * f(C(r, 0.0L)).real();
    for (int k = 1; k < m; ++k) {
        const long double th = k * pi / m;
        const long double cot = std::cos(th) / std::sin(th);
        const C s(r * th * cot, r * th);
        const long double sigma = th + (th * cot - 1.0L) * cot;
        const C v = std::exp(s * tt) * f(s) * C(1.0L, sigma);
        acc += v.real();
    }
    return static_cast<double>(acc * r / m);
}

/// Euler inversion (Abate-Whitt framework): binomially averaged partial sums
/// of the Bromwich series; terms = 2M + 1 transform evaluations.
inline double invert_euler(const LTFunction& f, double t, int terms = 41) {
    if (!(t > 0.0)) throw std::domain_error("invert_euler: requires t > 0");
    if (terms < 11 || terms > 201) throw std::domain_error("invert_euler: terms outside [11, 201]");
    using C = std::complex<long double>;
    const long double pi = 3.14159265358979323846L;
    const int m = (terms - 1) / 2;
    const int n = 2 * m;

    std::vector<long double> xi(static_cast<std::size_t>(n) + 1, 0.0L);
    xi[0] = 0.5L;
    for (int k = 1; k <= m; ++k) xi[k] = 1.0L;
    xi[n] = std::pow(2.0L, static_cast<long double>(-m));
    long double binom = 1.0L;  // C(m, k) built multiplicatively
    for (int k = 1; k < m; ++k) {
        binom = binom * (m - k + 1) / k;
        xi[n - k] = xi[n - k + 1] + xi[n] * binom;
    }

    const long double a = m * std::log(10.0L) / 3.0L;
    const long double tt = static_cast<long double>(t);
    long double acc = 0.0L;
    for (int k = 0; k <= n; ++k) {
        const C s(a / tt, pi * k / tt);
        const long double re = f(s).real();
        acc += ((k & 1) ? -xi[k] : xi[k]) * re;
    }
    return static_cast<double>(acc * std::exp(a) / tt);
}

struct InversionResult {
    double value;           ///< the Talbot estimate
    double error_estimate;  ///< |talbot - euler|
};

/// Runs both algorithms and cross-checks them; disagreement beyond 100*tol
/// signals an inversion failure (e.g. a singularity interfering with the
/// contour).
inline InversionResult invert_checked(const LTFunction& f, double t, double tol = 1e-8) {
    if (!(tol >= 1e-8)) throw std::domain_error("invert_checked: requires tol >= 1e-8");
    const double vt = invert_talbot(f, t);
    const double ve = invert_euler(f, t);
    const double diff = std::abs(vt - ve);
    if (diff > 100.0 * tol * std::max(1.0, std::abs(vt)))
        throw inversion_error("invert_checked: Talbot and Euler disagree beyond 100*tol");
    return InversionResult{vt, diff};
}

}  // namespace hptml
