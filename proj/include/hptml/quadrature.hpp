#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hptml {

/// Thrown when an iterative numeric scheme exhausts its budget without
/// reaching the requested tolerance.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss-Kronrod 15/7 nodes and weights on [-1, 1] (positive half; symmetric).
inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Gauss-7 weights matching nodes 1, 3, 5, 7 of the Kronrod set.
inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double lo, double hi, double& value, double& err) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double sk = 0.0;
    double sg = 0.0;
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * gk15_nodes[i]);
        fv[14 - i] = f(c + h * gk15_nodes[i]);
    }
    fv[7] = f(c);
    for (int i = 0; i < 7; ++i) sk += gk15_wk[i] * (fv[i] + fv[14 - i]);
    sk += gk15_wk[7] * fv[7];
    for (int i = 0; i < 3; ++i) sg += gk15_wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    sg += gk15_wg[3] * fv[7];
    value = sk * h;
    err = std::abs((sk - sg) * h);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of f over [lo, hi].
/// Bisects the worst interval until the summed error estimate satisfies
/// |err| <= max(abs_tol, rel_tol * |integral|).
template <typename F>
double integrate_adaptive(const F& f, double lo, double hi, double rel_tol = 1e-10,
                          double abs_tol = 0.0, std::size_t max_intervals = 4000) {
    if (!(lo <= hi)) throw std::invalid_argument("integrate_adaptive: bad interval");
    if (lo == hi) return 0.0;

    struct Segment {
        double lo, hi, value, err;
    };
    std::vector<Segment> segs;
    segs.reserve(64);
    Segment s0{lo, hi, 0.0, 0.0};
    detail::gk15(f, lo, hi, s0.value, s0.err);
    segs.push_back(s0);

    while (segs.size() < max_intervals) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) return total;

        Segment cur = segs[worst];
        const double mid = 0.5 * (cur.lo + cur.hi);
        if (mid <= cur.lo || mid >= cur.hi) return total;  // interval at rounding limit
        Segment left{cur.lo, mid, 0.0, 0.0}, right{mid, cur.hi, 0.0, 0.0};
        detail::gk15(f, left.lo, left.hi, left.value, left.err);
        detail::gk15(f, right.lo, right.hi, right.value, right.err);
        segs[worst] = left;
        segs.push_back(right);
    }
    throw convergence_error("integrate_adaptive: interval budget exhausted");
}

/// Double-exponential (exp-sinh) quadrature over (0, inf) for integrands with
/// an algebraic singularity at 0 and at least exponential decay at infinity.
/// power_at_zero is a lower bound p such that f(r) = O(r^p) as r -> 0, p > -1.
template <typename F>
double integrate_exp_sinh(const F& f, double power_at_zero, double rel_tol = 1e-13) {
    const double half_pi = 1.5707963267948966;
    // truncation: left tail needs r^(1+p) small, right tail killed by the
    // integrand's own decay; exp underflow bounds both.
    const double p = std::max(power_at_zero + 1.0, 1e-2);
    const double w_neg = -std::asinh(40.0 / (p * half_pi));
    const double w_pos = std::asinh(710.0 / half_pi);

    auto eval = [&](double w) -> double {
        const double sh = half_pi * std::sinh(w);
        const double r = std::exp(sh);
        if (r == 0.0 || !std::isfinite(r)) return 0.0;
        const double jac = half_pi * std::cosh(w) * r;
        const double v = f(r) * jac;
        return std::isfinite(v) ? v : 0.0;
    };

    double h = 0.5;
    // level 0: trapezoid at spacing h over [w_neg, w_pos]
    double sum = 0.0;
    {
        const long n_lo = static_cast<long>(std::floor(w_neg / h));
        const long n_hi = static_cast<long>(std::ceil(w_pos / h));
        for (long k = n_lo; k <= n_hi; ++k) sum += eval(k * h);
        sum *= h;
    }
    double prev = sum;
    int consecutive_ok = 0;
    for (int level = 1; level <= 10; ++level) {
        h *= 0.5;
        // refine: add midpoints (odd multiples of the new h)
        double add = 0.0;
        const long n_lo = static_cast<long>(std::floor(w_neg / (2.0 * h)));
        const long n_hi = static_cast<long>(std::ceil(w_pos / (2.0 * h)));
        for (long k = n_lo; k <= n_hi; ++k) add += eval((2 * k + 1) * h);
        sum = 0.5 * prev + h * add;
        const double diff = std::abs(sum - prev);
        if (diff <= rel_tol * std::max(std::abs(sum), 1e-300)) {
            if (++consecutive_ok >= 2) return sum;
        } else {
            consecutive_ok = 0;
        }
        prev = sum;
    }
    return sum;  // best effort: double-exponential decay makes this tight
}

}  // namespace hptml
