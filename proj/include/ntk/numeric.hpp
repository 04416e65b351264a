// Shared numerical helpers: compensated sums, double-exponential quadrature,
// complex Gamma.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace ntk {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Neumaier summation; works for double and std::complex<double>.
template <class T>
class CompensatedSum {
public:
    void add(T x) { add_part(x); }
    T value() const { return sum_ + comp_; }

private:
    static double two_sum(double& s, double x) {
        double t = s + x;
        double c = std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
        return c;
    }
    void add_part(double x) { comp_ += two_sum(sum_, x); }
    void add_part(cplx x) {
        double re = sum_.real(), im = sum_.imag();
        double cre = two_sum(re, x.real());
        double cim = two_sum(im, x.imag());
        sum_ = {re, im};
        comp_ += cplx(cre, cim);
    }
    T sum_{};
    T comp_{};
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_level = 10;
    int min_level = 3;
};

namespace detail {

// Generic double-exponential trapezoid driver. `node(t, x, w)` fills the
// abscissa and weight for parameter t; returns false if the node is unusable.
template <class T, class F, class Node>
QuadResult<T> de_drive(F&& f, Node&& node, double t_lo, double t_hi, const QuadOptions& opt) {
    QuadResult<T> res;
    auto term = [&](double t) -> T {
        double x, w;
        if (!node(t, x, w) || w == 0.0 || !std::isfinite(w)) return T{};
        ++res.evaluations;
        T v = f(x);
        if constexpr (std::is_same_v<T, double>) {
            if (!std::isfinite(v)) throw std::runtime_error("quadrature: non-finite integrand");
        } else {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::runtime_error("quadrature: non-finite integrand");
        }
        return v * w;
    };

    // Level 0: step 1/2, scan outward and trim the window where terms vanish.
    double h = 0.5;
    CompensatedSum<T> acc;
    T centre = term(0.0);
    acc.add(centre);
    double scale = std::abs(centre);
    double lo = 0.0, hi = 0.0;
    for (int dir = -1; dir <= 1; dir += 2) {
        int small_run = 0;
        double edge = 0.0;
        for (int k = 1;; ++k) {
            double t = dir * k * h;
            if (t < t_lo || t > t_hi) break;
            T v = term(t);
            acc.add(v);
            edge = t;
            scale = std::max(scale, std::abs(v));
            if (std::abs(v) <= 1e-20 * scale) {
                if (++small_run >= 4) break;
            } else {
                small_run = 0;
            }
        }
        if (dir < 0) lo = edge; else hi = edge;
    }
    T prev = acc.value() * h;
    for (int level = 1; level <= opt.max_level; ++level) {
        h *= 0.5;
        for (double t = lo + h; t < hi; t += 2 * h) acc.add(term(t));
        T cur = acc.value() * h;
        double err = std::abs(cur - prev);
        res.value = cur;
        res.error = err;
        if (level >= opt.min_level && err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    return res;
}

}  // namespace detail

// Integral over [a, b] via tanh-sinh.
template <class F>
auto integrate_finite(F&& f, double a, double b, const QuadOptions& opt = {}) {
    using T = std::decay_t<decltype(f(a))>;
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    auto node = [&](double t, double& x, double& w) {
        double u = 0.5 * kPi * std::sinh(t);
        double th = std::tanh(u);
        double ch = std::cosh(u);
        x = mid + half * th;
        w = half * 0.5 * kPi * std::cosh(t) / (ch * ch);
        return x > a && x < b;
    };
    return detail::de_drive<T>(f, node, -4.0, 4.0, opt);
}

// Integral over [a, inf) via exp-sinh.
template <class F>
auto integrate_half_line(F&& f, double a, const QuadOptions& opt = {}) {
    using T = std::decay_t<decltype(f(a))>;
    auto node = [&](double t, double& x, double& w) {
        double e = std::exp(0.5 * kPi * std::sinh(t));
        x = a + e;
        w = 0.5 * kPi * std::cosh(t) * e;
        return x > a && std::isfinite(x);
    };
    return detail::de_drive<T>(f, node, -6.5, 4.5, opt);
}

// Integral over the real line via sinh-sinh.
template <class F>
auto integrate_real_line(F&& f, const QuadOptions& opt = {}) {
    using T = std::decay_t<decltype(f(0.0))>;
    auto node = [&](double t, double& x, double& w) {
        double u = 0.5 * kPi * std::sinh(t);
        x = std::sinh(u);
        w = 0.5 * kPi * std::cosh(t) * std::cosh(u);
        return std::isfinite(x) && std::isfinite(w);
    };
    return detail::de_drive<T>(f, node, -4.5, 4.5, opt);
}

// log Gamma on the principal branch (continuous away from the negative axis),
// Stirling series after upward shift, reflection for Re z < 1/2.
cplx lgamma_c(cplx z);
cplx gamma_c(cplx z);
// 1/Gamma, entire; exact zero at nonpositive integers.
cplx rgamma_c(cplx z);

}  // namespace ntk
