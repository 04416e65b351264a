// Bessel transforms of even test functions on the strip |Re nu| < 2/3 and the
// geometric side (diagonal plus Kloosterman terms) of Kuznetsov's formula
// over class-number-one fields.
#pragma once

#include "ntk/field.hpp"
#include "ntk/numeric.hpp"

#include <functional>
#include <vector>

namespace ntk {

struct TestFunction {
    // k on the strip, and k((b-1)/2) for even b >= 4 (zero from max_b on).
    std::function<cplx(cplx)> strip;
    std::function<double(int)> discrete;
    int max_b = 2;
    // Decay certificate on Re nu = 0: either |k(i tau)| <= e^{-(tau^2 + 1/4)/width^2}
    // (gaussian) or |k(i tau)| <= C (1 + |tau|)^{-a} with a > 2.
    bool gaussian = true;
    double width = 1;
    double cert_C = 1, cert_a = 3;

    // e^{(nu^2 - 1/4)/Z^2} on the strip, 1 at half-integers 3/2 <= nu <= Z.
    static TestFunction kZ(double Z);
};

struct TransformValue {
    double value = 0;
    double tail_bound = 0;         // certified bound on the integral beyond T
    double discretisation = 0;     // |trapezoid(h) - trapezoid(h/2)|
    double T = 0;
    int nodes = 0;
    int max_bits = 0;              // MPFR precision used for the Bessel series
    double error() const { return tail_bound + discretisation; }
};

// Throws std::runtime_error when no cutoff T <= 400 certifies the tail below
// 1e-10 or the required precision exceeds the supported maximum.
TransformValue bessel_check(const TestFunction& k, double t);
TransformValue bessel_tilde(const TestFunction& k);

// Im J_{2 i tau}(x) / cosh(pi tau) (or I for modified = true) to absolute
// accuracy ~1e-20 by the MPFR power series; extra_bits raises the working
// precision (for self-checks).
double imag_bessel_over_cosh(double tau, double x, bool modified, int* bits_used = nullptr, int extra_bits = 0);
// Im log Gamma(1 + i y), continuous in y, through the same MPFR code.
double gamma_phase(double y);

// Rigorous bound for 0 < |t| <= t0 = 1/(16 pi^2) from the contour at
// Re nu = sigma (1/2 < sigma < 2/3): |k-check(t)| <= positive |t|^sigma, plus
// negative_extra sqrt|t| when t < 0 (the residue at nu = 1/2 survives there).
struct SmallTBound {
    double t0 = 0, sigma = 0, positive = 0, negative_extra = 0;
    double operator()(double t) const;
};
SmallTBound small_t_bound(const TestFunction& k, double sigma = 0.6);

struct BesselCalibration {
    double check = 0;   // max |k-check(t)| / (Z^2 min(1, sqrt|t|))
    double tilde = 0;   // max |k-tilde| / Z^2
    double max_error = 0;
    double max_abs_check = 0;  // max |k-check| over the grid, per unit Z^2
    int points = 0;
};
// Z over zs, |t| on a log grid of `grid` points in [tmin, tmax], both signs.
BesselCalibration calibrate_bessel_bounds(const std::vector<double>& zs, int grid, double tmin, double tmax,
                                          int jobs = 1);

struct KuzQuery {
    Elem r1{1, 0}, r2{1, 0};
    Ideal level;                  // the ideal c; the c-sum runs over its nonzero elements
    i64 height = 100;             // include c with N(c) <= height
    double c1 = 1, c2 = 1;
    // Sup of |k-check| over R^x, per place; defaults to the calibrated grid
    // maximum times two when not positive.
    double check_sup = 0;
    double sigma = 0.6;
};

struct KuzResult {
    cplx value;         // diagonal + off-diagonal
    double diagonal = 0;
    cplx offdiagonal;
    double majorant = 0;  // bound on the omitted c with N(c) > height
    int unit_classes = 0;
    i64 moduli = 0;       // ideals summed
    i64 terms = 0;        // Kloosterman terms summed
};

// Only class number one and y1 = y2 = o; gamma is the square of the
// totally positive different generator.
KuzResult kuznetsov_geometric_side(const Field& K, const KuzQuery& q, const TestFunction& k);

// Representatives of U / U^2: {+-1} x {1, eps}.
std::vector<Elem> units_mod_squares(const Field& K);

}  // namespace ntk
