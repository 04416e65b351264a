// Classical Whittaker W_{kappa,mu}, the normalised archimedean Whittaker
// functions indexed by weight q and spectral parameter nu, their inner
// products, uniform bound shapes, and the weighted Sobolev-type A-norm.
#pragma once

#include "ntk/numeric.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ntk {

enum class WhittakerRoute { integral, laguerre, recurrence, series };
const char* route_name(WhittakerRoute r);

struct WhittakerValue {
    cplx value;
    WhittakerRoute route = WhittakerRoute::integral;
};

// W_{kappa,mu}(x) for real kappa, x > 0. Routes:
//  * 1/2 + mu - kappa a nonpositive integer: Laguerre polynomial closed form;
//  * x <= 8 and 2 mu at least 0.1 away from Z: the two Kummer M series;
//  * Re(1/2 + mu - kappa) >= 1/4 (after mu -> -mu if that helps): Laplace
//    integral  x^kappa e^{-x/2} / Gamma(a) int_0^inf e^{-s} s^{a-1} (1 + s/x)^b ds;
//  * otherwise the integral at kappa - n, kappa - n - 1 and the upward
//    contiguous recurrence in kappa (stable in this direction).
// Throws std::domain_error for x <= 0 or kappa > 400, std::runtime_error if
// the quadrature does not converge.
WhittakerValue whittaker_W(double kappa, cplx mu, double x);

// Admissible (q, nu) at one place: q even -> nu in (1/2 + Z) u iR u (-1/2, 1/2);
// q odd -> nu in Z u iR.
bool whittaker_admissible(int q, cplx nu);

// Normalised function at one place; zero when a Gamma argument is a
// nonpositive integer. Throws std::invalid_argument for inadmissible input.
cplx normalized_whittaker(int q, cplx nu, double y);

struct WhittakerSpec {
    std::vector<int> q;
    std::vector<cplx> nu;
};
// Product over the places.
cplx normalized_whittaker(const WhittakerSpec& s, const std::vector<double>& y);

// <W_q, W_q'> in L^2(R^x, d^x y), conjugate-linear in the second slot.
struct InnerResult {
    cplx value;
    double error = 0;
};
InnerResult whittaker_inner(int q1, int q2, cplx nu, double abs_tol = 1e-9);

// Gram matrix of the admissible W_q with |q| <= qmax and q = parity mod 2.
// One parity class is already a complete orthonormal system; functions of
// opposite parity are not orthogonal to each other. Every function is
// evaluated once per quadrature node.
struct WhittakerGram {
    std::vector<int> q;
    std::vector<std::vector<cplx>> G;
    double deviation() const;  // max |G - I|
};
WhittakerGram whittaker_gram(int qmax, cplx nu, int parity, double abs_tol = 1e-9);

// Shapes of the uniform bounds; a bound holds when |W| / shape stays below a
// fixed constant.
double whittaker_shape_decay(int q, cplx nu, double y);
double whittaker_shape_tempered(int q, cplx nu, double y, double eps);       // nu in Z/2 u iR
double whittaker_shape_complementary(int q, cplx nu, double y, double eps);  // nu in (-1/2, 1/2)

struct ShapeCalibration {
    double decay = 0, tempered = 0, complementary = 0;  // max ratios seen
    int samples = 0, tempered_samples = 0, complementary_samples = 0;
};
// Random admissible (q, nu, y) with |q| <= 8, |nu| <= 6, |y| log-uniform in
// [1e-3, 10 (|q| + |nu| + 1)]; fixed seed gives a fixed sample.
ShapeCalibration calibrate_whittaker_shapes(std::uint64_t seed, int samples, double eps = 0.1);

// A^mu norm on (R^x)^d. `deriv(k, y)` returns the mixed partial of order
// k = (k_1..k_d) at y.
using DerivSupplier = std::function<cplx(const std::vector<int>&, const std::vector<double>&)>;
double a_norm(int d, int mu, const DerivSupplier& deriv, double rel_tol = 1e-8);
// Central finite differences of f; step |y_j| * 10^{-16/(k_j + 2)} per coordinate.
DerivSupplier finite_difference_supplier(std::function<cplx(const std::vector<double>&)> f);

}  // namespace ntk
