#include "doctest.h"
#include "ntk/whittaker.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

using namespace ntk;

namespace {

// K_{it}(z) = int_0^inf e^{-z cosh u} cos(t u) du, plain trapezoid (spectrally
// accurate for this analytic, rapidly decaying integrand).
double bessel_k_imag(double t, double z) {
    double h = 0.005, s = 0.5 * std::exp(-z);
    for (int k = 1;; ++k) {
        double u = k * h, term = std::exp(-z * std::cosh(u));
        s += term * std::cos(t * u);
        if (term < 1e-300 || z * std::cosh(u) > 745) break;
    }
    return s * h;
}

// Integrates W'' = (1/4 - kappa/x - (1/4 - mu^2)/x^2) W inward in t = log x
// from x = 60, where the asymptotic series fixes W. Returns W and the local
// amplitude sqrt(|W|^2 + |x W'|^2).
struct OdeValue {
    cplx w;
    double amp;
};
OdeValue whittaker_ode(double kappa, cplx mu, double x_target) {
    double x0 = 60;
    // e^{-x/2} x^kappa sum_n (1/2+mu-kappa)_n (1/2-mu-kappa)_n / n! (-x)^{-n}
    cplx s = 0, ds = 0, term = 1;
    for (int n = 0; n < 40; ++n) {
        s += term;
        ds += term * (double)(-n) / x0;  // d/dx of x^{-n} part
        term *= (0.5 + mu - kappa + (double)n) * (0.5 - mu - kappa + (double)n) / ((n + 1.0) * -x0);
    }
    cplx pre = std::exp(-x0 / 2 + kappa * std::log(x0));
    cplx w = pre * s;
    cplx wx = pre * (s * (kappa / x0 - 0.5) + ds);
    // y1 = W, y2 = x W' ; d/dt y1 = y2, d/dt y2 = y2 + x^2 q(x) y1 - y2 = x^2 q(x) y1
    // with W_tt = W_t + x^2 q W and y2 = W_t.
    auto rhs = [&](double t, cplx a, cplx b, cplx& da, cplx& db) {
        double x = std::exp(t);
        cplx q = 0.25 - kappa / x - (0.25 - mu * mu) / (x * x);
        da = b;
        db = b + x * x * q * a;
    };
    double t = std::log(x0), t1 = std::log(x_target);
    int steps = (int)std::ceil((t - t1) / 2e-4);
    double h = (t1 - t) / steps;
    cplx a = w, b = x0 * wx;
    for (int i = 0; i < steps; ++i) {
        cplx k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        rhs(t, a, b, k1a, k1b);
        rhs(t + h / 2, a + h / 2 * k1a, b + h / 2 * k1b, k2a, k2b);
        rhs(t + h / 2, a + h / 2 * k2a, b + h / 2 * k2b, k3a, k3b);
        rhs(t + h, a + h * k3a, b + h * k3b, k4a, k4b);
        a += h / 6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        b += h / 6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        t += h;
    }
    return {a, std::sqrt(std::norm(a) + std::norm(b))};
}

}  // namespace

TEST_CASE("classical Whittaker function examples") {
    auto w = whittaker_W(1, 0.5, 2);
    CHECK(w.route == WhittakerRoute::laguerre);
    CHECK(std::abs(w.value - 2 * std::exp(-1.0)) < 1e-15);
    CHECK(std::abs(w.value - 0.735759) < 1e-6);

    auto w0 = whittaker_W(0, 0.0, 2).value;
    double ref0 = std::sqrt(2 / kPi) * boost::math::cyl_bessel_k(0, 1.0);
    CHECK(std::abs(w0 - ref0) < 1e-12 * ref0);
    CHECK(std::abs(w0 - 0.335929) < 1e-6);

    auto big = whittaker_W(1, cplx(0, 0.3), 40).value;
    CHECK(std::abs(big.real() / (40 * std::exp(-20.0)) - 1) < 0.02);
    CHECK_THROWS_AS(whittaker_W(0, 0.1, 0), std::domain_error);
    CHECK_THROWS_AS(whittaker_W(0, 0.1, -1), std::domain_error);
}

TEST_CASE("Laguerre closed forms") {
    // W_{7/2,2}(x) = (x - 5) x^{5/2} e^{-x/2}
    for (double x : {1e-3, 0.02, 1.0, 7.0, 30.0}) {
        double ref = (x - 5) * std::pow(x, 2.5) * std::exp(-x / 2);
        CHECK(std::abs(whittaker_W(3.5, 2.0, x).value - ref) <= 1e-13 * std::fabs(ref));
    }
}

TEST_CASE("kappa = 0 against the K-Bessel relation") {
    for (double x : {1e-3, 0.05, 0.7, 3.0, 12.0, 50.0}) {
        for (double m : {0.1, 0.3, 0.45, 1.5}) {
            double ref = std::sqrt(x / kPi) * boost::math::cyl_bessel_k(m, x / 2);
            CHECK(std::abs(whittaker_W(0, m, x).value - ref) <= 1e-9 * ref);
        }
        for (double t : {0.25, 0.7, 2.0, 5.0}) {
            double ref = std::sqrt(x / kPi) * bessel_k_imag(t, x / 2);
            double scale = std::sqrt(x / kPi) * bessel_k_imag(0, x / 2);
            auto v = whittaker_W(0, cplx(0, t), x).value;
            CAPTURE(x);
            CAPTURE(t);
            CHECK(std::abs(v.imag()) <= 1e-9 * scale);
            CHECK(std::abs(v.real() - ref) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("all routes against the differential equation") {
    struct Case {
        double kappa;
        cplx mu;
        WhittakerRoute route;
    };
    std::vector<Case> cases = {
        {-2, cplx(0, 0.7), WhittakerRoute::integral},  {-0.5, 0.0, WhittakerRoute::integral},
        {1, cplx(0, 0.7), WhittakerRoute::recurrence}, {2, cplx(0, 1.0), WhittakerRoute::recurrence},
        {1.5, cplx(0, 0.5), WhittakerRoute::recurrence}, {2, 1.0 / 9, WhittakerRoute::recurrence},
        {3.5, 2.0, WhittakerRoute::laguerre},          {2, 0.5, WhittakerRoute::laguerre},
        {2.5, 3.2, WhittakerRoute::integral},          {0.5, 0.0, WhittakerRoute::laguerre},
        {4, cplx(0, 3.0), WhittakerRoute::recurrence}, {1, 0.0, WhittakerRoute::recurrence},
        {2, cplx(0, 6.0), WhittakerRoute::recurrence}, {-3, cplx(0, 5.5), WhittakerRoute::integral},
    };
    for (auto& c : cases)
        for (double x : {1e-3, 0.02, 0.3, 1.0, 4.0, 15.0, 50.0}) {
            // inward integration cannot resolve a solution recessive at 0
            bool recessive = c.mu.imag() == 0 && c.mu.real() >= 1 && c.route == WhittakerRoute::laguerre;
            if (recessive && x < 0.3) continue;
            auto v = whittaker_W(c.kappa, c.mu, x);
            auto o = whittaker_ode(c.kappa, c.mu, x);
            CAPTURE(c.kappa);
            CAPTURE(c.mu);
            CAPTURE(x);
            double gap = std::abs(2.0 * c.mu - std::round(2 * c.mu.real()));
            auto expect = c.route != WhittakerRoute::laguerre && x <= 8 && gap >= 0.1 ? WhittakerRoute::series : c.route;
            CHECK(v.route == expect);
            CHECK(std::abs(v.value - o.w) <= 1e-9 * o.amp);
            // evenness in mu
            CHECK(std::abs(whittaker_W(c.kappa, -c.mu, x).value - v.value) <= 1e-12 * o.amp);
        }
}

TEST_CASE("normalized Whittaker function") {
    auto v = normalized_whittaker(2, 0.5, 1.0);
    cplx ref = cplx(0, 1) * 4.0 * kPi * std::exp(-2 * kPi);
    CHECK(std::abs(v - ref) < 1e-14);
    CHECK(normalized_whittaker(2, 0.5, -1.0) == 0.0);
    CHECK(std::abs(normalized_whittaker(0, cplx(0, 0.7), 2) - normalized_whittaker(0, cplx(0, -0.7), 2)) < 1e-12);
    for (int q = -4; q <= 4; ++q)
        for (double y : {-0.3, 0.02, 1.1})
            for (cplx nu : {cplx(0, 1.3), cplx(0.5, 0), cplx(0, 0)}) {
                if (!whittaker_admissible(q, nu)) continue;
                CHECK(std::abs(normalized_whittaker(q, nu, y) - normalized_whittaker(q, -nu, y)) < 1e-12);
            }
    CHECK(whittaker_admissible(2, 1.0 / 9));
    CHECK_FALSE(whittaker_admissible(1, 1.0 / 9));
    CHECK_FALSE(whittaker_admissible(0, cplx(0.2, 0.3)));
    CHECK_THROWS_AS(normalized_whittaker(1, 0.3, 1.0), std::invalid_argument);

    WhittakerSpec s{{2, 0}, {0.5, cplx(0, 0.7)}};
    CHECK(std::abs(normalized_whittaker(s, {1.0, 2.0}) - ref * normalized_whittaker(0, cplx(0, 0.7), 2.0)) < 1e-14);
}

TEST_CASE("orthonormality") {
    CHECK(std::abs(whittaker_inner(0, 0, cplx(0, 0.7)).value - 1.0) < 1e-6);
    CHECK(std::abs(whittaker_inner(0, 2, cplx(0, 0.7)).value) < 1e-6);
    CHECK(std::abs(whittaker_inner(2, 2, 1.0 / 9).value - 1.0) < 1e-6);
    for (cplx nu : {cplx(0, 0), cplx(0, 0.5), cplx(0, 1), cplx(1.0 / 9, 0)})
        for (int parity : {0, 1}) {
            auto g = whittaker_gram(4, nu, parity);
            CAPTURE(nu);
            CAPTURE(parity);
            CHECK(g.q.size() == (nu.real() != 0 && parity == 1 ? 0u : (parity ? 4u : 5u)));
            CHECK(g.deviation() < 1e-5);
        }
    // opposite parities are not orthogonal
    CHECK(std::abs(whittaker_inner(0, 1, cplx(0, 0.5)).value) > 0.1);
}

TEST_CASE("uniform bound shapes") {
    auto c = calibrate_whittaker_shapes(20240611, 200);
    CHECK(c.samples == 200);
    CHECK(c.tempered_samples > 50);
    CHECK(c.complementary_samples > 20);
    // pinned ceilings for this sample
    CHECK(c.decay <= 2.0);
    CHECK(c.tempered <= 2.0);
    CHECK(c.complementary <= 2.0);
    MESSAGE("calibrated constants: decay " << c.decay << ", tempered " << c.tempered << ", complementary "
                                           << c.complementary);
}

TEST_CASE("A-norm") {
    auto w = [](const std::vector<double>& y) -> cplx {
        return y[0] > 0 ? std::sqrt(y[0]) * std::exp(-y[0]) : 0.0;
    };
    auto D = finite_difference_supplier(w);
    CHECK(std::fabs(a_norm(1, 0, D) - 1 / std::sqrt(2.0)) < 1e-8);
    // W' ~ y^{-1/2} at 0 makes the weighted integral diverge
    CHECK_THROWS_AS(a_norm(1, 1, D), std::domain_error);
    // y^2 e^{-|y|}: L^2(d^x y) norm^2 = 2 * 3!/2^4; exact derivatives agree with differences
    auto w2 = [](const std::vector<double>& y) -> cplx { return y[0] * y[0] * std::exp(-std::fabs(y[0])); };
    auto exact = [](const std::vector<int>& k, const std::vector<double>& y) -> cplx {
        double t = std::fabs(y[0]), e = std::exp(-t);
        if (k[0] == 0) return t * t * e;
        double d1 = (2 * t - t * t) * e;
        return y[0] > 0 ? d1 : -d1;
    };
    CHECK(std::fabs(a_norm(1, 0, exact) - std::sqrt(0.75)) < 1e-9);
    CHECK(std::fabs(a_norm(1, 0, finite_difference_supplier(w2)) - std::sqrt(0.75)) < 1e-9);
    double ex1 = a_norm(1, 1, exact);
    CHECK(std::fabs(a_norm(1, 1, finite_difference_supplier(w2)) - ex1) < 1e-6 * ex1);
    // bump on [1/2, 2] in both signs, in two variables
    auto bump1 = [](double t) {
        double a = std::fabs(t);
        return (a > 0.5 && a < 2) ? std::exp(-1 / ((a - 0.5) * (2 - a))) : 0.0;
    };
    auto bump = [&](const std::vector<double>& y) -> cplx { return bump1(y[0]) * bump1(y[1]); };
    auto Db = finite_difference_supplier(bump);
    double prev = 0;
    for (int mu = 0; mu <= 2; ++mu) {
        double v = a_norm(2, mu, Db, 1e-6);
        CHECK(std::isfinite(v));
        CHECK(v >= prev);
        prev = v;
    }
}
