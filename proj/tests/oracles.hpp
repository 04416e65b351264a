// Independent reference computations shared by the unit tests and the
// acceptance driver.
#pragma once

#include "ntk/shifted_conv.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using ntk::Elem;
using ntk::i64;

inline i64 tau_int(i64 n) {
    i64 c = 0;
    for (i64 k = 1; k * k <= n; ++k)
        if (n % k == 0) c += (k * k == n) ? 1 : 2;
    return c;
}

inline double bump(double x, double lo, double hi) {
    if (!(x > lo && x < hi)) return 0;
    double u = (2 * x - lo - hi) / (hi - lo);
    return std::exp(1 - 1 / (1 - u * u));
}

inline ntk::HeckeCharacter trivial_character(const ntk::Field& K, const ntk::Ideal& q) {
    auto chars = ntk::characters_mod(K, q);
    return ntk::HeckeCharacter(K, chars.front(), std::vector<ntk::cplx>(K.degree(), 0.0));
}

// Shifted sum over Q with y = aZ and lambda = tau: l1 a n - l2 a m = q.
struct CaseQ {
    i64 l1, l2, a, q;
    double Y, lo1, hi1, lo2, hi2;
};

inline CaseQ random_case_Q(std::mt19937_64& rng) {
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto I = [&](i64 a, i64 b) { return std::uniform_int_distribution<i64>(a, b)(rng); };
    CaseQ c;
    c.l1 = I(1, 5);
    c.l2 = I(1, 5);
    c.a = I(1, 3);
    c.q = c.a * I(-20, 20);
    if (c.q == 0) c.q = c.a;
    c.Y = U(5, 200);
    c.lo1 = U(0.2, 1);
    c.hi1 = c.lo1 + U(0.3, 2);
    c.lo2 = U(0.2, 1);
    c.hi2 = c.lo2 + U(0.3, 2);
    return c;
}

inline double double_loop_Q(const CaseQ& c) {
    double want = 0;
    i64 nmax = (i64)(c.hi1 * c.Y / (c.l1 * c.a)) + 1, mmax = (i64)(c.hi2 * c.Y / (c.l2 * c.a)) + 1;
    for (i64 n = 1; n <= nmax; ++n)
        for (i64 m = 1; m <= mmax; ++m) {
            if (c.l1 * c.a * n - c.l2 * c.a * m != c.q) continue;
            want += (double)(tau_int(n) * tau_int(m)) / std::sqrt((double)n * m) *
                    bump(c.l1 * c.a * n / c.Y, c.lo1, c.hi1) * bump(c.l2 * c.a * m / c.Y, c.lo2, c.hi2);
        }
    return want;
}

inline ntk::ShiftedQuery query_Q(const ntk::Field& K, const ntk::EigenvalueSystem& tau, const CaseQ& c) {
    ntk::ShiftedQuery Q;
    Q.sys1 = Q.sys2 = &tau;
    Q.l1 = {c.l1, 0};
    Q.l2 = {c.l2, 0};
    Q.y = K.principal_int(c.a);
    Q.q = {c.q, 0};
    Q.Y = {c.Y};
    Q.W1 = ntk::Weight::product(ntk::Profile::bump(c.lo1, c.hi1), {1.0});
    Q.W2 = ntk::Weight::product(ntk::Profile::bump(c.lo2, c.hi2), {1.0});
    return Q;
}

// Real quadratic case: both weight boxes enumerated separately, every pair
// tested, lambda = number of ideal divisors.
struct CaseK {
    Elem l1, l2, g, q;
    std::vector<double> Y;
    ntk::Profile V1, V2;
};

inline CaseK random_case_K(const ntk::Field& K, std::mt19937_64& rng) {
    static const std::vector<Elem> shifts{{1, 0}, {2, 0}, {1, 1}, {3, 0}, {2, 1}};
    static const std::vector<Elem> ygens{{1, 0}, {2, 0}, {-1, 2}};  // o, (2), (sqrt 5) when D = 5
    auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto I = [&](i64 a, i64 b) { return std::uniform_int_distribution<i64>(a, b)(rng); };
    CaseK c;
    c.l1 = shifts[I(0, 4)];
    c.l2 = shifts[I(0, 4)];
    c.g = ygens[I(0, 2)];
    Elem q{I(-4, 4), I(-4, 4)};
    if (K.is_zero(q)) q = Elem{1, 0};
    c.q = K.mul(q, c.g);
    c.Y = {U(10, 30), U(10, 30)};
    double lo1 = U(0.3, 1), lo2 = U(0.3, 1);
    c.V1 = ntk::Profile::bump(lo1, lo1 + U(0.5, 2));
    c.V2 = ntk::Profile::bump(lo2, lo2 + U(0.5, 2));
    return c;
}

inline ntk::ShiftedQuery query_K(const ntk::Field& K, const ntk::EigenvalueSystem& tau, const CaseK& c) {
    ntk::ShiftedQuery Q;
    Q.sys1 = Q.sys2 = &tau;
    Q.l1 = c.l1;
    Q.l2 = c.l2;
    Q.y = K.principal(c.g);
    Q.q = c.q;
    Q.Y = c.Y;
    Q.W1 = ntk::Weight::product(c.V1, {1.0, 1.0});
    Q.W2 = ntk::Weight::product(c.V2, {1.0, 1.0});
    return Q;
}

inline double double_loop_K(const ntk::Field& K, const CaseK& c) {
    ntk::Ideal y = K.principal(c.g);
    auto box_for = [&](const ntk::Profile& V, Elem l) {
        auto e = K.embed_d(l);
        ntk::Box b;
        for (int j = 0; j < 2; ++j) b.intervals.push_back({V.lo * c.Y[j] / e[j], V.hi * c.Y[j] / e[j]});
        return K.enumerate_in_box(y, b, false);
    };
    double Ny = (double)K.norm(y);
    auto tauK = [&](Elem r) { return (double)K.divisors(K.quotient(K.principal(r), y)).size(); };
    double want = 0;
    for (Elem r1 : box_for(c.V1, c.l1))
        for (Elem r2 : box_for(c.V2, c.l2)) {
            if (K.is_zero(r1) || K.is_zero(r2)) continue;
            if (K.sub(K.mul(c.l1, r1), K.mul(c.l2, r2)) != c.q) continue;
            auto e1 = K.embed_d(K.mul(c.l1, r1)), e2 = K.embed_d(K.mul(c.l2, r2));
            double w = 1;
            for (int j = 0; j < 2; ++j) w *= c.V1.f(e1[j] / c.Y[j]) * c.V2.f(e2[j] / c.Y[j]);
            double n = std::fabs((double)K.norm(r1) * (double)K.norm(r2)) / (Ny * Ny);
            want += tauK(r1) * tauK(r2) / std::sqrt(n) * w;
        }
    return want;
}

// Count of quadruples (l1, r1, l2, r2) with l1 r1 = l2 r2 over the weighted support.
inline i64 diagonal_scan(const ntk::Field& K, const std::vector<ntk::AmplifierPrime>& ls, const ntk::Profile& V,
                         double Y) {
    int d = K.degree();
    double Yd = std::pow(Y, 1.0 / d);
    std::vector<Elem> rs;
    if (d == 1) {
        for (i64 n = 1; n <= (i64)(V.hi * Yd) + 1; ++n)
            if (V.f(n / Yd) != 0) rs.push_back({n, 0});
    } else {
        ntk::Box b{{{V.lo * Yd, V.hi * Yd}, {V.lo * Yd, V.hi * Yd}}};
        for (Elem r : K.enumerate_in_box(K.unit_ideal(), b, true)) {
            auto e = K.embed_d(r);
            if (V.f(e[0] / Yd) * V.f(e[1] / Yd) != 0) rs.push_back(r);
        }
    }
    i64 c = 0;
    for (auto& a : ls)
        for (auto& b : ls)
            for (Elem r1 : rs)
                for (Elem r2 : rs) c += K.mul(a.generator, r1) == K.mul(b.generator, r2);
    return c;
}

// sum over n - m = 1 of tau(n) tau(m) (nm)^{1/2} / (n + m)^4, n <= top
inline double divisor_dirichlet(i64 top) {
    double s = 0;
    for (i64 n = 2; n <= top; ++n) {
        double m = (double)(n - 1);
        s += (double)(tau_int(n) * tau_int(n - 1)) * std::sqrt(n * m) / std::pow(n + m, 4);
    }
    return s;
}

}  // namespace oracle
