#include "ntk/eisenstein.hpp"

#include "ntk/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace ntk {

// ---------------------------------------------------------------- surds

QuadSurd QuadSurd::operator+(const QuadSurd& o) const {
    if (N != o.N && !(is_zero() || o.is_zero())) throw std::invalid_argument("surds over different roots");
    return {a + o.a, b + o.b, is_zero() ? o.N : N};
}

QuadSurd QuadSurd::operator-(const QuadSurd& o) const {
    QuadSurd m{-o.a, -o.b, o.N};
    return *this + m;
}

QuadSurd QuadSurd::operator*(const QuadSurd& o) const {
    if (N != o.N && !(is_zero() || o.is_zero())) throw std::invalid_argument("surds over different roots");
    i64 n = is_zero() ? o.N : N;
    return {a * o.a + b * o.b * n, a * o.b + b * o.a, n};
}

double QuadSurd::to_double() const {
    return a.convert_to<double>() + b.convert_to<double>() * std::sqrt((double)N);
}

QuadSurd half_power(i64 N, int e) {
    // N^{e/2} = N^{floor(e/2)} * sqrt(N)^{e mod 2}
    int q = e >= 0 ? e / 2 : -((-e + 1) / 2);
    int r = e - 2 * q;
    Rational p = 1;
    for (int i = 0; i < std::abs(q); ++i) p *= N;
    if (q < 0) p = 1 / p;
    QuadSurd out;
    out.N = N;
    if (r == 0) out.a = p;
    else out.b = p;
    return out;
}

int local_dimension(int n, int m) { return std::max(0, n - 2 * m + 1); }

Rational tail_measure(i64 N, int v) {
    if (v <= 0) return 1;
    // 1 / (N^v (1 + 1/N)) = 1 / (N^{v-1} (N + 1))
    Rational d = N + 1;
    for (int i = 1; i < v; ++i) d *= N;
    return 1 / d;
}

Rational level_measure(i64 N, int v) { return tail_measure(N, v) - tail_measure(N, v + 1); }

QuadSurd local_vector_value(const LocalVectorSpec& s, int v) {
    QuadSurd zero;
    zero.N = s.N;
    if (s.m > 0) return v == s.m + s.j ? half_power(s.N, s.m + s.j) : zero;
    if (s.j == 0) return half_power(s.N, 0);
    if (s.j == 1) {
        if (v == 0) return half_power(s.N, -1);
        QuadSurd h = half_power(s.N, 1);
        return zero - h;
    }
    if (v <= s.j - 2) return zero;
    if (v == s.j - 1) return zero - half_power(s.N, s.j - 2);
    QuadSurd f;
    f.N = s.N;
    f.a = Rational(s.N - 1, s.N);
    return half_power(s.N, s.j) * f;
}

QuadSurd local_inner_product(const LocalVectorSpec& x, const LocalVectorSpec& y) {
    if (x.N != y.N || x.m != y.m) throw std::invalid_argument("vectors from different representations");
    QuadSurd acc;
    acc.N = x.N;
    if (x.m > 0) {
        // disjoint supports unless equal index; phases cancel in |.|^2
        if (x.j != y.j) return acc;
        QuadSurd v = local_vector_value(x, x.m + x.j);
        QuadSurd mu;
        mu.N = x.N;
        mu.a = level_measure(x.N, x.m + x.j);
        return v * v * mu;
    }
    // both profiles are constant for v >= max(j) so the last level carries
    // the whole tail measure
    int top = std::max(x.j, y.j);
    for (int v = 0; v <= top; ++v) {
        QuadSurd mu;
        mu.N = x.N;
        mu.a = v < top ? level_measure(x.N, v) : tail_measure(x.N, v);
        acc = acc + local_vector_value(x, v) * local_vector_value(y, v) * mu;
    }
    return acc;
}

Rational local_vector_norm_sq(const LocalVectorSpec& s) {
    if (s.j < 0 || s.m < 0 || s.N < 2) throw std::invalid_argument("inadmissible local vector");
    QuadSurd v = local_inner_product(s, s);
    if (v.b != 0) throw std::logic_error("norm is not rational");
    return v.a;
}

i64 coset_index(const Field& K, const Ideal& c) {
    i64 idx = 1;
    for (auto& [P, j] : K.factor(c)) {
        i64 N = P.norm();
        idx *= N + 1;
        for (int i = 1; i < j; ++i) idx *= N;
    }
    return idx;
}

// ---------------------------------------------------------------- eigenvalues

namespace {

void require_primitive(const Field& K, const HeckeCharacter& chi) {
    if (!(chi.finite().conductor() == chi.finite().modulus()))
        throw std::invalid_argument("character must be given modulo its conductor");
    (void)K;
}

// sum_{j=0}^k x^{2j-k}
std::complex<double> sym_power(std::complex<double> x, int k) {
    std::complex<double> s = 0, xi = 1.0 / x;
    for (int j = 0; j <= k; ++j) s += std::pow(x, j) * std::pow(xi, k - j);
    return s;
}

}  // namespace

std::complex<double> eis_hecke_eigenvalue(const Field& K, const HeckeCharacter& chi, const Ideal& m) {
    require_primitive(K, chi);
    std::complex<double> v = 1;
    for (auto& [P, k] : K.factor(m)) {
        auto x = chi.eval_on_ideal(P.ideal);
        if (x == 0.0) return 0;
        v *= sym_power(x, k);
    }
    return v;
}

EisContext::EisContext(const Field& K, HeckeCharacter chi, Ideal t) : K_(&K), chi_(std::move(chi)), t_(std::move(t)) {
    require_primitive(K, chi_);
    if (!t_.integral()) throw std::invalid_argument("oldform index must be integral");
    c_chi_ = chi_.finite().modulus();
    t_chi_ = K.unit_ideal();
    for (auto& [P, vt] : K.factor(t_)) {
        EisPrimeData d;
        d.P = P;
        d.vt = vt;
        d.m = K.valuation(P, c_chi_);
        if (d.m > 0) {
            d.e = vt;
        } else {
            d.chi_p = chi_.eval_on_ideal(P.ideal);
            auto x2 = d.chi_p * d.chi_p;
            if (vt == 1 && std::abs(x2 + 1.0) < 1e-12) d.e = 1;
            else if (vt >= 3) d.e = vt - 2;
            if (vt == 1 && !(std::abs(x2 + 1.0) < 1e-12)) F_ /= std::abs(1.0 + x2);
        }
        t_chi_ = K.mul(t_chi_, K.pow(P.ideal, d.e));
        primes_.push_back(d);
    }
    for (auto& d : primes_)
        if (d.m == 0) d.F0 = local_factor(d, d.e);
}

std::complex<double> EisContext::local_factor(const EisPrimeData& d, int n) const {
    double N = (double)d.P.norm();
    auto x = d.chi_p, x2 = x * x;
    // phi_{vt}(v) as a function of the level v
    auto phi = [&](int v) -> double {
        int j = d.vt;
        if (j == 0) return 1;
        if (j == 1) return v == 0 ? 1 / std::sqrt(N) : -std::sqrt(N);
        if (v <= j - 2) return 0;
        if (v == j - 1) return -std::pow(N, j / 2.0 - 1);
        return std::pow(N, j / 2.0) * (1 - 1 / N);
    };
    // shell integrals of psi(-r y xi / delta) over v(xi) = -i
    auto layer = [&](int i) -> double {
        if (i <= n) return std::pow(N, i) * (1 - 1 / N);
        if (i == n + 1) return -std::pow(N, n);
        return 0;
    };
    std::complex<double> J = phi(0);
    for (int i = 1; i <= n + 1; ++i) J += std::pow(x2, i) * std::pow(N, -i) * phi(i) * layer(i);
    return std::pow(N, -n / 2.0) * std::pow(x, -n) * J;
}

std::complex<double> EisContext::lambda(const Ideal& m) const {
    std::complex<double> v = 1;
    for (auto& [P, k] : K_->factor(m)) {
        const EisPrimeData* d = nullptr;
        for (auto& q : primes_)
            if (q.P == P) d = &q;
        if (K_->valuation(P, c_chi_) > 0) return 0;
        if (!d) {
            v *= sym_power(chi_.eval_on_ideal(P.ideal), k);
            continue;
        }
        double N = (double)P.norm();
        v *= std::pow(N, k / 2.0) * local_factor(*d, k + d->e) / d->F0;
    }
    return v;
}

std::complex<double> EisContext::oldform_coefficient(const Ideal& m) const {
    if (!K_->divides(t_chi_, m)) return 0;
    Ideal mt = K_->quotient(m, t_chi_);
    double pref = 1 / (F_ * (double)K_->arith(t_).tau * std::sqrt((double)K_->norm(t_))) * (double)K_->norm(t_chi_);
    return pref * lambda(mt);
}

// ---------------------------------------------------------------- constant term

std::complex<double> constant_term_local_factor(i64 Ni, std::complex<double> s, ConstTermCase c, int v,
                                                std::optional<int> eta_val) {
    if (s.real() <= 0) throw std::domain_error("constant term factor needs Re s > 0");
    double N = (double)Ni;
    auto Np = [&](std::complex<double> e) { return std::exp(e * std::log(N)); };
    std::complex<double> level = Np(-2.0 * s * (double)v) * (1 - 1 / N) / (1.0 - Np(-2.0 * s));
    switch (c) {
        case ConstTermCase::unramified:
            return (1.0 - Np(-1.0 - 2.0 * s)) / (1.0 - Np(-2.0 * s));
        case ConstTermCase::level:
            return level;
        case ConstTermCase::level_eta:
            if (eta_val && *eta_val <= -v) return Np(-(double)*eta_val * (2.0 * s - 1.0)) * level;
            return std::pow(N, -v);
    }
    return 0;
}

std::complex<double> constant_term_layer_sum(i64 Ni, std::complex<double> s, ConstTermCase c, int v,
                                             std::optional<int> eta_val, int depth) {
    if (s.real() <= 0) throw std::domain_error("constant term factor needs Re s > 0");
    double N = (double)Ni;
    auto Np = [&](std::complex<double> e) { return std::exp(e * std::log(N)); };
    auto shell = [&](int j) { return std::pow(N, j) * (1 - 1 / N); };  // measure of |xi| = N^j
    CompensatedSum<std::complex<double>> acc;
    if (c == ConstTermCase::unramified) {
        acc.add(1.0);
        for (int j = 1; j <= depth; ++j) acc.add(shell(j) * Np(-(double)j * (1.0 + 2.0 * s)));
        return acc.value();
    }
    if (c == ConstTermCase::level) {
        for (int j = v; j <= v + depth; ++j) acc.add(shell(j) * Np(-(double)j * (1.0 + 2.0 * s)));
        return acc.value();
    }
    // integral over v(xi) <= -v of |eta - xi|^{2s-1} |xi|^{-1-2s}
    bool has_eta = eta_val.has_value();
    int k = has_eta ? -*eta_val : 0;  // |eta| = N^k
    for (int j = v; j <= v + depth; ++j) {
        std::complex<double> w = Np(-(double)j * (1.0 + 2.0 * s));
        if (!has_eta || j != k) {
            double mx = has_eta ? std::pow(N, std::max(j, k)) : std::pow(N, j);
            acc.add(shell(j) * std::exp((2.0 * s - 1.0) * std::log(mx)) * w);
            continue;
        }
        // same shell as eta: split by v(xi - eta) = u >= -k
        std::complex<double> in = std::pow(N, k) * (1 - 2 / N) * Np((double)k * (2.0 * s - 1.0));
        for (int u = -k + 1; u <= -k + 1 + depth; ++u) in += std::pow(N, -u) * (1 - 1 / N) * Np(-(double)u * (2.0 * s - 1.0));
        acc.add(in * w);
    }
    return acc.value();
}

Rational constant_term_H_at_half(const Field& K, const Ideal& c) {
    return Rational(1) / (Rational(K.disc()) * Rational(coset_index(K, c)));
}

std::vector<PrimeIdeal> primes_up_to(const Field& K, i64 bound) {
    std::vector<char> comp(bound + 1, 0);
    std::vector<PrimeIdeal> out;
    for (i64 p = 2; p <= bound; ++p) {
        if (comp[p]) continue;
        for (i64 q = p * p; q <= bound; q += p) comp[q] = 1;
        for (auto& P : K.primes_above(p))
            if (P.norm() <= bound) out.push_back(P);
    }
    std::stable_sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) { return a.norm() < b.norm(); });
    return out;
}

HCheck constant_term_H_check(const Field& K, const Ideal& c, double delta1, double delta2, i64 prime_bound) {
    int d = K.degree();
    double DK = (double)K.disc();
    auto primes = primes_up_to(K, prime_bound);
    auto fac = K.factor(c);
    auto H = [&](double delta) {
        double s = 0.5 + delta;
        // int_R (xi^2 + 1)^{-1/2-s} dxi = int_R cosh(u)^{-2s} du
        auto inf = integrate_real_line([&](double u) { return std::exp(-2 * s * std::log(std::cosh(u))); },
                                       QuadOptions{1e-14, 1e-16, 12, 3});
        double integral = std::pow(DK, -0.5) * std::pow(inf.value, d) * std::pow(DK, -2 * s);
        double euler_num = 1, euler_den = 1;  // Lambda(1+2delta) and Lambda(2+2delta) finite parts
        for (auto& P : primes) {
            double N = (double)P.norm();
            int v = 0;
            for (auto& [Q, k] : fac)
                if (Q == P) v = k;
            double loc = v ? constant_term_layer_sum(P.norm(), s, ConstTermCase::level, v).real()
                           : constant_term_layer_sum(P.norm(), s, ConstTermCase::unramified).real();
            integral *= loc;
            euler_num /= 1 - std::pow(N, -(1 + 2 * delta));
            euler_den /= 1 - std::pow(N, -(2 + 2 * delta));
        }
        auto lam = [&](double z, double euler) {
            return std::pow(DK, z / 2) * std::pow(std::pow(kPi, -z / 2) * std::tgamma(z / 2), d) * euler;
        };
        return integral / (lam(1 + 2 * delta, euler_num) / lam(2 + 2 * delta, euler_den));
    };
    HCheck r;
    r.H_delta1 = H(delta1);
    r.H_delta2 = H(delta2);
    // H carries a factor (|D_K| N c)^{-2 delta}; its log is close to linear
    // in delta, so extrapolate there.
    r.extrapolated = std::exp((delta1 * std::log(r.H_delta2) - delta2 * std::log(r.H_delta1)) / (delta1 - delta2));
    r.exact = constant_term_H_at_half(K, c).convert_to<double>();
    r.rel_error = std::fabs(r.extrapolated - r.exact) / r.exact;
    return r;
}

// ---------------------------------------------------------------- L-values

PartialL partial_L(const Field& K, const HeckeCharacter& chi, std::complex<double> s, const Ideal& removed, i64 prime_bound) {
    PartialL out;
    out.prime_bound = prime_bound;
    std::complex<double> logL = 0;
    for (auto& P : primes_up_to(K, prime_bound)) {
        if (K.valuation(P, removed) > 0) continue;
        auto x = chi.eval_on_ideal(P.ideal);
        if (x == 0.0) continue;
        logL -= std::log(1.0 - x * std::exp(-s * std::log((double)P.norm())));
    }
    out.value = std::exp(logL);
    // sum over N p > P of chi(p) N p^{-s}. The archimedean part of chi shifts
    // s by the mean of its exponents; oscillation of N p^{-i t} with the
    // remaining t bounds the tail by about P^{1 - Re s} / (|t| log P) (times d)
    std::complex<double> mean = 0;
    for (auto e : chi.exponents()) mean += e;
    if (!chi.exponents().empty()) mean /= (double)chi.exponents().size();
    double re = s.real() - mean.real();
    double im = std::fabs(s.imag() - mean.imag());
    double lp = std::log((double)prime_bound);
    out.tail_bound = INFINITY;
    if (re > 1) out.tail_bound = K.degree() * std::pow((double)prime_bound, 1 - re) / ((re - 1) * lp);
    if (im > 0) out.tail_bound = std::min(out.tail_bound, K.degree() * 2.0 * std::pow((double)prime_bound, 1 - re) / (im * lp));
    return out;
}

FourierMagnitude newvector_fourier_magnitude(const EisContext& ctx, i64 prime_bound) {
    const Field& K = ctx.chi().field();
    FourierMagnitude r;
    Ideal rest = K.quotient(ctx.t(), ctx.t_chi());
    auto chi2 = ctx.chi().pow(2);
    r.L = partial_L(K, chi2, 1.0, rest, prime_bound);
    if (std::abs(r.L.value) == 0 || !std::isfinite(std::abs(r.L.value))) throw std::domain_error("divergent L-value");
    r.condition = 1 / std::abs(r.L.value);
    r.value = std::pow(kPi, K.degree() / 2.0) / std::sqrt((double)K.disc()) /
              (std::abs(r.L.value) * std::sqrt((double)K.norm(rest)) * ctx.F());
    return r;
}

}  // namespace ntk
