#include "ntk/whittaker.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace ntk {

const char* route_name(WhittakerRoute r) {
    switch (r) {
        case WhittakerRoute::integral: return "integral";
        case WhittakerRoute::laguerre: return "laguerre";
        case WhittakerRoute::recurrence: return "recurrence";
        case WhittakerRoute::series: return "series";
    }
    return "?";
}

namespace {

bool near_int(double v, double tol = 1e-12) { return std::fabs(v - std::round(v)) <= tol; }

// -n if z is (numerically) a nonpositive integer -n, else -1.
int nonpositive_int(cplx z) {
    if (std::fabs(z.imag()) > 1e-12 || z.real() > 1e-12 || !near_int(z.real())) return -1;
    return (int)std::lround(-z.real());
}

cplx laplace_route(double kappa, cplx mu, double x) {
    cplx a = 0.5 + mu - kappa, b = mu + kappa - 0.5;
    auto f = [&](double s) -> cplx {
        return std::exp((a - 1.0) * std::log(s) + b * std::log1p(s / x) - s);
    };
    auto r = integrate_half_line(f, 0.0, QuadOptions{1e-13, 1e-300, 12, 3});
    if (!r.converged && r.error > 1e-10 * std::abs(r.value))
        throw std::runtime_error("whittaker_W: Laplace integral did not converge");
    return std::exp(kappa * std::log(x) - 0.5 * x) * rgamma_c(a) * r.value;
}

// 1/2 + mu - kappa = -n: W = e^{-x/2} x^{mu+1/2} (-1)^n n! L_n^{(2 mu)}(x)
cplx laguerre_route(int n, cplx mu, double x) {
    cplx alpha = 2.0 * mu;
    cplx prev = 1.0, cur = 1.0 + alpha - x;
    if (n == 0) cur = 1.0;
    for (int k = 1; k < n; ++k) {
        cplx next = ((2.0 * k + 1.0 + alpha - x) * cur - ((double)k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    double fact = std::tgamma(n + 1.0) * ((n % 2) ? -1.0 : 1.0);
    return std::exp((mu + 0.5) * std::log(x) - 0.5 * x) * fact * cur;
}

// e^{-x/2} x^{1/2+mu} sum_n (1/2+mu-kappa)_n / ((1+2mu)_n n!) x^n
cplx whittaker_M(double kappa, cplx mu, double x) {
    CompensatedSum<cplx> s;
    cplx term = 1.0;
    for (int n = 0; n < 600; ++n) {
        s.add(term);
        if (n > x && std::abs(term) < 1e-18 * std::abs(s.value())) break;
        term *= (0.5 + mu - kappa + (double)n) * x / ((1.0 + 2.0 * mu + (double)n) * (n + 1.0));
    }
    return std::exp((0.5 + mu) * std::log(x) - 0.5 * x) * s.value();
}

// W = Gamma(-2mu)/Gamma(1/2-mu-kappa) M_{kappa,mu} + (mu -> -mu)
cplx series_route(double kappa, cplx mu, double x) {
    return gamma_c(-2.0 * mu) * rgamma_c(0.5 - mu - kappa) * whittaker_M(kappa, mu, x) +
           gamma_c(2.0 * mu) * rgamma_c(0.5 + mu - kappa) * whittaker_M(kappa, -mu, x);
}

}  // namespace

WhittakerValue whittaker_W(double kappa, cplx mu, double x) {
    if (!(x > 0) || !std::isfinite(x)) throw std::domain_error("whittaker_W: x must be positive");
    if (x < 1e-200) throw std::domain_error("whittaker_W: x below the implemented range (1e-200)");
    if (kappa > 400) throw std::domain_error("whittaker_W: kappa beyond the recurrence range");
    if (mu.real() < 0 || (mu.real() == 0 && mu.imag() < 0)) mu = -mu;  // W is even in mu
    for (cplx m : {mu, -mu}) {
        int n = nonpositive_int(0.5 + m - kappa);
        if (n >= 0) return {laguerre_route(n, m, x), WhittakerRoute::laguerre};
    }
    // the Laplace integral cancels to ~e^{-pi |Im mu|} at small x; the series
    // does not, and loses at most e^x
    double two_mu_gap = std::abs(2.0 * mu - std::round(2.0 * mu.real()));
    if (x <= 8 && two_mu_gap >= 0.1) return {series_route(kappa, mu, x), WhittakerRoute::series};
    double ra = 0.5 + mu.real() - kappa;
    if (ra >= 0.25) return {laplace_route(kappa, mu, x), WhittakerRoute::integral};
    // seeds with Re a >= 1, then W_{k+1} = (x - 2k) W_k - (k - mu - 1/2)(k + mu - 1/2) W_{k-1}
    int n = (int)std::ceil(kappa + 0.5 - mu.real());
    double k = kappa - n;
    cplx wm = laplace_route(k - 1, mu, x), w = laplace_route(k, mu, x);
    for (int i = 0; i < n; ++i, k += 1) {
        cplx wp = (x - 2 * k) * w - (k - mu - 0.5) * (k + mu - 0.5) * wm;
        wm = w;
        w = wp;
    }
    return {w, WhittakerRoute::recurrence};
}

bool whittaker_admissible(int q, cplx nu) {
    const double tol = 1e-12;
    bool imag = std::fabs(nu.real()) <= tol;
    bool real = std::fabs(nu.imag()) <= tol;
    if (imag) return true;
    if (!real) return false;
    double v = nu.real();
    if (q % 2 == 0) return near_int(v - 0.5, tol) || std::fabs(v) < 0.5;
    return near_int(v, tol);
}

cplx normalized_whittaker(int q, cplx nu, double y) {
    if (!whittaker_admissible(q, nu)) throw std::invalid_argument("normalized_whittaker: inadmissible (q, nu)");
    if (y == 0) throw std::domain_error("normalized_whittaker: y must be nonzero");
    int sg = y > 0 ? 1 : -1;
    double kappa = sg * q / 2.0;
    cplx g1 = 0.5 - nu + kappa, g2 = 0.5 + nu + kappa;
    if (nonpositive_int(g1) >= 0 || nonpositive_int(g2) >= 0) return 0.0;
    cplx prod = std::exp(lgamma_c(g1) + lgamma_c(g2));
    if (!(prod.real() > 0) || std::fabs(prod.imag()) > 1e-8 * prod.real())
        throw std::invalid_argument("normalized_whittaker: Gamma product not positive");
    cplx phase = std::polar(1.0, kPi * sg * q / 4.0);
    double x = 4 * kPi * std::fabs(y);
    if (x > 3000) return 0.0;  // below e^{-1500}
    return phase * whittaker_W(kappa, nu, x).value / std::sqrt(prod.real());
}

cplx normalized_whittaker(const WhittakerSpec& s, const std::vector<double>& y) {
    if (s.q.size() != s.nu.size() || y.size() != s.q.size())
        throw std::invalid_argument("normalized_whittaker: dimension mismatch");
    cplx v = 1.0;
    for (size_t j = 0; j < y.size(); ++j) v *= normalized_whittaker(s.q[j], s.nu[j], y[j]);
    return v;
}

namespace {

QuadOptions inner_opts(double abs_tol) { return QuadOptions{1e-11, abs_tol * 1e-2, 12, 4}; }

// Below this |y| the integrand ~ |y|^{-2|Re nu|} contributes < 1e-20.
double y_floor(cplx nu) {
    double r = 1 - 2 * std::fabs(nu.real());
    return r > 0 ? std::max(1e-150, std::pow(10.0, -20 / r)) : 1e-150;
}

}  // namespace

InnerResult whittaker_inner(int q1, int q2, cplx nu, double abs_tol) {
    double lo = y_floor(nu);
    auto f = [&](double y) -> cplx {
        if (y < lo) return 0.0;
        cplx s = 0;
        for (double sg : {1.0, -1.0})
            s += normalized_whittaker(q1, nu, sg * y) * std::conj(normalized_whittaker(q2, nu, sg * y));
        return s / y;
    };
    auto r = integrate_half_line(f, 0.0, inner_opts(abs_tol));
    if (!r.converged && r.error > abs_tol) throw std::runtime_error("whittaker_inner: quadrature did not converge");
    return {r.value, r.error};
}

WhittakerGram whittaker_gram(int qmax, cplx nu, int parity, double abs_tol) {
    WhittakerGram g;
    for (int q = -qmax; q <= qmax; ++q)
        if (((q % 2) + 2) % 2 == parity && whittaker_admissible(q, nu)) g.q.push_back(q);
    size_t n = g.q.size();
    double lo = y_floor(nu);
    std::map<double, std::vector<cplx>> cache[2];
    auto values = [&](int side, double y) -> const std::vector<cplx>& {
        auto it = cache[side].find(y);
        if (it != cache[side].end()) return it->second;
        std::vector<cplx> v(n);
        double sy = side ? -y : y;
        for (size_t i = 0; i < n; ++i) v[i] = normalized_whittaker(g.q[i], nu, sy);
        return cache[side].emplace(y, std::move(v)).first->second;
    };
    g.G.assign(n, std::vector<cplx>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            auto f = [&](double y) -> cplx {
                if (y < lo) return 0.0;
                cplx s = 0;
                for (int side = 0; side < 2; ++side) {
                    auto& v = values(side, y);
                    s += v[i] * std::conj(v[j]);
                }
                return s / y;
            };
            auto r = integrate_half_line(f, 0.0, inner_opts(abs_tol));
            if (!r.converged && r.error > abs_tol) throw std::runtime_error("whittaker_gram: quadrature did not converge");
            g.G[i][j] = r.value;
            g.G[j][i] = std::conj(r.value);
        }
    return g;
}

double WhittakerGram::deviation() const {
    double d = 0;
    for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = 0; j < G.size(); ++j) d = std::max(d, std::abs(G[i][j] - (i == j ? 1.0 : 0.0)));
    return d;
}

double whittaker_shape_decay(int q, cplx nu, double y) {
    double L = std::abs(q) + std::abs(nu) + 1, ay = std::fabs(y);
    return std::sqrt(ay) * std::pow(ay / L, -1 - std::fabs(nu.real())) * std::exp(-ay / L);
}

double whittaker_shape_tempered(int q, cplx nu, double y, double eps) {
    double L = std::abs(q) + std::abs(nu) + 1;
    return std::pow(std::fabs(y), 0.5 - eps) * L;
}

double whittaker_shape_complementary(int q, cplx nu, double y, double eps) {
    double L = std::abs(q) + std::abs(nu) + 1, a = std::fabs(nu.real());
    return std::pow(std::fabs(y), 0.5 - a - eps) * std::pow(L, 1 + a);
}

ShapeCalibration calibrate_whittaker_shapes(std::uint64_t seed, int samples, double eps) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> qd(-8, 8), kind(0, 2), halfint(-4, 3), intd(-5, 5);
    std::uniform_real_distribution<double> imag(0.0, 6.0), comp(-0.49, 0.49), unit(0.0, 1.0);
    ShapeCalibration c;
    for (int s = 0; s < samples; ++s) {
        int q = qd(rng);
        cplx nu;
        int k = kind(rng);
        if (k == 0) nu = cplx(0, imag(rng));
        else if (q % 2 == 0) nu = k == 1 ? cplx(comp(rng), 0) : cplx(halfint(rng) + 0.5, 0);
        else nu = cplx(intd(rng), 0);
        double L = std::abs(q) + std::abs(nu) + 1;
        double y = std::exp(std::log(1e-3) + unit(rng) * std::log(1e4 * L));
        if (unit(rng) < 0.5) y = -y;
        double w = std::abs(normalized_whittaker(q, nu, y));
        ++c.samples;
        c.decay = std::max(c.decay, w / whittaker_shape_decay(q, nu, y));
        bool tempered = std::fabs(nu.real()) < 1e-12 || near_int(2 * nu.real());
        bool compl_series = std::fabs(nu.imag()) < 1e-12 && std::fabs(nu.real()) < 0.5;
        if (tempered) {
            ++c.tempered_samples;
            c.tempered = std::max(c.tempered, w / whittaker_shape_tempered(q, nu, y, eps));
        }
        if (compl_series) {
            ++c.complementary_samples;
            c.complementary = std::max(c.complementary, w / whittaker_shape_complementary(q, nu, y, eps));
        }
    }
    return c;
}

namespace {

// int over (R^x)^d of g(y) d^x y, nested half-line quadrature per sign pattern
double integrate_multiplicative(int d, const std::function<double(const std::vector<double>&)>& g, double rel_tol) {
    std::vector<double> y(d);
    std::function<double(int)> rec = [&](int j) -> double {
        if (j == d) return g(y);
        double tot = 0;
        for (double sg : {1.0, -1.0}) {
            auto f = [&](double t) {
                y[j] = sg * t;
                return rec(j + 1) / t;
            };
            QuadResult<double> r;
            try {
                r = integrate_half_line(f, 0.0, QuadOptions{rel_tol, 1e-300, 10, 3});
            } catch (const std::runtime_error&) {
                throw std::domain_error("a_norm: divergent integrand");
            }
            if (!std::isfinite(r.value) || (!r.converged && r.error > 1e-3 * std::fabs(r.value)))
                throw std::domain_error("a_norm: divergent integrand");
            tot += r.value;
        }
        return tot;
    };
    return rec(0);
}

}  // namespace

double a_norm(int d, int mu, const DerivSupplier& deriv, double rel_tol) {
    if (d < 1 || mu < 0) throw std::invalid_argument("a_norm: need d >= 1 and mu >= 0");
    double total = 0;
    std::vector<int> m(d, 0), k(d, 0);
    // all (m_1..m_d) with sum <= mu, then all k <= m componentwise
    std::function<void(int, int)> over_m = [&](int j, int left) {
        if (j == d) {
            std::function<void(int)> over_k = [&](int i) {
                if (i == d) {
                    auto g = [&](const std::vector<double>& y) {
                        double w = 1;
                        for (int t = 0; t < d; ++t) w *= std::pow(std::fabs(y[t]) + 1 / std::fabs(y[t]), m[t]);
                        return std::norm(deriv(k, y)) * w;
                    };
                    total += std::sqrt(integrate_multiplicative(d, g, rel_tol));
                    return;
                }
                for (k[i] = 0; k[i] <= m[i]; ++k[i]) over_k(i + 1);
                k[i] = 0;
            };
            over_k(0);
            return;
        }
        for (m[j] = 0; m[j] <= left; ++m[j]) over_m(j + 1, left - m[j]);
        m[j] = 0;
    };
    over_m(0, mu);
    return total;
}

DerivSupplier finite_difference_supplier(std::function<cplx(const std::vector<double>&)> f) {
    return [f](const std::vector<int>& k, const std::vector<double>& y) -> cplx {
        std::vector<double> p = y;
        std::function<cplx(size_t)> rec = [&](size_t j) -> cplx {
            if (j == y.size()) return f(p);
            int kj = k[j];
            if (kj == 0) return rec(j + 1);
            double h = std::fabs(y[j]) * std::pow(10.0, -16.0 / (kj + 2));
            cplx s = 0;
            double binom = 1;
            for (int i = 0; i <= kj; ++i) {
                p[j] = y[j] + (kj / 2.0 - i) * h;
                s += ((i % 2) ? -binom : binom) * rec(j + 1);
                binom = binom * (kj - i) / (i + 1);
            }
            p[j] = y[j];
            return s / std::pow(h, kj);
        };
        return rec(0);
    };
}

}  // namespace ntk
